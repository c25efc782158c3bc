#include "citescope/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include "citescope/error.hpp"
#include "citescope/ingest.hpp"

namespace citescope {

namespace {

std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

// Shortest decimal form that round-trips (for pass-through metadata values).
std::string shortest(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string xml_unescape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '&') {
            out.push_back(text[i]);
            continue;
        }
        const std::string_view rest = text.substr(i);
        if (rest.starts_with("&amp;")) { out.push_back('&'); i += 4; }
        else if (rest.starts_with("&lt;")) { out.push_back('<'); i += 3; }
        else if (rest.starts_with("&gt;")) { out.push_back('>'); i += 3; }
        else if (rest.starts_with("&quot;")) { out.push_back('"'); i += 5; }
        else out.push_back('&');
    }
    return out;
}

std::string dot_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    return in;
}

// Writers promise deterministic output for any graph, so edges are emitted
// in lexicographic endpoint order regardless of how they were assembled.
std::vector<GraphEdge> ordered_edges(const SimilarityGraph& g) {
    std::vector<GraphEdge> edges = g.edges;
    std::stable_sort(edges.begin(), edges.end(), [](const GraphEdge& x, const GraphEdge& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    return edges;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot create file: " + tmp.string());
        writer(out);
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw Error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                    ec.message());
    }
}

// ---------------------------------------------------------------------------
// Pajek

void write_pajek(const SimilarityGraph& g, std::ostream& out) {
    out << "*Vertices " << g.nodes.size() << "\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        std::string label = g.nodes[i].journal;
        std::string quoted;
        for (char c : label) {
            if (c == '"') quoted += "''";  // Pajek labels cannot hold a double quote
            else quoted.push_back(c);
        }
        out << (i + 1) << " \"" << quoted << "\"\n";
    }
    out << "*Edges\n";
    for (const GraphEdge& e : ordered_edges(g))
        out << (e.a + 1) << " " << (e.b + 1) << " " << fixed(e.cosine, 6) << "\n";
}

SimilarityGraph read_pajek(std::istream& in) {
    SimilarityGraph g;
    g.suppression_threshold = 0.0;
    std::string line;
    if (!std::getline(in, line)) throw Error("pajek: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t count = 0;
    if (std::sscanf(line.c_str(), "*Vertices %zu", &count) != 1)
        throw Error("pajek: expected \"*Vertices n\", got \"" + line + "\"");

    g.nodes.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw Error("pajek: truncated vertex section");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto open = line.find('"');
        const auto close = line.rfind('"');
        if (open == std::string::npos || close <= open)
            throw Error("pajek: malformed vertex line \"" + line + "\"");
        std::size_t id = std::stoull(line.substr(0, open));
        if (id < 1 || id > count) throw Error("pajek: vertex id out of range in \"" + line + "\"");
        std::string label = line.substr(open + 1, close - open - 1);
        std::string unquoted;
        for (std::size_t c = 0; c < label.size(); ++c) {
            if (label[c] == '\'' && c + 1 < label.size() && label[c + 1] == '\'') {
                unquoted.push_back('"');
                ++c;
            } else {
                unquoted.push_back(label[c]);
            }
        }
        g.nodes[id - 1].journal = unquoted;
        g.nodes[id - 1].geometry.journal = unquoted;
    }

    if (!std::getline(in, line)) throw Error("pajek: missing *Edges section");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "*Edges") throw Error("pajek: expected \"*Edges\", got \"" + line + "\"");
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t a = 0, b = 0;
        double w = 0.0;
        if (std::sscanf(line.c_str(), "%zu %zu %lf", &a, &b, &w) != 3)
            throw Error("pajek: malformed edge line \"" + line + "\"");
        if (a < 1 || a > count || b < 1 || b > count)
            throw Error("pajek: edge endpoint out of range in \"" + line + "\"");
        g.edges.push_back(GraphEdge{a - 1, b - 1, w});
    }
    return g;
}

// ---------------------------------------------------------------------------
// GraphML

void write_graphml(const SimilarityGraph& g, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
        << "  <key id=\"share_total\" for=\"node\" attr.name=\"share_total\""
           " attr.type=\"double\"/>\n"
        << "  <key id=\"share_excl_self\" for=\"node\" attr.name=\"share_excl_self\""
           " attr.type=\"double\"/>\n"
        << "  <key id=\"cn_percent\" for=\"node\" attr.name=\"cn_percent\""
           " attr.type=\"double\"/>\n"
        << "  <key id=\"cosine\" for=\"edge\" attr.name=\"cosine\" attr.type=\"double\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const GraphNode& node = g.nodes[i];
        out << "    <node id=\"n" << i << "\">\n"
            << "      <data key=\"label\">" << xml_escape(node.journal) << "</data>\n"
            << "      <data key=\"share_total\">" << fixed(node.geometry.share_total, 9)
            << "</data>\n"
            << "      <data key=\"share_excl_self\">" << fixed(node.geometry.share_excl_self, 9)
            << "</data>\n"
            << "      <data key=\"cn_percent\">" << fixed(node.geometry.cn_percent, 9)
            << "</data>\n"
            << "    </node>\n";
    }
    for (const GraphEdge& e : ordered_edges(g))
        out << "    <edge source=\"n" << e.a << "\" target=\"n" << e.b << "\">\n"
            << "      <data key=\"cosine\">" << fixed(e.cosine, 6) << "</data>\n"
            << "    </edge>\n";
    out << "  </graph>\n</graphml>\n";
}

namespace {

// Minimal scanner for the GraphML this library emits: node and edge elements
// carrying <data key="...">value</data> children.
struct GraphmlElement {
    std::string tag;
    std::map<std::string, std::string> attributes;
    std::string text;  // for <data> elements
};

class GraphmlScanner {
public:
    explicit GraphmlScanner(std::string content) : content_(std::move(content)) {}

    // Advances to the next opening tag, filling `element`. Returns false at end.
    bool next(GraphmlElement& element) {
        const auto open = content_.find('<', pos_);
        if (open == std::string::npos) return false;
        const auto close = content_.find('>', open);
        if (close == std::string::npos) throw Error("graphml: unterminated tag");
        std::string inside = content_.substr(open + 1, close - open - 1);
        pos_ = close + 1;
        if (!inside.empty() && (inside[0] == '?' || inside[0] == '!' || inside[0] == '/'))
            return next(element);
        const bool self_closing = !inside.empty() && inside.back() == '/';
        if (self_closing) inside.pop_back();

        element.attributes.clear();
        element.text.clear();
        std::size_t i = 0;
        while (i < inside.size() && !std::isspace(static_cast<unsigned char>(inside[i]))) ++i;
        element.tag = inside.substr(0, i);
        while (i < inside.size()) {
            while (i < inside.size() && std::isspace(static_cast<unsigned char>(inside[i]))) ++i;
            const auto eq = inside.find('=', i);
            if (eq == std::string::npos) break;
            const std::string name = inside.substr(i, eq - i);
            const auto q1 = inside.find('"', eq);
            const auto q2 = inside.find('"', q1 + 1);
            if (q1 == std::string::npos || q2 == std::string::npos)
                throw Error("graphml: malformed attribute in <" + element.tag + ">");
            element.attributes[name] = xml_unescape(inside.substr(q1 + 1, q2 - q1 - 1));
            i = q2 + 1;
        }

        if (element.tag == "data" && !self_closing) {
            const auto end = content_.find("</data>", pos_);
            if (end == std::string::npos) throw Error("graphml: unterminated <data>");
            element.text = xml_unescape(content_.substr(pos_, end - pos_));
            pos_ = end + 7;
        }
        return true;
    }

private:
    std::string content_;
    std::size_t pos_ = 0;
};

double parse_double(const std::string& text, const char* what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(std::string("graphml: malformed ") + what + " value \"" + text + "\"");
    return value;
}

}  // namespace

SimilarityGraph read_graphml(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    GraphmlScanner scanner(buffer.str());

    SimilarityGraph g;
    g.suppression_threshold = 0.0;
    std::map<std::string, std::size_t> node_ids;
    GraphmlElement element;
    enum class Section { none, node, edge } section = Section::none;

    while (scanner.next(element)) {
        if (element.tag == "node") {
            const auto id = element.attributes.find("id");
            if (id == element.attributes.end()) throw Error("graphml: node without id");
            node_ids.emplace(id->second, g.nodes.size());
            g.nodes.emplace_back();
            section = Section::node;
        } else if (element.tag == "edge") {
            const auto source = element.attributes.find("source");
            const auto target = element.attributes.find("target");
            if (source == element.attributes.end() || target == element.attributes.end())
                throw Error("graphml: edge without endpoints");
            const auto a = node_ids.find(source->second);
            const auto b = node_ids.find(target->second);
            if (a == node_ids.end() || b == node_ids.end())
                throw Error("graphml: edge references unknown node");
            g.edges.push_back(GraphEdge{a->second, b->second, 0.0});
            section = Section::edge;
        } else if (element.tag == "data") {
            const std::string key = element.attributes.count("key")
                                        ? element.attributes.at("key")
                                        : "";
            if (section == Section::node && !g.nodes.empty()) {
                GraphNode& node = g.nodes.back();
                if (key == "label") {
                    node.journal = element.text;
                    node.geometry.journal = element.text;
                } else if (key == "share_total") {
                    node.geometry.share_total = parse_double(element.text, "share_total");
                } else if (key == "share_excl_self") {
                    node.geometry.share_excl_self =
                        parse_double(element.text, "share_excl_self");
                } else if (key == "cn_percent") {
                    node.geometry.cn_percent = parse_double(element.text, "cn_percent");
                }
            } else if (section == Section::edge && !g.edges.empty()) {
                if (key == "cosine")
                    g.edges.back().cosine = parse_double(element.text, "cosine");
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// DOT

void write_dot(const SimilarityGraph& g, std::ostream& out) {
    out << "graph citation_map {\n";
    for (const GraphNode& node : g.nodes)
        out << "  \"" << dot_escape(node.journal) << "\";\n";
    for (const GraphEdge& e : ordered_edges(g))
        out << "  \"" << dot_escape(g.nodes[e.a].journal) << "\" -- \""
            << dot_escape(g.nodes[e.b].journal) << "\" [weight=" << fixed(e.cosine, 6)
            << "];\n";
    out << "}\n";
}

// ---------------------------------------------------------------------------
// SVG map

namespace {

void check_style(const MapStyle& style) {
    if (style.canvas_width <= 0 || style.canvas_height <= 0 || style.ellipse_scale <= 0 ||
        style.edge_width_scale <= 0)
        throw Error("map style: all scales must be positive");
}

void render_svg(const SimilarityGraph& g, const MapStyle& style,
                const std::vector<Point>& centers, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(style.canvas_width, 3)
        << "\" height=\"" << fixed(style.canvas_height, 3) << "\" viewBox=\"0 0 "
        << fixed(style.canvas_width, 3) << " " << fixed(style.canvas_height, 3) << "\">\n";

    std::vector<std::size_t> degree(g.nodes.size(), 0);
    for (const GraphEdge& e : g.edges) {
        ++degree[e.a];
        ++degree[e.b];
    }

    for (const GraphEdge& e : ordered_edges(g))
        out << "  <line x1=\"" << fixed(centers[e.a].x, 3) << "\" y1=\""
            << fixed(centers[e.a].y, 3) << "\" x2=\"" << fixed(centers[e.b].x, 3)
            << "\" y2=\"" << fixed(centers[e.b].y, 3) << "\" stroke=\"#999999\""
            << " stroke-width=\"" << fixed(e.cosine * style.edge_width_scale, 3) << "\"/>\n";

    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const NodeGeometry& geom = g.nodes[i].geometry;
        // Hairline minimum keeps all-self-cite journals and other degenerate
        // ellipses visible.
        const double rx = std::max(geom.share_excl_self * style.ellipse_scale, 0.5);
        const double ry = std::max(geom.share_total * style.ellipse_scale, 0.5);
        out << "  <ellipse cx=\"" << fixed(centers[i].x, 3) << "\" cy=\""
            << fixed(centers[i].y, 3) << "\" rx=\"" << fixed(rx, 3) << "\" ry=\""
            << fixed(ry, 3) << "\" fill=\"#c6dbef\" fill-opacity=\"0.8\""
            << " stroke=\"#3182bd\" stroke-width=\"1\"/>\n";
    }

    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (style.label_policy == LabelPolicy::none) break;
        if (style.label_policy == LabelPolicy::degree_at_least_one && degree[i] == 0) continue;
        out << "  <text x=\"" << fixed(centers[i].x, 3) << "\" y=\""
            << fixed(centers[i].y, 3) << "\" font-size=\"12\" font-family=\"sans-serif\""
            << " text-anchor=\"middle\">" << xml_escape(g.nodes[i].journal) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace

void write_svg_map(const SimilarityGraph& g, const MapStyle& style, std::ostream& out) {
    check_style(style);
    const double cx = style.canvas_width / 2.0;
    const double cy = style.canvas_height / 2.0;
    const double radius = 0.4 * std::min(style.canvas_width, style.canvas_height);
    const std::size_t n = g.nodes.size();

    std::vector<Point> centers(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Member order runs clockwise starting at 12 o'clock.
        const double angle = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        centers[i] = Point{cx + radius * std::sin(angle), cy - radius * std::cos(angle)};
    }
    if (n == 1) centers[0] = Point{cx, cy};
    render_svg(g, style, centers, out);
}

void write_svg_map(const SimilarityGraph& g, const MapStyle& style,
                   const PositionMap& positions, std::ostream& out) {
    check_style(style);
    std::vector<Point> centers;
    centers.reserve(g.nodes.size());
    for (const GraphNode& node : g.nodes) {
        const auto it = positions.find(node.journal);
        if (it == positions.end())
            throw Error("missing position for node \"" + node.journal + "\"");
        centers.push_back(it->second);
    }
    render_svg(g, style, centers, out);
}

// ---------------------------------------------------------------------------
// Report and loadings

namespace {

void append_loadings_csv(const FactorModel& model, double display_cutoff, std::ostream& out) {
    const Eigen::Index k = model.loadings_rotated.cols();
    out << "journal";
    for (Eigen::Index c = 0; c < k; ++c) out << ",component_" << (c + 1);
    out << "\n";
    for (std::size_t i = 0; i < model.variables.size(); ++i) {
        out << csv_escape(model.variables[i]);
        for (Eigen::Index c = 0; c < k; ++c) {
            const double value = model.loadings_rotated(static_cast<Eigen::Index>(i), c);
            out << ",";
            if (std::abs(value) >= display_cutoff) out << fixed(value, 3);
        }
        out << "\n";
    }
}

}  // namespace

void write_report(const Environment& env, std::span<const NodeGeometry> geometry,
                  std::span<const JournalMeta> meta, const FactorModel* factors,
                  std::ostream& out, double display_cutoff) {
    if (geometry.size() != env.members.size())
        throw Error("report: geometry does not cover the environment members");

    std::map<std::string, const JournalMeta*> meta_by_label;
    for (const JournalMeta& m : meta) meta_by_label.emplace(canonical_label(m.label), &m);

    std::vector<const NodeGeometry*> rows;
    rows.reserve(geometry.size());
    for (const NodeGeometry& g : geometry) rows.push_back(&g);
    std::sort(rows.begin(), rows.end(), [](const NodeGeometry* a, const NodeGeometry* b) {
        if (a->cn_percent != b->cn_percent) return a->cn_percent > b->cn_percent;
        return a->journal < b->journal;
    });

    out << "journal,impact_factor,total_cites,cn_percent\n";
    std::vector<double> cn_with_totals, totals;
    for (const NodeGeometry* row : rows) {
        const auto it = meta_by_label.find(row->journal);
        const JournalMeta* m = it == meta_by_label.end() ? nullptr : it->second;
        out << csv_escape(row->journal) << ",";
        if (m && m->impact_factor) out << shortest(*m->impact_factor);
        out << ",";
        if (m && m->total_cites) out << *m->total_cites;
        out << "," << fixed(row->cn_percent, 6) << "\n";
        if (m && m->total_cites) {
            cn_with_totals.push_back(row->cn_percent);
            totals.push_back(static_cast<double>(*m->total_cites));
        }
    }

    if (cn_with_totals.size() >= 2) {
        const bool cn_constant = std::adjacent_find(cn_with_totals.begin(), cn_with_totals.end(),
                                                    std::not_equal_to<>()) == cn_with_totals.end();
        const bool totals_constant = std::adjacent_find(totals.begin(), totals.end(),
                                                        std::not_equal_to<>()) == totals.end();
        if (!cn_constant && !totals_constant)
            out << "# pearson_r(cn_percent,total_cites) = "
                << fixed(pearson_r(cn_with_totals, totals), 6) << "\n";
    }

    if (factors) {
        out << "# rotated loadings (display cutoff " << fixed(display_cutoff, 2) << ")\n";
        append_loadings_csv(*factors, display_cutoff, out);
    }
}

void write_loadings_csv(const FactorModel& model, double display_cutoff, std::ostream& out) {
    append_loadings_csv(model, display_cutoff, out);
}

void write_matrix_csv(const CitationMatrix& m, std::ostream& out) {
    for (const std::string& label : m.cited_labels()) out << "," << csv_escape(label);
    out << "\n";
    for (std::size_t i = 0; i < m.citing_count(); ++i) {
        out << csv_escape(m.citing_labels()[i]);
        for (std::size_t j = 0; j < m.cited_count(); ++j) out << "," << m.at(i, j);
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// Path overloads

void write_pajek(const SimilarityGraph& g, const std::filesystem::path& path) {
    write_file_atomic(path, [&](std::ostream& out) { write_pajek(g, out); });
}

SimilarityGraph read_pajek(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_pajek(in);
}

void write_graphml(const SimilarityGraph& g, const std::filesystem::path& path) {
    write_file_atomic(path, [&](std::ostream& out) { write_graphml(g, out); });
}

SimilarityGraph read_graphml(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_graphml(in);
}

void write_dot(const SimilarityGraph& g, const std::filesystem::path& path) {
    write_file_atomic(path, [&](std::ostream& out) { write_dot(g, out); });
}

void write_svg_map(const SimilarityGraph& g, const MapStyle& style,
                   const std::filesystem::path& path) {
    write_file_atomic(path, [&](std::ostream& out) { write_svg_map(g, style, out); });
}

void write_svg_map(const SimilarityGraph& g, const MapStyle& style,
                   const PositionMap& positions, const std::filesystem::path& path) {
    write_file_atomic(path,
                      [&](std::ostream& out) { write_svg_map(g, style, positions, out); });
}

void write_report(const Environment& env, std::span<const NodeGeometry> geometry,
                  std::span<const JournalMeta> meta, const FactorModel* factors,
                  const std::filesystem::path& path, double display_cutoff) {
    write_file_atomic(path, [&](std::ostream& out) {
        write_report(env, geometry, meta, factors, out, display_cutoff);
    });
}

void write_loadings_csv(const FactorModel& model, double display_cutoff,
                        const std::filesystem::path& path) {
    write_file_atomic(path, [&](std::ostream& out) {
        write_loadings_csv(model, display_cutoff, out);
    });
}

void write_matrix_csv(const CitationMatrix& m, const std::filesystem::path& path) {
    write_file_atomic(path, [&](std::ostream& out) { write_matrix_csv(m, out); });
}

}  // namespace citescope
