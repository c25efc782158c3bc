#include "citescope/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <vector>

#include "citescope/error.hpp"
#include "citescope/factors.hpp"

namespace citescope {

namespace {

std::string percent(double fraction, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f%%", decimals, 100.0 * fraction);
    return buf;
}

void check_common(const RunConfig& config) {
    if (config.matrix_path.empty()) throw Error("no matrix file given");
    if (config.threshold_fraction < 0.0 || config.threshold_fraction >= 1.0)
        throw Error("threshold fraction must lie in [0, 1)");
    if (config.suppression_threshold < 0.0 || config.suppression_threshold >= 1.0)
        throw Error("suppression threshold must lie in [0, 1)");
    if (config.components && *config.components < 1)
        throw Error("component count must be at least 1");
    if (config.display_cutoff < 0.0) throw Error("display cutoff must be non-negative");
}

CitationMatrix load_matrix(const RunConfig& config) {
    const MatrixFormat format = config.matrix_format
                                    ? *config.matrix_format
                                    : detect_matrix_format(config.matrix_path);
    return parse_matrix(config.matrix_path, format);
}

std::vector<JournalMeta> load_metadata(const RunConfig& config) {
    if (!config.metadata_path) return {};
    return parse_metadata(*config.metadata_path);
}

// Stages files as "<path>.tmp" and renames them together on commit, so a
// failing run leaves no partial output set behind.
class OutputStager {
public:
    ~OutputStager() {
        for (const auto& path : staged_) {
            std::error_code ec;
            std::filesystem::remove(std::filesystem::path(path.string() + ".tmp"), ec);
        }
    }

    void stage(const std::filesystem::path& path,
               const std::function<void(std::ostream&)>& writer) {
        const std::filesystem::path tmp = path.string() + ".tmp";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot create file: " + tmp.string());
        writer(out);
        out.flush();
        if (!out) throw Error("write failed: " + tmp.string());
        staged_.push_back(path);
    }

    void commit() {
        for (const auto& path : staged_) {
            const std::filesystem::path tmp = path.string() + ".tmp";
            std::error_code ec;
            std::filesystem::rename(tmp, path, ec);
            if (ec)
                throw Error("cannot rename " + tmp.string() + " to " + path.string() +
                            ": " + ec.message());
        }
        staged_.clear();
    }

private:
    std::vector<std::filesystem::path> staged_;
};

}  // namespace

std::optional<OutputFormat> parse_output_format(std::string_view name) {
    if (name == "pajek") return OutputFormat::pajek;
    if (name == "graphml") return OutputFormat::graphml;
    if (name == "dot") return OutputFormat::dot;
    if (name == "svg") return OutputFormat::svg;
    if (name == "report") return OutputFormat::report;
    if (name == "loadings") return OutputFormat::loadings;
    return std::nullopt;
}

void run_env(const RunConfig& config, std::ostream& out) {
    check_common(config);
    if (config.seed.empty()) throw Error("no seed journal given");

    std::set<OutputFormat> formats = config.formats;
    if (formats.empty())
        formats = {OutputFormat::pajek, OutputFormat::graphml, OutputFormat::dot,
                   OutputFormat::svg, OutputFormat::report};
    if (formats.count(OutputFormat::loadings))
        throw Error("loadings output is produced by the factors command");

    const CitationMatrix matrix = load_matrix(config);
    const std::vector<JournalMeta> meta = load_metadata(config);

    const Environment env =
        build_environment(matrix, config.seed, config.direction, config.threshold_fraction);
    const std::vector<NodeGeometry> geometry = cn_values(env);
    const SimilarityMatrix sim = similarity_matrix(env, config.diagonal_policy);
    const SimilarityGraph graph =
        build_graph(env, sim, geometry, config.suppression_threshold);

    std::int64_t grand = 0;
    for (std::size_t j = 0; j < env.members.size(); ++j)
        grand += env.direction == Direction::cited ? env.sub_matrix.cited_total(j)
                                                   : env.sub_matrix.citing_total(j);

    std::filesystem::create_directories(config.output_dir);
    const std::string stem = "environment_" + std::string(to_string(config.direction));

    OutputStager stager;
    std::vector<std::filesystem::path> written;
    auto add = [&](const std::filesystem::path& path,
                   const std::function<void(std::ostream&)>& writer) {
        stager.stage(path, writer);
        written.push_back(path);
    };
    if (formats.count(OutputFormat::pajek))
        add(config.output_dir / (stem + ".net"),
            [&](std::ostream& o) { write_pajek(graph, o); });
    if (formats.count(OutputFormat::graphml))
        add(config.output_dir / (stem + ".graphml"),
            [&](std::ostream& o) { write_graphml(graph, o); });
    if (formats.count(OutputFormat::dot))
        add(config.output_dir / (stem + ".dot"),
            [&](std::ostream& o) { write_dot(graph, o); });
    if (formats.count(OutputFormat::svg))
        add(config.output_dir / (stem + ".svg"),
            [&](std::ostream& o) { write_svg_map(graph, MapStyle{}, o); });
    if (formats.count(OutputFormat::report))
        add(config.output_dir / "report.csv", [&](std::ostream& o) {
            write_report(env, geometry, meta, nullptr, o, config.display_cutoff);
        });
    stager.commit();

    out << "seed: " << env.seed << "\n"
        << "direction: " << to_string(env.direction) << "\n"
        << "members: " << env.members.size() << "\n"
        << "grand total citations: " << grand << "\n";

    std::vector<const NodeGeometry*> top;
    for (const NodeGeometry& g : geometry) top.push_back(&g);
    std::sort(top.begin(), top.end(), [](const NodeGeometry* a, const NodeGeometry* b) {
        if (a->cn_percent != b->cn_percent) return a->cn_percent > b->cn_percent;
        return a->journal < b->journal;
    });
    out << "top C/N values:\n";
    for (std::size_t i = 0; i < top.size() && i < 5; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", top[i]->cn_percent);
        out << "  " << (i + 1) << ". " << top[i]->journal << "  " << buf << "\n";
    }
    for (const auto& path : written) out << "wrote: " << path.string() << "\n";
}

void run_factors(const RunConfig& config, std::ostream& out) {
    check_common(config);
    if (config.seed.empty()) throw Error("no seed journal given");
    if (config.direction != Direction::citing)
        throw Error("factor analysis is defined on citing patterns; use --direction citing");

    const CitationMatrix matrix = load_matrix(config);
    const Environment env =
        build_environment(matrix, config.seed, config.direction, config.threshold_fraction);

    FactorOptions options;
    options.components = config.components;
    const FactorModel model = fit_factor_model(env, options);

    std::filesystem::create_directories(config.output_dir);
    OutputStager stager;
    stager.stage(config.output_dir / "loadings.csv", [&](std::ostream& o) {
        write_loadings_csv(model, config.display_cutoff, o);
    });
    stager.stage(config.output_dir / "loadings.txt", [&](std::ostream& o) {
        o << format_loadings_table(model, config.display_cutoff);
    });
    stager.commit();

    const Eigen::Index k = model.loadings_rotated.cols();
    if (config.components) {
        out << "components: " << k << " (requested)\n";
    } else {
        out << "components retained (Kaiser criterion, eigenvalue > 1): " << k << "\n";
        out << "eigenvalues:";
        for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.3f", model.eigenvalues(i));
            out << buf;
        }
        out << "\n";
    }
    out << "variance explained: " << percent(model.variance_explained_total, 1) << "\n";
    if (model.rotation_converged)
        out << "rotation converged in " << model.iterations_used << " iterations\n";
    else
        out << "rotation did not converge within " << model.iterations_used << " sweeps\n";
    out << "wrote: " << (config.output_dir / "loadings.csv").string() << "\n";
    out << "wrote: " << (config.output_dir / "loadings.txt").string() << "\n";
}

void run_validate(const RunConfig& config, std::ostream& out) {
    if (config.matrix_path.empty()) throw Error("no matrix file given");
    const CitationMatrix matrix = load_matrix(config);
    const ValidationReport report = validate_matrix(matrix);

    out << "matrix: " << matrix.citing_count() << " citing x " << matrix.cited_count()
        << " cited journals\n";
    for (const auto& j : report.never_cites) out << "never cites (zero row): " << j << "\n";
    for (const auto& j : report.never_cited) out << "never cited (zero column): " << j << "\n";
    for (const auto& j : report.citing_only) out << "citing axis only: " << j << "\n";
    for (const auto& j : report.cited_only) out << "cited axis only: " << j << "\n";
    if (report.empty()) out << "no findings\n";
}

}  // namespace citescope
