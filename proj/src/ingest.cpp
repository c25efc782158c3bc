#include "citescope/ingest.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <utility>

#include "citescope/error.hpp"

namespace citescope {

bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    int c = in.get();
    if (c == EOF) return false;

    std::string field;
    bool quoted = false;
    for (;; c = in.get()) {
        if (quoted) {
            if (c == EOF) throw Error("unterminated quoted field");
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(static_cast<char>(c));
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == EOF) {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
    }
}

std::string csv_escape(std::string_view field) {
    bool needs_quotes = false;
    for (char c : field)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') needs_quotes = true;
    if (!field.empty() && (field.front() == ' ' || field.back() == ' '))
        needs_quotes = true;
    if (!needs_quotes) return std::string(field);

    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

namespace {

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Non-negative integer cell; anything else reports the cell's location.
std::int64_t parse_count(std::string_view raw, std::size_t row, std::size_t column) {
    const std::string_view text = trimmed(raw);
    auto fail = [&](const char* what) -> Error {
        return Error("row " + std::to_string(row) + ", column " + std::to_string(column) +
                     ": " + what + " \"" + std::string(raw) + "\"");
    };
    if (text.empty()) throw fail("missing count");
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc::result_out_of_range) throw fail("count out of range");
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        if (ptr != text.data() + text.size() && (*ptr == '.' || *ptr == 'e' || *ptr == 'E'))
            throw fail("non-integer count");
        throw fail("malformed count");
    }
    if (value < 0) throw fail("negative count");
    return value;
}

CitationMatrix parse_dense(std::istream& in) {
    std::vector<std::string> fields;
    if (!read_csv_record(in, fields) || fields.size() < 2)
        throw Error("dense-csv: missing header row of cited labels");

    std::vector<std::string> cited(fields.begin() + 1, fields.end());
    const std::size_t columns = cited.size();

    std::vector<std::string> citing;
    std::vector<std::int64_t> counts;
    std::size_t row = 1;
    while (read_csv_record(in, fields)) {
        ++row;
        if (fields.size() == 1 && trimmed(fields[0]).empty()) continue;  // trailing blank line
        if (fields.size() != columns + 1)
            throw Error("dense-csv: row " + std::to_string(row) + " has " +
                        std::to_string(fields.size() - 1) + " cells, expected " +
                        std::to_string(columns));
        citing.push_back(fields[0]);
        for (std::size_t j = 0; j < columns; ++j)
            counts.push_back(parse_count(fields[j + 1], row, j + 2));
    }
    if (citing.empty()) throw Error("dense-csv: no data rows");
    return CitationMatrix(std::move(citing), std::move(cited), std::move(counts));
}

CitationMatrix parse_edge_list(std::istream& in) {
    std::vector<std::string> fields;
    if (!read_csv_record(in, fields) || fields.size() != 3 ||
        trimmed(fields[0]) != "citing" || trimmed(fields[1]) != "cited" ||
        trimmed(fields[2]) != "count")
        throw Error("edge-list-csv: expected header \"citing,cited,count\"");

    std::vector<std::string> citing_labels, cited_labels;
    std::map<std::string, std::size_t> citing_index, cited_index;
    auto intern = [](const std::string& raw, std::vector<std::string>& labels,
                     std::map<std::string, std::size_t>& index) {
        std::string label = canonical_label(raw);
        auto [it, inserted] = index.emplace(label, labels.size());
        if (inserted) labels.push_back(std::move(label));
        return it->second;
    };

    std::map<std::pair<std::size_t, std::size_t>, std::int64_t> cells;
    std::size_t row = 1;
    while (read_csv_record(in, fields)) {
        ++row;
        if (fields.size() == 1 && trimmed(fields[0]).empty()) continue;
        if (fields.size() != 3)
            throw Error("edge-list-csv: row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields, expected 3");
        if (canonical_label(fields[0]).empty() || canonical_label(fields[1]).empty())
            throw Error("edge-list-csv: row " + std::to_string(row) + ": empty journal label");
        const std::size_t i = intern(fields[0], citing_labels, citing_index);
        const std::size_t j = intern(fields[1], cited_labels, cited_index);
        const std::int64_t count = parse_count(fields[2], row, 3);
        if (!cells.emplace(std::make_pair(i, j), count).second)
            throw Error("edge-list-csv: duplicate pair (\"" + citing_labels[i] + "\", \"" +
                        cited_labels[j] + "\") at row " + std::to_string(row));
    }
    if (citing_labels.empty()) throw Error("edge-list-csv: no data rows");

    std::vector<std::int64_t> counts(citing_labels.size() * cited_labels.size(), 0);
    for (const auto& [cell, count] : cells)
        counts[cell.first * cited_labels.size() + cell.second] = count;
    return CitationMatrix(std::move(citing_labels), std::move(cited_labels), std::move(counts));
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    return in;
}

}  // namespace

CitationMatrix parse_matrix(std::istream& in, MatrixFormat format) {
    return format == MatrixFormat::dense_csv ? parse_dense(in) : parse_edge_list(in);
}

CitationMatrix parse_matrix(const std::filesystem::path& path, MatrixFormat format) {
    auto in = open_or_throw(path);
    try {
        return parse_matrix(in, format);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

MatrixFormat detect_matrix_format(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    std::vector<std::string> fields;
    if (read_csv_record(in, fields) && fields.size() == 3 &&
        trimmed(fields[0]) == "citing" && trimmed(fields[1]) == "cited" &&
        trimmed(fields[2]) == "count")
        return MatrixFormat::edge_list_csv;
    return MatrixFormat::dense_csv;
}

std::vector<JournalMeta> parse_metadata(std::istream& in) {
    std::vector<std::string> fields;
    if (!read_csv_record(in, fields) || fields.size() != 3 ||
        trimmed(fields[0]) != "label" || trimmed(fields[1]) != "total_cites" ||
        trimmed(fields[2]) != "impact_factor")
        throw Error("metadata: expected header \"label,total_cites,impact_factor\"");

    std::vector<JournalMeta> records;
    std::set<std::string> seen;
    std::size_t row = 1;
    while (read_csv_record(in, fields)) {
        ++row;
        if (fields.size() == 1 && trimmed(fields[0]).empty()) continue;
        if (fields.size() != 3)
            throw Error("metadata: row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields, expected 3");
        JournalMeta meta;
        meta.label = canonical_label(fields[0]);
        if (meta.label.empty())
            throw Error("metadata: row " + std::to_string(row) + ": missing label");
        if (!seen.insert(meta.label).second)
            throw Error("metadata: duplicate label \"" + meta.label + "\"");
        if (!trimmed(fields[1]).empty()) {
            std::int64_t cites = parse_count(fields[1], row, 2);
            meta.total_cites = cites;
        }
        const std::string_view factor = trimmed(fields[2]);
        if (!factor.empty()) {
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(factor.data(), factor.data() + factor.size(), value);
            if (ec != std::errc() || ptr != factor.data() + factor.size())
                throw Error("metadata: row " + std::to_string(row) +
                            ": malformed impact factor \"" + fields[2] + "\"");
            if (value < 0)
                throw Error("metadata: row " + std::to_string(row) +
                            ": negative impact factor");
            meta.impact_factor = value;
        }
        records.push_back(std::move(meta));
    }
    return records;
}

std::vector<JournalMeta> parse_metadata(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    try {
        return parse_metadata(in);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

ValidationReport validate_matrix(const CitationMatrix& m) {
    ValidationReport report;
    for (std::size_t i = 0; i < m.citing_count(); ++i) {
        if (m.citing_total(i) == 0) report.never_cites.push_back(m.citing_labels()[i]);
        if (!m.cited_index(m.citing_labels()[i]))
            report.citing_only.push_back(m.citing_labels()[i]);
    }
    for (std::size_t j = 0; j < m.cited_count(); ++j) {
        if (m.cited_total(j) == 0) report.never_cited.push_back(m.cited_labels()[j]);
        if (!m.citing_index(m.cited_labels()[j]))
            report.cited_only.push_back(m.cited_labels()[j]);
    }
    return report;
}

}  // namespace citescope
