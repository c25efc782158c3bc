#ifndef CITESCOPE_INGEST_HPP
#define CITESCOPE_INGEST_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "citescope/matrix.hpp"

namespace citescope {

enum class MatrixFormat {
    dense_csv,      // header row of cited labels, leading column of citing labels
    edge_list_csv,  // header "citing,cited,count", one row per pair
};

// Parse a citation matrix from a delimited text file. Counts must be
// non-negative integers; a missing dense cell is an error, not zero, and
// duplicate edge-list pairs are an error, not summed.
CitationMatrix parse_matrix(const std::filesystem::path& path, MatrixFormat format);
CitationMatrix parse_matrix(std::istream& in, MatrixFormat format);

// Sniff the format from the header line: an edge list starts with the exact
// header "citing,cited,count", anything else is read as dense.
MatrixFormat detect_matrix_format(const std::filesystem::path& path);

// Parse per-journal metadata (header "label,total_cites,impact_factor";
// empty cells leave the optional fields absent).
std::vector<JournalMeta> parse_metadata(const std::filesystem::path& path);
std::vector<JournalMeta> parse_metadata(std::istream& in);

/// Report-only findings about a matrix; parsing never rejects these.
struct ValidationReport {
    std::vector<std::string> never_cites;   // all-zero citing rows
    std::vector<std::string> never_cited;   // all-zero cited columns
    std::vector<std::string> citing_only;   // labels absent from the cited axis
    std::vector<std::string> cited_only;    // labels absent from the citing axis

    bool empty() const {
        return never_cites.empty() && never_cited.empty() &&
               citing_only.empty() && cited_only.empty();
    }
};

ValidationReport validate_matrix(const CitationMatrix& m);

// One CSV record, with quoted-field and CRLF handling shared by the parsers
// and the export writers. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields);
std::string csv_escape(std::string_view field);

}  // namespace citescope

#endif
