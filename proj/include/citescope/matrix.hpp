#ifndef CITESCOPE_MATRIX_HPP
#define CITESCOPE_MATRIX_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace citescope {

// Canonical form of a journal identifier: leading/trailing whitespace
// trimmed, internal whitespace runs collapsed to a single space. No case
// folding — journal abbreviations are case-significant.
std::string canonical_label(std::string_view raw);

/// Journal-to-journal citation counts for one JCR year.
///
/// Rows are citing journals, columns are cited journals;
/// at(i, j) is the number of times journal i cites journal j.
/// Labels are stored canonicalized and are unique within each axis.
/// A label present on both axes refers to the same journal, so self-cites
/// of journal J live at (citing index of J, cited index of J).
class CitationMatrix {
public:
    CitationMatrix() = default;  // empty 0x0 matrix
    CitationMatrix(std::vector<std::string> citing_labels,
                   std::vector<std::string> cited_labels,
                   std::vector<std::int64_t> counts);

    std::size_t citing_count() const { return citing_labels_.size(); }
    std::size_t cited_count() const { return cited_labels_.size(); }

    const std::vector<std::string>& citing_labels() const { return citing_labels_; }
    const std::vector<std::string>& cited_labels() const { return cited_labels_; }

    std::int64_t at(std::size_t citing, std::size_t cited) const {
        return counts_[citing * cited_labels_.size() + cited];
    }

    // Index of a journal on each axis, looked up by canonical label.
    std::optional<std::size_t> citing_index(std::string_view label) const;
    std::optional<std::size_t> cited_index(std::string_view label) const;

    // Citations issued by row `citing` / received by column `cited`.
    std::int64_t citing_total(std::size_t citing) const;
    std::int64_t cited_total(std::size_t cited) const;

    // Count for a labelled pair; zero when either label is missing from its axis.
    std::int64_t count_between(std::string_view citing, std::string_view cited) const;

    // Square matrix over `members` on both axes, in the given order. Journals
    // absent from an axis of this matrix contribute zero rows/columns there.
    CitationMatrix restricted(const std::vector<std::string>& members) const;

    CitationMatrix transposed() const;

    bool operator==(const CitationMatrix& other) const = default;

private:
    std::vector<std::string> citing_labels_;
    std::vector<std::string> cited_labels_;
    std::vector<std::int64_t> counts_;  // row-major, citing x cited
    std::unordered_map<std::string, std::size_t> citing_index_;
    std::unordered_map<std::string, std::size_t> cited_index_;
};

/// Optional per-journal metadata for report tables. Values are pass-through
/// input, never computed by this library.
struct JournalMeta {
    std::string label;
    std::optional<std::int64_t> total_cites;
    std::optional<double> impact_factor;

    bool operator==(const JournalMeta&) const = default;
};

}  // namespace citescope

#endif
