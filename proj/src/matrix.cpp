#include "citescope/matrix.hpp"

#include <cctype>
#include <utility>

#include "citescope/error.hpp"

namespace citescope {

std::string canonical_label(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

namespace {

std::unordered_map<std::string, std::size_t> index_labels(
    const std::vector<std::string>& labels, const char* axis) {
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty())
            throw Error(std::string("empty journal label on ") + axis + " axis");
        if (!index.emplace(labels[i], i).second)
            throw Error(std::string("duplicate journal label on ") + axis +
                        " axis: \"" + labels[i] + "\"");
    }
    return index;
}

}  // namespace

CitationMatrix::CitationMatrix(std::vector<std::string> citing_labels,
                               std::vector<std::string> cited_labels,
                               std::vector<std::int64_t> counts)
    : citing_labels_(std::move(citing_labels)),
      cited_labels_(std::move(cited_labels)),
      counts_(std::move(counts)) {
    for (auto& label : citing_labels_) label = canonical_label(label);
    for (auto& label : cited_labels_) label = canonical_label(label);
    if (counts_.size() != citing_labels_.size() * cited_labels_.size())
        throw Error("count table size does not match label axes");
    for (std::int64_t c : counts_)
        if (c < 0) throw Error("negative citation count");
    citing_index_ = index_labels(citing_labels_, "citing");
    cited_index_ = index_labels(cited_labels_, "cited");
}

std::optional<std::size_t> CitationMatrix::citing_index(std::string_view label) const {
    auto it = citing_index_.find(canonical_label(label));
    if (it == citing_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> CitationMatrix::cited_index(std::string_view label) const {
    auto it = cited_index_.find(canonical_label(label));
    if (it == cited_index_.end()) return std::nullopt;
    return it->second;
}

std::int64_t CitationMatrix::citing_total(std::size_t citing) const {
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < cited_count(); ++j) sum += at(citing, j);
    return sum;
}

std::int64_t CitationMatrix::cited_total(std::size_t cited) const {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < citing_count(); ++i) sum += at(i, cited);
    return sum;
}

std::int64_t CitationMatrix::count_between(std::string_view citing,
                                           std::string_view cited) const {
    auto i = citing_index(citing);
    auto j = cited_index(cited);
    if (!i || !j) return 0;
    return at(*i, *j);
}

CitationMatrix CitationMatrix::restricted(const std::vector<std::string>& members) const {
    const std::size_t n = members.size();
    std::vector<std::string> labels;
    labels.reserve(n);
    for (const auto& m : members) labels.push_back(canonical_label(m));

    std::vector<std::int64_t> counts(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = citing_index(labels[i]);
        if (!row) continue;  // zero row for a journal absent from the citing axis
        for (std::size_t j = 0; j < n; ++j) {
            auto col = cited_index(labels[j]);
            if (col) counts[i * n + j] = at(*row, *col);
        }
    }
    return CitationMatrix(labels, labels, std::move(counts));
}

CitationMatrix CitationMatrix::transposed() const {
    std::vector<std::int64_t> counts(counts_.size());
    for (std::size_t i = 0; i < citing_count(); ++i)
        for (std::size_t j = 0; j < cited_count(); ++j)
            counts[j * citing_count() + i] = at(i, j);
    return CitationMatrix(cited_labels_, citing_labels_, std::move(counts));
}

}  // namespace citescope
