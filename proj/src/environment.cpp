#include "citescope/environment.hpp"

#include <algorithm>
#include <cmath>

#include "citescope/error.hpp"

namespace citescope {

std::string_view to_string(Direction d) {
    return d == Direction::cited ? "cited" : "citing";
}

Environment build_environment(const CitationMatrix& m, std::string_view seed,
                              Direction direction, double threshold_fraction) {
    if (threshold_fraction < 0.0 || threshold_fraction >= 1.0)
        throw Error("threshold fraction must lie in [0, 1)");
    const std::string seed_label = canonical_label(seed);

    // The seed lives on the axis named by the direction; candidates come from
    // the opposite axis.
    std::vector<std::string> members;
    if (direction == Direction::cited) {
        auto col = m.cited_index(seed_label);
        if (!col)
            throw Error("seed journal \"" + seed_label + "\" not found on the cited axis");
        const std::int64_t total = m.cited_total(*col);
        if (total == 0)
            throw Error("empty environment: \"" + seed_label +
                        "\" receives no citations (cited direction)");
        const double cutoff = threshold_fraction * static_cast<double>(total);
        for (std::size_t i = 0; i < m.citing_count(); ++i) {
            const std::int64_t flow = m.at(i, *col);
            if (flow > 0 && static_cast<double>(flow) >= cutoff)
                members.push_back(m.citing_labels()[i]);
        }
    } else {
        auto row = m.citing_index(seed_label);
        if (!row)
            throw Error("seed journal \"" + seed_label + "\" not found on the citing axis");
        const std::int64_t total = m.citing_total(*row);
        if (total == 0)
            throw Error("empty environment: \"" + seed_label +
                        "\" issues no citations (citing direction)");
        const double cutoff = threshold_fraction * static_cast<double>(total);
        for (std::size_t j = 0; j < m.cited_count(); ++j) {
            const std::int64_t flow = m.at(*row, j);
            if (flow > 0 && static_cast<double>(flow) >= cutoff)
                members.push_back(m.cited_labels()[j]);
        }
    }

    if (std::find(members.begin(), members.end(), seed_label) == members.end())
        members.insert(members.begin(), seed_label);

    CitationMatrix sub = m.restricted(members);
    return Environment{seed_label, direction, std::move(members), std::move(sub),
                       threshold_fraction};
}

std::vector<NodeGeometry> cn_values(const Environment& env) {
    const CitationMatrix& sub = env.sub_matrix;
    const std::size_t n = env.members.size();

    std::vector<std::int64_t> raw(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        raw[j] = env.direction == Direction::cited ? sub.cited_total(j) : sub.citing_total(j);

    std::int64_t grand = 0;
    for (std::int64_t r : raw) grand += r;
    if (grand == 0)
        throw Error("degenerate environment: no citations among members of \"" +
                    env.seed + "\"");

    std::vector<NodeGeometry> geometry(n);
    const double total = static_cast<double>(grand);
    for (std::size_t j = 0; j < n; ++j) {
        geometry[j].journal = env.members[j];
        geometry[j].share_total = static_cast<double>(raw[j]) / total;
        geometry[j].share_excl_self =
            static_cast<double>(raw[j] - sub.at(j, j)) / total;
        geometry[j].cn_percent = 100.0 * geometry[j].share_total;
    }
    return geometry;
}

double self_cite_rate(const CitationMatrix& m, std::string_view journal) {
    const std::string label = canonical_label(journal);
    auto row = m.citing_index(label);
    auto col = m.cited_index(label);
    if (!row)
        throw Error("journal \"" + label + "\" not found on the citing axis");
    if (!col)
        throw Error("journal \"" + label + "\" not found on the cited axis");
    const std::int64_t received = m.cited_total(*col);
    if (received == 0) return 0.0;
    return static_cast<double>(m.at(*row, *col)) / static_cast<double>(received);
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error("pearson_r: length mismatch (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
    const std::size_t n = x.size();
    if (n < 2) throw Error("pearson_r: need at least 2 observations");

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error("pearson_r: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace citescope
