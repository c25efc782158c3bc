#ifndef CITESCOPE_ENVIRONMENT_HPP
#define CITESCOPE_ENVIRONMENT_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citescope/matrix.hpp"

namespace citescope {

enum class Direction { cited, citing };

std::string_view to_string(Direction d);

/// The citation neighborhood of a seed journal.
///
/// For direction=cited, members are the journals citing the seed; for
/// direction=citing, the journals the seed cites. A non-seed journal is a
/// member iff its flow toward/from the seed reaches threshold_fraction of
/// the seed's total in that direction; the seed itself is always a member.
/// sub_matrix has `members` on both axes, in member order.
struct Environment {
    std::string seed;
    Direction direction = Direction::cited;
    std::vector<std::string> members;
    CitationMatrix sub_matrix;
    double threshold_fraction = 0.01;
};

/// Normalized size of one journal inside an environment. share_total is the
/// journal's fraction of all in-environment citations (the ellipse y-axis),
/// share_excl_self the same after removing self-cites (the x-axis), and
/// cn_percent is share_total as a percentage (the C/N value).
struct NodeGeometry {
    std::string journal;
    double share_total = 0.0;
    double share_excl_self = 0.0;
    double cn_percent = 0.0;
};

// Members keep the order of the axis they were drawn from (citing axis for
// direction=cited, cited axis for direction=citing); a seed that is absent
// from that axis is placed first.
Environment build_environment(const CitationMatrix& m, std::string_view seed,
                              Direction direction, double threshold_fraction = 0.01);

// Citation shares per member, in member order. Raw sizes are in-environment
// indegrees (direction=cited) or outdegrees (direction=citing).
std::vector<NodeGeometry> cn_values(const Environment& env);

// Self-cites of `journal` over its total citations received; 0 when the
// journal receives none.
double self_cite_rate(const CitationMatrix& m, std::string_view journal);

// Pearson product-moment correlation.
double pearson_r(std::span<const double> x, std::span<const double> y);

}  // namespace citescope

#endif
