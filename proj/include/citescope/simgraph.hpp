#ifndef CITESCOPE_SIMGRAPH_HPP
#define CITESCOPE_SIMGRAPH_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "citescope/environment.hpp"

namespace citescope {

enum class DiagonalPolicy { include_self_cites, zero_diagonal };

// Cosine of two non-negative vectors, in [0, 1]; 0 when either norm is 0.
double cosine(std::span<const double> u, std::span<const double> v);

/// Symmetric matrix of pairwise cosines, unit diagonal except for
/// zero vectors (whose whole row is 0).
class SimilarityMatrix {
public:
    explicit SimilarityMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        values_[i * n_ + j] = v;
        values_[j * n_ + i] = v;
    }

private:
    std::size_t n_;
    std::vector<double> values_;
};

// Pairwise cosines between the members' citation-distribution vectors:
// column j of sub_matrix for direction=cited (who cites j), row j for
// direction=citing (whom j cites). zero_diagonal removes self-cites from
// every vector first.
SimilarityMatrix similarity_matrix(const Environment& env,
                                   DiagonalPolicy policy = DiagonalPolicy::include_self_cites);

struct GraphNode {
    std::string journal;
    NodeGeometry geometry;
};

struct GraphEdge {
    std::size_t a = 0;  // node indices, a < b
    std::size_t b = 0;
    double cosine = 0.0;
};

/// Undirected map graph: every member appears as a node (isolates included);
/// an edge is stored once (a < b in member order) iff its cosine reaches the
/// suppression threshold and is nonzero.
struct SimilarityGraph {
    std::string seed;
    Direction direction = Direction::cited;
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    double suppression_threshold = 0.2;
};

SimilarityGraph build_graph(const Environment& env, const SimilarityMatrix& sim,
                            std::span<const NodeGeometry> geometry,
                            double suppression_threshold = 0.2);

}  // namespace citescope

#endif
