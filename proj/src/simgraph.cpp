#include "citescope/simgraph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "citescope/error.hpp"

namespace citescope {

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw Error("cosine: length mismatch (" + std::to_string(u.size()) + " vs " +
                    std::to_string(v.size()) + ")");
    double dot = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), 0.0, 1.0);
}

SimilarityMatrix similarity_matrix(const Environment& env, DiagonalPolicy policy) {
    const CitationMatrix& sub = env.sub_matrix;
    const std::size_t n = env.members.size();

    // Extract each member's distribution vector once.
    std::vector<std::vector<double>> vectors(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            vectors[j][i] = static_cast<double>(
                env.direction == Direction::cited ? sub.at(i, j) : sub.at(j, i));
    if (policy == DiagonalPolicy::zero_diagonal)
        for (std::size_t j = 0; j < n; ++j) vectors[j][j] = 0.0;

    SimilarityMatrix sim(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool zero = std::all_of(vectors[i].begin(), vectors[i].end(),
                                      [](double x) { return x == 0.0; });
        sim.set(i, i, zero ? 0.0 : 1.0);
        for (std::size_t j = i + 1; j < n; ++j)
            sim.set(i, j, cosine(vectors[i], vectors[j]));
    }
    return sim;
}

SimilarityGraph build_graph(const Environment& env, const SimilarityMatrix& sim,
                            std::span<const NodeGeometry> geometry,
                            double suppression_threshold) {
    const std::size_t n = env.members.size();
    if (sim.size() != n)
        throw Error("similarity matrix size does not match the environment");

    std::unordered_map<std::string, const NodeGeometry*> by_journal;
    for (const NodeGeometry& g : geometry) by_journal.emplace(g.journal, &g);

    SimilarityGraph graph;
    graph.seed = env.seed;
    graph.direction = env.direction;
    graph.suppression_threshold = suppression_threshold;

    graph.nodes.reserve(n);
    for (const std::string& member : env.members) {
        auto it = by_journal.find(member);
        if (it == by_journal.end())
            throw Error("missing node geometry for \"" + member + "\"");
        graph.nodes.push_back(GraphNode{member, *it->second});
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = sim.at(i, j);
            if (c > 0.0 && c >= suppression_threshold)
                graph.edges.push_back(GraphEdge{i, j, c});
        }
    return graph;
}

}  // namespace citescope
