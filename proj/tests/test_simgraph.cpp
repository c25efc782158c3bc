#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "citescope/error.hpp"
#include "citescope/simgraph.hpp"
#include "test_support.hpp"

using namespace citescope;
using test_support::make_square;

namespace {

// Naive reference: pull each member's vector straight out of the restricted
// matrix and apply the cosine definition term by term.
double naive_cosine(const std::vector<double>& u, const std::vector<double>& v) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::vector<double> member_vector(const Environment& env, std::size_t j,
                                  DiagonalPolicy policy) {
    const std::size_t n = env.members.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = static_cast<double>(env.direction == Direction::cited
                                       ? env.sub_matrix.at(i, j)
                                       : env.sub_matrix.at(j, i));
    if (policy == DiagonalPolicy::zero_diagonal) v[j] = 0.0;
    return v;
}

std::vector<NodeGeometry> flat_geometry(const Environment& env) {
    std::vector<NodeGeometry> geometry;
    for (const auto& member : env.members)
        geometry.push_back(NodeGeometry{member, 1.0 / env.members.size(),
                                        1.0 / env.members.size(),
                                        100.0 / env.members.size()});
    return geometry;
}

}  // namespace

TEST_CASE("cosine of hand-picked vectors") {
    const std::vector<double> a = {1, 2, 3};
    CHECK(std::abs(cosine(a, a) - 1.0) <= 1e-12);

    const std::vector<double> e1 = {1, 0};
    const std::vector<double> e2 = {0, 1};
    CHECK(cosine(e1, e2) == doctest::Approx(0.0));

    // (1,2)·(2,1) = 4 over sqrt(5)*sqrt(5) = 5
    const std::vector<double> u = {1, 2};
    const std::vector<double> v = {2, 1};
    CHECK(cosine(u, v) == doctest::Approx(0.8).epsilon(1e-12));

    const std::vector<double> zero = {0, 0};
    CHECK(cosine(zero, u) == 0.0);

    const std::vector<double> longer = {1, 2, 3};
    CHECK_THROWS_WITH_AS(cosine(u, longer), doctest::Contains("length mismatch"), Error);
}

TEST_CASE("cosine is scale invariant and bounded") {
    std::mt19937 rng(20240807);
    std::uniform_real_distribution<double> value(0.0, 20.0);
    std::uniform_real_distribution<double> factor(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 8;
        std::vector<double> u(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = value(rng);
            v[i] = value(rng);
        }
        const double c = cosine(u, v);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);

        const double a = factor(rng);
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = a * u[i];
        CHECK(std::abs(cosine(scaled, v) - c) <= 1e-12);
    }
}

TEST_CASE("proportional columns give cosine 1") {
    // B's citers are exactly twice A's citers
    const auto m = make_square({"S", "A", "B"},
                               {{1, 2, 4}, {3, 1, 2}, {2, 3, 6}});
    const auto env = build_environment(m, "S", Direction::cited, 0.0);
    const auto sim = similarity_matrix(env);
    const std::size_t a = 1, b = 2;
    CHECK(std::abs(sim.at(a, b) - 1.0) <= 1e-12);
}

TEST_CASE("zero-diagonal policy isolates a journal cited only by itself") {
    const auto m = make_square({"S", "A"}, {{5, 0}, {3, 7}});
    // A is cited only by itself (7); S is cited by both.
    const auto env = build_environment(m, "S", Direction::cited, 0.0);
    REQUIRE(env.members == std::vector<std::string>{"S", "A"});

    const auto sim = similarity_matrix(env, DiagonalPolicy::zero_diagonal);
    const std::size_t a = 1;
    CHECK(sim.at(a, a) == 0.0);   // zero vector => zero diagonal
    CHECK(sim.at(0, a) == 0.0);
    CHECK(sim.at(0, 0) == 1.0);
}

TEST_CASE("similarity matrix equals the naive definition and is exactly symmetric") {
    std::mt19937 rng(20240808);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = test_support::random_square(rng, 2 + trial % 7, 9);
        const std::string seed = m.citing_labels()[trial % m.citing_count()];
        const Direction direction = trial % 2 ? Direction::cited : Direction::citing;
        const auto total = direction == Direction::cited
                               ? m.cited_total(*m.cited_index(seed))
                               : m.citing_total(*m.citing_index(seed));
        if (total == 0) continue;
        const auto env = build_environment(m, seed, direction, 0.0);
        const auto policy = trial % 3 == 0 ? DiagonalPolicy::zero_diagonal
                                           : DiagonalPolicy::include_self_cites;
        const auto sim = similarity_matrix(env, policy);

        const std::size_t n = env.members.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(sim.at(i, j) == sim.at(j, i));  // exact symmetry
                const double reference = naive_cosine(member_vector(env, i, policy),
                                                      member_vector(env, j, policy));
                if (i == j) {
                    const auto vec = member_vector(env, i, policy);
                    const bool zero = std::all_of(vec.begin(), vec.end(),
                                                  [](double x) { return x == 0.0; });
                    CHECK(sim.at(i, i) == (zero ? 0.0 : 1.0));
                } else {
                    CHECK(std::abs(sim.at(i, j) - reference) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("edges at the suppression boundary") {
    const auto m = make_square({"S", "A"}, {{1, 1}, {1, 1}});
    const auto env = build_environment(m, "S", Direction::cited, 0.0);
    const auto geometry = flat_geometry(env);

    SimilarityMatrix sim(2);
    sim.set(0, 0, 1.0);
    sim.set(1, 1, 1.0);

    sim.set(0, 1, 0.19);
    CHECK(build_graph(env, sim, geometry, 0.2).edges.empty());

    sim.set(0, 1, 0.20);
    const auto graph = build_graph(env, sim, geometry, 0.2);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0].a == 0);
    CHECK(graph.edges[0].b == 1);
    CHECK(graph.edges[0].cosine == doctest::Approx(0.2));
}

TEST_CASE("threshold zero keeps every nonzero pair and drops zero cosines") {
    const auto m = make_square({"S", "A", "B"}, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
    const auto env = build_environment(m, "S", Direction::cited, 0.0);
    const auto geometry = flat_geometry(env);

    SimilarityMatrix sim(3);
    for (std::size_t i = 0; i < 3; ++i) sim.set(i, i, 1.0);
    sim.set(0, 1, 0.4);
    sim.set(0, 2, 0.0);  // orthogonal pair stays absent even at threshold 0
    sim.set(1, 2, 0.7);

    const auto graph = build_graph(env, sim, geometry, 0.0);
    CHECK(graph.edges.size() == 2);
}

TEST_CASE("three journals with cosines 0.9/0.25/0.1 keep exactly two edges") {
    const auto m = make_square({"S", "A", "B"}, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
    const auto env = build_environment(m, "S", Direction::cited, 0.0);
    const auto geometry = flat_geometry(env);

    SimilarityMatrix sim(3);
    for (std::size_t i = 0; i < 3; ++i) sim.set(i, i, 1.0);
    sim.set(0, 1, 0.9);
    sim.set(0, 2, 0.25);
    sim.set(1, 2, 0.1);

    const auto graph = build_graph(env, sim, geometry, 0.2);
    REQUIRE(graph.edges.size() == 2);
    CHECK(graph.nodes.size() == 3);  // the weakly-tied journal stays as a node
}

TEST_CASE("edge monotonicity in the suppression threshold") {
    std::mt19937 rng(20240809);
    for (int trial = 0; trial < 25; ++trial) {
        const auto m = test_support::random_square(rng, 3 + trial % 5);
        const std::string seed = m.citing_labels()[0];
        if (m.cited_total(*m.cited_index(seed)) == 0) continue;
        const auto env = build_environment(m, seed, Direction::cited, 0.0);
        const auto sim = similarity_matrix(env);
        const auto geometry = flat_geometry(env);

        std::size_t previous = std::numeric_limits<std::size_t>::max();
        for (double threshold : {0.0, 0.2, 0.5, 0.8, 0.99}) {
            const auto graph = build_graph(env, sim, geometry, threshold);
            CHECK(graph.edges.size() <= previous);
            previous = graph.edges.size();
            for (const auto& e : graph.edges) {
                CHECK(e.cosine >= threshold);
                CHECK(e.a < e.b);
            }
        }
    }
}

TEST_CASE("missing geometry is an error naming the journal") {
    const auto m = make_square({"S", "A"}, {{1, 1}, {1, 1}});
    const auto env = build_environment(m, "S", Direction::cited, 0.0);
    const auto sim = similarity_matrix(env);
    std::vector<NodeGeometry> partial = {NodeGeometry{"S", 0.5, 0.5, 50.0}};
    CHECK_THROWS_WITH_AS(build_graph(env, sim, partial, 0.2), doctest::Contains("\"A\""),
                         Error);
}
