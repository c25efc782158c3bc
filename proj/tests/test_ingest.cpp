#include <doctest.h>

#include <sstream>

#include "citescope/error.hpp"
#include "citescope/export.hpp"
#include "citescope/ingest.hpp"
#include "test_support.hpp"

using namespace citescope;
using test_support::make_square;

namespace {

CitationMatrix parse_dense_text(const std::string& text) {
    std::istringstream in(text);
    return parse_matrix(in, MatrixFormat::dense_csv);
}

CitationMatrix parse_edges_text(const std::string& text) {
    std::istringstream in(text);
    return parse_matrix(in, MatrixFormat::edge_list_csv);
}

std::vector<JournalMeta> parse_meta_text(const std::string& text) {
    std::istringstream in(text);
    return parse_metadata(in);
}

std::string emit_dense(const CitationMatrix& m) {
    std::ostringstream out;
    write_matrix_csv(m, out);
    return out.str();
}

}  // namespace

TEST_CASE("canonical_label trims and collapses whitespace, keeps case") {
    CHECK(canonical_label("  J. Climate ") == "J. Climate");
    CHECK(canonical_label("J.\t Geophys.   Res.") == "J. Geophys. Res.");
    CHECK(canonical_label("science") == "science");  // no case folding
    CHECK(canonical_label(" \t ") == "");
}

TEST_CASE("dense 2x2 parse") {
    const auto m = parse_dense_text(",A,B\nA,5,1\nB,2,0\n");
    REQUIRE(m.citing_count() == 2);
    REQUIRE(m.cited_count() == 2);
    CHECK(m.count_between("A", "A") == 5);
    CHECK(m.count_between("A", "B") == 1);
    CHECK(m.count_between("B", "A") == 2);
    CHECK(m.count_between("B", "B") == 0);
}

TEST_CASE("edge list with a single pair gives a 1x1-per-axis matrix") {
    const auto m = parse_edges_text("citing,cited,count\nA,B,3\n");
    REQUIRE(m.citing_count() == 1);
    REQUIRE(m.cited_count() == 1);
    CHECK(m.citing_labels()[0] == "A");
    CHECK(m.cited_labels()[0] == "B");
    CHECK(m.at(0, 0) == 3);
}

TEST_CASE("dense parse errors carry a location") {
    CHECK_THROWS_WITH_AS(parse_dense_text(",A,B\nA,5,x\nB,2,0\n"),
                         doctest::Contains("row 2"), Error);
    CHECK_THROWS_WITH_AS(parse_dense_text(",A,B\nA,5,x\nB,2,0\n"),
                         doctest::Contains("malformed"), Error);
    CHECK_THROWS_WITH_AS(parse_dense_text(",A,B\nA,5,1.5\nB,2,0\n"),
                         doctest::Contains("non-integer"), Error);
    CHECK_THROWS_WITH_AS(parse_dense_text(",A,B\nA,5,-1\nB,2,0\n"),
                         doctest::Contains("negative"), Error);
}

TEST_CASE("dense missing cells are an error, not zero") {
    CHECK_THROWS_WITH_AS(parse_dense_text(",A,B\nA,5\nB,2,0\n"),
                         doctest::Contains("expected 2"), Error);
    CHECK_THROWS_WITH_AS(parse_dense_text(",A,B\nA,5,\nB,2,0\n"),
                         doctest::Contains("missing count"), Error);
}

TEST_CASE("duplicate labels are rejected by name") {
    CHECK_THROWS_WITH_AS(parse_dense_text(",A,A\nB,1,2\n"), doctest::Contains("\"A\""),
                         Error);
    CHECK_THROWS_WITH_AS(parse_dense_text(",A,B\nC,1,2\nC,3,4\n"),
                         doctest::Contains("\"C\""), Error);
    // labels that differ only by whitespace collide after canonicalization
    CHECK_THROWS_WITH_AS(parse_dense_text(",A,B\nC ,1,2\n C,3,4\n"),
                         doctest::Contains("duplicate"), Error);
}

TEST_CASE("edge list duplicates are an error, not summed") {
    CHECK_THROWS_WITH_AS(parse_edges_text("citing,cited,count\nA,B,3\nA,B,4\n"),
                         doctest::Contains("duplicate pair"), Error);
}

TEST_CASE("metadata parsing") {
    const auto records = parse_meta_text(
        "label,total_cites,impact_factor\n"
        "J. Geophys. Res.,144430,3.082\n"
        "X,,\n");
    REQUIRE(records.size() == 2);
    CHECK(records[0].label == "J. Geophys. Res.");
    REQUIRE(records[0].total_cites.has_value());
    CHECK(*records[0].total_cites == 144430);
    REQUIRE(records[0].impact_factor.has_value());
    CHECK(*records[0].impact_factor == doctest::Approx(3.082));
    CHECK_FALSE(records[1].total_cites.has_value());
    CHECK_FALSE(records[1].impact_factor.has_value());
}

TEST_CASE("metadata rejects negatives and missing labels") {
    CHECK_THROWS_WITH_AS(parse_meta_text("label,total_cites,impact_factor\nY,-1,0.5\n"),
                         doctest::Contains("negative"), Error);
    CHECK_THROWS_WITH_AS(parse_meta_text("label,total_cites,impact_factor\n,3,0.5\n"),
                         doctest::Contains("missing label"), Error);
    CHECK_THROWS_WITH_AS(parse_meta_text("label,total_cites,impact_factor\nY,3,-0.5\n"),
                         doctest::Contains("negative"), Error);
}

TEST_CASE("validation report") {
    SUBCASE("zero row is flagged as never citing") {
        const auto m = make_square({"A", "J"}, {{1, 2}, {0, 0}});
        const auto report = validate_matrix(m);
        REQUIRE(report.never_cites.size() == 1);
        CHECK(report.never_cites[0] == "J");
        CHECK(report.never_cited.empty());
    }
    SUBCASE("all-positive square matrix has no findings") {
        const auto m = make_square({"A", "B"}, {{1, 2}, {3, 4}});
        CHECK(validate_matrix(m).empty());
    }
    SUBCASE("axis mismatches are listed") {
        const CitationMatrix m({"A", "B"}, {"B", "C"}, {1, 2, 3, 4});
        const auto report = validate_matrix(m);
        REQUIRE(report.citing_only.size() == 1);
        CHECK(report.citing_only[0] == "A");
        REQUIRE(report.cited_only.size() == 1);
        CHECK(report.cited_only[0] == "C");
    }
}

TEST_CASE("table3 fixture parses to the full 17x17 matrix") {
    const auto m = parse_matrix(test_support::fixture_matrix(), MatrixFormat::dense_csv);
    REQUIRE(m.citing_count() == 17);
    REQUIRE(m.cited_count() == 17);
    // spot checks, including the joined readings of the split cells
    CHECK(m.count_between("Acta Meteorl. Sin.", "Acta Meteorl. Sin.") == 191);
    CHECK(m.count_between("Adv. Atmos. Sci.", "Adv. Atmos. Sci.") == 156);
    CHECK(m.count_between("Adv. Atmos. Sci.", "Q. J. Roy. Meteor. Soc.") == 104);
    CHECK(m.count_between("Atmos. Environ.", "Atmos. Environ.") == 5216);
    CHECK(m.count_between("Atmos. Environ.", "J. Appl. Meteorol. Clim.") == 193);
    CHECK(m.count_between("Geophys. Res. Lett.", "J. Geophys. Res.") == 4651);
    CHECK(m.count_between("Science", "Science") == 338);

    std::int64_t grand = 0;
    for (std::size_t i = 0; i < m.citing_count(); ++i) grand += m.citing_total(i);
    CHECK(grand == 47239);

    // both axes carry the same labels and no journal is entirely silent
    CHECK(validate_matrix(m).empty());
}

TEST_CASE("fixture format auto-detection reads it as dense") {
    CHECK(detect_matrix_format(test_support::fixture_matrix()) == MatrixFormat::dense_csv);
}

TEST_CASE("dense emit/parse is a bijection on well-formed input") {
    std::mt19937 rng(20240801);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = test_support::random_square(rng, 1 + trial % 7);
        const std::string text = emit_dense(m);
        const auto reparsed = parse_dense_text(text);
        CHECK(reparsed == m);
        CHECK(emit_dense(reparsed) == text);
    }
}

TEST_CASE("edge list densifies to the same cells as the dense form") {
    std::mt19937 rng(20240802);
    std::uniform_int_distribution<int> keep(0, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = test_support::random_square(rng, 2 + trial % 6);

        std::ostringstream edges;
        edges << "citing,cited,count\n";
        // list every label pair at least once so both axes match the dense form;
        // drop a random subset of zero cells to exercise densification
        for (std::size_t i = 0; i < m.citing_count(); ++i)
            for (std::size_t j = 0; j < m.cited_count(); ++j) {
                if (m.at(i, j) == 0 && keep(rng) == 0 && i != j) continue;
                edges << csv_escape(m.citing_labels()[i]) << ","
                      << csv_escape(m.cited_labels()[j]) << "," << m.at(i, j) << "\n";
            }
        const auto densified = parse_edges_text(edges.str());

        REQUIRE(densified.citing_count() == m.citing_count());
        REQUIRE(densified.cited_count() == m.cited_count());
        for (std::size_t i = 0; i < m.citing_count(); ++i)
            for (std::size_t j = 0; j < m.cited_count(); ++j)
                CHECK(densified.count_between(m.citing_labels()[i], m.cited_labels()[j]) ==
                      m.at(i, j));
    }
}

TEST_CASE("quoted labels with commas survive the round trip") {
    const CitationMatrix m({"Journal, Series A", "B"}, {"Journal, Series A", "B"},
                           {1, 2, 3, 4});
    const auto reparsed = parse_dense_text(emit_dense(m));
    CHECK(reparsed == m);
    CHECK(reparsed.count_between("Journal, Series A", "B") == 2);
}
