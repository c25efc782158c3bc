#ifndef CITESCOPE_PIPELINE_HPP
#define CITESCOPE_PIPELINE_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>

#include "citescope/export.hpp"
#include "citescope/ingest.hpp"
#include "citescope/simgraph.hpp"

namespace citescope {

enum class OutputFormat { pajek, graphml, dot, svg, report, loadings };

std::optional<OutputFormat> parse_output_format(std::string_view name);

/// One reproducible pipeline invocation. Defaults mirror the standard
/// parameters: 1% inclusion threshold, 0.2 cosine suppression, self-cites
/// kept, 0.1 display cutoff.
struct RunConfig {
    std::filesystem::path matrix_path;
    std::optional<MatrixFormat> matrix_format;  // empty = detect from header
    std::optional<std::filesystem::path> metadata_path;
    std::string seed;
    Direction direction = Direction::cited;
    double threshold_fraction = 0.01;
    double suppression_threshold = 0.2;
    DiagonalPolicy diagonal_policy = DiagonalPolicy::include_self_cites;
    std::optional<int> components;  // empty = Kaiser criterion
    double display_cutoff = 0.1;
    std::filesystem::path output_dir = ".";
    std::set<OutputFormat> formats;  // empty = per-command default
};

// Build the environment/map for config.direction and write the requested
// formats (default: pajek, graphml, dot, svg, report) under output_dir.
// Prints member count, grand total and the top-5 C/N values to `out`.
// Output files appear all-or-nothing: they are staged as temp files and
// renamed only after every writer succeeded.
void run_env(const RunConfig& config, std::ostream& out);

// Factor analysis of citing patterns (direction must be citing): writes
// loadings.csv and loadings.txt, prints the retained component count (with
// eigenvalues under the Kaiser criterion), variance explained and rotation
// iterations.
void run_factors(const RunConfig& config, std::ostream& out);

// Parse the matrix and print the validation report; never writes files.
void run_validate(const RunConfig& config, std::ostream& out);

}  // namespace citescope

#endif
