// citescope: journal citation environment mapping and citing-pattern analysis.
//
// Subcommands:
//   env       build the cited/citing environment of a seed journal and emit
//             network files (Pajek/GraphML/DOT/SVG) and a C/N report
//   factors   varimax-rotated principal component analysis of citing patterns
//   validate  parse a matrix and report structural findings

#include <CLI11.hpp>
#include <iostream>
#include <sstream>
#include <string>

#include "citescope/error.hpp"
#include "citescope/pipeline.hpp"

namespace {

using citescope::RunConfig;

struct RawOptions {
    std::string matrix_format = "auto";
    std::string direction;
    std::string diagonal = "include-self-cites";
    std::string components;
    std::string formats;
    std::string meta;
};

void add_matrix_options(CLI::App* cmd, RunConfig& config, RawOptions& raw) {
    cmd->add_option("--matrix", config.matrix_path, "citation matrix file (CSV)")
        ->required();
    cmd->add_option("--matrix-format", raw.matrix_format,
                    "matrix file format: auto, dense, edge-list")
        ->check(CLI::IsMember({"auto", "dense", "edge-list"}))
        ->capture_default_str();
}

void add_pipeline_options(CLI::App* cmd, RunConfig& config, RawOptions& raw,
                          const std::string& default_direction) {
    cmd->add_option("--seed", config.seed, "seed journal label")->required();
    raw.direction = default_direction;
    cmd->add_option("--direction", raw.direction, "environment direction: cited or citing")
        ->check(CLI::IsMember({"cited", "citing"}))
        ->capture_default_str();
    cmd->add_option("--threshold", config.threshold_fraction,
                    "inclusion threshold as a fraction of the seed total")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--out", config.output_dir, "output directory")
        ->envname("CITESCOPE_OUT")
        ->capture_default_str();
}

void finish_config(RunConfig& config, const RawOptions& raw) {
    if (raw.matrix_format == "dense")
        config.matrix_format = citescope::MatrixFormat::dense_csv;
    else if (raw.matrix_format == "edge-list")
        config.matrix_format = citescope::MatrixFormat::edge_list_csv;

    config.direction = raw.direction == "cited" ? citescope::Direction::cited
                                                : citescope::Direction::citing;
    config.diagonal_policy = raw.diagonal == "zero-diagonal"
                                 ? citescope::DiagonalPolicy::zero_diagonal
                                 : citescope::DiagonalPolicy::include_self_cites;
    if (!raw.meta.empty()) config.metadata_path = raw.meta;

    if (!raw.components.empty() && raw.components != "kaiser") {
        try {
            std::size_t used = 0;
            const int k = std::stoi(raw.components, &used);
            if (used != raw.components.size() || k < 1) throw std::invalid_argument("");
            config.components = k;
        } catch (const std::exception&) {
            throw citescope::Error("--components must be a positive integer or \"kaiser\"");
        }
    }

    if (!raw.formats.empty()) {
        std::stringstream stream(raw.formats);
        std::string token;
        while (std::getline(stream, token, ',')) {
            if (token.empty()) continue;
            const auto format = citescope::parse_output_format(token);
            if (!format)
                throw citescope::Error("unknown output format \"" + token + "\"");
            config.formats.insert(*format);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"journal citation environment maps and citing-pattern factors"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "TOML-style configuration file with [env]/[factors] sections; "
                   "flags win on conflict");

    RunConfig env_config, factors_config, validate_config;
    RawOptions env_raw, factors_raw, validate_raw;

    CLI::App* env_cmd =
        app.add_subcommand("env", "build a citation environment and emit map files");
    add_matrix_options(env_cmd, env_config, env_raw);
    add_pipeline_options(env_cmd, env_config, env_raw, "cited");
    env_cmd->add_option("--meta", env_raw.meta,
                        "journal metadata CSV (label,total_cites,impact_factor)");
    env_cmd->add_option("--suppress", env_config.suppression_threshold,
                        "minimum cosine for an edge to be kept")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    env_cmd->add_option("--diagonal", env_raw.diagonal,
                        "similarity vectors: include-self-cites or zero-diagonal")
        ->check(CLI::IsMember({"include-self-cites", "zero-diagonal"}))
        ->capture_default_str();
    env_cmd->add_option("--cutoff", env_config.display_cutoff,
                        "smallest |loading| shown in report tables")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    env_cmd->add_option("--formats", env_raw.formats,
                        "comma-separated subset of pajek,graphml,dot,svg,report");

    CLI::App* factors_cmd =
        app.add_subcommand("factors", "varimax-rotated PCA of citing patterns");
    add_matrix_options(factors_cmd, factors_config, factors_raw);
    add_pipeline_options(factors_cmd, factors_config, factors_raw, "citing");
    factors_cmd->add_option("--components", factors_raw.components,
                            "component count, or \"kaiser\" to retain eigenvalues > 1")
        ->capture_default_str();
    factors_cmd->add_option("--cutoff", factors_config.display_cutoff,
                            "smallest |loading| shown in loading tables")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "report structural findings about a matrix");
    add_matrix_options(validate_cmd, validate_config, validate_raw);

    CLI11_PARSE(app, argc, argv);

    try {
        if (env_cmd->parsed()) {
            finish_config(env_config, env_raw);
            citescope::run_env(env_config, std::cout);
        } else if (factors_cmd->parsed()) {
            finish_config(factors_config, factors_raw);
            citescope::run_factors(factors_config, std::cout);
        } else {
            finish_config(validate_config, validate_raw);
            citescope::run_validate(validate_config, std::cout);
        }
    } catch (const citescope::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
