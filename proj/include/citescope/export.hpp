#ifndef CITESCOPE_EXPORT_HPP
#define CITESCOPE_EXPORT_HPP

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "citescope/factors.hpp"
#include "citescope/matrix.hpp"
#include "citescope/simgraph.hpp"

namespace citescope {

// All writers are deterministic: identical inputs produce identical bytes.
// Edge weights are serialized at 6 decimals, shares at 9.

void write_pajek(const SimilarityGraph& g, std::ostream& out);
void write_pajek(const SimilarityGraph& g, const std::filesystem::path& path);
SimilarityGraph read_pajek(std::istream& in);
SimilarityGraph read_pajek(const std::filesystem::path& path);

void write_graphml(const SimilarityGraph& g, std::ostream& out);
void write_graphml(const SimilarityGraph& g, const std::filesystem::path& path);
SimilarityGraph read_graphml(std::istream& in);
SimilarityGraph read_graphml(const std::filesystem::path& path);

void write_dot(const SimilarityGraph& g, std::ostream& out);
void write_dot(const SimilarityGraph& g, const std::filesystem::path& path);

enum class LabelPolicy { always, degree_at_least_one, none };

/// Rendering parameters for the SVG map. Ellipse radii are shares scaled by
/// ellipse_scale (vertical = share_total, horizontal = share_excl_self, the
/// map's y/x axis convention); edge stroke width is cosine * edge_width_scale.
struct MapStyle {
    double canvas_width = 1000.0;
    double canvas_height = 1000.0;
    double ellipse_scale = 250.0;
    double edge_width_scale = 6.0;
    LabelPolicy label_policy = LabelPolicy::always;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using PositionMap = std::map<std::string, Point>;

// Circular layout: nodes in member order, clockwise from 12 o'clock.
void write_svg_map(const SimilarityGraph& g, const MapStyle& style, std::ostream& out);
void write_svg_map(const SimilarityGraph& g, const MapStyle& style,
                   const std::filesystem::path& path);
// Precomputed layout: every node must have a position.
void write_svg_map(const SimilarityGraph& g, const MapStyle& style,
                   const PositionMap& positions, std::ostream& out);
void write_svg_map(const SimilarityGraph& g, const MapStyle& style,
                   const PositionMap& positions, const std::filesystem::path& path);

// CSV table journal,impact_factor,total_cites,cn_percent sorted by descending
// cn_percent (ties by label), a trailing correlation comment when at least
// two rows carry total_cites, and an optional rotated-loadings section.
void write_report(const Environment& env, std::span<const NodeGeometry> geometry,
                  std::span<const JournalMeta> meta, const FactorModel* factors,
                  std::ostream& out, double display_cutoff = 0.1);
void write_report(const Environment& env, std::span<const NodeGeometry> geometry,
                  std::span<const JournalMeta> meta, const FactorModel* factors,
                  const std::filesystem::path& path, double display_cutoff = 0.1);

void write_loadings_csv(const FactorModel& model, double display_cutoff, std::ostream& out);
void write_loadings_csv(const FactorModel& model, double display_cutoff,
                        const std::filesystem::path& path);

// Dense-csv re-emission of a citation matrix (the parse/emit bijection).
void write_matrix_csv(const CitationMatrix& m, std::ostream& out);
void write_matrix_csv(const CitationMatrix& m, const std::filesystem::path& path);

// Writes through a sibling temp file and renames on success, so failed runs
// leave no partial file behind.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace citescope

#endif
