#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "oceansrc/forward.hpp"
#include "oceansrc/geometry.hpp"
#include "oceansrc/scatter_record.hpp"

namespace oceansrc {

// Synthesizes receiver data for a trial source position.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;
  virtual std::vector<cplx> synthesize(const Point3& source) const = 0;
};

// Adapter over the fixed-point solver and receiver weights.
class WaveguideForwardModel : public ForwardModel {
 public:
  explicit WaveguideForwardModel(std::shared_ptr<const ScatterSynthesizer> synth)
      : synth_(std::move(synth)) {}
  std::vector<cplx> synthesize(const Point3& source) const override {
    return synth_->synthesize(source);
  }

 private:
  std::shared_ptr<const ScatterSynthesizer> synth_;
};

// Raw indicator 1 / (sum_m |synth_m - data_m|^2 + 1e-30 sum_m |data_m|^2).
double indicator_raw(std::span<const cplx> synthesized, std::span<const cplx> data);
double indicator_raw(const Point3& x, const ScatterRecord& data, const ForwardModel& model);

// Divides by the maximum; the maximum entry becomes exactly 1.
std::vector<double> indicator_normalize(std::span<const double> raw);

struct SamplingRegion {
  Box box;
  double s0 = 4.0;     // initial cell size
  double cutoff = 0.95;
  int levels = 3;      // number of evaluated levels
  std::size_t budget = 20000;

  // Throws DomainError if the box sides are not whole multiples of s0, the
  // cut-off is outside (0, 1] or levels < 1.
  void validate() const;
};

// Vertex coordinates in units of the finest spacing s0 / 2^(levels-1),
// relative to box.lo.
using VertexKey = std::array<std::int64_t, 3>;

struct LevelVertex {
  VertexKey key;
  Point3 position;
  double raw = 0.0;
  double normalized = 0.0;
};

struct LevelSet {
  int level = 0;
  std::int64_t spacing = 0;              // cell side in key units
  std::vector<VertexKey> cells;          // lower corners of active cells
  std::vector<LevelVertex> vertices;     // sorted by key
  std::size_t evaluations = 0;           // fresh forward solves at this level
};

struct LocateResult {
  std::vector<LevelSet> levels;
  std::vector<LevelVertex> output;       // retained vertices of the last level
  std::size_t total_evaluations = 0;
  bool budget_exceeded = false;
  double final_cell_size = 0.0;
  double wall_seconds = 0.0;             // informational only; never written to files
};

struct LocateContext {
  SamplingRegion region;
  double finest_spacing() const;
  Point3 position(const VertexKey& k) const;
};

// Vertices with normalized value >= c are retained; every active cell that has
// a retained vertex survives and is bisected into 8 children. Returns the
// child cells (deduplicated, sorted).
std::vector<VertexKey> select_and_refine(const LevelSet& level, double cutoff);

// Vertices of a set of cells (deduplicated, sorted).
std::vector<VertexKey> cell_vertices(std::span<const VertexKey> cells, std::int64_t spacing);

std::vector<LevelVertex> retained_vertices(const LevelSet& level, double cutoff);

LocateResult multilevel_locate(const SamplingRegion& region, const ScatterRecord& data,
                               const ForwardModel& model);

// Full-sweep vertex count of the region at the finest spacing.
std::size_t full_grid_vertex_count(const SamplingRegion& region);

// Structured text: per-level vertex lists with indicator values and counters.
void write_locate_text(const LocateResult& res, const SamplingRegion& region, std::ostream& out);
// CSV of level,x,y,z,I (normalized) for every evaluated vertex, plus level "final".
void write_locate_csv(const LocateResult& res, std::ostream& out);

// True when p lies in the convex hull of `points` grown by the cube [-pad, pad]^3,
// i.e. p is a convex combination of the points' padded cube corners.
bool inside_padded_hull(const Point3& p, std::span<const Point3> points, double pad);

}  // namespace oceansrc
