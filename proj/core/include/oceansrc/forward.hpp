#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "oceansrc/geometry.hpp"
#include "oceansrc/green.hpp"
#include "oceansrc/waveguide.hpp"

namespace oceansrc {

// Uniform cubic cells tiling the inclusion box; index c = (iz * ny + iy) * nx + ix.
struct VolumeMesh {
  Box box;
  double cell = 0.0;
  int nx = 0, ny = 0, nz = 0;
  int layer = 0;
  std::vector<Point3> centers;
  std::vector<double> contrast;  // q~ per cell

  std::size_t size() const { return centers.size(); }
  int ix(std::size_t c) const { return static_cast<int>(c % nx); }
  int iy(std::size_t c) const { return static_cast<int>((c / nx) % ny); }
  int iz(std::size_t c) const { return static_cast<int>(c / (static_cast<std::size_t>(nx) * ny)); }
};

// Throws DomainError when the box sides are not whole multiples of the cell size.
VolumeMesh make_volume_mesh(const WaveguideConfig& cfg, const InclusionSpec& inc, double cell);

struct KernelOptions {
  std::size_t max_bytes = std::size_t{2} << 30;  // cap on tables and dense copies
};

// Midpoint-rule discretization of the volume operator
//   K[c, c'] = G(center_c'; center_c) q~(c') cell^3,
// stored as one Green value per (horizontal offset class, depth pair). Pairs in
// the same vertical column use the effective radius cell / 2.
class InteractionKernel {
 public:
  InteractionKernel(std::shared_ptr<const GreenFunction> green, VolumeMesh mesh,
                    const KernelOptions& opt = {});

  const VolumeMesh& mesh() const { return mesh_; }
  const GreenFunction& green() const { return *green_; }
  std::shared_ptr<const GreenFunction> green_ptr() const { return green_; }
  std::size_t size() const { return mesh_.size(); }
  double effective_radius() const { return 0.5 * mesh_.cell; }

  // Green value between cells c and c' (no contrast factor).
  cplx green_entry(std::size_t c, std::size_t cp) const;
  cplx entry(std::size_t c, std::size_t cp) const;

  // out = K * p.
  void apply(std::span<const cplx> p, std::span<cplx> out) const;

  // Row-major dense copy; SizeError beyond the memory cap.
  std::vector<cplx> dense() const;

  std::size_t offset_classes() const { return offset_slot_count_; }

  // Phi_n at each depth row of the mesh: [iz][n].
  std::span<const double> depth_profiles(int iz) const;

 private:
  std::size_t slot(std::size_t c, std::size_t cp) const;

  std::shared_ptr<const GreenFunction> green_;
  VolumeMesh mesh_;
  std::size_t max_bytes_;
  std::vector<int> offset_slot_;    // (dx^2 + dy^2) -> slot
  std::size_t offset_slot_count_ = 0;
  std::vector<cplx> table_;         // [slot][iz][iz']
  std::vector<double> profiles_;    // [iz][n]
  std::vector<int> ix_, iy_, iz_;
};

InteractionKernel assemble_kernel(std::shared_ptr<const GreenFunction> green,
                                  const VolumeMesh& mesh, const KernelOptions& opt = {});

// G(center_c; xs) for every cell; same-column points use max(r, cell / 2).
std::vector<cplx> incident_field(const InteractionKernel& kernel, const Point3& source);

struct FieldGrid {
  std::vector<cplx> values;
  std::vector<double> changes;  // relative L2 change after each update
  int iterations = 0;
  double final_change = 0.0;
  bool converged = false;
};

struct IterationOptions {
  double eps = 1e-3;
  int max_iter = 200;
  int divergence_window = 3;
};

// p <- incident - K p starting from p = incident. Throws ConvergenceError when
// the change grows on `divergence_window` consecutive updates.
FieldGrid born_iterate(const InteractionKernel& kernel, std::span<const cplx> incident,
                       const IterationOptions& opt = {});
FieldGrid born_iterate(const InteractionKernel& kernel, const Point3& source,
                       const IterationOptions& opt = {});

struct ReceiverSet {
  std::vector<Point3> positions;
};

// Receivers must lie in [0, h] and outside the inclusion box.
void validate_receivers(const WaveguideConfig& cfg, const Box& box, const ReceiverSet& rs);

// Weights w[m][c] = -G(center_c; x_m) q~(c) cell^3 so p^s_m = sum_c w[m][c] p_c.
class ScatterSynthesizer {
 public:
  ScatterSynthesizer(std::shared_ptr<const InteractionKernel> kernel, ReceiverSet receivers,
                     IterationOptions iteration = {});

  const InteractionKernel& kernel() const { return *kernel_; }
  const ReceiverSet& receivers() const { return receivers_; }
  const IterationOptions& iteration() const { return iteration_; }

  std::vector<cplx> scattered(const FieldGrid& field) const;
  std::vector<cplx> scattered(std::span<const cplx> field) const;

  // Forward solve for a point source followed by receiver synthesis.
  std::vector<cplx> synthesize(const Point3& source, FieldGrid* field = nullptr) const;

 private:
  std::shared_ptr<const InteractionKernel> kernel_;
  ReceiverSet receivers_;
  IterationOptions iteration_;
  std::vector<cplx> weights_;  // [m][c]
};

// Convenience one-shot form of ScatterSynthesizer::scattered.
std::vector<cplx> scattered_field(const InteractionKernel& kernel, const FieldGrid& field,
                                  const ReceiverSet& receivers);

}  // namespace oceansrc
