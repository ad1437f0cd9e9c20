#pragma once

#include <cstddef>

#include "oceansrc/geometry.hpp"
#include "oceansrc/vertical.hpp"
#include "oceansrc/waveguide.hpp"

namespace oceansrc {

// Depth-transformed Green's function -phi1(xi, min) phi2(xi, max) / W(xi),
// evaluated with renormalized propagation so it stays finite for large |xi|.
cplx transformed_green(const WaveguideConfig& cfg, cplx xi, double x3, double xs3);

struct OracleOptions {
  double contour_shift = 1e-4;   // epsilon_c in units of k1 n1
  double min_cutoff = 40.0;      // integrate at least to this multiple of k1 n1
  double decay_lengths = 40.0;   // cutoff also >= q_max + decay_lengths / (decay distance)
  double relative_tolerance = 1e-7;
  std::size_t max_panels = 400000;
  double min_decay_distance = 1e-3;  // in units of h; closer image/depth pairs are rejected
};

struct OracleResult {
  cplx value;
  double error_estimate = 0.0;
  std::size_t panels = 0;
  double cutoff = 0.0;
  bool singular_part_subtracted = false;
};

// (1/2pi) int_0^inf J0(xi r) Ghat(xi, x3, xs3) xi dxi on a contour just below
// the real axis. Same-layer pairs have the free-space part subtracted and
// restored in closed form. Throws ConvergenceError if the quadrature stalls.
OracleResult green_hankel_oracle_detail(const WaveguideConfig& cfg, const Point3& x,
                                        const Point3& xs, const OracleOptions& opt = {});

cplx green_hankel_oracle(const WaveguideConfig& cfg, const Point3& x, const Point3& xs,
                         const OracleOptions& opt = {});

}  // namespace oceansrc
