#pragma once

#include <array>

#include "oceansrc/geometry.hpp"

namespace oceansrc {

inline constexpr double kPi = 3.14159265358979323846;

// Three horizontally stratified layers between the free surface x3 = 0 and the
// rigid bottom x3 = h:
//   layer 0 = [0, d1), layer 1 = [d1, d2), layer 2 = [d2, h].
// An exact interface hit belongs to the deeper layer.
struct WaveguideConfig {
  double depth = 100.0;
  double interface1 = 100.0 / 3.0;
  double interface2 = 200.0 / 3.0;
  double frequency = 75.0;
  std::array<double, 3> density{1000.0, 1500.0, 3000.0};
  std::array<double, 3> speed{1000.0, 1500.0, 3000.0};
  std::array<double, 3> index{1.0, 0.5, 1.0 / 3.0};

  // Throws DomainError when the geometry or material invariants fail.
  void validate() const;

  int layer_of(double x3) const;
  double layer_top(int layer) const;
  double layer_bottom(int layer) const;

  double wavenumber(int layer) const;  // k_i = 2 pi f / c_i
  double q(int layer) const;           // k_i n_i
  double q_max() const;

  friend bool operator==(const WaveguideConfig&, const WaveguideConfig&) = default;
};

// Background coefficient q°(x3); throws DomainError outside [0, h].
double background_q(const WaveguideConfig& cfg, double x3);

// Penetrable inclusion with interior coefficient q4 = k4 n4 and density rho4.
struct InclusionSpec {
  Box box;
  double q4 = 0.0;
  double rho4 = 0.0;

  friend bool operator==(const InclusionSpec&, const InclusionSpec&) = default;
};

// Index of the layer whose open slab contains the box; throws DomainError when
// the box straddles an interface, or when rho4 differs from the host density.
int validate_inclusion(const WaveguideConfig& cfg, const InclusionSpec& inc);

// q~ = (q°)^2 - q^2: zero outside the closed box, (q_host)^2 - q4^2 inside.
double contrast_q_tilde(const WaveguideConfig& cfg, const InclusionSpec& inc,
                        const Point3& x);

// Piecewise-constant contrast field with the value cached.
struct Contrast {
  Box box;
  double value = 0.0;

  double at(const Point3& x) const { return box.contains(x) ? value : 0.0; }
};

Contrast make_contrast(const WaveguideConfig& cfg, const InclusionSpec& inc);

}  // namespace oceansrc
