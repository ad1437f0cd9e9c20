#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "oceansrc/vertical.hpp"
#include "oceansrc/waveguide.hpp"

namespace oceansrc {

// Real-valued (value, slope) pair of a mode profile.
struct RealState {
  double value = 0.0;
  double slope = 0.0;
};

// Normalized mode profile Phi_n, stored as one anchored state per layer.
// Layers above the first evanescent layer are anchored at their top and follow
// phi1; deeper layers are anchored at their bottom and follow phi2 / c_n, so
// every evaluation propagates towards the growing solution.
struct ModeProfile {
  std::array<double, 3> tau2{};
  std::array<double, 3> anchor{};
  std::array<RealState, 3> state{};

  double value(int layer, double x3) const;
  RealState evaluate(int layer, double x3) const;
};

struct Mode {
  cplx xi;                   // real (propagating) or i*eta (evanescent)
  bool propagating = true;
  LayerCoefficients coefficients;  // A1, B1, A2, B2 and A3, B3, A4, B4
  double norm = 0.0;         // ||phi1(xi_n, .)||_{L2(0, h)}
  double c_n = 0.0;          // phi2(xi_n, .) = c_n phi1(xi_n, .)
  cplx dw_dxi;               // dW/dxi at xi_n (central difference)
  cplx w_n;                  // dW/dxi / (c_n ||phi1||^2)
  cplx weight;               // -(i/2) xi_n / W_n, the series coefficient
  double root_error = 0.0;   // |W(xi_n)| / |dW/dxi|
  double probe_depth = 0.0;  // depth used for c_n
  int phi1_layers = 3;       // layers [0, phi1_layers) follow phi1 directly
  ModeProfile profile;

  // |xi_n| on its axis.
  double axis_value() const { return propagating ? xi.real() : xi.imag(); }
};

struct ModeDataOptions {
  // dW/dxi uses a five-point stencil with step factor * min(k1 n1, min_j |tau_j|^2 / |xi|),
  // the distance over which W varies near a branch point.
  double derivative_step_factor = 1e-4;
  int probes_per_layer = 256;
};

// Builds the per-mode data at a dispersion root xi_n (real or purely imaginary).
Mode mode_data(const WaveguideConfig& cfg, cplx xi_n, const ModeDataOptions& opt = {});

struct FindModesOptions {
  std::size_t min_brackets = 4000;
  double brackets_per_root = 8.0;
  double bisection_tolerance = 1e-12;
  ModeDataOptions mode;
};

struct ModalBasis {
  WaveguideConfig config;
  std::uint64_t config_hash = 0;
  double r_min = 0.0;
  double tol_modes = 0.0;
  double eta_max = 0.0;  // evanescent cutoff ln(1/tol_modes) / r_min
  std::size_t real_brackets = 0;
  std::size_t imaginary_brackets = 0;
  std::vector<Mode> modes;  // real roots by descending xi, then imaginary by ascending eta
  std::vector<std::string> warnings;

  std::size_t propagating_count() const;
  double profile(std::size_t n, double x3) const;
  RealState profile_with_derivative(std::size_t n, double x3,
                                    InterfaceSide side = InterfaceSide::automatic) const;
};

std::uint64_t config_hash(const WaveguideConfig& cfg);

ModalBasis find_modes(const WaveguideConfig& cfg, double r_min, double tol_modes,
                      const FindModesOptions& opt = {});

// CSV: n,re_xi,im_xi,re_Wn,im_Wn,norm,c_n,kind
void write_mode_table_csv(const ModalBasis& basis, std::ostream& out);

// CSV: depth followed by Phi_1 .. Phi_count sampled at the given depths.
void write_mode_profiles_csv(const ModalBasis& basis, std::span<const double> depths,
                             std::size_t count, std::ostream& out);

}  // namespace oceansrc
