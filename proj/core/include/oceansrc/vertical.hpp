#pragma once

#include <array>
#include <complex>

#include "oceansrc/waveguide.hpp"

namespace oceansrc {

using cplx = std::complex<double>;

// tau_i = sqrt((k_i n_i)^2 - xi^2) on the branch Im(tau_i) >= 0.
struct VerticalWavenumbers {
  std::array<cplx, 3> tau;

  const cplx& operator[](int layer) const { return tau[layer]; }
};

VerticalWavenumbers vertical_wavenumbers(const WaveguideConfig& cfg, cplx xi);

struct ProfileValue {
  cplx value;
  cplx derivative;  // d/dx3
};

// Which branch to use for a depth sitting exactly on an interface. `automatic`
// follows WaveguideConfig::layer_of (deeper layer wins).
enum class InterfaceSide { automatic, upper, lower };

// phi1: sin(tau1 x3) in layer 1 continued downward through the interface
// conditions; satisfies phi1(xi, 0) = 0.
ProfileValue phi1_eval(const WaveguideConfig& cfg, cplx xi, double x3,
                       InterfaceSide side = InterfaceSide::automatic);

// phi2: cos(tau3 (h - x3)) in layer 3 continued upward; d/dx3 phi2(h) = 0.
ProfileValue phi2_eval(const WaveguideConfig& cfg, cplx xi, double x3,
                       InterfaceSide side = InterfaceSide::automatic);

// W(phi1, phi2)(xi) = -A3(xi) tau1(xi), the layer-1 Wronskian.
cplx wronskian(const WaveguideConfig& cfg, cplx xi);

// A3(xi) = phi2(xi, 0): an even, branch-free function of xi whose zeros in
// (0, k1 n1) and on the positive imaginary axis are the modal wavenumbers.
cplx dispersion_function(const WaveguideConfig& cfg, cplx xi);

// phi1 phi2' - phi2 phi1' evaluated at depth x3 (constant within a layer, and
// scaled by rho_i / rho_{i+1} across each interface).
cplx wronskian_at_depth(const WaveguideConfig& cfg, cplx xi, double x3);

// Layer coefficients in the absolute-origin form
//   phi1 = A1 cos(tau2 x3) + B1 sin(tau2 x3) in layer 2, A2, B2 in layer 3,
//   phi2 = A3 cos(tau1 x3) + B3 sin(tau1 x3) in layer 1, A4, B4 in layer 2.
// Computed term by term from the closed forms; ill-conditioned once any
// |Im tau_i| d_i is large, so the evaluators above use local-origin kernels.
struct LayerCoefficients {
  cplx a1, b1, a2, b2;
  cplx a3, b3, a4, b4;
};

LayerCoefficients layer_coefficients(const WaveguideConfig& cfg, cplx xi);

// phi1 / phi2 evaluated straight from LayerCoefficients.
ProfileValue phi1_from_coefficients(const WaveguideConfig& cfg, cplx xi,
                                    const LayerCoefficients& c, double x3);
ProfileValue phi2_from_coefficients(const WaveguideConfig& cfg, cplx xi,
                                    const LayerCoefficients& c, double x3);

namespace detail {

// cos(tau len) and sin(tau len) / tau as functions of tau^2 (no branch).
cplx cos_even(cplx tau2, double len);
cplx sinc_even(cplx tau2, double len);

// (u, u') for u'' + tau^2 u = 0.
struct State {
  cplx value;
  cplx slope;
};

State propagate(const State& s, cplx tau2, double len);

// Integral of u(t)^2 over t in [0, len] where u starts at state s.
cplx square_integral(const State& s, cplx tau2, double len);

// phi1 states at the top of each layer (just below the interface) and phi2
// states at the bottom of each layer (just above the interface).
struct VerticalStates {
  std::array<cplx, 3> tau2;
  cplx tau1;
  std::array<State, 3> phi1_top;
  std::array<State, 3> phi2_bottom;
  cplx a3;
};

VerticalStates vertical_states(const WaveguideConfig& cfg, cplx xi);

int resolve_layer(const WaveguideConfig& cfg, double x3, InterfaceSide side);

}  // namespace detail
}  // namespace oceansrc
