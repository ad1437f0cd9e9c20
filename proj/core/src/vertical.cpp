#include "oceansrc/vertical.hpp"

#include <cmath>
#include <string>

#include "oceansrc/error.hpp"

namespace oceansrc {
namespace detail {

cplx cos_even(cplx tau2, double len) { return std::cos(std::sqrt(tau2) * len); }

cplx sinc_even(cplx tau2, double len) {
  const cplx y2 = tau2 * (len * len);
  if (std::abs(y2) < 1e-4) {
    return len * (1.0 - y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0)));
  }
  const cplx tau = std::sqrt(tau2);
  return std::sin(tau * len) / tau;
}

State propagate(const State& s, cplx tau2, double len) {
  const cplx c = cos_even(tau2, len);
  const cplx sn = sinc_even(tau2, len);
  return {s.value * c + s.slope * sn, -tau2 * s.value * sn + s.slope * c};
}

cplx square_integral(const State& s, cplx tau2, double len) {
  // int C^2 = len/2 + S(2 len)/4, int C S = S(len)^2 / 2,
  // int S^2 = (len - S(2 len)/2) / (2 tau^2).
  const cplx s1 = sinc_even(tau2, len);
  const cplx s2 = sinc_even(tau2, 2.0 * len);
  const cplx cc = 0.5 * len + 0.25 * s2;
  const cplx cs = 0.5 * s1 * s1;
  cplx ss;
  const cplx y2 = tau2 * (len * len);
  if (std::abs(y2) < 1e-2) {
    const double l3 = len * len * len;
    ss = l3 * (1.0 / 3.0 - y2 / 15.0 + 2.0 * y2 * y2 / 315.0 - y2 * y2 * y2 / 2835.0);
  } else {
    ss = (len - 0.5 * s2) / (2.0 * tau2);
  }
  return s.value * s.value * cc + 2.0 * s.value * s.slope * cs + s.slope * s.slope * ss;
}

VerticalStates vertical_states(const WaveguideConfig& cfg, cplx xi) {
  VerticalStates st;
  const VerticalWavenumbers tw = vertical_wavenumbers(cfg, xi);
  for (int i = 0; i < 3; ++i) {
    const double qi = cfg.q(i);
    st.tau2[i] = qi * qi - xi * xi;
  }
  st.tau1 = tw[0];
  const auto& rho = cfg.density;
  const double d1 = cfg.interface1;
  const double d2 = cfg.interface2;
  const double h = cfg.depth;

  // phi1 = sin(tau1 x3): value 0, slope tau1 at the surface.
  st.phi1_top[0] = {0.0, st.tau1};
  State s = propagate(st.phi1_top[0], st.tau2[0], d1);
  st.phi1_top[1] = {s.value * (rho[0] / rho[1]), s.slope};
  s = propagate(st.phi1_top[1], st.tau2[1], d2 - d1);
  st.phi1_top[2] = {s.value * (rho[1] / rho[2]), s.slope};

  // phi2 = cos(tau3 (h - x3)): value 1, slope 0 at the bottom.
  st.phi2_bottom[2] = {1.0, 0.0};
  s = propagate(st.phi2_bottom[2], st.tau2[2], -(h - d2));
  st.phi2_bottom[1] = {s.value * (rho[2] / rho[1]), s.slope};
  s = propagate(st.phi2_bottom[1], st.tau2[1], -(d2 - d1));
  st.phi2_bottom[0] = {s.value * (rho[1] / rho[0]), s.slope};
  st.a3 = propagate(st.phi2_bottom[0], st.tau2[0], -d1).value;
  return st;
}

int resolve_layer(const WaveguideConfig& cfg, double x3, InterfaceSide side) {
  if (!(x3 >= 0.0 && x3 <= cfg.depth)) {
    throw DomainError("depth " + std::to_string(x3) + " outside [0, h]");
  }
  int layer = cfg.layer_of(x3);
  if (side == InterfaceSide::upper && layer > 0 && x3 == cfg.layer_top(layer)) --layer;
  return layer;
}

}  // namespace detail

VerticalWavenumbers vertical_wavenumbers(const WaveguideConfig& cfg, cplx xi) {
  VerticalWavenumbers out;
  for (int i = 0; i < 3; ++i) {
    const double qi = cfg.q(i);
    cplx t = std::sqrt(cplx(qi * qi) - xi * xi);
    if (t.imag() < 0.0 || (t.imag() == 0.0 && t.real() < 0.0)) t = -t;
    out.tau[i] = t;
  }
  return out;
}

ProfileValue phi1_eval(const WaveguideConfig& cfg, cplx xi, double x3, InterfaceSide side) {
  const int layer = detail::resolve_layer(cfg, x3, side);
  const auto st = detail::vertical_states(cfg, xi);
  const auto s = detail::propagate(st.phi1_top[layer], st.tau2[layer], x3 - cfg.layer_top(layer));
  return {s.value, s.slope};
}

ProfileValue phi2_eval(const WaveguideConfig& cfg, cplx xi, double x3, InterfaceSide side) {
  const int layer = detail::resolve_layer(cfg, x3, side);
  const auto st = detail::vertical_states(cfg, xi);
  const auto s =
      detail::propagate(st.phi2_bottom[layer], st.tau2[layer], x3 - cfg.layer_bottom(layer));
  return {s.value, s.slope};
}

cplx dispersion_function(const WaveguideConfig& cfg, cplx xi) {
  return detail::vertical_states(cfg, xi).a3;
}

cplx wronskian(const WaveguideConfig& cfg, cplx xi) {
  const auto st = detail::vertical_states(cfg, xi);
  return -st.a3 * st.tau1;
}

cplx wronskian_at_depth(const WaveguideConfig& cfg, cplx xi, double x3) {
  const auto p1 = phi1_eval(cfg, xi, x3);
  const auto p2 = phi2_eval(cfg, xi, x3);
  return p1.value * p2.derivative - p2.value * p1.derivative;
}

LayerCoefficients layer_coefficients(const WaveguideConfig& cfg, cplx xi) {
  const auto tw = vertical_wavenumbers(cfg, xi);
  const cplx t1 = tw[0], t2 = tw[1], t3 = tw[2];
  const double r1 = cfg.density[0], r2 = cfg.density[1], r3 = cfg.density[2];
  const double d1 = cfg.interface1, d2 = cfg.interface2, h = cfg.depth;
  using std::cos;
  using std::sin;

  LayerCoefficients c;
  c.a1 = (r1 / r2) * sin(t1 * d1) * cos(t2 * d1) - (t1 / t2) * sin(t2 * d1) * cos(t1 * d1);
  c.b1 = (r1 / r2) * sin(t1 * d1) * sin(t2 * d1) + (t1 / t2) * cos(t1 * d1) * cos(t2 * d1);
  const cplx u2 = c.a1 * cos(t2 * d2) + c.b1 * sin(t2 * d2);
  const cplx v2 = c.a1 * sin(t2 * d2) - c.b1 * cos(t2 * d2);
  c.a2 = (r2 / r3) * u2 * cos(t3 * d2) + (t2 / t3) * v2 * sin(t3 * d2);
  c.b2 = (r2 / r3) * u2 * sin(t3 * d2) - (t2 / t3) * v2 * cos(t3 * d2);

  c.a4 = (r3 / r2) * cos(t2 * d2) * cos(t3 * (h - d2)) -
         (t3 / t2) * sin(t2 * d2) * sin(t3 * (h - d2));
  c.b4 = (r3 / r2) * sin(t2 * d2) * cos(t3 * (h - d2)) +
         (t3 / t2) * cos(t2 * d2) * sin(t3 * (h - d2));
  const cplx u1 = c.a4 * cos(t2 * d1) + c.b4 * sin(t2 * d1);
  const cplx v1 = c.a4 * sin(t2 * d1) - c.b4 * cos(t2 * d1);
  c.a3 = (r2 / r1) * u1 * cos(t1 * d1) + (t2 / t1) * v1 * sin(t1 * d1);
  c.b3 = (r2 / r1) * u1 * sin(t1 * d1) - (t2 / t1) * v1 * cos(t1 * d1);
  return c;
}

namespace {

ProfileValue trig_pair(cplx a, cplx b, cplx tau, double x3) {
  const cplx c = std::cos(tau * x3), s = std::sin(tau * x3);
  return {a * c + b * s, tau * (-a * s + b * c)};
}

}  // namespace

ProfileValue phi1_from_coefficients(const WaveguideConfig& cfg, cplx xi,
                                    const LayerCoefficients& c, double x3) {
  const auto tw = vertical_wavenumbers(cfg, xi);
  switch (detail::resolve_layer(cfg, x3, InterfaceSide::automatic)) {
    case 0: return trig_pair(0.0, 1.0, tw[0], x3);
    case 1: return trig_pair(c.a1, c.b1, tw[1], x3);
    default: return trig_pair(c.a2, c.b2, tw[2], x3);
  }
}

ProfileValue phi2_from_coefficients(const WaveguideConfig& cfg, cplx xi,
                                    const LayerCoefficients& c, double x3) {
  const auto tw = vertical_wavenumbers(cfg, xi);
  switch (detail::resolve_layer(cfg, x3, InterfaceSide::automatic)) {
    case 0: return trig_pair(c.a3, c.b3, tw[0], x3);
    case 1: return trig_pair(c.a4, c.b4, tw[1], x3);
    default: {
      const cplx arg = tw[2] * (cfg.depth - x3);
      return {std::cos(arg), tw[2] * std::sin(arg)};
    }
  }
}

}  // namespace oceansrc
