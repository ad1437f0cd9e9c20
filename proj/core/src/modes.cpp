#include "oceansrc/modes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <ostream>
#include <string>

#include "oceansrc/error.hpp"
#include "oceansrc/numeric_io.hpp"
#include "oceansrc/parallel.hpp"

namespace oceansrc {
namespace {

// Real versions of the even kernels; tau2 < 0 switches to cosh / sinh.
double cos_even_real(double tau2, double len) {
  if (tau2 >= 0.0) return std::cos(std::sqrt(tau2) * len);
  return std::cosh(std::sqrt(-tau2) * len);
}

double sinc_even_real(double tau2, double len) {
  const double y2 = tau2 * len * len;
  if (std::abs(y2) < 1e-4) return len * (1.0 - y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0)));
  if (tau2 > 0.0) {
    const double t = std::sqrt(tau2);
    return std::sin(t * len) / t;
  }
  const double g = std::sqrt(-tau2);
  return std::sinh(g * len) / g;
}

RealState to_real(const detail::State& s) { return {s.value.real(), s.slope.real()}; }

bool on_imaginary_axis(cplx xi) { return xi.real() == 0.0 && xi.imag() > 0.0; }

cplx axis_point(bool imaginary, double t) { return imaginary ? cplx(0.0, t) : cplx(t, 0.0); }

// Root of f on [a, b] (f(a) f(b) < 0) by bisection followed by a guarded
// secant-slope Newton polish.
double bracketed_root(const std::function<double(double)>& f, double a, double b, double fa,
                      double rel_tol) {
  for (int it = 0; it < 200 && (b - a) > rel_tol * std::max(std::abs(a), std::abs(b)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  double x = 0.5 * (a + b);
  double fx = f(x);
  const double step = std::max(b - a, 1e-14 * std::abs(x));
  for (int it = 0; it < 3 && fx != 0.0; ++it) {
    const double slope = (f(x + step) - f(x - step)) / (2.0 * step);
    if (slope == 0.0 || !std::isfinite(slope)) break;
    const double xn = x - fx / slope;
    const double fn = f(xn);
    if (!(std::abs(fn) < std::abs(fx)) || std::abs(xn - x) > 4.0 * step) break;
    x = xn;
    fx = fn;
  }
  return x;
}

}  // namespace

RealState ModeProfile::evaluate(int layer, double x3) const {
  const double len = x3 - anchor[layer];
  const double t2 = tau2[layer];
  const double c = cos_even_real(t2, len);
  const double s = sinc_even_real(t2, len);
  const RealState& u = state[layer];
  return {u.value * c + u.slope * s, -t2 * u.value * s + u.slope * c};
}

double ModeProfile::value(int layer, double x3) const {
  const double len = x3 - anchor[layer];
  const RealState& u = state[layer];
  return u.value * cos_even_real(tau2[layer], len) + u.slope * sinc_even_real(tau2[layer], len);
}

Mode mode_data(const WaveguideConfig& cfg, cplx xi_n, const ModeDataOptions& opt) {
  cfg.validate();
  const bool imaginary = on_imaginary_axis(xi_n);
  if (!imaginary && !(xi_n.imag() == 0.0 && xi_n.real() > 0.0)) {
    throw DomainError("mode_data supports roots on the positive real or imaginary axis only");
  }
  Mode m;
  m.xi = xi_n;
  m.propagating = !imaginary;
  m.coefficients = layer_coefficients(cfg, xi_n);

  const auto st = detail::vertical_states(cfg, xi_n);
  int first_evanescent = 3;
  for (int j = 0; j < 3; ++j) {
    if (st.tau2[j].real() < 0.0) {
      first_evanescent = j;
      break;
    }
  }
  if (first_evanescent == 0) throw DomainError("mode is evanescent in the top layer");
  m.phi1_layers = first_evanescent;

  // c_n from the depth where |phi1| is largest inside the phi1-stable layers.
  double best = -1.0;
  double phi1_best = 0.0, phi2_best = 0.0;
  const int probes = std::max(opt.probes_per_layer, 4);
  for (int j = 0; j < first_evanescent; ++j) {
    const double top = cfg.layer_top(j);
    const double len = cfg.layer_bottom(j) - top;
    for (int k = 0; k < probes; ++k) {
      const double x3 = top + (k + 0.5) / probes * len;
      const double v1 = detail::propagate(st.phi1_top[j], st.tau2[j], x3 - top).value.real();
      if (std::abs(v1) > best) {
        best = std::abs(v1);
        phi1_best = v1;
        phi2_best = detail::propagate(st.phi2_bottom[j], st.tau2[j], x3 - cfg.layer_bottom(j))
                        .value.real();
        m.probe_depth = x3;
      }
    }
  }
  if (!(best > 0.0)) throw DomainError("phi1 vanishes identically at the requested root");
  m.c_n = phi2_best / phi1_best;
  if (!(std::abs(m.c_n) > 0.0) || !std::isfinite(m.c_n)) {
    throw DomainError("phi2 is not proportional to phi1: not a dispersion root");
  }

  // ||phi1||^2 from closed-form layer integrals of the stable representation.
  double norm2 = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double len = cfg.layer_bottom(j) - cfg.layer_top(j);
    if (j < first_evanescent) {
      norm2 += detail::square_integral(st.phi1_top[j], st.tau2[j], len).real();
    } else {
      norm2 -= detail::square_integral(st.phi2_bottom[j], st.tau2[j], -len).real() /
               (m.c_n * m.c_n);
    }
  }
  if (!(norm2 > 0.0)) throw DomainError("non-positive mode norm");
  m.norm = std::sqrt(norm2);

  for (int j = 0; j < 3; ++j) {
    m.profile.tau2[j] = st.tau2[j].real();
    if (j < first_evanescent) {
      m.profile.anchor[j] = cfg.layer_top(j);
      const RealState s = to_real(st.phi1_top[j]);
      m.profile.state[j] = {s.value / m.norm, s.slope / m.norm};
    } else {
      m.profile.anchor[j] = cfg.layer_bottom(j);
      const RealState s = to_real(st.phi2_bottom[j]);
      const double scale = m.c_n * m.norm;
      m.profile.state[j] = {s.value / scale, s.slope / scale};
    }
  }

  const double axis = imaginary ? xi_n.imag() : xi_n.real();
  double scale = cfg.q(0);
  for (int j = 0; j < 3; ++j) scale = std::min(scale, std::abs(st.tau2[j]) / axis);
  const double delta = opt.derivative_step_factor * std::max(scale, 1e-6 * cfg.q(0));
  auto w_at = [&](double t) { return wronskian(cfg, axis_point(imaginary, t)); };
  const cplx wp = w_at(axis + delta), wm = w_at(axis - delta);
  if (std::abs(wp - wm) < 1e-3 * (std::abs(wp) + std::abs(wm))) {
    throw DomainError("W has a multiple root or no root near xi = " + std::to_string(axis));
  }
  m.dw_dxi = (8.0 * (wp - wm) - (w_at(axis + 2 * delta) - w_at(axis - 2 * delta))) / (12.0 * delta);
  if (imaginary) m.dw_dxi /= cplx(0.0, 1.0);
  m.w_n = m.dw_dxi / (m.c_n * norm2);
  m.weight = cplx(0.0, -0.5) * xi_n / m.w_n;
  m.root_error = std::abs(wronskian(cfg, xi_n)) / std::abs(m.dw_dxi);
  if (m.root_error > 1e-6 * axis) {
    throw DomainError("xi = " + std::to_string(axis) + " is not a dispersion root");
  }
  return m;
}

std::size_t ModalBasis::propagating_count() const {
  return static_cast<std::size_t>(
      std::count_if(modes.begin(), modes.end(), [](const Mode& m) { return m.propagating; }));
}

double ModalBasis::profile(std::size_t n, double x3) const {
  const int layer = detail::resolve_layer(config, x3, InterfaceSide::automatic);
  return modes[n].profile.value(layer, x3);
}

RealState ModalBasis::profile_with_derivative(std::size_t n, double x3, InterfaceSide side) const {
  const int layer = detail::resolve_layer(config, x3, side);
  return modes[n].profile.evaluate(layer, x3);
}

std::uint64_t config_hash(const WaveguideConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(cfg.depth);
  mix(cfg.interface1);
  mix(cfg.interface2);
  mix(cfg.frequency);
  for (int i = 0; i < 3; ++i) {
    mix(cfg.density[i]);
    mix(cfg.speed[i]);
    mix(cfg.index[i]);
  }
  return h;
}

ModalBasis find_modes(const WaveguideConfig& cfg, double r_min, double tol_modes,
                      const FindModesOptions& opt) {
  cfg.validate();
  if (!(r_min > 0.0)) throw DomainError("r_min must be positive");
  if (!(tol_modes > 0.0 && tol_modes <= 1.0)) throw DomainError("tol_modes must lie in (0, 1]");

  ModalBasis basis;
  basis.config = cfg;
  basis.config_hash = config_hash(cfg);
  basis.r_min = r_min;
  basis.tol_modes = tol_modes;
  basis.eta_max = std::log(1.0 / tol_modes) / r_min;

  const double q1 = cfg.q(0);
  const double h = cfg.depth;
  auto bracket_count = [&](double range) {
    const double per_root = opt.brackets_per_root * range * h / kPi;
    return std::max<std::size_t>(opt.min_brackets, static_cast<std::size_t>(std::ceil(per_root)));
  };

  struct Found {
    double t;
    double width;
  };
  auto scan = [&](bool imaginary, double upper, std::size_t n) {
    std::vector<double> values(n + 1);
    auto f = [&](double t) { return dispersion_function(cfg, axis_point(imaginary, t)).real(); };
    parallel_for(n + 1, [&](std::size_t k) { values[k] = f(upper * k / n); }, 256);
    std::vector<Found> roots;
    const double width = upper / n;
    for (std::size_t k = 0; k < n; ++k) {
      const double a = upper * k / n;
      const double b = upper * (k + 1) / n;
      if (k > 0 && values[k] == 0.0) {
        roots.push_back({a, width});
        continue;
      }
      if ((values[k] < 0.0 && values[k + 1] > 0.0) || (values[k] > 0.0 && values[k + 1] < 0.0)) {
        roots.push_back({bracketed_root(f, a, b, values[k], opt.bisection_tolerance), width});
      }
    }
    // The scan endpoints (xi = 0 and xi = k1 n1) are not modes.
    std::erase_if(roots, [&](const Found& r) { return r.t <= 0.0 || (!imaginary && r.t >= upper); });
    return roots;
  };

  basis.real_brackets = bracket_count(q1);
  auto real_roots = scan(false, q1, basis.real_brackets);
  std::reverse(real_roots.begin(), real_roots.end());

  std::vector<Found> imag_roots;
  if (basis.eta_max > 0.0) {
    basis.imaginary_brackets = bracket_count(basis.eta_max + cfg.q_max());
    imag_roots = scan(true, basis.eta_max, basis.imaginary_brackets);
  }

  auto check_separation = [&](const std::vector<Found>& roots, const char* axis) {
    for (std::size_t i = 1; i < roots.size(); ++i) {
      if (std::abs(roots[i].t - roots[i - 1].t) < 2.0 * roots[i].width) {
        basis.warnings.push_back(std::string("scan resolution marginal on the ") + axis +
                                 " axis near " + std::to_string(roots[i].t) +
                                 ": roots closer than two brackets; a pair may be missed");
      }
    }
  };
  check_separation(real_roots, "real");
  check_separation(imag_roots, "imaginary");

  std::vector<cplx> xis;
  for (const auto& r : real_roots) xis.emplace_back(r.t, 0.0);
  for (const auto& r : imag_roots) xis.emplace_back(0.0, r.t);
  basis.modes.resize(xis.size());
  parallel_for(xis.size(), [&](std::size_t i) { basis.modes[i] = mode_data(cfg, xis[i], opt.mode); }, 16);
  return basis;
}

void write_mode_table_csv(const ModalBasis& basis, std::ostream& out) {
  out << "n,re_xi,im_xi,re_Wn,im_Wn,norm,c_n,kind\n";
  for (std::size_t n = 0; n < basis.modes.size(); ++n) {
    const Mode& m = basis.modes[n];
    out << n + 1 << ',';
    write_double(out, m.xi.real());
    out << ',';
    write_double(out, m.xi.imag());
    out << ',';
    write_double(out, m.w_n.real());
    out << ',';
    write_double(out, m.w_n.imag());
    out << ',';
    write_double(out, m.norm);
    out << ',';
    write_double(out, m.c_n);
    out << ',' << (m.propagating ? "propagating" : "evanescent") << '\n';
  }
}

void write_mode_profiles_csv(const ModalBasis& basis, std::span<const double> depths,
                             std::size_t count, std::ostream& out) {
  count = std::min(count, basis.modes.size());
  out << "depth";
  for (std::size_t n = 0; n < count; ++n) out << ",phi_" << n + 1;
  out << '\n';
  for (double z : depths) {
    write_double(out, z);
    for (std::size_t n = 0; n < count; ++n) {
      out << ',';
      write_double(out, basis.profile(n, z));
    }
    out << '\n';
  }
}

}  // namespace oceansrc
