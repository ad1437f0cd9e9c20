#include "oceansrc/green_oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "oceansrc/error.hpp"
#include "oceansrc/special_functions.hpp"

namespace oceansrc {
namespace {

// (value, slope) times exp(log_scale).
struct ScaledState {
  cplx value;
  cplx slope;
  double log_scale = 0.0;
};

void renormalize(ScaledState& s, double tau_abs) {
  const double m = std::abs(s.value) + std::abs(s.slope) / tau_abs;
  if (m > 0.0 && std::isfinite(m)) {
    s.value /= m;
    s.slope /= m;
    s.log_scale += std::log(m);
  }
}

void step(ScaledState& s, cplx tau2, double len) {
  const cplx tau = std::sqrt(tau2);
  const double tau_abs = std::abs(tau) + 1e-12;
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(tau.imag()) * std::abs(len) / 8.0)));
  const double dl = len / pieces;
  for (int i = 0; i < pieces; ++i) {
    const auto next = detail::propagate({s.value, s.slope}, tau2, dl);
    s.value = next.value;
    s.slope = next.slope;
    renormalize(s, tau_abs);
  }
}

class Walker {
 public:
  Walker(const WaveguideConfig& cfg, cplx xi) : cfg_(cfg) {
    for (int i = 0; i < 3; ++i) tau2_[i] = cfg.q(i) * cfg.q(i) - xi * xi;
  }

  // Moves s from depth z0 (layer l0) to z1 (layer l1), applying the density
  // jump on every interface crossed.
  void walk(ScaledState& s, double z0, int l0, double z1, int l1) const {
    const auto& rho = cfg_.density;
    if (l1 >= l0 && z1 >= z0) {
      for (int l = l0; l <= l1; ++l) {
        const double end = l == l1 ? z1 : cfg_.layer_bottom(l);
        step(s, tau2_[l], end - z0);
        z0 = end;
        if (l < l1) s.value *= rho[l] / rho[l + 1];
      }
    } else {
      for (int l = l0; l >= l1; --l) {
        const double end = l == l1 ? z1 : cfg_.layer_top(l);
        step(s, tau2_[l], end - z0);
        z0 = end;
        if (l > l1) s.value *= rho[l] / rho[l - 1];
      }
    }
  }

 private:
  const WaveguideConfig& cfg_;
  std::array<cplx, 3> tau2_;
};

}  // namespace

cplx transformed_green(const WaveguideConfig& cfg, cplx xi, double x3, double xs3) {
  const double zl = std::min(x3, xs3);
  const double zg = std::max(x3, xs3);
  const int ll = detail::resolve_layer(cfg, zl, InterfaceSide::automatic);
  const int lg = detail::resolve_layer(cfg, zg, InterfaceSide::automatic);
  const Walker walker(cfg, xi);

  // Both solutions are rescaled freely; the ratio phi1 phi2 / W is invariant.
  ScaledState u{0.0, 1.0, 0.0};
  walker.walk(u, 0.0, 0, zl, ll);
  ScaledState v{1.0, 0.0, 0.0};
  walker.walk(v, cfg.depth, 2, zg, lg);
  const cplx v_at_g = v.value;
  const double log_g = v.log_scale;
  walker.walk(v, zg, lg, zl, ll);

  // Wronskian at zl in layer ll, converted to the layer-1 value.
  const cplx w_local = u.value * v.slope - v.value * u.slope;
  const cplx w1 = w_local * (cfg.density[ll] / cfg.density[0]);
  return -u.value * v_at_g * std::exp(log_g - v.log_scale) / w1;
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Panel {
  double a, b;
  cplx value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& f, double a, double b) {
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = Gauss::weights();
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  cplx kron = 0.0, gauss = 0.0;
  const cplx f0 = f(c);
  kron += wk[0] * f0;
  gauss += wg[0] * f0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const cplx fs = f(c - hw * x[i]) + f(c + hw * x[i]);
    kron += wk[i] * fs;
    if (i % 2 == 0) gauss += wg[i / 2] * fs;
  }
  kron *= hw;
  gauss *= hw;
  return {a, b, kron, std::abs(kron - gauss)};
}

template <class F>
cplx adaptive(const F& f, double a, double b, std::size_t initial, double rel_tol,
              std::size_t max_panels, double& error, std::size_t& panels) {
  std::priority_queue<Panel> queue;
  cplx total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < initial; ++i) {
    const double pa = a + (b - a) * i / initial;
    const double pb = a + (b - a) * (i + 1) / initial;
    Panel p = gk15(f, pa, pb);
    total += p.value;
    err += p.error;
    queue.push(p);
  }
  panels = initial;
  while (err > rel_tol * std::abs(total) && panels < max_panels) {
    const Panel p = queue.top();
    queue.pop();
    const double m = 0.5 * (p.a + p.b);
    const Panel left = gk15(f, p.a, m);
    const Panel right = gk15(f, m, p.b);
    total += left.value + right.value - p.value;
    err += left.error + right.error - p.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  total = 0.0;
  err = 0.0;
  while (!queue.empty()) {
    total += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  error = err;
  if (err > rel_tol * std::abs(total)) {
    throw ConvergenceError("Hankel oracle quadrature did not converge (error estimate " +
                           std::to_string(err / std::abs(total)) +
                           " relative); a pole may sit too close to the contour");
  }
  return total;
}

}  // namespace

OracleResult green_hankel_oracle_detail(const WaveguideConfig& cfg, const Point3& x,
                                        const Point3& xs, const OracleOptions& opt) {
  cfg.validate();
  const double r = horizontal_distance(x, xs);
  if (!(r > 0.0)) throw DomainError("Hankel oracle requires r > 0");
  const int lx = detail::resolve_layer(cfg, x.z, InterfaceSide::automatic);
  const int ls = detail::resolve_layer(cfg, xs.z, InterfaceSide::automatic);

  OracleResult out;
  const double q1 = cfg.q(0);
  const double eps = opt.contour_shift * q1;
  out.singular_part_subtracted = lx == ls;
  double decay;
  if (lx == ls) {
    const double top = cfg.layer_top(lx);
    const double bottom = cfg.layer_bottom(lx);
    decay = std::min(x.z + xs.z - 2.0 * top, 2.0 * bottom - x.z - xs.z);
  } else {
    decay = std::abs(x.z - xs.z);
  }
  if (!(decay >= opt.min_decay_distance * cfg.depth)) {
    throw DomainError("Hankel oracle: points too close to a layer boundary (decay distance " +
                      std::to_string(decay) + ")");
  }
  const double cutoff = std::max(opt.min_cutoff * q1, cfg.q_max() + opt.decay_lengths / decay);
  out.cutoff = cutoff;

  const double qj = cfg.q(lx);
  const double weight_j = cfg.density[0] / cfg.density[lx];
  const double dz = std::abs(x.z - xs.z);
  const cplx i(0.0, 1.0);
  auto integrand = [&](cplx xi) -> cplx {
    cplx g = transformed_green(cfg, xi, x.z, xs.z);
    if (out.singular_part_subtracted) {
      cplx tau = std::sqrt(qj * qj - xi * xi);
      if (tau.imag() < 0.0) tau = -tau;
      g -= weight_j * i * std::exp(i * tau * dz) / (2.0 * tau);
    }
    return bessel_j0(xi * r) * g * xi / (2.0 * kPi);
  };

  const std::size_t initial = static_cast<std::size_t>(std::max(
      200.0, 2.0 * cutoff * (r + cfg.depth) / kPi));
  double err_main = 0.0;
  std::size_t panels = 0;
  const cplx main = adaptive([&](double t) { return integrand(cplx(t, -eps)); }, 0.0, cutoff,
                             initial, opt.relative_tolerance, opt.max_panels, err_main, panels);
  // Vertical legs: 0 -> -i eps and cutoff - i eps -> cutoff.
  const Panel leg0 = gk15([&](double s) { return integrand(cplx(0.0, -s)) * (-i); }, 0.0, eps);
  const Panel leg1 =
      gk15([&](double s) { return integrand(cplx(cutoff, -eps + s)) * i; }, 0.0, eps);

  out.value = main + leg0.value + leg1.value;
  out.error_estimate = err_main + leg0.error + leg1.error;
  out.panels = panels + 2;
  if (out.singular_part_subtracted) {
    const double big_r = distance(x, xs);
    out.value += weight_j * std::exp(i * qj * big_r) / (4.0 * kPi * big_r);
  }
  return out;
}

cplx green_hankel_oracle(const WaveguideConfig& cfg, const Point3& x, const Point3& xs,
                         const OracleOptions& opt) {
  return green_hankel_oracle_detail(cfg, x, xs, opt).value;
}

}  // namespace oceansrc
