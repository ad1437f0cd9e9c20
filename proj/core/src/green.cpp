#include "oceansrc/green.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oceansrc/error.hpp"
#include "oceansrc/special_functions.hpp"

namespace oceansrc {

GreenFunction::GreenFunction(std::shared_ptr<const ModalBasis> basis) : basis_(std::move(basis)) {
  if (!basis_) throw DomainError("GreenFunction requires a modal basis");
  cutoff_ = std::log(1.0 / basis_->tol_modes);
  for (const Mode& m : basis_->modes) {
    if (m.propagating) {
      ++propagating_;
    } else {
      eta_.push_back(m.xi.imag());
    }
  }
}

std::size_t GreenFunction::active_modes(double r) const {
  if (r <= 0.0) return mode_count();
  const double limit = cutoff_ / r;
  const auto kept = std::upper_bound(eta_.begin(), eta_.end(), limit) - eta_.begin();
  return propagating_ + static_cast<std::size_t>(kept);
}

void GreenFunction::profiles(double x3, std::span<double> out) const {
  const int layer = detail::resolve_layer(basis_->config, x3, InterfaceSide::automatic);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = basis_->modes[n].profile.value(layer, x3);
}

void GreenFunction::profile_derivatives(double x3, std::span<double> out,
                                        InterfaceSide side) const {
  const int layer = detail::resolve_layer(basis_->config, x3, side);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = basis_->modes[n].profile.evaluate(layer, x3).slope;
  }
}

std::size_t GreenFunction::radial_factors(double r, std::span<cplx> out) const {
  const std::size_t count = std::min(active_modes(r), out.size());
  for (std::size_t n = 0; n < count; ++n) {
    const Mode& m = basis_->modes[n];
    out[n] = m.weight * hankel_h1_0(m.xi * r);
  }
  return count;
}

cplx GreenFunction::sum(double r, std::span<const double> a, std::span<const double> b) const {
  std::vector<cplx> radial(a.size());
  const std::size_t count = radial_factors(r, radial);
  cplx total = 0.0;
  for (std::size_t n = 0; n < count; ++n) total += radial[n] * (a[n] * b[n]);
  return total;
}

cplx GreenFunction::evaluate(double r, double x3, double xs3) const {
  if (r < basis_->r_min * (1.0 - 1e-12)) {
    throw DomainError("horizontal distance " + std::to_string(r) + " below r_min " +
                      std::to_string(basis_->r_min));
  }
  // Profiles are needed only for the modes that survive truncation at r.
  std::vector<double> a(active_modes(r)), b(a.size());
  profiles(x3, a);
  profiles(xs3, b);
  return sum(r, a, b);
}

cplx GreenFunction::operator()(const Point3& x, const Point3& xs) const {
  return evaluate(horizontal_distance(x, xs), x.z, xs.z);
}

cplx GreenFunction::mollified(const Point3& x, const Point3& xs, double r_eff) const {
  const double r = std::max(horizontal_distance(x, xs), r_eff);
  return evaluate(r, x.z, xs.z);
}

cplx GreenFunction::depth_derivative(double r, double x3, double xs3, InterfaceSide side) const {
  if (r < basis_->r_min * (1.0 - 1e-12)) {
    throw DomainError("horizontal distance below r_min");
  }
  std::vector<double> a(active_modes(r)), b(a.size());
  profile_derivatives(x3, a, side);
  profiles(xs3, b);
  return sum(r, a, b);
}

cplx green_series(const ModalBasis& basis, const Point3& x, const Point3& xs) {
  // Non-owning alias: the caller keeps the basis alive for the duration of the call.
  GreenFunction g(std::shared_ptr<const ModalBasis>(std::shared_ptr<const ModalBasis>(), &basis));
  return g(x, xs);
}

}  // namespace oceansrc
