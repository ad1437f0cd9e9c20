#pragma once

#include <memory>
#include <span>
#include <vector>

#include "oceansrc/geometry.hpp"
#include "oceansrc/modes.hpp"

namespace oceansrc {

// Normal-mode series for the layered-waveguide Green's function
//   G(x; xs) = sum_n w_n Phi_n(x3) Phi_n(xs3) H0(xi_n r),  w_n = -(i/2) xi_n / W_n.
// Evanescent terms with eta_n r > ln(1/tol_modes) are dropped at each distance.
class GreenFunction {
 public:
  explicit GreenFunction(std::shared_ptr<const ModalBasis> basis);

  const ModalBasis& basis() const { return *basis_; }
  std::size_t mode_count() const { return basis_->modes.size(); }

  // Number of leading modes kept at horizontal distance r.
  std::size_t active_modes(double r) const;

  // Phi_n(x3) for every mode; out.size() must equal mode_count().
  void profiles(double x3, std::span<double> out) const;
  void profile_derivatives(double x3, std::span<double> out,
                           InterfaceSide side = InterfaceSide::automatic) const;

  // w_n H0(xi_n r) for the active modes; returns how many were written.
  std::size_t radial_factors(double r, std::span<cplx> out) const;

  // Throws DomainError for r < r_min.
  cplx evaluate(double r, double x3, double xs3) const;
  cplx operator()(const Point3& x, const Point3& xs) const;

  // Same series with r replaced by max(r, r_eff); used for self-cell and
  // same-column interactions in the volume discretization.
  cplx mollified(const Point3& x, const Point3& xs, double r_eff) const;

  // d/dx3 of G at receiver depth x3.
  cplx depth_derivative(double r, double x3, double xs3,
                        InterfaceSide side = InterfaceSide::automatic) const;

 private:
  cplx sum(double r, std::span<const double> a, std::span<const double> b) const;

  std::shared_ptr<const ModalBasis> basis_;
  std::vector<double> eta_;  // eta_n of the evanescent modes, ascending
  std::size_t propagating_ = 0;
  double cutoff_ = 0.0;      // ln(1/tol_modes)
};

// One-shot evaluation.
cplx green_series(const ModalBasis& basis, const Point3& x, const Point3& xs);

}  // namespace oceansrc
