#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oceansrc/error.hpp"
#include "oceansrc/modes.hpp"
#include "oracles.hpp"

using namespace oceansrc;

namespace {

WaveguideConfig homogeneous() {
  WaveguideConfig c;
  c.speed = {1500, 1500, 1500};
  c.index = {1, 1, 1};
  c.density = {1000, 1000, 1000};
  return c;
}

// Independent real-arithmetic dispersion function for real xi: phi2 started at
// the bottom and carried up with explicit cos/cosh branches.
double reference_a3(const WaveguideConfig& cfg, double xi) {
  const double len[3] = {cfg.interface1, cfg.interface2 - cfg.interface1, cfg.depth - cfg.interface2};
  double u = 1.0, du = 0.0;
  for (int l = 2; l >= 0; --l) {
    const double t2 = cfg.q(l) * cfg.q(l) - xi * xi;
    const double L = -len[l];
    double c, s;  // cos(tau L), sin(tau L) / tau
    if (t2 > 0) {
      const double t = std::sqrt(t2);
      c = std::cos(t * L);
      s = std::sin(t * L) / t;
    } else if (t2 < 0) {
      const double g = std::sqrt(-t2);
      c = std::cosh(g * L);
      s = std::sinh(g * L) / g;
    } else {
      c = 1.0;
      s = L;
    }
    const double nu = u * c + du * s;
    const double ndu = -t2 * u * s + du * c;
    u = nu;
    du = ndu;
    if (l > 0) u *= cfg.density[l] / cfg.density[l - 1];
  }
  return u;
}

const ModalBasis& paper_basis() {
  static const ModalBasis b = find_modes(WaveguideConfig{}, 1.0 / 6.0, 1e-6);
  return b;
}

}  // namespace

TEST(FindModes, HomogeneousSpectrumMatchesAnalytic) {
  const WaveguideConfig cfg = homogeneous();
  const ModalBasis b = find_modes(cfg, 0.5, 1e-4);
  const double k = cfg.q(0), h = cfg.depth;
  std::vector<double> expected;
  for (int n = 1;; ++n) {
    const double mu = (n - 0.5) * kPi / h;
    if (mu >= k) break;
    expected.push_back(std::sqrt(k * k - mu * mu));
  }
  ASSERT_EQ(b.propagating_count(), expected.size());
  for (std::size_t n = 0; n < expected.size(); ++n) {
    EXPECT_NEAR(b.modes[n].xi.real(), expected[n], 1e-9);
    // ||phi1||^2 = h / 2 and W_n = -2 xi_n.
    EXPECT_NEAR(b.modes[n].norm * b.modes[n].norm, h / 2, 1e-8 * h);
    EXPECT_LT(std::abs(b.modes[n].w_n + 2.0 * b.modes[n].xi), 1e-6 * std::abs(b.modes[n].xi));
  }
  // Evanescent roots: eta_n = sqrt(mu^2 - k^2).
  std::size_t j = expected.size();
  for (int n = 1; j < b.modes.size(); ++n) {
    const double mu = (n - 0.5) * kPi / h;
    if (mu <= k) continue;
    EXPECT_NEAR(b.modes[j].xi.imag(), std::sqrt(mu * mu - k * k), 1e-9);
    ++j;
  }
}

TEST(FindModes, PaperConfigRealRootCountMatchesIndependentScan) {
  const WaveguideConfig cfg;
  const auto roots = oracle::scan_roots([&](double xi) { return reference_a3(cfg, xi); },
                                        1e-9, cfg.q(0) * (1 - 1e-12), 200000);
  const ModalBasis& b = paper_basis();
  ASSERT_EQ(b.propagating_count(), roots.size());
  EXPECT_EQ(roots.size(), 7u);
  for (std::size_t n = 0; n < roots.size(); ++n) {
    EXPECT_NEAR(b.modes[n].xi.real(), roots[roots.size() - 1 - n], 1e-10);
  }
  EXPECT_GE(b.modes.size(), 20u);
}

TEST(FindModes, OrderingSeparationAndResiduals) {
  const ModalBasis& b = paper_basis();
  for (std::size_t n = 0; n + 1 < b.modes.size(); ++n) {
    const Mode& a = b.modes[n];
    const Mode& c = b.modes[n + 1];
    if (a.propagating && c.propagating) {
      EXPECT_GT(a.xi.real(), c.xi.real());
    }
    if (!a.propagating) {
      EXPECT_FALSE(c.propagating);
      EXPECT_LT(a.xi.imag(), c.xi.imag());
    }
    EXPECT_GT(std::abs(a.xi - c.xi), 10 * 1e-12 * std::abs(a.xi));
  }
  for (const Mode& m : b.modes) EXPECT_LT(m.root_error, 1e-11 * std::abs(m.xi) + 1e-14);
  EXPECT_TRUE(b.warnings.empty());
  EXPECT_LE(b.modes.back().xi.imag(), b.eta_max);
  EXPECT_NEAR(b.eta_max, std::log(1e6) * 6.0, 1e-12);
}

TEST(FindModes, ToleranceOneHasNoEvanescentModes) {
  const ModalBasis b = find_modes(WaveguideConfig{}, 0.5, 1.0);
  EXPECT_EQ(b.modes.size(), b.propagating_count());
  EXPECT_EQ(b.eta_max, 0.0);
}

TEST(FindModes, RejectsBadArguments) {
  EXPECT_THROW(find_modes(WaveguideConfig{}, 0.0, 1e-6), DomainError);
  EXPECT_THROW(find_modes(WaveguideConfig{}, 1.0, 0.0), DomainError);
  EXPECT_THROW(find_modes(WaveguideConfig{}, 1.0, 2.0), DomainError);
}

TEST(ModeData, ProfilesAreNormalized) {
  const ModalBasis& b = paper_basis();
  const WaveguideConfig& cfg = b.config;
  // Simpson per layer resolves the propagating and the first evanescent modes.
  for (std::size_t n = 0; n < 12; ++n) {
    double total = 0.0;
    for (int l = 0; l < 3; ++l) {
      total += oracle::simpson(
          [&](double z) {
            const double v = b.modes[n].profile.value(l, z);
            return v * v;
          },
          cfg.layer_top(l), cfg.layer_bottom(l), 4096);
    }
    EXPECT_NEAR(total, 1.0, 1e-8) << "mode " << n;
  }
}

TEST(ModeData, Phi2IsCnTimesPhi1) {
  const ModalBasis& b = paper_basis();
  const WaveguideConfig& cfg = b.config;
  for (std::size_t n = 0; n < 12; ++n) {
    const Mode& m = b.modes[n];
    // Ten probe depths inside the layers where phi1 is evaluated directly.
    const double bottom = cfg.layer_bottom(m.phi1_layers - 1);
    double max2 = 0.0, worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const double z = (k + 0.5) / 10.0 * bottom;
      const cplx p1 = phi1_eval(cfg, m.xi, z).value;
      const cplx p2 = phi2_eval(cfg, m.xi, z).value;
      max2 = std::max(max2, std::abs(p2));
      worst = std::max(worst, std::abs(p2 - m.c_n * p1));
    }
    EXPECT_LE(worst, 1e-8 * max2) << "mode " << n;
  }
}

TEST(ModeData, CnIndependentOfProbeDepth) {
  const ModalBasis& b = paper_basis();
  const WaveguideConfig& cfg = b.config;
  for (std::size_t n = 0; n < 10; ++n) {
    const Mode& m = b.modes[n];
    const double z2 = 0.37 * cfg.layer_bottom(m.phi1_layers - 1);
    const cplx ratio = phi2_eval(cfg, m.xi, z2).value / phi1_eval(cfg, m.xi, z2).value;
    EXPECT_LT(std::abs(ratio.real() / m.c_n - 1.0), 1e-8) << "mode " << n;
  }
}

TEST(ModeData, ProfileSatisfiesBoundaryAndInterfaceConditions) {
  const ModalBasis& b = paper_basis();
  const WaveguideConfig& cfg = b.config;
  const double q1 = cfg.q(0);
  for (std::size_t n = 0; n < b.modes.size(); n += 37) {
    EXPECT_LT(std::abs(b.profile(n, 0.0)), 1e-9);
    const double tau3 = std::sqrt(std::abs(b.modes[n].profile.tau2[2]));
    EXPECT_LT(std::abs(b.profile_with_derivative(n, cfg.depth).slope), 1e-10 * (q1 + tau3));
    for (double d : {cfg.interface1, cfg.interface2}) {
      const int lower = cfg.layer_of(d);
      const auto up = b.profile_with_derivative(n, d, InterfaceSide::upper);
      const auto lo = b.profile_with_derivative(n, d, InterfaceSide::lower);
      const double scale = std::abs(lo.value) + std::abs(lo.slope) / q1;
      EXPECT_LT(std::abs(cfg.density[lower - 1] * up.value / cfg.density[lower] - lo.value),
                1e-8 * scale) << "mode " << n;
      EXPECT_LT(std::abs(up.slope - lo.slope), 1e-8 * q1 * scale) << "mode " << n;
    }
  }
}

TEST(ModeData, RejectsNonRoots) {
  const WaveguideConfig cfg;
  EXPECT_THROW(mode_data(cfg, cplx(0.3, 0.2)), DomainError);
  EXPECT_THROW(mode_data(cfg, cplx(0.3, 0.0)), DomainError);
}

TEST(ModeTable, CsvHasOneRowPerMode) {
  const ModalBasis& b = paper_basis();
  std::ostringstream out;
  write_mode_table_csv(b, out);
  const std::string s = out.str();
  EXPECT_EQ(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')), b.modes.size() + 1);
  EXPECT_EQ(s.rfind("n,re_xi,im_xi,re_Wn,im_Wn,norm,c_n,kind\n", 0), 0u);
}
