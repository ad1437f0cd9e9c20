#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numeric>

#include "oceansrc/error.hpp"
#include "oceansrc/forward.hpp"

using namespace oceansrc;

namespace {

const WaveguideConfig kCfg;

std::shared_ptr<const GreenFunction> green_for(double r_min) {
  return std::make_shared<const GreenFunction>(
      std::make_shared<const ModalBasis>(find_modes(kCfg, r_min, 1e-6)));
}

const std::shared_ptr<const GreenFunction>& desk_green() {
  static const auto g = green_for(1.0 / 6.0);
  return g;
}

InclusionSpec inclusion(double factor = 1.1) {
  InclusionSpec inc;
  inc.box = {{32, 32, 42}, {34, 34, 44}};
  inc.q4 = factor * kCfg.q(1);
  inc.rho4 = kCfg.density[1];
  return inc;
}

std::shared_ptr<const InteractionKernel> kernel_for(const InclusionSpec& inc, double cell,
                                                    std::shared_ptr<const GreenFunction> g) {
  return std::make_shared<const InteractionKernel>(g, make_volume_mesh(kCfg, inc, cell));
}

double l2(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double rel_diff(std::span<const cplx> a, std::span<const cplx> b) {
  std::vector<cplx> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return l2(d) / l2(b);
}

const Point3 kSource{18, 18, 25};
const ReceiverSet kReceivers{{{60, 60, 30}, {60, 65, 30}, {60, 70, 30}, {60, 75, 30}, {60, 80, 30}}};

}  // namespace

TEST(VolumeMesh, TilesTheInclusion) {
  const VolumeMesh m = make_volume_mesh(kCfg, inclusion(), 1.0 / 3.0);
  EXPECT_EQ(m.nx, 6);
  EXPECT_EQ(m.ny, 6);
  EXPECT_EQ(m.nz, 6);
  ASSERT_EQ(m.size(), 216u);
  EXPECT_EQ(m.layer, 1);
  const double expected = std::pow(kCfg.q(1), 2) * (1.0 - 1.21);
  Point3 mean{};
  for (std::size_t c = 0; c < m.size(); ++c) {
    EXPECT_TRUE(m.box.contains(m.centers[c]));
    EXPECT_NEAR(m.contrast[c], expected, 1e-14 * std::abs(expected));
    EXPECT_EQ((static_cast<std::size_t>(m.iz(c)) * m.ny + m.iy(c)) * m.nx + m.ix(c), c);
    mean.x += m.centers[c].x / m.size();
    mean.y += m.centers[c].y / m.size();
    mean.z += m.centers[c].z / m.size();
  }
  EXPECT_NEAR(mean.x, 33, 1e-12);
  EXPECT_NEAR(mean.y, 33, 1e-12);
  EXPECT_NEAR(mean.z, 43, 1e-12);
  EXPECT_NEAR(m.size() * std::pow(m.cell, 3), 8.0, 1e-12);
}

TEST(VolumeMesh, RejectsNonDividingCell) {
  EXPECT_THROW(make_volume_mesh(kCfg, inclusion(), 0.3), DomainError);
  EXPECT_THROW(make_volume_mesh(kCfg, inclusion(), 0.0), DomainError);
  InclusionSpec straddle = inclusion();
  straddle.box.lo.z = 30;
  EXPECT_THROW(make_volume_mesh(kCfg, straddle, 1.0), DomainError);
}

TEST(InteractionKernel, EntriesMatchDirectSeries) {
  const auto k = kernel_for(inclusion(), 1.0 / 3.0, desk_green());
  const VolumeMesh& m = k->mesh();
  const double w = m.contrast[0] * std::pow(m.cell, 3);
  const std::pair<std::size_t, std::size_t> pairs[] = {{0, 215}, {7, 100}, {50, 51}, {3, 3}, {1, 37}, {200, 20}};
  for (const auto& [c, cp] : pairs) {
    const Point3 &a = m.centers[c], &b = m.centers[cp];
    const bool same_column = a.x == b.x && a.y == b.y;
    const cplx g = same_column ? desk_green()->mollified(a, b, 0.5 * m.cell)
                               : green_series(desk_green()->basis(), a, b);
    EXPECT_LT(std::abs(k->green_entry(c, cp) - g), 1e-12 * std::abs(g)) << c << "," << cp;
    EXPECT_LT(std::abs(k->entry(c, cp) - g * w), 1e-12 * std::abs(g * w));
    EXPECT_EQ(k->green_entry(c, cp), k->green_entry(cp, c));
  }
  const auto dense = k->dense();
  std::vector<cplx> p(k->size()), out(k->size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = cplx(std::sin(0.1 * i), std::cos(0.3 * i));
  k->apply(p, out);
  for (std::size_t i = 0; i < p.size(); i += 17) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) s += dense[i * p.size() + j] * p[j];
    EXPECT_LT(std::abs(s - out[i]), 1e-12 * std::abs(s));
  }
}

TEST(InteractionKernel, ZeroContrastLeavesIncidentField) {
  const auto k = kernel_for(inclusion(1.0), 1.0 / 3.0, desk_green());
  for (std::size_t c = 0; c < k->size(); c += 13) EXPECT_EQ(k->entry(c, (c * 7) % k->size()), cplx(0.0));
  const auto inc = incident_field(*k, kSource);
  const FieldGrid f = born_iterate(*k, inc);
  EXPECT_TRUE(f.converged);
  EXPECT_EQ(f.iterations, 1);
  EXPECT_EQ(f.values, inc);
  const ScatterSynthesizer synth(k, kReceivers);
  for (const cplx& v : synth.scattered(f)) EXPECT_EQ(v, cplx(0.0));
}

TEST(BornIterate, ConvergesToFixedPointWithShrinkingChanges) {
  const auto k = kernel_for(inclusion(), 1.0 / 3.0, desk_green());
  const auto inc = incident_field(*k, kSource);
  const IterationOptions opt{1e-3, 200, 3};
  const FieldGrid f = born_iterate(*k, inc, opt);
  ASSERT_TRUE(f.converged);
  EXPECT_LE(f.iterations, 50);
  EXPECT_LT(f.final_change, opt.eps);
  for (std::size_t i = 1; i < f.changes.size(); ++i) EXPECT_LT(f.changes[i], f.changes[i - 1]);
  std::vector<cplx> kp(k->size());
  k->apply(f.values, kp);
  std::vector<cplx> next(k->size());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = inc[i] - kp[i];
  EXPECT_LE(rel_diff(f.values, next), 2 * opt.eps);
}

TEST(BornIterate, SuperpositionOnTheSameKernel) {
  const auto k = kernel_for(inclusion(), 1.0 / 3.0, desk_green());
  const IterationOptions tight{1e-13, 200, 3};
  const auto inc_a = incident_field(*k, kSource);
  const auto inc_b = incident_field(*k, Point3{70, 20, 55});
  std::vector<cplx> diff(inc_a.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = inc_a[i] - inc_b[i];
  const FieldGrid fa = born_iterate(*k, inc_a, tight);
  const FieldGrid fb = born_iterate(*k, inc_b, tight);
  const FieldGrid fd = born_iterate(*k, diff, tight);
  std::vector<cplx> got(diff.size());
  for (std::size_t i = 0; i < got.size(); ++i) got[i] = fa.values[i] - fb.values[i];
  EXPECT_LT(rel_diff(got, fd.values), 1e-10);
}

TEST(BornIterate, SingleUpdateIsFirstBornTerm) {
  const auto k = kernel_for(inclusion(), 1.0 / 3.0, desk_green());
  const auto inc = incident_field(*k, kSource);
  const FieldGrid f = born_iterate(*k, inc, IterationOptions{1e-3, 1, 3});
  EXPECT_EQ(f.iterations, 1);
  EXPECT_FALSE(f.converged);
  const auto dense = k->dense();
  for (std::size_t i = 0; i < inc.size(); i += 11) {
    cplx s = inc[i];
    for (std::size_t j = 0; j < inc.size(); ++j) s -= dense[i * inc.size() + j] * inc[j];
    EXPECT_LT(std::abs(s - f.values[i]), 1e-12 * std::abs(s));
  }
}

TEST(BornIterate, DivergentContrastThrows) {
  const auto k = kernel_for(inclusion(40.0), 1.0 / 3.0, desk_green());
  EXPECT_THROW(born_iterate(*k, kSource), ConvergenceError);
}

TEST(InteractionKernel, MemoryCapRaisesSizeError) {
  EXPECT_THROW(InteractionKernel(desk_green(), make_volume_mesh(kCfg, inclusion(), 1.0 / 3.0),
                                 KernelOptions{1000}),
               SizeError);
  EXPECT_THROW(InteractionKernel(green_for(1.0), make_volume_mesh(kCfg, inclusion(), 1.0 / 3.0)),
               DomainError);
}

TEST(Receivers, MustLieOutsideInclusionAndInsideGuide) {
  const Box box = inclusion().box;
  EXPECT_NO_THROW(validate_receivers(kCfg, box, kReceivers));
  EXPECT_THROW(validate_receivers(kCfg, box, ReceiverSet{{{33, 33, 43}}}), DomainError);
  EXPECT_THROW(validate_receivers(kCfg, box, ReceiverSet{{{60, 60, 101}}}), DomainError);
  const auto k = kernel_for(inclusion(), 1.0 / 3.0, desk_green());
  EXPECT_THROW(ScatterSynthesizer(k, ReceiverSet{{{33, 33, 43}}}), DomainError);
}

TEST(ScatterSynthesizer, BornLimitMatchesBilinearForm) {
  const auto k = kernel_for(inclusion(), 1.0 / 3.0, desk_green());
  const ScatterSynthesizer synth(k, kReceivers);
  const auto inc = incident_field(*k, kSource);
  const auto born = synth.scattered(inc);
  const VolumeMesh& m = k->mesh();
  const ModalBasis& b = desk_green()->basis();
  for (std::size_t r = 0; r < kReceivers.positions.size(); ++r) {
    cplx s = 0.0;
    for (std::size_t c = 0; c < m.size(); ++c) {
      s += green_series(b, m.centers[c], kReceivers.positions[r]) * m.contrast[c] *
           green_series(b, m.centers[c], kSource);
    }
    s *= -std::pow(m.cell, 3);
    EXPECT_LT(std::abs(born[r] - s), 1e-12 * std::abs(s));
  }
}

TEST(ScatterSynthesizer, Reciprocity) {
  const auto k = kernel_for(inclusion(), 1.0 / 3.0, desk_green());
  const Point3 a{18, 18, 25}, b{60, 70, 30};
  const ScatterSynthesizer at_b(k, ReceiverSet{{b}}, IterationOptions{1e-12, 200, 3});
  const ScatterSynthesizer at_a(k, ReceiverSet{{a}}, IterationOptions{1e-12, 200, 3});
  const cplx born_ab = at_b.scattered(incident_field(*k, a))[0];
  const cplx born_ba = at_a.scattered(incident_field(*k, b))[0];
  EXPECT_LT(std::abs(born_ab - born_ba), 1e-12 * std::abs(born_ab));
  const cplx full_ab = at_b.synthesize(a)[0];
  const cplx full_ba = at_a.synthesize(b)[0];
  EXPECT_LT(std::abs(full_ab - full_ba), 1e-9 * std::abs(full_ab));
}

TEST(ScatterSynthesizer, FarFieldDecaysLikeInverseSquareRoot) {
  const auto k = kernel_for(inclusion(), 1.0 / 3.0, desk_green());
  const auto inc = incident_field(*k, kSource);
  // Depth-averaged intensity along a horizontal ray over one decade.
  ReceiverSet rs;
  std::vector<double> radius;
  const int nr = 60, nz = 19;
  for (int i = 0; i < nr; ++i) {
    const double r = 200.0 * std::pow(10.0, static_cast<double>(i) / (nr - 1));
    radius.push_back(r);
    for (int j = 1; j <= nz; ++j) rs.positions.push_back({33 + r, 33, 5.0 * j});
  }
  const ScatterSynthesizer synth(k, rs);
  const auto ps = synth.scattered(inc);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < nr; ++i) {
    double e = 0.0;
    for (int j = 0; j < nz; ++j) e += std::norm(ps[i * nz + j]);
    const double x = std::log(radius[i]), y = 0.5 * std::log(e / nz);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double slope = (nr * sxy - sx * sy) / (nr * sxx - sx * sx);
  EXPECT_NEAR(slope, -0.5, 0.1);
}

TEST(ScatterSynthesizer, MidpointRefinementOrderAndStability) {
  const auto g = green_for(1.0 / 12.0);
  auto born = [&](double cell) {
    const auto k = kernel_for(inclusion(), cell, g);
    return ScatterSynthesizer(k, kReceivers).scattered(incident_field(*k, kSource));
  };
  const auto coarse = born(2.0 / 3.0), mid = born(1.0 / 3.0), fine = born(1.0 / 6.0);
  std::vector<cplx> d1(coarse.size()), d2(coarse.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    d1[i] = coarse[i] - mid[i];
    d2[i] = mid[i] - fine[i];
  }
  EXPECT_GE(std::log2(l2(d1) / l2(d2)), 1.5);

  auto full = [&](double cell) {
    const auto k = kernel_for(inclusion(), cell, g);
    return ScatterSynthesizer(k, kReceivers).synthesize(kSource);
  };
  EXPECT_LE(rel_diff(full(1.0 / 3.0), full(1.0 / 6.0)), 0.05);
}
