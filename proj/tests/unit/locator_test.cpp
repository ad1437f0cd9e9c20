#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include "oceansrc/error.hpp"
#include "oceansrc/locator.hpp"
#include "oceansrc/scenario.hpp"

using namespace oceansrc;

namespace {

// Smooth, identifiable stand-in for the forward model: amplitude falloff from
// eight receivers around the region. Records every call.
class MockModel : public ForwardModel {
 public:
  explicit MockModel(double scale = 1.0) : scale_(scale) {}
  std::vector<cplx> synthesize(const Point3& x) const override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      calls_.push_back(x);
    }
    std::vector<cplx> out;
    for (const Point3& r : receivers()) {
      const double d = distance(x, r);
      out.push_back(scale_ * std::polar(1.0 / d, 0.3 * d));
    }
    return out;
  }
  static std::vector<Point3> receivers() {
    return {{0, 0, 0}, {60, 0, 5}, {0, 60, 10}, {60, 60, 0}, {0, 0, 60}, {60, 0, 55}, {0, 60, 50}, {60, 60, 60}};
  }
  std::vector<Point3> calls() const { return calls_; }

 private:
  double scale_;
  mutable std::mutex mutex_;
  mutable std::vector<Point3> calls_;
};

// Pseudo-random positive value per position.
class NoiseModel : public ForwardModel {
 public:
  explicit NoiseModel(std::uint64_t seed) : seed_(seed) {}
  std::vector<cplx> synthesize(const Point3& x) const override {
    std::seed_seq s{seed_, static_cast<std::uint64_t>(x.x * 64), static_cast<std::uint64_t>(x.y * 64),
                    static_cast<std::uint64_t>(x.z * 64)};
    std::mt19937_64 g(s);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {cplx(u(g), 0.0)};
  }

 private:
  std::uint64_t seed_;
};

ScatterRecord data_for(const ForwardModel& model, const Point3& source) {
  ScatterRecord r;
  r.values = model.synthesize(source);
  r.receivers.resize(r.values.size());
  return r;
}

SamplingRegion region(int levels = 3) {
  SamplingRegion reg;
  reg.box = {{10, 10, 10}, {38, 38, 38}};
  reg.s0 = 4;
  reg.cutoff = 0.95;
  reg.levels = levels;
  return reg;
}

bool cell_contains(const VertexKey& outer, std::int64_t outer_size, const VertexKey& inner,
                   std::int64_t inner_size) {
  for (int a = 0; a < 3; ++a) {
    if (inner[a] < outer[a] || inner[a] + inner_size > outer[a] + outer_size) return false;
  }
  return true;
}

}  // namespace

TEST(Indicator, ExactMatchHitsFloorAndWins) {
  const std::vector<cplx> data{{1e-4, 2e-4}, {-3e-4, 0}};
  const double energy = std::norm(data[0]) + std::norm(data[1]);
  EXPECT_DOUBLE_EQ(indicator_raw(data, data), 1.0 / (1e-30 * energy));
  const std::vector<cplx> off{{1.1e-4, 2e-4}, {-3e-4, 0}};
  EXPECT_GT(indicator_raw(data, data), indicator_raw(off, data));
  EXPECT_THROW(indicator_raw(std::vector<cplx>{}, std::vector<cplx>{}), DomainError);
  EXPECT_THROW(indicator_raw(off, std::vector<cplx>{data[0]}), DomainError);
}

TEST(Indicator, NoiselessDataPeaksAtTrueSourceWithWaveguideModel) {
  const Scenario s = make_preset("example3");
  const auto g = std::make_shared<const GreenFunction>(std::make_shared<const ModalBasis>(
      find_modes(s.waveguide, s.effective_r_min(), s.mode_tolerance)));
  const auto k = std::make_shared<const InteractionKernel>(
      g, make_volume_mesh(s.waveguide, s.inclusion, s.cell));
  const WaveguideForwardModel model(std::make_shared<const ScatterSynthesizer>(k, s.receivers, s.iteration));
  ScatterRecord data;
  data.receivers = s.receivers.positions;
  data.values = model.synthesize(s.source);
  double energy = 0.0;
  for (const cplx& v : data.values) energy += std::norm(v);
  const double at_source = indicator_raw(s.source, data, model);
  EXPECT_DOUBLE_EQ(at_source, 1.0 / (1e-30 * energy));
  EXPECT_LT(indicator_raw(Point3{s.source.x + 1, s.source.y, s.source.z}, data, model), at_source);
}

TEST(Indicator, NormalizationProperties) {
  const std::vector<double> raw{3.0, 7.5, 0.2, 7.5 * (1 - 1e-16), 1.0};
  const auto n = indicator_normalize(raw);
  EXPECT_EQ(*std::max_element(n.begin(), n.end()), 1.0);
  EXPECT_EQ(std::max_element(n.begin(), n.end()) - n.begin(), 1);
  std::vector<double> scaled;
  for (double v : raw) scaled.push_back(v * 1e7);
  const auto ns = indicator_normalize(scaled);
  for (std::size_t i = 0; i < n.size(); ++i) EXPECT_NEAR(ns[i], n[i], 1e-15);
  EXPECT_EQ(std::max_element(ns.begin(), ns.end()) - ns.begin(), 1);
  EXPECT_EQ(indicator_normalize(std::vector<double>{42.0}), std::vector<double>{1.0});
  EXPECT_THROW(indicator_normalize(std::vector<double>{0.0, 0.0}), DomainError);
  EXPECT_THROW(indicator_normalize(std::vector<double>{}), DomainError);
}

TEST(SelectAndRefine, BisectionMakesEightCellsAndTwentySevenVertices) {
  LevelSet ls;
  ls.spacing = 4;
  ls.cells = {{0, 0, 0}};
  for (const auto& k : cell_vertices(ls.cells, 4)) ls.vertices.push_back({k, {}, 1.0, 1.0});
  ASSERT_EQ(ls.vertices.size(), 8u);
  const auto children = select_and_refine(ls, 0.95);
  EXPECT_EQ(children.size(), 8u);
  EXPECT_EQ(cell_vertices(children, 2).size(), 27u);
}

TEST(SelectAndRefine, CutoffExtremes) {
  LevelSet ls;
  ls.spacing = 2;
  ls.cells = {{0, 0, 0}, {2, 0, 0}, {4, 0, 0}, {0, 2, 0}};
  const auto keys = cell_vertices(ls.cells, 2);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    ls.vertices.push_back({keys[i], {}, 0.0, keys[i] == VertexKey{6, 2, 2} ? 1.0 : 0.01 * i});
  }
  // c = 1: only the argmax vertex, which touches only the cell at x = 4.
  const auto top = retained_vertices(ls, 1.0);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].key, (VertexKey{6, 2, 2}));
  const auto one = select_and_refine(ls, 1.0);
  EXPECT_EQ(one.size(), 8u);
  for (const auto& c : one) EXPECT_TRUE(cell_contains({4, 0, 0}, 2, c, 1));
  // c -> 0: every cell is bisected.
  EXPECT_EQ(select_and_refine(ls, std::numeric_limits<double>::min()).size(), 32u);
  EXPECT_EQ(retained_vertices(ls, std::numeric_limits<double>::min()).size(), keys.size() - 1);
  ls.spacing = 1;
  EXPECT_THROW(select_and_refine(ls, 0.5), DomainError);
}

TEST(SamplingRegion, Validation) {
  SamplingRegion r = region();
  EXPECT_NO_THROW(r.validate());
  EXPECT_EQ(full_grid_vertex_count(r), 29u * 29u * 29u);
  r.box.hi.x = 40;
  EXPECT_THROW(r.validate(), DomainError);
  r = region();
  r.cutoff = 0.0;
  EXPECT_THROW(r.validate(), DomainError);
  r.cutoff = 1.5;
  EXPECT_THROW(r.validate(), DomainError);
  r = region(0);
  EXPECT_THROW(r.validate(), DomainError);
}

TEST(MultilevelLocate, SingleLevelOutputsPassingLevelZeroVertices) {
  const MockModel model;
  const ScatterRecord data = data_for(model, {21, 17, 30});
  const auto res = multilevel_locate(region(1), data, model);
  ASSERT_EQ(res.levels.size(), 1u);
  EXPECT_EQ(res.levels[0].vertices.size(), 8u * 8u * 8u);
  EXPECT_EQ(res.total_evaluations, 512u);
  std::vector<VertexKey> expected, got;
  for (const auto& v : res.levels[0].vertices) {
    if (v.normalized >= 0.95) expected.push_back(v.key);
  }
  for (const auto& v : res.output) got.push_back(v.key);
  EXPECT_EQ(got, expected);
  EXPECT_DOUBLE_EQ(res.final_cell_size, 4.0);
}

TEST(MultilevelLocate, FindsMockSourceWithCachingAndNesting) {
  const MockModel model;
  const Point3 source{21, 17, 30};
  const ScatterRecord data = data_for(model, source);
  const MockModel counting;
  const auto res = multilevel_locate(region(), data, counting);
  ASSERT_EQ(res.levels.size(), 3u);
  EXPECT_FALSE(res.budget_exceeded);
  EXPECT_FALSE(res.output.empty());
  EXPECT_DOUBLE_EQ(res.final_cell_size, 1.0);
  EXPECT_TRUE(inside_padded_hull(source, [&] {
    std::vector<Point3> p;
    for (const auto& v : res.output) p.push_back(v.position);
    return p;
  }(), res.final_cell_size));

  // One forward solve per distinct vertex; counters add up.
  const auto calls = counting.calls();
  EXPECT_EQ(calls.size(), res.total_evaluations);
  std::set<std::tuple<double, double, double>> distinct;
  for (const auto& p : calls) distinct.insert({p.x, p.y, p.z});
  EXPECT_EQ(distinct.size(), calls.size());
  std::size_t sum = 0;
  for (const auto& ls : res.levels) sum += ls.evaluations;
  EXPECT_EQ(sum, res.total_evaluations);
  EXPECT_LT(res.total_evaluations, full_grid_vertex_count(region()));

  for (std::size_t n = 1; n < res.levels.size(); ++n) {
    const auto& prev = res.levels[n - 1];
    for (const auto& c : res.levels[n].cells) {
      bool nested = false;
      for (const auto& p : prev.cells) nested = nested || cell_contains(p, prev.spacing, c, res.levels[n].spacing);
      EXPECT_TRUE(nested);
    }
  }
}

TEST(MultilevelLocate, RandomIndicatorsAlwaysKeepSurvivors) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const NoiseModel model(seed);
    ScatterRecord data;
    data.values = {cplx(0.5 + 0.001 * seed, 0.0)};
    data.receivers.resize(1);
    SamplingRegion reg;
    reg.box = {{0, 0, 0}, {8, 8, 8}};
    reg.s0 = 4;
    reg.levels = 3;
    reg.cutoff = 0.5 + 0.005 * seed;
    const auto res = multilevel_locate(reg, data, model);
    ASSERT_EQ(res.levels.size(), 3u) << seed;
    EXPECT_FALSE(res.output.empty());
    for (const auto& ls : res.levels) {
      EXPECT_FALSE(ls.cells.empty());
      double top = 0.0;
      for (const auto& v : ls.vertices) top = std::max(top, v.normalized);
      EXPECT_EQ(top, 1.0);
    }
    for (std::size_t n = 1; n < res.levels.size(); ++n) {
      const auto& prev = res.levels[n - 1];
      for (const auto& c : res.levels[n].cells) {
        bool nested = false;
        for (const auto& p : prev.cells) nested = nested || cell_contains(p, prev.spacing, c, res.levels[n].spacing);
        EXPECT_TRUE(nested);
      }
    }
  }
}

TEST(MultilevelLocate, SelectionInvariantUnderCommonScaling) {
  const MockModel model, scaled(-2.5e3);
  const Point3 source{30, 25, 14};
  ScatterRecord data = data_for(model, source);
  ScatterRecord data_scaled = data;
  for (auto& v : data_scaled.values) v *= -2.5e3;
  const auto a = multilevel_locate(region(), data, model);
  const auto b = multilevel_locate(region(), data_scaled, scaled);
  ASSERT_EQ(a.levels.size(), b.levels.size());
  for (std::size_t n = 0; n < a.levels.size(); ++n) EXPECT_EQ(a.levels[n].cells, b.levels[n].cells);
  ASSERT_EQ(a.output.size(), b.output.size());
  for (std::size_t i = 0; i < a.output.size(); ++i) EXPECT_EQ(a.output[i].key, b.output[i].key);
}

TEST(MultilevelLocate, DeterministicOutputFiles) {
  const MockModel model;
  const ScatterRecord data = data_for(model, {21, 17, 30});
  auto render = [&] {
    const auto res = multilevel_locate(region(), data, model);
    std::ostringstream out;
    write_locate_text(res, region(), out);
    write_locate_csv(res, out);
    return out.str();
  };
  const std::string first = render();
  EXPECT_EQ(first, render());
  EXPECT_EQ(first.rfind("locate-result 1\n", 0), 0u);
  EXPECT_NE(first.find("level,x,y,z,I\n"), std::string::npos);
  EXPECT_NE(first.find("\nfinal,"), std::string::npos);
}

TEST(MultilevelLocate, BudgetStopsWithPartialResult) {
  const MockModel model;
  const ScatterRecord data = data_for(model, {21, 17, 30});
  SamplingRegion reg = region();
  reg.budget = 600;
  const auto res = multilevel_locate(reg, data, model);
  EXPECT_TRUE(res.budget_exceeded);
  ASSERT_EQ(res.levels.size(), 1u);
  EXPECT_EQ(res.total_evaluations, 512u);
  EXPECT_FALSE(res.output.empty());
  reg.budget = 100;
  const auto none = multilevel_locate(reg, data, model);
  EXPECT_TRUE(none.budget_exceeded);
  EXPECT_TRUE(none.levels.empty());
  EXPECT_TRUE(none.output.empty());
  EXPECT_EQ(none.total_evaluations, 0u);
}

TEST(PaddedHull, ContainmentAndPadding) {
  const std::vector<Point3> tet{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_TRUE(inside_padded_hull({0.2, 0.2, 0.2}, tet, 0.0));
  EXPECT_TRUE(inside_padded_hull({0, 0, 0}, tet, 0.0));
  EXPECT_FALSE(inside_padded_hull({0.5, 0.5, 0.5}, tet, 0.0));
  EXPECT_TRUE(inside_padded_hull({0.5, 0.5, 0.5}, tet, 0.25));
  EXPECT_FALSE(inside_padded_hull({-0.3, 0, 0}, tet, 0.25));
  // Single point grown into a cube; collinear points grown into a box.
  const std::vector<Point3> one{{5, 5, 5}};
  EXPECT_TRUE(inside_padded_hull({5.9, 4.1, 5.9}, one, 1.0));
  EXPECT_FALSE(inside_padded_hull({6.1, 5, 5}, one, 1.0));
  const std::vector<Point3> line{{0, 0, 0}, {10, 0, 0}};
  EXPECT_TRUE(inside_padded_hull({7, 0.5, -0.5}, line, 0.5));
  EXPECT_FALSE(inside_padded_hull({7, 0.6, 0}, line, 0.5));
  EXPECT_FALSE(inside_padded_hull({0, 0, 0}, std::vector<Point3>{}, 1.0));
}

TEST(PaddedHull, AgreesWithBoxForGridPoints) {
  std::vector<Point3> grid;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) grid.push_back({10.0 + i, 20.0 + j, 30.0 + k});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 4.0);
  for (int t = 0; t < 300; ++t) {
    const Point3 p{10 + u(rng), 20 + u(rng), 30 + u(rng)};
    const Box padded{{9.5, 19.5, 29.5}, {12.5, 22.5, 32.5}};
    EXPECT_EQ(inside_padded_hull(p, grid, 0.5), padded.contains(p));
  }
}
