#include "oceansrc/locator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "oceansrc/error.hpp"
#include "oceansrc/numeric_io.hpp"
#include "oceansrc/parallel.hpp"

namespace oceansrc {

double indicator_raw(std::span<const cplx> synthesized, std::span<const cplx> data) {
  if (data.empty()) throw DomainError("indicator needs at least one receiver");
  if (synthesized.size() != data.size()) throw DomainError("synthesized data size mismatch");
  double misfit = 0.0, energy = 0.0;
  for (std::size_t m = 0; m < data.size(); ++m) {
    misfit += std::norm(synthesized[m] - data[m]);
    energy += std::norm(data[m]);
  }
  return 1.0 / (misfit + 1e-30 * energy);
}

double indicator_raw(const Point3& x, const ScatterRecord& data, const ForwardModel& model) {
  if (data.values.empty()) throw DomainError("indicator needs at least one receiver");
  const auto synth = model.synthesize(x);
  return indicator_raw(synth, data.values);
}

std::vector<double> indicator_normalize(std::span<const double> raw) {
  if (raw.empty()) throw DomainError("cannot normalize an empty indicator set");
  const double top = *std::max_element(raw.begin(), raw.end());
  if (!(top > 0.0) || !std::isfinite(top)) {
    throw DomainError("indicator values are all zero or non-finite (degenerate data)");
  }
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] == top ? 1.0 : raw[i] / top;
  return out;
}

namespace {

std::int64_t whole_steps(double side, double step, const char* axis) {
  const double n = std::round(side / step);
  if (n < 1.0 || std::abs(n * step - side) > 1e-9 * std::max(1.0, side)) {
    throw DomainError(std::string("sampling region ") + axis + " side " + std::to_string(side) +
                      " is not a whole multiple of s0 = " + std::to_string(step));
  }
  return static_cast<std::int64_t>(n);
}

std::int64_t level0_spacing(const SamplingRegion& region) {
  return std::int64_t{1} << (region.levels - 1);
}

}  // namespace

void SamplingRegion::validate() const {
  if (!box.valid()) throw DomainError("sampling region must have positive extent");
  if (!(s0 > 0.0)) throw DomainError("initial cell size s0 must be positive");
  if (!(cutoff > 0.0 && cutoff <= 1.0)) throw DomainError("cut-off must lie in (0, 1]");
  if (levels < 1 || levels > 30) throw DomainError("levels must be between 1 and 30");
  const Point3 e = box.extent();
  whole_steps(e.x, s0, "x");
  whole_steps(e.y, s0, "y");
  whole_steps(e.z, s0, "z");
}

double LocateContext::finest_spacing() const {
  return region.s0 / static_cast<double>(level0_spacing(region));
}

Point3 LocateContext::position(const VertexKey& k) const {
  const double f = finest_spacing();
  return {region.box.lo.x + k[0] * f, region.box.lo.y + k[1] * f, region.box.lo.z + k[2] * f};
}

std::vector<VertexKey> cell_vertices(std::span<const VertexKey> cells, std::int64_t spacing) {
  std::set<VertexKey> keys;
  for (const VertexKey& c : cells) {
    for (int corner = 0; corner < 8; ++corner) {
      keys.insert({c[0] + ((corner & 1) ? spacing : 0), c[1] + ((corner & 2) ? spacing : 0),
                   c[2] + ((corner & 4) ? spacing : 0)});
    }
  }
  return {keys.begin(), keys.end()};
}

std::vector<LevelVertex> retained_vertices(const LevelSet& level, double cutoff) {
  std::vector<LevelVertex> out;
  for (const auto& v : level.vertices) {
    if (v.normalized >= cutoff) out.push_back(v);
  }
  return out;
}

std::vector<VertexKey> select_and_refine(const LevelSet& level, double cutoff) {
  std::set<VertexKey> kept;
  for (const auto& v : level.vertices) {
    if (v.normalized >= cutoff) kept.insert(v.key);
  }
  const std::int64_t s = level.spacing;
  const std::int64_t half = s / 2;
  if (half < 1) throw DomainError("cannot bisect cells below the finest spacing");
  std::vector<VertexKey> children;
  for (const VertexKey& c : level.cells) {
    bool survives = false;
    for (int corner = 0; corner < 8 && !survives; ++corner) {
      const VertexKey k{c[0] + ((corner & 1) ? s : 0), c[1] + ((corner & 2) ? s : 0),
                        c[2] + ((corner & 4) ? s : 0)};
      survives = kept.count(k) > 0;
    }
    if (!survives) continue;
    for (int child = 0; child < 8; ++child) {
      children.push_back({c[0] + ((child & 1) ? half : 0), c[1] + ((child & 2) ? half : 0),
                          c[2] + ((child & 4) ? half : 0)});
    }
  }
  std::sort(children.begin(), children.end());
  children.erase(std::unique(children.begin(), children.end()), children.end());
  return children;
}

std::size_t full_grid_vertex_count(const SamplingRegion& region) {
  region.validate();
  const double f = region.s0 / static_cast<double>(level0_spacing(region));
  const Point3 e = region.box.extent();
  return static_cast<std::size_t>((whole_steps(e.x, f, "x") + 1) * (whole_steps(e.y, f, "y") + 1) *
                                  (whole_steps(e.z, f, "z") + 1));
}

LocateResult multilevel_locate(const SamplingRegion& region, const ScatterRecord& data,
                               const ForwardModel& model) {
  region.validate();
  if (data.values.empty()) throw DomainError("scatter record has no receivers");
  const auto start = std::chrono::steady_clock::now();
  const LocateContext ctx{region};
  const std::int64_t s0 = level0_spacing(region);
  const Point3 e = region.box.extent();
  const std::int64_t nx = whole_steps(e.x, region.s0, "x");
  const std::int64_t ny = whole_steps(e.y, region.s0, "y");
  const std::int64_t nz = whole_steps(e.z, region.s0, "z");

  std::vector<VertexKey> cells;
  for (std::int64_t k = 0; k < nz; ++k) {
    for (std::int64_t j = 0; j < ny; ++j) {
      for (std::int64_t i = 0; i < nx; ++i) cells.push_back({i * s0, j * s0, k * s0});
    }
  }
  std::sort(cells.begin(), cells.end());

  LocateResult res;
  std::map<VertexKey, double> cache;
  std::int64_t spacing = s0;
  for (int level = 0; level < region.levels; ++level) {
    LevelSet ls;
    ls.level = level;
    ls.spacing = spacing;
    ls.cells = cells;
    const auto keys = cell_vertices(cells, spacing);

    std::vector<VertexKey> missing;
    for (const auto& k : keys) {
      if (!cache.count(k)) missing.push_back(k);
    }
    if (res.total_evaluations + missing.size() > region.budget) {
      res.budget_exceeded = true;
      break;
    }
    std::vector<double> fresh(missing.size());
    parallel_for(missing.size(), [&](std::size_t i) {
      fresh[i] = indicator_raw(ctx.position(missing[i]), data, model);
    });
    for (std::size_t i = 0; i < missing.size(); ++i) cache.emplace(missing[i], fresh[i]);
    ls.evaluations = missing.size();
    res.total_evaluations += missing.size();

    std::vector<double> raw(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) raw[i] = cache.at(keys[i]);
    const auto normalized = indicator_normalize(raw);
    ls.vertices.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      ls.vertices.push_back({keys[i], ctx.position(keys[i]), raw[i], normalized[i]});
    }
    res.levels.push_back(std::move(ls));
    if (level + 1 < region.levels) {
      cells = select_and_refine(res.levels.back(), region.cutoff);
      spacing /= 2;
    }
  }
  if (!res.levels.empty()) {
    res.output = retained_vertices(res.levels.back(), region.cutoff);
    res.final_cell_size = res.levels.back().spacing * ctx.finest_spacing();
  }
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

void write_locate_text(const LocateResult& res, const SamplingRegion& region, std::ostream& out) {
  out << "locate-result 1\ncutoff ";
  write_double(out, region.cutoff);
  out << "\ns0 ";
  write_double(out, region.s0);
  out << "\nlevels " << region.levels << "\nbudget " << region.budget
      << "\ntotal_evaluations " << res.total_evaluations
      << "\nbudget_exceeded " << (res.budget_exceeded ? "true" : "false") << "\nfinal_cell_size ";
  write_double(out, res.final_cell_size);
  out << '\n';
  auto point = [&](const Point3& p) {
    write_double(out, p.x);
    out << ' ';
    write_double(out, p.y);
    out << ' ';
    write_double(out, p.z);
  };
  for (const auto& ls : res.levels) {
    out << "level " << ls.level << " cells " << ls.cells.size() << " vertices "
        << ls.vertices.size() << " evaluations " << ls.evaluations << '\n';
    for (const auto& v : ls.vertices) {
      point(v.position);
      out << ' ';
      write_double(out, v.raw);
      out << ' ';
      write_double(out, v.normalized);
      out << '\n';
    }
  }
  out << "output " << res.output.size() << '\n';
  for (const auto& v : res.output) {
    point(v.position);
    out << ' ';
    write_double(out, v.normalized);
    out << '\n';
  }
}

void write_locate_csv(const LocateResult& res, std::ostream& out) {
  out << "level,x,y,z,I\n";
  auto row = [&](const std::string& level, const LevelVertex& v) {
    out << level << ',';
    for (double c : {v.position.x, v.position.y, v.position.z}) {
      write_double(out, c);
      out << ',';
    }
    write_double(out, v.normalized);
    out << '\n';
  };
  for (const auto& ls : res.levels) {
    for (const auto& v : ls.vertices) row(std::to_string(ls.level), v);
  }
  for (const auto& v : res.output) row("final", v);
}

namespace {

// Phase-1 simplex: is there lambda >= 0 with A lambda = b (A is 4 x n, b >= 0)?
bool feasible(std::vector<std::array<double, 4>> cols, std::array<double, 4> b) {
  const std::size_t n = cols.size();
  for (int r = 0; r < 4; ++r) {
    if (b[r] < 0.0) {
      b[r] = -b[r];
      for (auto& c : cols) c[r] = -c[r];
    }
  }
  // Tableau columns: n structural + 4 artificial.
  const std::size_t m = n + 4;
  std::vector<std::array<double, 4>> t(m);
  for (std::size_t j = 0; j < n; ++j) t[j] = cols[j];
  for (int r = 0; r < 4; ++r) {
    t[n + r] = {0, 0, 0, 0};
    t[n + r][r] = 1.0;
  }
  std::array<std::size_t, 4> basis{n, n + 1, n + 2, n + 3};
  std::array<double, 4> rhs = b;
  const double tol = 1e-11;
  for (int iter = 0; iter < 10000; ++iter) {
    // Reduced costs for minimizing the artificial sum.
    std::size_t enter = m;
    for (std::size_t j = 0; j < m && enter == m; ++j) {
      double reduced = j >= n ? 1.0 : 0.0;
      for (int r = 0; r < 4; ++r) {
        if (basis[r] >= n) reduced -= t[j][r];
      }
      if (reduced < -tol) enter = j;  // Bland: first improving column
    }
    if (enter == m) break;
    int leave = -1;
    double best = 0.0;
    for (int r = 0; r < 4; ++r) {
      if (t[enter][r] > tol) {
        const double ratio = rhs[r] / t[enter][r];
        if (leave < 0 || ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
    }
    if (leave < 0) break;
    const double pivot = t[enter][leave];
    const std::array<double, 4> col = t[enter];
    for (auto& c : t) {
      const double f = c[leave] / pivot;
      for (int r = 0; r < 4; ++r) {
        if (r != leave) c[r] -= f * col[r];
      }
      c[leave] = f;
    }
    const double fr = rhs[leave] / pivot;
    for (int r = 0; r < 4; ++r) {
      if (r != leave) rhs[r] -= col[r] * fr;
    }
    rhs[leave] = fr;
    basis[leave] = enter;
  }
  double artificial = 0.0;
  for (int r = 0; r < 4; ++r) {
    if (basis[r] >= n) artificial += rhs[r];
  }
  return artificial <= 1e-9;
}

}  // namespace

bool inside_padded_hull(const Point3& p, std::span<const Point3> points, double pad) {
  if (points.empty()) return false;
  std::vector<std::array<double, 4>> cols;
  cols.reserve(points.size() * 8);
  for (const Point3& q : points) {
    for (int corner = 0; corner < 8; ++corner) {
      cols.push_back({q.x + ((corner & 1) ? pad : -pad) - p.x,
                      q.y + ((corner & 2) ? pad : -pad) - p.y,
                      q.z + ((corner & 4) ? pad : -pad) - p.z, 1.0});
    }
  }
  return feasible(std::move(cols), {0.0, 0.0, 0.0, 1.0});
}

}  // namespace oceansrc
