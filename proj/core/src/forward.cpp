#include "oceansrc/forward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oceansrc/error.hpp"
#include "oceansrc/parallel.hpp"

namespace oceansrc {
namespace {

int whole_cells(double side, double cell, const char* axis) {
  const double n = std::round(side / cell);
  if (n < 1.0 || std::abs(n * cell - side) > 1e-12 * std::max(1.0, side)) {
    throw DomainError(std::string("inclusion ") + axis + " side " + std::to_string(side) +
                      " is not a whole multiple of the cell size " + std::to_string(cell));
  }
  return static_cast<int>(n);
}

}  // namespace

VolumeMesh make_volume_mesh(const WaveguideConfig& cfg, const InclusionSpec& inc, double cell) {
  if (!(cell > 0.0)) throw DomainError("cell size must be positive");
  VolumeMesh mesh;
  mesh.layer = validate_inclusion(cfg, inc);
  mesh.box = inc.box;
  mesh.cell = cell;
  const Point3 ext = inc.box.extent();
  mesh.nx = whole_cells(ext.x, cell, "x");
  mesh.ny = whole_cells(ext.y, cell, "y");
  mesh.nz = whole_cells(ext.z, cell, "z");
  const Contrast contrast = make_contrast(cfg, inc);
  const std::size_t n = static_cast<std::size_t>(mesh.nx) * mesh.ny * mesh.nz;
  mesh.centers.reserve(n);
  mesh.contrast.reserve(n);
  for (int k = 0; k < mesh.nz; ++k) {
    for (int j = 0; j < mesh.ny; ++j) {
      for (int i = 0; i < mesh.nx; ++i) {
        const Point3 p{inc.box.lo.x + (i + 0.5) * cell, inc.box.lo.y + (j + 0.5) * cell,
                       inc.box.lo.z + (k + 0.5) * cell};
        mesh.centers.push_back(p);
        mesh.contrast.push_back(contrast.at(p));
      }
    }
  }
  return mesh;
}

InteractionKernel::InteractionKernel(std::shared_ptr<const GreenFunction> green, VolumeMesh mesh,
                                     const KernelOptions& opt)
    : green_(std::move(green)), mesh_(std::move(mesh)), max_bytes_(opt.max_bytes) {
  if (!green_) throw DomainError("kernel requires a Green's function");
  if (mesh_.size() == 0) throw DomainError("empty volume mesh");
  const double r_eff = effective_radius();
  if (green_->basis().r_min > r_eff * (1.0 + 1e-12)) {
    throw DomainError("modal basis r_min exceeds half the cell size");
  }
  const int nx = mesh_.nx, ny = mesh_.ny, nz = mesh_.nz;
  const std::size_t modes = green_->mode_count();

  offset_slot_.assign(static_cast<std::size_t>((nx - 1) * (nx - 1) + (ny - 1) * (ny - 1) + 1), -1);
  std::vector<int> keys;
  for (int dx = 0; dx < nx; ++dx) {
    for (int dy = 0; dy < ny; ++dy) {
      const int k = dx * dx + dy * dy;
      if (offset_slot_[k] < 0) {
        offset_slot_[k] = static_cast<int>(keys.size());
        keys.push_back(k);
      }
    }
  }
  offset_slot_count_ = keys.size();

  const std::size_t table_entries = keys.size() * nz * nz;
  const std::size_t bytes = table_entries * sizeof(cplx) + nz * modes * sizeof(double) +
                            keys.size() * modes * sizeof(cplx);
  if (bytes > max_bytes_) {
    throw SizeError("interaction kernel for " + std::to_string(mesh_.size()) + " cells needs " +
                    std::to_string(bytes) + " bytes, above the cap of " +
                    std::to_string(max_bytes_));
  }

  profiles_.resize(static_cast<std::size_t>(nz) * modes);
  for (int k = 0; k < nz; ++k) {
    const double z = mesh_.box.lo.z + (k + 0.5) * mesh_.cell;
    green_->profiles(z, std::span<double>(profiles_).subspan(k * modes, modes));
  }

  table_.assign(table_entries, cplx(0.0));
  parallel_for(keys.size(), [&](std::size_t s) {
    const double r = keys[s] == 0 ? r_eff : mesh_.cell * std::sqrt(static_cast<double>(keys[s]));
    std::vector<cplx> radial(modes);
    const std::size_t count = green_->radial_factors(r, radial);
    for (int a = 0; a < nz; ++a) {
      const double* pa = &profiles_[a * modes];
      for (int b = a; b < nz; ++b) {
        const double* pb = &profiles_[b * modes];
        cplx sum = 0.0;
        for (std::size_t n = 0; n < count; ++n) sum += radial[n] * (pa[n] * pb[n]);
        table_[(s * nz + a) * nz + b] = sum;
        table_[(s * nz + b) * nz + a] = sum;
      }
    }
  });

  ix_.resize(mesh_.size());
  iy_.resize(mesh_.size());
  iz_.resize(mesh_.size());
  for (std::size_t c = 0; c < mesh_.size(); ++c) {
    ix_[c] = mesh_.ix(c);
    iy_[c] = mesh_.iy(c);
    iz_[c] = mesh_.iz(c);
  }
}

std::span<const double> InteractionKernel::depth_profiles(int iz) const {
  const std::size_t modes = green_->mode_count();
  return std::span<const double>(profiles_).subspan(iz * modes, modes);
}

std::size_t InteractionKernel::slot(std::size_t c, std::size_t cp) const {
  const int dx = ix_[c] - ix_[cp];
  const int dy = iy_[c] - iy_[cp];
  const std::size_t s = static_cast<std::size_t>(offset_slot_[dx * dx + dy * dy]);
  return (s * mesh_.nz + iz_[c]) * mesh_.nz + iz_[cp];
}

cplx InteractionKernel::green_entry(std::size_t c, std::size_t cp) const { return table_[slot(c, cp)]; }

cplx InteractionKernel::entry(std::size_t c, std::size_t cp) const {
  const double v = mesh_.cell * mesh_.cell * mesh_.cell;
  return table_[slot(c, cp)] * (mesh_.contrast[cp] * v);
}

void InteractionKernel::apply(std::span<const cplx> p, std::span<cplx> out) const {
  const std::size_t n = size();
  const double v = mesh_.cell * mesh_.cell * mesh_.cell;
  std::vector<cplx> weighted(n);
  for (std::size_t c = 0; c < n; ++c) weighted[c] = p[c] * (mesh_.contrast[c] * v);
  parallel_for(n, [&](std::size_t c) {
    cplx sum = 0.0;
    for (std::size_t cp = 0; cp < n; ++cp) sum += table_[slot(c, cp)] * weighted[cp];
    out[c] = sum;
  }, 64);
}

std::vector<cplx> InteractionKernel::dense() const {
  const std::size_t n = size();
  if (n * n * sizeof(cplx) > max_bytes_) {
    throw SizeError("dense kernel for " + std::to_string(n) + " cells exceeds the memory cap");
  }
  std::vector<cplx> k(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t cp = 0; cp < n; ++cp) k[c * n + cp] = entry(c, cp);
  }
  return k;
}

InteractionKernel assemble_kernel(std::shared_ptr<const GreenFunction> green,
                                  const VolumeMesh& mesh, const KernelOptions& opt) {
  return InteractionKernel(std::move(green), mesh, opt);
}

std::vector<cplx> incident_field(const InteractionKernel& kernel, const Point3& source) {
  const VolumeMesh& mesh = kernel.mesh();
  const GreenFunction& g = kernel.green();
  if (mesh.box.contains(source)) throw DomainError("source lies inside the inclusion box");
  const std::size_t modes = g.mode_count();
  std::vector<double> at_source(modes);
  g.profiles(source.z, at_source);

  std::vector<cplx> out(mesh.size());
  std::vector<cplx> radial(modes);
  std::vector<cplx> column(modes);
  const std::size_t plane = static_cast<std::size_t>(mesh.nx) * mesh.ny;
  for (std::size_t col = 0; col < plane; ++col) {
    const Point3& c0 = mesh.centers[col];
    const double r = std::max(horizontal_distance(c0, source), kernel.effective_radius());
    const std::size_t count = g.radial_factors(r, radial);
    for (std::size_t n = 0; n < count; ++n) column[n] = radial[n] * at_source[n];
    for (int k = 0; k < mesh.nz; ++k) {
      const auto prof = kernel.depth_profiles(k);
      cplx sum = 0.0;
      for (std::size_t n = 0; n < count; ++n) sum += column[n] * prof[n];
      out[k * plane + col] = sum;
    }
  }
  return out;
}

FieldGrid born_iterate(const InteractionKernel& kernel, std::span<const cplx> incident,
                       const IterationOptions& opt) {
  if (!(opt.eps > 0.0)) throw DomainError("iteration tolerance must be positive");
  if (opt.max_iter < 1) throw DomainError("max_iter must be at least 1");
  const std::size_t n = kernel.size();
  if (incident.size() != n) throw DomainError("incident field size does not match the mesh");

  FieldGrid f;
  f.values.assign(incident.begin(), incident.end());
  std::vector<cplx> next(n);
  int growth = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    kernel.apply(f.values, next);
    double diff = 0.0, size = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      next[c] = incident[c] - next[c];
      diff += std::norm(next[c] - f.values[c]);
      size += std::norm(next[c]);
    }
    const double change = size > 0.0 ? std::sqrt(diff / size) : (diff > 0.0 ? INFINITY : 0.0);
    if (!std::isfinite(change)) {
      throw ConvergenceError("fixed-point iteration produced a non-finite field");
    }
    f.values.swap(next);
    f.iterations = it;
    f.final_change = change;
    if (!f.changes.empty() && change > f.changes.back()) {
      ++growth;
    } else {
      growth = 0;
    }
    f.changes.push_back(change);
    if (change <= opt.eps) {
      f.converged = true;
      return f;
    }
    if (growth >= opt.divergence_window) {
      throw ConvergenceError("fixed-point iteration diverges (change grew " +
                             std::to_string(growth) +
                             " times in a row); the contrast is too large for the scheme");
    }
  }
  return f;
}

FieldGrid born_iterate(const InteractionKernel& kernel, const Point3& source,
                       const IterationOptions& opt) {
  const auto g = incident_field(kernel, source);
  return born_iterate(kernel, g, opt);
}

void validate_receivers(const WaveguideConfig& cfg, const Box& box, const ReceiverSet& rs) {
  if (rs.positions.empty()) throw DomainError("receiver set is empty");
  for (const Point3& p : rs.positions) {
    if (!(p.z >= 0.0 && p.z <= cfg.depth)) throw DomainError("receiver depth outside [0, h]");
    if (box.contains(p)) throw DomainError("receiver lies inside the inclusion box");
  }
}

ScatterSynthesizer::ScatterSynthesizer(std::shared_ptr<const InteractionKernel> kernel,
                                       ReceiverSet receivers, IterationOptions iteration)
    : kernel_(std::move(kernel)), receivers_(std::move(receivers)), iteration_(iteration) {
  if (!kernel_) throw DomainError("synthesizer requires a kernel");
  const VolumeMesh& mesh = kernel_->mesh();
  validate_receivers(kernel_->green().basis().config, mesh.box, receivers_);
  const std::size_t n = mesh.size();
  const double v = mesh.cell * mesh.cell * mesh.cell;
  weights_.resize(receivers_.positions.size() * n);
  for (std::size_t m = 0; m < receivers_.positions.size(); ++m) {
    const auto g = incident_field(*kernel_, receivers_.positions[m]);
    for (std::size_t c = 0; c < n; ++c) weights_[m * n + c] = -g[c] * (mesh.contrast[c] * v);
  }
}

std::vector<cplx> ScatterSynthesizer::scattered(std::span<const cplx> field) const {
  const std::size_t n = kernel_->size();
  if (field.size() != n) throw DomainError("field size does not match the mesh");
  std::vector<cplx> out(receivers_.positions.size());
  for (std::size_t m = 0; m < out.size(); ++m) {
    cplx sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) sum += weights_[m * n + c] * field[c];
    out[m] = sum;
  }
  return out;
}

std::vector<cplx> ScatterSynthesizer::scattered(const FieldGrid& field) const {
  return scattered(std::span<const cplx>(field.values));
}

std::vector<cplx> ScatterSynthesizer::synthesize(const Point3& source, FieldGrid* field) const {
  FieldGrid f = born_iterate(*kernel_, source, iteration_);
  auto out = scattered(f);
  if (field) *field = std::move(f);
  return out;
}

std::vector<cplx> scattered_field(const InteractionKernel& kernel, const FieldGrid& field,
                                  const ReceiverSet& receivers) {
  // Non-owning alias: the synthesizer only reads the kernel during construction and use.
  std::shared_ptr<const InteractionKernel> alias(&kernel, [](const InteractionKernel*) {});
  return ScatterSynthesizer(alias, receivers).scattered(field);
}

}  // namespace oceansrc
