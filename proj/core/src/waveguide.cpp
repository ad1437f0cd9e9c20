#include "oceansrc/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oceansrc/error.hpp"

namespace oceansrc {

void WaveguideConfig::validate() const {
  if (!(0.0 < interface1 && interface1 < interface2 && interface2 < depth)) {
    throw DomainError("waveguide geometry requires 0 < d1 < d2 < h");
  }
  if (!(frequency > 0.0)) throw DomainError("frequency must be positive");
  for (int i = 0; i < 3; ++i) {
    if (!(density[i] > 0.0) || !(speed[i] > 0.0) || !(index[i] > 0.0)) {
      throw DomainError("layer " + std::to_string(i + 1) +
                        ": density, sound speed and refractive index must be positive");
    }
  }
}

int WaveguideConfig::layer_of(double x3) const {
  if (x3 < interface1) return 0;
  if (x3 < interface2) return 1;
  return 2;
}

double WaveguideConfig::layer_top(int layer) const {
  return layer == 0 ? 0.0 : (layer == 1 ? interface1 : interface2);
}

double WaveguideConfig::layer_bottom(int layer) const {
  return layer == 0 ? interface1 : (layer == 1 ? interface2 : depth);
}

double WaveguideConfig::wavenumber(int layer) const {
  return 2.0 * kPi * frequency / speed[layer];
}

double WaveguideConfig::q(int layer) const { return wavenumber(layer) * index[layer]; }

double WaveguideConfig::q_max() const { return std::max({q(0), q(1), q(2)}); }

double background_q(const WaveguideConfig& cfg, double x3) {
  if (!(x3 >= 0.0 && x3 <= cfg.depth)) {
    throw DomainError("depth " + std::to_string(x3) + " outside [0, h]");
  }
  return cfg.q(cfg.layer_of(x3));
}

int validate_inclusion(const WaveguideConfig& cfg, const InclusionSpec& inc) {
  if (!inc.box.valid()) throw DomainError("inclusion box must have positive extent");
  if (!(inc.q4 > 0.0)) throw DomainError("inclusion coefficient q4 must be positive");
  for (int layer = 0; layer < 3; ++layer) {
    if (cfg.layer_top(layer) < inc.box.lo.z && inc.box.hi.z < cfg.layer_bottom(layer)) {
      if (inc.rho4 != cfg.density[layer]) {
        throw DomainError("inclusion density must equal the host layer density (" +
                          std::to_string(cfg.density[layer]) + ")");
      }
      return layer;
    }
  }
  throw DomainError("inclusion box must lie strictly inside a single layer");
}

double contrast_q_tilde(const WaveguideConfig& cfg, const InclusionSpec& inc,
                        const Point3& x) {
  if (!(x.z >= 0.0 && x.z <= cfg.depth)) {
    throw DomainError("depth " + std::to_string(x.z) + " outside [0, h]");
  }
  if (!inc.box.contains(x)) return 0.0;
  const double host = cfg.q(cfg.layer_of(inc.box.center().z));
  return host * host - inc.q4 * inc.q4;
}

Contrast make_contrast(const WaveguideConfig& cfg, const InclusionSpec& inc) {
  const int layer = validate_inclusion(cfg, inc);
  const double host = cfg.q(layer);
  return {inc.box, host * host - inc.q4 * inc.q4};
}

}  // namespace oceansrc
