#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oceansrc/config.hpp"
#include "oceansrc/forward.hpp"
#include "oceansrc/locator.hpp"
#include "oceansrc/modes.hpp"
#include "oceansrc/scatter_record.hpp"
#include "oceansrc/waveguide.hpp"

namespace oceansrc {

std::string library_version();

struct Scenario {
  std::string name = "custom";
  WaveguideConfig waveguide;
  double mode_tolerance = 1e-6;
  double r_min = 0.0;  // 0 selects half the forward cell size
  InclusionSpec inclusion;
  Point3 source;
  ReceiverSet receivers;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double cell = 1.0 / 3.0;
  IterationOptions iteration;
  SamplingRegion region;

  double effective_r_min() const { return r_min > 0.0 ? r_min : 0.5 * cell; }

  // Throws DomainError on inconsistent settings.
  void validate() const;
};

// Reads a scenario; unknown sections or keys and duplicates raise ConfigError
// with the offending line. Missing keys keep their defaults.
Scenario scenario_from_config(const ConfigDocument& doc);
Scenario load_scenario(std::istream& in);

ConfigDocument scenario_to_config(const Scenario& s);

// Scenario plus a [manifest] section (version, preset name, seed); parseable by
// load_scenario.
std::string scenario_manifest(const Scenario& s);

std::vector<std::string> preset_names();
// Examples 1-4 of the reference study; desk scale unless paper_scale is set.
Scenario make_preset(const std::string& name, bool paper_scale = false);

// Desk-scale overrides: cell 1/3, mode tolerance 1e-6. Paper scale: cell 1/15, 1e-8.
void apply_scale(Scenario& s, bool paper_scale);

struct RunOutputs {
  ScatterRecord clean;
  ScatterRecord data;
  FieldGrid field;
  LocateResult locate;
  std::size_t modes = 0;
  std::size_t propagating_modes = 0;
  std::vector<std::string> warnings;
  // File name -> contents, written only after every stage succeeded.
  std::map<std::string, std::string> files;
};

RunOutputs run_scenario(const Scenario& s);

struct ModeListing {
  ModalBasis basis;
  std::map<std::string, std::string> files;
};

ModeListing list_modes(const Scenario& s, std::size_t profile_count = 20, int depth_samples = 401);

// Vertical slice through the source: x or y held fixed.
struct PlaneSpec {
  char axis = 'y';           // coordinate held fixed
  std::optional<double> value;  // defaults to the source coordinate
  double lo = 0.0, hi = 100.0;  // horizontal extent along the other axis
  int horizontal_points = 201;
  int depth_points = 101;
};

PlaneSpec parse_plane(const std::string& spec);

std::map<std::string, std::string> emit_field(const Scenario& s, const PlaneSpec& plane);

// Writes every file into dir (created if needed).
void write_files(const std::string& dir, const std::map<std::string, std::string>& files);

}  // namespace oceansrc
