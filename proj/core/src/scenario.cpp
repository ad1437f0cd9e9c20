#include "oceansrc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "oceansrc/error.hpp"
#include "oceansrc/green.hpp"
#include "oceansrc/numeric_io.hpp"

#ifndef OCEANSRC_VERSION
#define OCEANSRC_VERSION "0.0.0"
#endif

namespace oceansrc {

std::string library_version() { return OCEANSRC_VERSION; }

void Scenario::validate() const {
  waveguide.validate();
  validate_inclusion(waveguide, inclusion);
  if (!(mode_tolerance > 0.0 && mode_tolerance <= 1.0)) {
    throw DomainError("mode tolerance must lie in (0, 1]");
  }
  if (r_min < 0.0) throw DomainError("r_min must be non-negative");
  if (!(cell > 0.0)) throw DomainError("forward cell size must be positive");
  if (effective_r_min() > 0.5 * cell * (1.0 + 1e-12)) {
    throw DomainError("r_min must not exceed half the forward cell size");
  }
  if (!(source.z >= 0.0 && source.z <= waveguide.depth)) {
    throw DomainError("source depth outside [0, h]");
  }
  if (inclusion.box.contains(source)) throw DomainError("source lies inside the inclusion");
  validate_receivers(waveguide, inclusion.box, receivers);
  if (!(noise >= 0.0)) throw DomainError("noise level must be non-negative");
  if (!(iteration.eps > 0.0) || iteration.max_iter < 1) {
    throw DomainError("forward iteration needs eps > 0 and max_iter >= 1");
  }
  region.validate();
  if (region.box.lo.z < 0.0 || region.box.hi.z > waveguide.depth) {
    throw DomainError("sampling region must lie within the waveguide depth");
  }
}

namespace {

std::string fmt(double v) { return format_double(v); }

std::string fmt3(double a, double b, double c) { return fmt(a) + ", " + fmt(b) + ", " + fmt(c); }

std::string fmt3(const Point3& p) { return fmt3(p.x, p.y, p.z); }

std::vector<double> parse_list(const ConfigEntry& e, std::size_t count) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const auto comma = rest.find(',');
    const auto piece = rest.substr(0, comma);
    const auto v = parse_double(piece);
    if (!v) {
      throw ConfigError(e.line, "'" + e.key + "': invalid number '" + std::string(trim(piece)) + "'");
    }
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (out.size() != count) {
    throw ConfigError(e.line, "'" + e.key + "' expects " + std::to_string(count) + " values");
  }
  return out;
}

double parse_number(const ConfigEntry& e) { return parse_list(e, 1)[0]; }

Point3 parse_point(const ConfigEntry& e) {
  const auto v = parse_list(e, 3);
  return {v[0], v[1], v[2]};
}

std::int64_t parse_integer(const ConfigEntry& e) {
  const auto v = parse_int(e.value);
  if (!v) throw ConfigError(e.line, "'" + e.key + "' expects an integer");
  return *v;
}

std::array<double, 3> parse_triple(const ConfigEntry& e) {
  const auto v = parse_list(e, 3);
  return {v[0], v[1], v[2]};
}

}  // namespace

Scenario scenario_from_config(const ConfigDocument& doc) {
  Scenario s;
  s.receivers.positions.clear();
  std::optional<double> q4_factor;
  bool have_q4 = false;
  std::set<std::pair<std::string, std::string>> seen;

  using Handler = std::function<void(const ConfigEntry&)>;
  const std::map<std::pair<std::string, std::string>, Handler> handlers = {
      {{"scenario", "name"}, [&](const ConfigEntry& e) { s.name = e.value; }},
      {{"waveguide", "depth"}, [&](const ConfigEntry& e) { s.waveguide.depth = parse_number(e); }},
      {{"waveguide", "interface1"}, [&](const ConfigEntry& e) { s.waveguide.interface1 = parse_number(e); }},
      {{"waveguide", "interface2"}, [&](const ConfigEntry& e) { s.waveguide.interface2 = parse_number(e); }},
      {{"waveguide", "frequency"}, [&](const ConfigEntry& e) { s.waveguide.frequency = parse_number(e); }},
      {{"waveguide", "density"}, [&](const ConfigEntry& e) { s.waveguide.density = parse_triple(e); }},
      {{"waveguide", "speed"}, [&](const ConfigEntry& e) { s.waveguide.speed = parse_triple(e); }},
      {{"waveguide", "index"}, [&](const ConfigEntry& e) { s.waveguide.index = parse_triple(e); }},
      {{"modes", "tolerance"}, [&](const ConfigEntry& e) { s.mode_tolerance = parse_number(e); }},
      {{"modes", "r_min"}, [&](const ConfigEntry& e) { s.r_min = parse_number(e); }},
      {{"inclusion", "lo"}, [&](const ConfigEntry& e) { s.inclusion.box.lo = parse_point(e); }},
      {{"inclusion", "hi"}, [&](const ConfigEntry& e) { s.inclusion.box.hi = parse_point(e); }},
      {{"inclusion", "q4"}, [&](const ConfigEntry& e) { s.inclusion.q4 = parse_number(e); have_q4 = true; }},
      {{"inclusion", "q4_factor"}, [&](const ConfigEntry& e) { q4_factor = parse_number(e); }},
      {{"inclusion", "rho4"}, [&](const ConfigEntry& e) { s.inclusion.rho4 = parse_number(e); }},
      {{"source", "position"}, [&](const ConfigEntry& e) { s.source = parse_point(e); }},
      {{"receivers", "point"}, [&](const ConfigEntry& e) { s.receivers.positions.push_back(parse_point(e)); }},
      {{"noise", "delta"}, [&](const ConfigEntry& e) { s.noise = parse_number(e); }},
      {{"noise", "seed"}, [&](const ConfigEntry& e) {
         const auto v = parse_uint(e.value);
         if (!v) throw ConfigError(e.line, "'seed' expects a non-negative integer");
         s.seed = *v;
       }},
      {{"forward", "cell"}, [&](const ConfigEntry& e) { s.cell = parse_number(e); }},
      {{"forward", "eps"}, [&](const ConfigEntry& e) { s.iteration.eps = parse_number(e); }},
      {{"forward", "max_iter"}, [&](const ConfigEntry& e) { s.iteration.max_iter = static_cast<int>(parse_integer(e)); }},
      {{"locator", "lo"}, [&](const ConfigEntry& e) { s.region.box.lo = parse_point(e); }},
      {{"locator", "hi"}, [&](const ConfigEntry& e) { s.region.box.hi = parse_point(e); }},
      {{"locator", "s0"}, [&](const ConfigEntry& e) { s.region.s0 = parse_number(e); }},
      {{"locator", "cutoff"}, [&](const ConfigEntry& e) { s.region.cutoff = parse_number(e); }},
      {{"locator", "levels"}, [&](const ConfigEntry& e) { s.region.levels = static_cast<int>(parse_integer(e)); }},
      {{"locator", "budget"}, [&](const ConfigEntry& e) {
         const auto v = parse_integer(e);
         if (v < 1) throw ConfigError(e.line, "'budget' must be positive");
         s.region.budget = static_cast<std::size_t>(v);
       }},
  };

  for (const auto& e : doc.entries()) {
    if (e.section == "manifest") continue;
    const auto id = std::make_pair(e.section, e.key);
    const auto it = handlers.find(id);
    if (it == handlers.end()) {
      throw ConfigError(e.line, "unknown key '" + e.key + "' in section [" + e.section + "]");
    }
    if (!(e.section == "receivers" && e.key == "point") && !seen.insert(id).second) {
      throw ConfigError(e.line, "duplicate key '" + e.key + "' in section [" + e.section + "]");
    }
    it->second(e);
  }
  if (q4_factor) {
    if (have_q4) throw ConfigError(0, "give either q4 or q4_factor, not both");
    const int layer = s.waveguide.layer_of(s.inclusion.box.center().z);
    s.inclusion.q4 = *q4_factor * s.waveguide.q(layer);
  }
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(0, std::string("inconsistent scenario: ") + e.what());
  }
  return s;
}

Scenario load_scenario(std::istream& in) { return scenario_from_config(ConfigDocument::parse(in)); }

ConfigDocument scenario_to_config(const Scenario& s) {
  ConfigDocument d;
  d.add("scenario", "name", s.name);
  const auto& w = s.waveguide;
  d.add("waveguide", "depth", fmt(w.depth));
  d.add("waveguide", "interface1", fmt(w.interface1));
  d.add("waveguide", "interface2", fmt(w.interface2));
  d.add("waveguide", "frequency", fmt(w.frequency));
  d.add("waveguide", "density", fmt3(w.density[0], w.density[1], w.density[2]));
  d.add("waveguide", "speed", fmt3(w.speed[0], w.speed[1], w.speed[2]));
  d.add("waveguide", "index", fmt3(w.index[0], w.index[1], w.index[2]));
  d.add("modes", "tolerance", fmt(s.mode_tolerance));
  d.add("modes", "r_min", fmt(s.r_min));
  d.add("inclusion", "lo", fmt3(s.inclusion.box.lo));
  d.add("inclusion", "hi", fmt3(s.inclusion.box.hi));
  d.add("inclusion", "q4", fmt(s.inclusion.q4));
  d.add("inclusion", "rho4", fmt(s.inclusion.rho4));
  d.add("source", "position", fmt3(s.source));
  for (const auto& p : s.receivers.positions) d.add("receivers", "point", fmt3(p));
  d.add("noise", "delta", fmt(s.noise));
  d.add("noise", "seed", std::to_string(s.seed));
  d.add("forward", "cell", fmt(s.cell));
  d.add("forward", "eps", fmt(s.iteration.eps));
  d.add("forward", "max_iter", std::to_string(s.iteration.max_iter));
  d.add("locator", "lo", fmt3(s.region.box.lo));
  d.add("locator", "hi", fmt3(s.region.box.hi));
  d.add("locator", "s0", fmt(s.region.s0));
  d.add("locator", "cutoff", fmt(s.region.cutoff));
  d.add("locator", "levels", std::to_string(s.region.levels));
  d.add("locator", "budget", std::to_string(s.region.budget));
  return d;
}

std::string scenario_manifest(const Scenario& s) {
  ConfigDocument d = scenario_to_config(s);
  d.add("manifest", "version", library_version());
  d.add("manifest", "root_seed", std::to_string(s.seed));
  std::ostringstream out;
  out << "# oceansrc run manifest; rerun with: oceansrc run <this file>\n";
  d.write(out);
  return out.str();
}

std::vector<std::string> preset_names() {
  return {"example1", "example1-r11", "example2", "example2-r21",
          "example3", "example4",     "example4-r41"};
}

void apply_scale(Scenario& s, bool paper_scale) {
  s.cell = paper_scale ? 1.0 / 15.0 : 1.0 / 3.0;
  s.mode_tolerance = paper_scale ? 1e-8 : 1e-6;
  s.r_min = 0.0;
}

Scenario make_preset(const std::string& name, bool paper_scale) {
  Scenario s;
  s.name = name;
  const WaveguideConfig& w = s.waveguide;
  s.inclusion.box = {{32, 32, 42}, {34, 34, 44}};
  s.inclusion.q4 = 1.1 * w.q(1);
  s.inclusion.rho4 = w.density[1];
  s.source = {18, 18, 25};
  s.noise = 0.1;
  s.seed = 1;
  s.iteration.eps = 1e-3;
  s.iteration.max_iter = 200;
  s.region.s0 = 4.0;
  s.region.cutoff = 0.95;
  s.region.levels = 3;
  // [10, 40] does not split into cells of side 4; the last whole cell ends at 38.
  s.region.box = {{10, 10, 10}, {38, 38, 38}};

  auto line = [&](double x, double y0, double z) {
    s.receivers.positions.clear();
    for (int n = 0; n < 5; ++n) s.receivers.positions.push_back({x, y0 + 5.0 * n, z});
  };
  if (name == "example1") {
    line(10, 10, 90);
  } else if (name == "example1-r11") {
    line(70, 10, 90);
  } else if (name == "example2") {
    line(60, 60, 40);
  } else if (name == "example2-r21") {
    line(60, 60, 60);
  } else if (name == "example3") {
    line(60, 60, 30);
  } else if (name == "example4" || name == "example4-r41") {
    s.source = {18, 18, 45};
    s.inclusion.box = {{46, 32, 42}, {48, 34, 44}};
    s.region.box = {{10, 10, 25}, {38, 38, 53}};
    line(60, 60, name == "example4" ? 80 : 90);
  } else {
    throw ConfigError(0, "unknown preset '" + name + "'");
  }
  apply_scale(s, paper_scale);
  s.validate();
  return s;
}

RunOutputs run_scenario(const Scenario& s) {
  s.validate();
  RunOutputs out;
  auto basis = std::make_shared<const ModalBasis>(
      find_modes(s.waveguide, s.effective_r_min(), s.mode_tolerance));
  out.modes = basis->modes.size();
  out.propagating_modes = basis->propagating_count();
  out.warnings = basis->warnings;
  auto green = std::make_shared<const GreenFunction>(basis);
  auto kernel = std::make_shared<const InteractionKernel>(
      green, make_volume_mesh(s.waveguide, s.inclusion, s.cell));
  auto synth = std::make_shared<const ScatterSynthesizer>(kernel, s.receivers, s.iteration);

  out.clean.receivers = s.receivers.positions;
  out.clean.values = synth->synthesize(s.source, &out.field);
  if (!out.field.converged) {
    throw ConvergenceError("forward iteration did not reach eps within max_iter for the true source");
  }
  out.data = add_noise(out.clean, s.noise, s.seed);

  const WaveguideForwardModel model(synth);
  out.locate = multilevel_locate(s.region, out.data, model);
  if (out.locate.budget_exceeded) {
    out.warnings.push_back("forward-solve budget exceeded; result is partial");
  }

  std::ostringstream data_csv, data_txt, loc_txt, loc_csv;
  write_record_csv(out.data, data_csv);
  write_record_text(out.data, data_txt);
  write_locate_text(out.locate, s.region, loc_txt);
  write_locate_csv(out.locate, loc_csv);
  out.files["data.csv"] = data_csv.str();
  out.files["data.txt"] = data_txt.str();
  out.files["locate.txt"] = loc_txt.str();
  out.files["locate.csv"] = loc_csv.str();
  out.files["manifest.ini"] = scenario_manifest(s);
  return out;
}

ModeListing list_modes(const Scenario& s, std::size_t profile_count, int depth_samples) {
  s.waveguide.validate();
  ModeListing out{find_modes(s.waveguide, s.effective_r_min(), s.mode_tolerance), {}};
  std::ostringstream table, profiles;
  write_mode_table_csv(out.basis, table);
  std::vector<double> depths(static_cast<std::size_t>(std::max(depth_samples, 2)));
  for (std::size_t i = 0; i < depths.size(); ++i) {
    depths[i] = s.waveguide.depth * static_cast<double>(i) / static_cast<double>(depths.size() - 1);
  }
  write_mode_profiles_csv(out.basis, depths, profile_count, profiles);
  out.files["modes.csv"] = table.str();
  out.files["profiles.csv"] = profiles.str();
  return out;
}

PlaneSpec parse_plane(const std::string& spec) {
  // axis=value[,lo:hi][,NxM]  e.g. "y=0,-50:50,201x101" or "x" (through the source).
  PlaneSpec p;
  std::string_view rest = trim(spec);
  if (rest.empty() || (rest[0] != 'x' && rest[0] != 'y')) {
    throw ConfigError(0, "plane must start with 'x' or 'y'");
  }
  p.axis = rest[0];
  rest.remove_prefix(1);
  auto next_field = [&]() {
    const auto comma = rest.find(',');
    std::string_view f = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    return trim(f);
  };
  std::string_view head = next_field();
  if (!head.empty()) {
    if (head[0] != '=') throw ConfigError(0, "expected '=' after the plane axis");
    const auto v = parse_double(head.substr(1));
    if (!v) throw ConfigError(0, "invalid plane coordinate");
    p.value = *v;
  }
  while (!rest.empty()) {
    const std::string_view f = next_field();
    if (const auto colon = f.find(':'); colon != std::string_view::npos) {
      const auto lo = parse_double(f.substr(0, colon));
      const auto hi = parse_double(f.substr(colon + 1));
      if (!lo || !hi || !(*lo < *hi)) throw ConfigError(0, "invalid plane extent");
      p.lo = *lo;
      p.hi = *hi;
    } else if (const auto x = f.find('x'); x != std::string_view::npos) {
      const auto n = parse_int(f.substr(0, x));
      const auto m = parse_int(f.substr(x + 1));
      if (!n || !m || *n < 2 || *m < 2) throw ConfigError(0, "invalid plane resolution");
      p.horizontal_points = static_cast<int>(*n);
      p.depth_points = static_cast<int>(*m);
    } else {
      throw ConfigError(0, "unrecognised plane field '" + std::string(f) + "'");
    }
  }
  return p;
}

std::map<std::string, std::string> emit_field(const Scenario& s, const PlaneSpec& plane) {
  s.waveguide.validate();
  if (!(s.source.z >= 0.0 && s.source.z <= s.waveguide.depth)) {
    throw DomainError("source depth outside [0, h]");
  }
  auto basis = std::make_shared<const ModalBasis>(
      find_modes(s.waveguide, s.effective_r_min(), s.mode_tolerance));
  const GreenFunction g(basis);
  const double fixed = plane.value.value_or(plane.axis == 'x' ? s.source.x : s.source.y);
  std::ostringstream out;
  out << "x,y,z,re,im,abs\n";
  for (int j = 0; j < plane.depth_points; ++j) {
    const double z = s.waveguide.depth * j / (plane.depth_points - 1);
    for (int i = 0; i < plane.horizontal_points; ++i) {
      const double t = plane.lo + (plane.hi - plane.lo) * i / (plane.horizontal_points - 1);
      const Point3 x = plane.axis == 'x' ? Point3{fixed, t, z} : Point3{t, fixed, z};
      // The source column itself is evaluated at the mollified radius r_min.
      const cplx v = g.mollified(x, s.source, basis->r_min);
      for (double c : {x.x, x.y, x.z, v.real(), v.imag()}) {
        write_double(out, c);
        out << ',';
      }
      write_double(out, std::abs(v));
      out << '\n';
    }
  }
  return {{"field.csv", out.str()}};
}

void write_files(const std::string& dir, const std::map<std::string, std::string>& files) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [name, contents] : files) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << contents;
    if (!f) throw Error("failed writing " + path.string());
  }
}

}  // namespace oceansrc
