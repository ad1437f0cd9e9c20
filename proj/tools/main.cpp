#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "oceansrc/error.hpp"
#include "oceansrc/locator.hpp"
#include "oceansrc/scenario.hpp"

namespace {

using oceansrc::Scenario;

Scenario resolve(const std::string& config, const std::string& preset, bool paper_scale,
                 std::optional<std::uint64_t> seed) {
  Scenario s;
  if (!preset.empty()) {
    s = oceansrc::make_preset(preset, paper_scale);
  } else {
    std::ifstream in(config);
    if (!in) throw oceansrc::ConfigError(0, "cannot open config file '" + config + "'");
    s = oceansrc::load_scenario(in);
    if (paper_scale) oceansrc::apply_scale(s, true);
  }
  if (seed) s.seed = *seed;
  s.validate();
  return s;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source localization in a three-layer ocean waveguide"};
  app.require_subcommand(1);
  app.set_version_flag("--version", oceansrc::library_version());

  std::string config, preset, out_dir = "out", plane_spec = "y";
  bool paper_scale = false;
  std::optional<std::uint64_t> seed;
  std::size_t profile_count = 20;

  auto add_common = [&](CLI::App* cmd, bool allow_preset) {
    auto* cfg = cmd->add_option("config", config, "Scenario config file");
    if (allow_preset) {
      auto* p = cmd->add_option("--preset", preset, "Built-in scenario (example1..example4)");
      cfg->excludes(p);
      p->check(CLI::IsMember(oceansrc::preset_names()));
    } else {
      cfg->required();
    }
    cmd->add_flag("--paper-scale", paper_scale, "Use the fine forward mesh (cell 1/15, mode tolerance 1e-8)");
    cmd->add_option("--seed", seed, "Root random seed");
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  };

  auto* run = app.add_subcommand("run", "Synthesize data and locate the source");
  add_common(run, true);
  auto* modes = app.add_subcommand("modes", "Write the modal spectrum and sampled mode profiles");
  add_common(modes, true);
  modes->add_option("--profiles", profile_count, "Number of mode profiles to sample")->capture_default_str();
  auto* field = app.add_subcommand("field", "Write a vertical slice of the point-source field");
  add_common(field, true);
  field->add_option("--plane", plane_spec,
                    "axis[=value][,lo:hi][,NxM], e.g. y=0,-50:50,201x101")->capture_default_str();
  app.add_subcommand("presets", "List the built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version report success; every usage error exits with 2.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("presets")) {
      for (const auto& n : oceansrc::preset_names()) std::cout << n << '\n';
      return 0;
    }
    CLI::App* cmd = app.get_subcommands().front();
    if (config.empty() && preset.empty()) {
      std::cerr << "error: give a config file or --preset\n";
      return 2;
    }
    const Scenario s = resolve(config, preset, paper_scale, seed);

    if (cmd == run) {
      const auto result = oceansrc::run_scenario(s);
      print_warnings(result.warnings);
      oceansrc::write_files(out_dir, result.files);
      const auto& loc = result.locate;
      std::cout << "scenario " << s.name << ": " << result.modes << " modes ("
                << result.propagating_modes << " propagating), forward iterations "
                << result.field.iterations << '\n';
      for (const auto& level : loc.levels) {
        std::cout << "level " << level.level << ": " << level.cells.size() << " cells, "
                  << level.vertices.size() << " vertices, " << level.evaluations
                  << " new evaluations\n";
      }
      std::vector<oceansrc::Point3> pts;
      for (const auto& v : loc.output) pts.push_back(v.position);
      const bool hit = oceansrc::inside_padded_hull(s.source, pts, loc.final_cell_size);
      std::cout << "output vertices " << loc.output.size() << ", total evaluations "
                << loc.total_evaluations << " of "
                << oceansrc::full_grid_vertex_count(s.region) << " grid vertices, "
                << (hit ? "true source inside" : "true source outside")
                << " the padded hull, " << loc.wall_seconds << " s\n";
      std::cout << "wrote " << out_dir << '\n';
      return loc.budget_exceeded ? 3 : 0;
    }
    if (cmd == modes) {
      const auto listing = oceansrc::list_modes(s, profile_count);
      print_warnings(listing.basis.warnings);
      oceansrc::write_files(out_dir, listing.files);
      std::cout << listing.basis.modes.size() << " modes ("
                << listing.basis.propagating_count() << " propagating); wrote " << out_dir
                << '\n';
      return 0;
    }
    if (cmd == field) {
      const auto files = oceansrc::emit_field(s, oceansrc::parse_plane(plane_spec));
      oceansrc::write_files(out_dir, files);
      std::cout << "wrote " << out_dir << "/field.csv\n";
      return 0;
    }
  } catch (const oceansrc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
