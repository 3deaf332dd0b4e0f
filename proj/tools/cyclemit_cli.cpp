// cyclemit: spectra and populations of driven cyclic three-level emitters.
//
//   cyclemit --preset fig3 --out fig3.csv
//   cyclemit --config run.cfg --out run.csv --points 50000
//
// Writes <out> (CSV) and <out>.meta (key = value, accepted back by --config).
// Without --out the CSV goes to stdout and no sidecar is written.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cyclemit/errors.hpp"
#include "cyclemit/run_config.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kNumerical = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cyclemit::ValidationError("config", "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spontaneous emission from driven cyclic three-level systems"};
  app.set_version_flag("--version", std::string(cyclemit::kVersion));

  std::string preset_name, config_path, out_path, window_text;
  std::size_t points = 0;
  bool force = false, quiet = false;

  auto* preset_opt = app.add_option("--preset", preset_name, "fig2, fig3, fig5, fig6a or fig6b");
  auto* config_opt = app.add_option("--config", config_path, "key = value configuration file");
  preset_opt->excludes(config_opt);
  app.add_option("--out", out_path, "CSV output path; a .meta sidecar is written next to it");
  app.add_flag("--force", force, "overwrite existing output");
  auto* points_opt = app.add_option("--points", points, "grid size (time samples, detunings or phases)")
                         ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  auto* window_opt = app.add_option("--window", window_text, "detuning window LO:HI");
  app.add_flag("--quiet", quiet, "suppress the summary on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cyclemit::RunConfig config;
    if (*preset_opt) {
      config.preset = cyclemit::presets::parse_figure(preset_name);
      if (!config.preset)
        throw cyclemit::ValidationError(
            "preset", "unknown preset '" + preset_name + "' (fig2, fig3, fig5, fig6a, fig6b)");
    } else if (*config_opt) {
      config = cyclemit::parse_config(read_file(config_path));
    } else {
      throw cyclemit::ValidationError("arguments", "one of --preset or --config is required");
    }
    if (*points_opt) config.points = points;
    if (*window_opt) config.window = cyclemit::parse_window(window_text);

    const cyclemit::RunOutput output = cyclemit::run_config(config);

    if (out_path.empty()) {
      std::cout << cyclemit::to_csv(output.table);
    } else {
      cyclemit::write_outputs(output, out_path, force);
    }
    for (const auto& w : output.warnings) std::cerr << "warning: " << w << '\n';
    if (!quiet) {
      for (const auto& m : output.messages) std::cerr << m << '\n';
      if (!out_path.empty())
        std::cerr << "wrote " << out_path << " and " << cyclemit::sidecar_path(out_path).string()
                  << '\n';
    }
    return output.checks_passed ? kOk : kNumerical;
  } catch (const cyclemit::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const cyclemit::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
