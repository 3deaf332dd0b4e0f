#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclemit/core_model.hpp"
#include "cyclemit/presets.hpp"
#include "cyclemit/spectrum.hpp"

namespace cyclemit {

inline constexpr std::string_view kVersion = "1.0.0";

enum class RunMode { Populations, Spectrum, PhaseSweep, Mixture, Validate };

std::optional<RunMode> parse_mode(std::string_view name);
std::string to_string(RunMode mode);

/// Parses "pi/2", "3pi/2", "3*pi/2", "-pi", "2 * pi / 3" or a plain number.
double parse_angle(std::string_view text);

/// Everything one run needs. Populated from a key = value file whose keys
/// match the SystemParams field names.
struct RunConfig {
  std::optional<RunMode> mode;
  std::optional<presets::Figure> preset;

  SystemParams params;
  /// One of a, b, c: the level initially occupied.
  char initial_level = 'b';

  double n_left = 0.0;
  double n_right = 0.0;

  std::optional<Window> window;
  std::optional<std::size_t> points;
  double t_end = 5.0;
  double delta_k = 0.0;

  AmplitudeVector initial() const;
};

/// Parses configuration text; every bad line is reported as "key: message"
/// in one ValidationError.
RunConfig parse_config(std::string_view text);

/// "LO:HI".
Window parse_window(std::string_view text);

/// Column-oriented numeric table; the first column is the independent variable.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  /// Optional text labels replacing the first column (validation reports).
  std::vector<std::string> row_labels;
};

/// Header line, then rows with 12 significant digits.
std::string to_csv(const Table& table);

struct RunOutput {
  Table table;
  /// Key-value sidecar: the full input echo plus info.* result keys.
  std::string sidecar;
  /// Human-readable summary lines.
  std::vector<std::string> messages;
  std::vector<std::string> warnings;
  /// False when a validation check failed (exit code 3).
  bool checks_passed = true;
};

/// Runs a mode or, when config.preset is set, the figure preset.
RunOutput run_config(const RunConfig& config);

RunOutput run_preset(presets::Figure figure, std::optional<std::size_t> points = std::nullopt,
                     std::optional<Window> window = std::nullopt);

/// Writes <out> and <out>.meta. Refuses to replace existing files unless force.
void write_outputs(const RunOutput& output, const std::filesystem::path& out, bool force);

std::filesystem::path sidecar_path(const std::filesystem::path& out);

}  // namespace cyclemit
