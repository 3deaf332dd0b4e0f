#include "cyclemit/run_config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cyclemit/chirality.hpp"
#include "cyclemit/dynamics.hpp"
#include "cyclemit/errors.hpp"

namespace cyclemit {

namespace {

constexpr std::size_t kDefaultTimeSamples = 1000;
constexpr std::size_t kDefaultPhasePoints = 361;
constexpr double kNormalizationTolerance = 0.02;
constexpr double kDkTolerance = 1e-6;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_number(std::string_view text, const std::string& field) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ValidationError(field, "expected a number, got '" + t + "'");
  return value;
}

std::size_t parse_count(std::string_view text, const std::string& field) {
  const std::string t = trim(text);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ValidationError(field, "expected a non-negative integer, got '" + t + "'");
  return value;
}

std::string format_value(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Round-trip exact representation for the sidecar.
std::string exact(double v) { return format_value(v, 17); }

std::string phase_label(double phi) {
  if (std::abs(phi - kPi / 2.0) < 1e-12) return "pi_2";
  if (std::abs(phi - 3.0 * kPi / 2.0) < 1e-12) return "3pi_2";
  return format_value(phi, 6);
}

class Sidecar {
 public:
  void put(const std::string& key, const std::string& value) {
    out_ << key << " = " << value << '\n';
  }
  void put(const std::string& key, double value) { put(key, exact(value)); }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

void echo_grid_controls(Sidecar& sc, std::optional<std::size_t> points,
                        const std::optional<Window>& window) {
  if (points) sc.put("points", std::to_string(*points));
  if (window) sc.put("window", exact(window->lo) + ":" + exact(window->hi));
}

void echo_config(Sidecar& sc, const RunConfig& config) {
  sc.put("mode", to_string(*config.mode));
  const SystemParams& p = config.params;
  sc.put("gamma_a", p.gamma_a);
  sc.put("gamma_b", p.gamma_b);
  sc.put("gamma_c", p.gamma_c);
  sc.put("omega_ab_rabi", p.omega_ab_rabi);
  sc.put("omega_bc_rabi", p.omega_bc_rabi);
  sc.put("omega_ca_rabi", p.omega_ca_rabi);
  sc.put("delta_ab", p.delta_ab);
  sc.put("delta_ca", p.delta_ca);
  sc.put("phi", p.phi);
  sc.put("omega_ab_split", p.omega_ab_split);
  sc.put("omega_ca_split", p.omega_ca_split);
  sc.put("topology", to_string(p.topology));
  sc.put("p_ab", p.p_ab);
  sc.put("p_cb", p.p_cb);
  sc.put("p_ca", p.p_ca);
  sc.put("initial", std::string(1, config.initial_level));
  sc.put("n_left", config.n_left);
  sc.put("n_right", config.n_right);
  sc.put("t_end", config.t_end);
  sc.put("delta_k", config.delta_k);
  echo_grid_controls(sc, config.points, config.window);
  sc.put("info.version", std::string(kVersion));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw ValidationError("points", "need at least two samples");
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = j + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1);
  return out;
}

// Union of the refined grids of several parameter sets (the refinement bands
// depend on each set's dressed linewidths).
std::vector<double> shared_detunings(const std::vector<SystemParams>& sets, const Window& window,
                                     std::size_t points) {
  std::vector<double> merged;
  for (const auto& p : sets) {
    auto d = refined_detunings(p, window, points);
    merged.insert(merged.end(), d.begin(), d.end());
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return merged;
}

void add_population_columns(Table& table, const Trajectory& traj, const std::string& suffix) {
  std::array<std::vector<double>, 3> pops;
  for (auto& col : pops) col.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto p = traj.populations(i);
    for (int k = 0; k < 3; ++k) pops[k].push_back(p[k]);
  }
  const char* names[3] = {"A2", "B2", "C2"};
  for (int k = 0; k < 3; ++k) {
    table.header.push_back(std::string(names[k]) + suffix);
    table.columns.push_back(std::move(pops[k]));
  }
}

RunOutput run_populations(const RunConfig& config) {
  const std::size_t n = config.points.value_or(kDefaultTimeSamples);
  const std::vector<double> times = uniform_times(config.t_end, n);
  const Trajectory traj = evolve_exact(config.params, config.initial(), times);

  RunOutput out;
  out.table.header = {"t"};
  out.table.columns = {times};
  add_population_columns(out.table, traj, "");
  Sidecar sc;
  echo_config(sc, config);
  sc.put("info.method", to_string(traj.method));
  sc.put("info.eigenvector_condition", format_value(traj.eigenvector_condition, 12));
  out.sidecar = sc.str();
  out.messages.push_back("populations: " + std::to_string(n) + " samples over [0, " +
                         format_value(config.t_end, 6) + "], method " + to_string(traj.method));
  return out;
}

RunOutput run_spectrum(const RunConfig& config) {
  const SpectrumGrid grid = compute_spectrum(config.params, config.initial(), config.window,
                                             config.points.value_or(kDefaultSpectrumPoints));
  const double norm = spectrum_normalization(grid);

  RunOutput out;
  out.table.header = {"delta_k", "S_" + to_string(config.params.topology)};
  out.table.columns = {grid.detunings, grid.values};
  Sidecar sc;
  echo_config(sc, config);
  sc.put("info.method", std::string("resolvent"));
  sc.put("info.grid_points", std::to_string(grid.size()));
  sc.put("info.normalization", format_value(norm, 12));
  out.sidecar = sc.str();
  out.messages.push_back("spectrum: " + std::to_string(grid.size()) +
                         " points, integral of S = " + format_value(norm, 8));
  return out;
}

RunOutput run_phase_sweep(const RunConfig& config) {
  const std::vector<double> phis =
      linspace(0.0, 2.0 * kPi, config.points.value_or(kDefaultPhasePoints));
  const auto sweep = phase_sweep(config.params, config.initial(), config.delta_k, phis);

  RunOutput out;
  out.table.header = {"phi", "S"};
  out.table.columns = {phis, {}};
  for (const auto& s : sweep) out.table.columns[1].push_back(s.value);
  Sidecar sc;
  echo_config(sc, config);
  sc.put("info.method", std::string("resolvent"));
  out.sidecar = sc.str();
  out.messages.push_back("phase sweep: " + std::to_string(phis.size()) + " phases at delta_k = " +
                         format_value(config.delta_k, 8));
  return out;
}

RunOutput run_mixture(const RunConfig& config) {
  const double drive = config.params.phi;
  const SpectrumGrid grid =
      mixture_spectrum(config.n_left, config.n_right, drive, config.params, config.initial(),
                       config.window, config.points.value_or(kDefaultSpectrumPoints));
  const MixtureReport report =
      assay_mixture(config.n_left, config.n_right, drive, config.params, config.initial());

  RunOutput out;
  out.table.header = {"delta_k", "S_mixture"};
  out.table.columns = {grid.detunings, grid.values};
  Sidecar sc;
  echo_config(sc, config);
  sc.put("info.method", std::string("resolvent"));
  sc.put("info.s_at_cd", format_value(report.s_at_cd, 12));
  sc.put("info.s_at_ad", format_value(report.s_at_ad, 12));
  sc.put("info.eta", format_value(report.eta, 12));
  sc.put("info.epsilon_est", format_value(report.epsilon_est, 12));
  if (report.epsilon_true) sc.put("info.epsilon_true", format_value(*report.epsilon_true, 12));
  out.sidecar = sc.str();
  out.messages.push_back("mixture: S_M(cd) = " + format_value(report.s_at_cd, 8) +
                         ", S_M(ad) = " + format_value(report.s_at_ad, 8) +
                         ", eta = " + format_value(report.eta, 10));
  out.messages.push_back("epsilon_est = " + format_value(report.epsilon_est, 8) +
                         ", epsilon_true = " + format_value(report.epsilon_true.value_or(NAN), 8));
  return out;
}

RunOutput run_validate(const RunConfig& config) {
  const AmplitudeVector initial = config.initial();
  const RegimeReport regime = validate_regime(config.params);
  const SpectrumGrid grid = compute_spectrum(config.params, initial, config.window,
                                             config.points.value_or(kDefaultSpectrumPoints));
  const double norm = spectrum_normalization(grid);
  const double norm_error = std::abs(norm - initial.norm_squared());
  const double dk = dk_consistency(config.params, initial, config.delta_k);

  RunOutput out;
  out.table.header = {"check", "value", "limit", "pass"};
  out.table.row_labels = {"regime_ratio", "normalization", "dk_consistency"};
  out.table.columns = {{regime.ratio, norm, dk},
                       {regime.threshold, kNormalizationTolerance, kDkTolerance},
                       {regime.valid ? 1.0 : 0.0, norm_error <= kNormalizationTolerance ? 1.0 : 0.0,
                        dk < kDkTolerance ? 1.0 : 0.0}};
  out.checks_passed = norm_error <= kNormalizationTolerance && dk < kDkTolerance;
  if (!regime.valid)
    out.warnings.push_back("regime ratio " + format_value(regime.ratio, 6) +
                           " exceeds threshold " + format_value(regime.threshold, 3));

  Sidecar sc;
  echo_config(sc, config);
  sc.put("info.method", std::string("resolvent+eigendecomposition"));
  sc.put("info.normalization", format_value(norm, 12));
  sc.put("info.dk_consistency", format_value(dk, 12));
  sc.put("info.regime_ratio", format_value(regime.ratio, 12));
  sc.put("info.checks_passed", out.checks_passed ? "true" : "false");
  out.sidecar = sc.str();
  out.messages.push_back("normalization integral = " + format_value(norm, 8) + " (target " +
                         format_value(initial.norm_squared(), 6) + " +- 0.02)");
  out.messages.push_back("dk_consistency = " + format_value(dk, 6) + " (limit 1e-6)");
  out.messages.push_back(std::string("validation ") + (out.checks_passed ? "passed" : "FAILED"));
  return out;
}

}  // namespace

std::optional<RunMode> parse_mode(std::string_view name) {
  if (name == "populations") return RunMode::Populations;
  if (name == "spectrum") return RunMode::Spectrum;
  if (name == "phase_sweep") return RunMode::PhaseSweep;
  if (name == "mixture") return RunMode::Mixture;
  if (name == "validate") return RunMode::Validate;
  return std::nullopt;
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Populations: return "populations";
    case RunMode::Spectrum: return "spectrum";
    case RunMode::PhaseSweep: return "phase_sweep";
    case RunMode::Mixture: return "mixture";
    case RunMode::Validate: return "validate";
  }
  return "unknown";
}

double parse_angle(std::string_view text) {
  std::string t;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  const auto pi_at = t.find("pi");
  if (pi_at == std::string::npos) return parse_number(t, "phi");

  std::string coeff = t.substr(0, pi_at);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  double factor = 1.0;
  if (coeff == "-") factor = -1.0;
  else if (coeff == "+" || coeff.empty()) factor = 1.0;
  else factor = parse_number(coeff[0] == '+' ? coeff.substr(1) : coeff, "phi");

  const std::string rest = t.substr(pi_at + 2);
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') throw ValidationError("phi", "cannot parse angle '" + std::string(text) + "'");
    divisor = parse_number(rest.substr(1), "phi");
    if (divisor == 0.0) throw ValidationError("phi", "division by zero");
  }
  return factor * kPi / divisor;
}

Window parse_window(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ValidationError("window", "expected LO:HI");
  Window w{parse_number(text.substr(0, colon), "window"),
           parse_number(text.substr(colon + 1), "window")};
  if (!(w.lo < w.hi)) throw ValidationError("window", "LO must be below HI");
  return w;
}

AmplitudeVector RunConfig::initial() const {
  switch (initial_level) {
    case 'a': return AmplitudeVector::level_a();
    case 'c': return AmplitudeVector::level_c();
    default: return AmplitudeVector::level_b();
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::vector<std::string> problems;
  std::map<std::string, int> seen;

  std::map<std::string, double*> numeric = {
      {"gamma_a", &config.params.gamma_a},
      {"gamma_b", &config.params.gamma_b},
      {"gamma_c", &config.params.gamma_c},
      {"omega_ab_rabi", &config.params.omega_ab_rabi},
      {"omega_bc_rabi", &config.params.omega_bc_rabi},
      {"omega_ca_rabi", &config.params.omega_ca_rabi},
      {"delta_ab", &config.params.delta_ab},
      {"delta_ca", &config.params.delta_ca},
      {"omega_ab_split", &config.params.omega_ab_split},
      {"omega_ca_split", &config.params.omega_ca_split},
      {"p_ab", &config.params.p_ab},
      {"p_cb", &config.params.p_cb},
      {"p_ca", &config.params.p_ca},
      {"n_left", &config.n_left},
      {"n_right", &config.n_right},
      {"t_end", &config.t_end},
      {"delta_k", &config.delta_k},
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.rfind("info.", 0) == 0) continue;
    if (seen[key]++ > 0) {
      problems.push_back(key + ": given more than once");
      continue;
    }
    try {
      if (auto it = numeric.find(key); it != numeric.end()) {
        *it->second = parse_number(value, key);
      } else if (key == "phi") {
        config.params.phi = parse_angle(value);
      } else if (key == "mode") {
        config.mode = parse_mode(value);
        if (!config.mode)
          throw ValidationError(key, "unknown mode '" + value +
                                         "' (populations, spectrum, phase_sweep, mixture, validate)");
      } else if (key == "preset") {
        config.preset = presets::parse_figure(value);
        if (!config.preset)
          throw ValidationError(key, "unknown preset '" + value + "' (fig2, fig3, fig5, fig6a, fig6b)");
      } else if (key == "topology") {
        if (value == "common") config.params.topology = Topology::CommonLower;
        else if (value == "distinct") config.params.topology = Topology::DistinctLower;
        else throw ValidationError(key, "expected common or distinct");
      } else if (key == "initial") {
        if (value != "a" && value != "b" && value != "c")
          throw ValidationError(key, "expected a, b or c");
        config.initial_level = value[0];
      } else if (key == "window") {
        config.window = parse_window(value);
      } else if (key == "points") {
        config.points = parse_count(value, key);
      } else {
        throw ValidationError(key, "unknown key");
      }
    } catch (const ValidationError& e) {
      problems.push_back(e.what());
    }
  }

  if (!config.mode && !config.preset)
    problems.push_back("mode: missing (or name a preset)");
  if (config.mode && config.preset) problems.push_back("preset: cannot be combined with mode");
  if (!config.preset) {
    try {
      config.params.validate();
    } catch (const ValidationError& e) {
      problems.push_back(e.what());
    }
  }
  if (config.points && *config.points < 2) problems.push_back("points: need at least two");
  if (config.mode == RunMode::Mixture) {
    if (config.n_left < 0.0) problems.push_back("n_left: must be non-negative");
    if (config.n_right < 0.0) problems.push_back("n_right: must be non-negative");
    if (!(config.n_left + config.n_right > 0.0))
      problems.push_back("n_left: mixture needs n_left + n_right > 0");
    if (config.params.topology != Topology::CommonLower)
      problems.push_back("topology: mixture mode uses one common lower level");
  }
  if (config.mode == RunMode::Populations && !(config.t_end > 0.0))
    problems.push_back("t_end: must be positive");

  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    throw ValidationError("config", "\n" + msg);
  }
  return config;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k) out += ',';
    out += table.header[k];
  }
  out += '\n';
  const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  const bool labelled = !table.row_labels.empty();
  for (std::size_t r = 0; r < rows; ++r) {
    if (labelled) out += table.row_labels[r];
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
      if (k || labelled) out += ',';
      out += format_value(table.columns[k][r], 12);
    }
    out += '\n';
  }
  return out;
}

RunOutput run_config(const RunConfig& config) {
  if (config.preset) return run_preset(*config.preset, config.points, config.window);
  if (!config.mode) throw ValidationError("mode", "missing");
  switch (*config.mode) {
    case RunMode::Populations: return run_populations(config);
    case RunMode::Spectrum: return run_spectrum(config);
    case RunMode::PhaseSweep: return run_phase_sweep(config);
    case RunMode::Mixture: return run_mixture(config);
    case RunMode::Validate: return run_validate(config);
  }
  throw ValidationError("mode", "unhandled");
}

RunOutput run_preset(presets::Figure figure, std::optional<std::size_t> points,
                     std::optional<Window> window) {
  using presets::Figure;
  RunOutput out;
  Table& table = out.table;
  const AmplitudeVector initial = AmplitudeVector::level_b();
  std::string method = "resolvent";

  switch (figure) {
    case Figure::Fig2: {
      const auto times = uniform_times(5.0, points.value_or(kDefaultTimeSamples));
      table.header = {"t"};
      table.columns = {times};
      for (double phi : {kPi / 2.0, 3.0 * kPi / 2.0}) {
        const Trajectory traj = evolve_exact(presets::nonreciprocal(phi), initial, times);
        method = to_string(traj.method);
        const std::string suffix = "_phi_" + phase_label(phi);
        Table tmp;
        add_population_columns(tmp, traj, suffix);
        // Figure shows |A|^2 and |B|^2 only.
        for (int k = 0; k < 2; ++k) {
          table.header.push_back(tmp.header[k]);
          table.columns.push_back(std::move(tmp.columns[k]));
        }
      }
      out.messages.push_back("fig2: populations for phi = pi/2 and 3pi/2");
      break;
    }
    case Figure::Fig3: {
      std::vector<SystemParams> sets;
      for (Topology topo : {Topology::CommonLower, Topology::DistinctLower})
        for (double phi : {kPi / 2.0, 3.0 * kPi / 2.0}) sets.push_back(presets::nonreciprocal(phi, topo));
      const Window w = window.value_or(default_window(sets.front()));
      // Validates the window against the line centers.
      for (const auto& p : sets) (void)compute_spectrum(p, initial, w, 2);
      const auto detunings = shared_detunings(sets, w, points.value_or(kDefaultSpectrumPoints));
      table.header = {"delta_k"};
      table.columns = {detunings};
      for (const auto& p : sets) {
        table.header.push_back("S_" + to_string(p.topology) + "_phi_" + phase_label(p.phi));
        table.columns.push_back(spectral_values(p, initial, detunings));
      }
      out.messages.push_back("fig3: spectra for both topologies and phi = pi/2, 3pi/2 on " +
                             std::to_string(detunings.size()) + " points");
      break;
    }
    case Figure::Fig5: {
      const auto times = uniform_times(10.0, points.value_or(kDefaultTimeSamples));
      table.header = {"t"};
      table.columns = {times};
      for (Handedness h : {Handedness::Left, Handedness::Right}) {
        const ChiralSample sample{h, kPi / 2.0, presets::chiral(0.0)};
        const Trajectory traj = evolve_exact(sample.effective_params(), initial, times);
        method = to_string(traj.method);
        add_population_columns(table, traj, h == Handedness::Left ? "_L" : "_R");
      }
      out.messages.push_back("fig5: populations for left- and right-handed molecules");
      break;
    }
    case Figure::Fig6a: {
      const SystemParams base = presets::chiral(0.0);
      const SystemParams left = ChiralSample{Handedness::Left, kPi / 2.0, base}.effective_params();
      const SystemParams right = ChiralSample{Handedness::Right, kPi / 2.0, base}.effective_params();
      const Window w = window.value_or(default_window(base));
      for (const auto& p : {left, right}) (void)compute_spectrum(p, initial, w, 2);
      const auto detunings = shared_detunings({left, right}, w, points.value_or(kDefaultSpectrumPoints));
      table.header = {"delta_k", "S_L", "S_R"};
      table.columns = {detunings, spectral_values(left, initial, detunings),
                       spectral_values(right, initial, detunings)};
      out.messages.push_back("fig6a: left/right spectra on " + std::to_string(detunings.size()) +
                             " points");
      break;
    }
    case Figure::Fig6b: {
      const auto phis = linspace(0.0, 2.0 * kPi, points.value_or(kDefaultPhasePoints));
      table.header = {"phi", "S_L", "S_R"};
      table.columns = {phis, {}, {}};
      for (double drive : phis) {
        const SystemParams base = presets::chiral(0.0);
        table.columns[1].push_back(spectral_density(
            ChiralSample{Handedness::Left, drive, base}.effective_params(), initial, 0.0));
        table.columns[2].push_back(spectral_density(
            ChiralSample{Handedness::Right, drive, base}.effective_params(), initial, 0.0));
      }
      out.messages.push_back("fig6b: phase sweep at delta_k = 0");
      break;
    }
  }

  Sidecar sc;
  sc.put("preset", presets::to_string(figure));
  echo_grid_controls(sc, points, window);
  sc.put("info.version", std::string(kVersion));
  sc.put("info.method", method);
  out.sidecar = sc.str();
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p += ".meta";
  return p;
}

void write_outputs(const RunOutput& output, const std::filesystem::path& out, bool force) {
  const auto meta = sidecar_path(out);
  if (!force) {
    for (const auto& p : {out, meta})
      if (std::filesystem::exists(p))
        throw ValidationError("out", p.string() + " exists; pass --force to overwrite");
  }
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("out", "cannot open " + p.string() + " for writing");
    f << text;
    if (!f) throw ValidationError("out", "write to " + p.string() + " failed");
  };
  write(out, to_csv(output.table));
  write(meta, "# cyclemit run metadata; rerun with --config <this file>\n" + output.sidecar);
}

}  // namespace cyclemit
