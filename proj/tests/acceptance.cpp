// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cyclemit/chirality.hpp"
#include "cyclemit/dynamics.hpp"
#include "cyclemit/presets.hpp"
#include "cyclemit/run_config.hpp"
#include "cyclemit/spectrum.hpp"
#include "support.hpp"

using namespace cyclemit;

namespace {

// Tolerances.
constexpr double kMinTransferRatio = 10.0;
constexpr double kFig2LowMax = 8.817576e-5;   // max |A|^2, phi = pi/2 (RK4 oracle)
constexpr double kFig2HighMax = 0.534422;     // max |A|^2, phi = 3pi/2
constexpr double kFig2RegressionRel = 1e-3;
constexpr double kFig2Budget = 1.0;           // seconds
constexpr double kDipLo = -7.2, kDipHi = -6.2;
constexpr double kFig3Budget = 10.0;
constexpr double kNormTol = 0.02;
constexpr double kDkTol = 1e-6;
constexpr double kExactVsRkTol = 1e-8;
constexpr double kFullModelTol = 2e-4;        // p = 1, omega = 1e3, nonreciprocal preset
constexpr double kMirrorTol = 1e-9;
constexpr double kEtaTol = 1e-6;
constexpr double kEpsilonBias = 1e-5;

const AmplitudeVector kB = AmplitudeVector::level_b();

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double max_level(const Trajectory& t, int level) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) m = std::max(m, t.populations(i)[level]);
  return m;
}

// Time of the global maximum of a level population.
double peak_time(const Trajectory& t, int level) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t.populations(i)[level] > t.populations(best)[level]) best = i;
  return t.times[best];
}

// Time of the first interior local maximum of a level population.
double first_peak(const Trajectory& t, int level) {
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double p = t.populations(i)[level];
    if (p > t.populations(i - 1)[level] && p >= t.populations(i + 1)[level]) return t.times[i];
  }
  return INFINITY;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto times = uniform_times(5.0, 50001);
  const double low = max_level(evolve_exact(presets::nonreciprocal(kPi / 2.0), kB, times), 0);
  const double high = max_level(evolve_exact(presets::nonreciprocal(1.5 * kPi), kB, times), 0);
  const double elapsed = seconds_since(t0);
  const bool ok = high >= kMinTransferRatio * low &&
                  std::abs(low / kFig2LowMax - 1.0) <= kFig2RegressionRel &&
                  std::abs(high / kFig2HighMax - 1.0) <= kFig2RegressionRel && elapsed < kFig2Budget;
  return {ok, fmt("max|A|^2 %.6g vs %.6g, ratio %.4g, %.3f s", low, high, high / low, elapsed)};
}

std::vector<double> local_minima(const SpectrumGrid& g, double lo, double hi) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    if (g.detunings[i] >= lo && g.detunings[i] <= hi && g.values[i] < g.values[i - 1] &&
        g.values[i] < g.values[i + 1])
      out.push_back(g.detunings[i]);
  return out;
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> zero = {0.0};
  bool ok = true;
  std::string detail;
  SpectrumGrid common_low, distinct_low;
  for (Topology topo : {Topology::CommonLower, Topology::DistinctLower}) {
    const auto low = compute_spectrum(presets::nonreciprocal(kPi / 2.0, topo), kB);
    const auto high = compute_spectrum(presets::nonreciprocal(1.5 * kPi, topo), kB);
    const FeatureKind kl = find_line_features(low, zero)[0].kind;
    const FeatureKind kh = find_line_features(high, zero)[0].kind;
    ok = ok && kl == FeatureKind::Dip && kh == FeatureKind::Peak;
    detail += to_string(topo) + ": " + to_string(kl) + "/" + to_string(kh) + "; ";
    (topo == Topology::CommonLower ? common_low : distinct_low) = low;
  }
  // Search a little beyond the acceptance band so a misplaced dip is reported.
  const auto dips = local_minima(common_low, kDipLo - 1.0, kDipHi + 1.0);
  const bool one_dip = dips.size() == 1 && dips[0] >= kDipLo && dips[0] <= kDipHi;
  const bool absent = local_minima(distinct_low, kDipLo - 1.0, kDipHi + 1.0).empty();
  const double elapsed = seconds_since(t0);
  ok = ok && one_dip && absent && elapsed < kFig3Budget;
  detail += dips.empty() ? "no dip near -6.7" : fmt("dip at %.4f", dips[0]);
  detail += absent ? ", absent for distinct" : ", distinct also dips";
  detail += fmt(", %.2f s", elapsed);
  return {ok, detail};
}

Outcome criterion3() {
  std::vector<double> n = {
      spectrum_normalization(compute_spectrum(presets::nonreciprocal(kPi / 2.0), kB)),
      spectrum_normalization(compute_spectrum(presets::nonreciprocal(kPi / 2.0, Topology::DistinctLower), kB)),
      spectrum_normalization(single_molecule_spectrum({Handedness::Left, kPi / 2.0, presets::chiral(0.0)}, kB)),
  };
  const bool ok = std::all_of(n.begin(), n.end(), [](double v) { return std::abs(v - 1.0) <= kNormTol; });
  return {ok, fmt("fig3a %.5f, fig3b %.5f, fig6a %.5f", n[0], n[1], n[2])};
}

Outcome criterion4() {
  double worst = dk_consistency(presets::nonreciprocal(kPi / 2.0), kB, -6.7);
  worst = std::max(worst, dk_consistency(presets::nonreciprocal(1.5 * kPi, Topology::DistinctLower), kB, 0.0));
  worst = std::max(worst, dk_consistency(presets::chiral(kPi / 2.0), kB, 1000.0));
  std::mt19937_64 rng(4);
  for (int draw = 0; draw < 20; ++draw) {
    const SystemParams p = test_support::random_params(rng, 0.5);
    const double delta = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    worst = std::max(worst, dk_consistency(p, test_support::random_state(rng), delta));
  }
  return {worst < kDkTol, fmt("max deviation %.3g over 23 sets", worst)};
}

Outcome criterion5() {
  std::mt19937_64 rng(5);
  double worst_rk = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const SystemParams p = test_support::random_params(rng);
    const AmplitudeVector psi0 = test_support::random_state(rng);
    const Trajectory rk = evolve_rk(p, psi0, 2.0, 2e-4, 50);
    const Trajectory ex = evolve_exact(p, psi0, rk.times);
    for (std::size_t i = 0; i < rk.size(); ++i)
      worst_rk = std::max(worst_rk, test_support::max_deviation(rk.states[i], ex.states[i]));
  }
  SystemParams p = presets::nonreciprocal(1.5 * kPi);
  p.p_ab = p.p_cb = p.p_ca = 1.0;
  const Trajectory full = evolve_full(p, kB, 5.0, 0.05 / p.omega_cb_split(), 100);
  const Trajectory ex = evolve_exact(p, kB, full.times);
  double worst_full = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i)
    for (int k = 0; k < 3; ++k)
      worst_full = std::max(worst_full, std::abs(full.populations(i)[k] - ex.populations(i)[k]));
  return {worst_rk < kExactVsRkTol && worst_full < kFullModelTol,
          fmt("exact vs rk %.3g; full vs simplified %.3g", worst_rk, worst_full)};
}

Outcome criterion6() {
  const auto times = uniform_times(10.0, 10001);
  const SystemParams base = presets::chiral(0.0);
  const Trajectory l = evolve_exact(ChiralSample{Handedness::Left, kPi / 2.0, base}.effective_params(), kB, times);
  const Trajectory r = evolve_exact(ChiralSample{Handedness::Right, kPi / 2.0, base}.effective_params(), kB, times);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    worst = std::max(worst, std::abs(l.populations(i)[0] - r.populations(i)[2]));
  const double lc = first_peak(l, 2), la = first_peak(l, 0);
  const double rc = first_peak(r, 2), ra = first_peak(r, 0);
  const bool ok = worst < kMirrorTol && lc < la && ra < rc;
  return {ok, fmt("mirror %.3g; first local maxima left C/A %.4g/%.4g", worst, lc, la) +
                  fmt(", right C/A %.4g/%.4g", rc, ra) +
                  fmt("; global maxima left C/A %.4g/%.4g", peak_time(l, 2), peak_time(l, 0))};
}

Outcome criterion7() {
  const SystemParams base = presets::chiral(0.0);
  const double eta = calibrate_eta(kPi / 2.0, base);
  const bool eta_ok = std::abs(eta - 1.0) <= kEtaTol;

  const double c = line_centers(base).c;
  const std::vector<double> centers = {0.0, c};
  const auto left = find_line_features(single_molecule_spectrum({Handedness::Left, kPi / 2.0, base}, kB), centers);
  const auto right = find_line_features(single_molecule_spectrum({Handedness::Right, kPi / 2.0, base}, kB), centers);
  const bool lines_ok = left[0].kind == FeatureKind::Dip && left[1].kind == FeatureKind::Peak &&
                        right[0].kind == FeatureKind::Peak && right[1].kind == FeatureKind::Dip;

  std::vector<double> phis;
  for (int i = 0; i <= 360; ++i) phis.push_back(2.0 * kPi * i / 360.0);
  bool sweep_ok = true;
  for (Handedness h : {Handedness::Left, Handedness::Right}) {
    std::vector<double> s;
    for (double d : phis) s.push_back(spectral_density(ChiralSample{h, d, base}.effective_params(), kB, 0.0));
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    const double a = phis[lo - s.begin()], b = phis[hi - s.begin()];
    const double step = phis[1] + 1e-12;
    const bool near = [&](double x, double y) {
      return std::abs(x - 0.5 * kPi) <= step && std::abs(y - 1.5 * kPi) <= step;
    }(h == Handedness::Left ? a : b, h == Handedness::Left ? b : a);
    sweep_ok = sweep_ok && near;
  }
  std::string detail = fmt("eta %.8f (|eta-1| = %.3g, limit %.0e)", eta, std::abs(eta - 1.0), kEtaTol);
  detail += lines_ok ? "; lines L dip/peak, R peak/dip" : "; line pattern wrong";
  detail += sweep_ok ? "; sweep extrema at pi/2, 3pi/2" : "; sweep extrema misplaced";
  return {eta_ok && lines_ok && sweep_ok, detail};
}

Outcome criterion8() {
  const SystemParams base = presets::chiral(0.0);
  const std::vector<std::pair<double, double>> counts = {{0, 1}, {1, 3}, {1, 1}, {3, 1}, {1, 0}};
  double worst = 0.0;
  for (const auto& [nl, nr] : counts) {
    const MixtureReport r = assay_mixture(nl, nr, kPi / 2.0, base);
    worst = std::max(worst, std::abs(r.epsilon_est - *r.epsilon_true));
  }
  return {worst <= kEpsilonBias, fmt("max |eps_est - eps_true| = %.3g (bound %.0e)", worst, kEpsilonBias)};
}

Outcome criterion9() {
  using presets::Figure;
  bool ok = true;
  for (Figure f : {Figure::Fig2, Figure::Fig3, Figure::Fig5, Figure::Fig6a, Figure::Fig6b}) {
    const std::string first = to_csv(run_preset(f).table);
    const std::string second = to_csv(run_preset(f).table);
    ok = ok && first == second && !first.empty();
  }
  return {ok, ok ? "all five presets byte-identical" : "preset output differs between runs"};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
