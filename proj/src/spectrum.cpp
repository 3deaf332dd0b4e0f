#include "cyclemit/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "cyclemit/dynamics.hpp"
#include "cyclemit/errors.hpp"
#include "parallel.hpp"

namespace cyclemit {

LineCenters line_centers(const SystemParams& params) {
  return {0.0, -params.omega_ab_split + params.delta_ab, params.omega_ca_split - params.delta_ca};
}

double SpectrumGrid::value_at(double delta) const {
  if (detunings.empty() || delta < detunings.front() || delta > detunings.back())
    throw ValidationError("delta", "outside the evaluated window");
  const auto it = std::lower_bound(detunings.begin(), detunings.end(), delta);
  const auto j = static_cast<std::size_t>(it - detunings.begin());
  if (*it == delta || j == 0) return values[j];
  const double x0 = detunings[j - 1], x1 = detunings[j];
  const double w = (delta - x0) / (x1 - x0);
  return (1.0 - w) * values[j - 1] + w * values[j];
}

double SpectrumGrid::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Peak: return "peak";
    case FeatureKind::Dip: return "dip";
    case FeatureKind::Flat: return "flat";
  }
  return "unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * kPi;

Vector3c solve_laplace(const CoefficientMatrix& k, const Vector3c& psi0, Complex s) {
  const Matrix3c m = k.laplace_matrix(s);
  Eigen::FullPivLU<Matrix3c> lu(m);
  if (!lu.isInvertible())
    throw NumericalError("M(s) = sI + K is singular at s = (" + std::to_string(s.real()) + ", " +
                         std::to_string(s.imag()) + ")");
  Vector3c x = lu.solve(psi0);
  if (!x.allFinite()) throw NumericalError("non-finite resolvent");
  return x;
}

// Amplitude evaluation with the coefficient matrix already built; every grid
// point goes through here.
EmissionAmplitudes emission_at(const SystemParams& params, const CoefficientMatrix& k,
                               const Vector3c& psi0, double delta_k) {
  const Complex i{0.0, 1.0};
  const double delta_b = delta_k + params.omega_ab_split - params.delta_ab;
  const double delta_c = delta_k - params.omega_ca_split + params.delta_ca;

  EmissionAmplitudes out;
  out.a = std::sqrt(params.gamma_a) * solve_laplace(k, psi0, -i * delta_k)(0);
  out.b = std::sqrt(params.gamma_b) * solve_laplace(k, psi0, -i * delta_b)(1);
  out.c = std::sqrt(params.gamma_c) * solve_laplace(k, psi0, -i * delta_c)(2);
  return out;
}

double density_from(Topology topology, const EmissionAmplitudes& e) {
  const double sum =
      topology == Topology::CommonLower ? std::norm(e.coherent_sum()) : e.incoherent_sum();
  return sum / kTwoPi;
}

void require_decaying(const SystemParams& params) {
  if (!(params.gamma_a > 0.0)) throw ValidationError("gamma_a", "must be > 0 for a spectrum");
  if (!(params.gamma_b > 0.0)) throw ValidationError("gamma_b", "must be > 0 for a spectrum");
  if (!(params.gamma_c > 0.0)) throw ValidationError("gamma_c", "must be > 0 for a spectrum");
}

double narrowest_dressed_halfwidth(const CoefficientMatrix& k) {
  Eigen::ComplexEigenSolver<Matrix3c> solver(k.k, false);
  double w = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 3; ++j) w = std::min(w, solver.eigenvalues()(j).real());
  return std::max(w, 1e-9);
}

SpectrumGrid evaluate_spectrum(const SystemParams& params, const AmplitudeVector& initial,
                               std::optional<Window> window, std::size_t n_points,
                               Topology expected) {
  if (params.topology != expected)
    throw ValidationError("topology", "expected " + to_string(expected) + " lower level(s)");
  const CoefficientMatrix k = build_coefficient_matrix(params);
  require_decaying(params);

  const Window w = window.value_or(default_window(params));
  if (!(w.lo < w.hi)) throw ValidationError("window", "lower bound must be below upper bound");
  const LineCenters centers = line_centers(params);
  for (double c : centers.all())
    if (!w.contains(c))
      throw ValidationError("window", "excludes the line center at delta_k = " + std::to_string(c));

  SpectrumGrid grid;
  grid.topology = expected;
  grid.window = w;
  grid.base_points = n_points;
  grid.params = params;
  grid.initial = initial;
  grid.detunings = refined_detunings(params, w, n_points);
  grid.values.resize(grid.detunings.size());

  const Vector3c psi0 = initial.to_vector();
  detail::parallel_for(grid.size(), [&](std::size_t j) {
    grid.values[j] = density_from(expected, emission_at(params, k, psi0, grid.detunings[j]));
  });
  return grid;
}

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 4> kGaussNodes = {0.1834346424956498, 0.5255324099163290,
                                               0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGaussWeights = {0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};

}  // namespace

AmplitudeVector resolvent(const SystemParams& params, const AmplitudeVector& initial, Complex s) {
  const CoefficientMatrix k = build_coefficient_matrix(params);
  return AmplitudeVector::from_vector(solve_laplace(k, initial.to_vector(), s));
}

EmissionAmplitudes emission_amplitudes(const SystemParams& params, const AmplitudeVector& initial,
                                       double delta_k) {
  const CoefficientMatrix k = build_coefficient_matrix(params);
  return emission_at(params, k, initial.to_vector(), delta_k);
}

double spectral_density(const SystemParams& params, const AmplitudeVector& initial,
                        double delta_k) {
  return density_from(params.topology, emission_amplitudes(params, initial, delta_k));
}

std::vector<double> spectral_values(const SystemParams& params, const AmplitudeVector& initial,
                                    std::span<const double> detunings) {
  const CoefficientMatrix k = build_coefficient_matrix(params);
  require_decaying(params);
  const Vector3c psi0 = initial.to_vector();
  std::vector<double> out(detunings.size());
  detail::parallel_for(detunings.size(), [&](std::size_t j) {
    out[j] = density_from(params.topology, emission_at(params, k, psi0, detunings[j]));
  });
  return out;
}

Window default_window(const SystemParams& params) {
  const double w = std::max(params.omega_ab_split, params.omega_ca_split);
  return {-1.2 * w, 1.2 * w};
}

std::vector<double> refined_detunings(const SystemParams& params, const Window& window,
                                      std::size_t n_points) {
  if (n_points < 2) throw ValidationError("points", "need at least two grid points");
  const double h = window.width() / static_cast<double>(n_points - 1);
  const double fine = h / kRefinementFactor;
  const double linewidth = narrowest_dressed_halfwidth(build_coefficient_matrix(params));

  std::vector<double> pts;
  pts.reserve(n_points + n_points / 4);
  for (std::size_t j = 0; j < n_points; ++j)
    pts.push_back(j + 1 == n_points ? window.hi : window.lo + h * static_cast<double>(j));

  for (double c : line_centers(params).all()) {
    if (!window.contains(c)) continue;
    pts.push_back(c);
    const double lo = std::max(window.lo, c - kRefinementHalfWidth * linewidth);
    const double hi = std::min(window.hi, c + kRefinementHalfWidth * linewidth);
    const auto m = static_cast<std::size_t>(std::ceil((hi - lo) / fine));
    for (std::size_t j = 0; j <= m; ++j) pts.push_back(lo + (hi - lo) * static_cast<double>(j) / m);
  }

  std::sort(pts.begin(), pts.end());
  const double eps = 1e-12 * std::max(std::abs(window.lo), std::abs(window.hi));
  std::vector<double> out;
  out.reserve(pts.size());
  for (double x : pts)
    if (out.empty() || x - out.back() > eps) out.push_back(x);
  // Keep exact line centers that a near-duplicate base point would have shadowed.
  for (double c : line_centers(params).all()) {
    if (!window.contains(c)) continue;
    auto it = std::lower_bound(out.begin(), out.end(), c - eps);
    if (it != out.end() && std::abs(*it - c) <= eps) *it = c;
  }
  return out;
}

SpectrumGrid spectrum_common(const SystemParams& params, const AmplitudeVector& initial,
                             std::optional<Window> window, std::size_t n_points) {
  return evaluate_spectrum(params, initial, window, n_points, Topology::CommonLower);
}

SpectrumGrid spectrum_distinct(const SystemParams& params, const AmplitudeVector& initial,
                               std::optional<Window> window, std::size_t n_points) {
  return evaluate_spectrum(params, initial, window, n_points, Topology::DistinctLower);
}

SpectrumGrid compute_spectrum(const SystemParams& params, const AmplitudeVector& initial,
                              std::optional<Window> window, std::size_t n_points) {
  return evaluate_spectrum(params, initial, window, n_points, params.topology);
}

double spectrum_normalization(const SpectrumGrid& grid) {
  double total = 0.0;
  for (std::size_t j = 1; j < grid.size(); ++j)
    total += 0.5 * (grid.values[j] + grid.values[j - 1]) *
             (grid.detunings[j] - grid.detunings[j - 1]);
  return total;
}

std::vector<PhaseSample> phase_sweep(const SystemParams& params, const AmplitudeVector& initial,
                                     double delta_k, std::span<const double> phis) {
  require_decaying(params);
  std::vector<PhaseSample> out(phis.size());
  detail::parallel_for(phis.size(), [&](std::size_t j) {
    SystemParams p = params;
    p.phi = phis[j];
    out[j] = {phis[j], spectral_density(p, initial, delta_k)};
  });
  return out;
}

std::vector<LineFeature> find_line_features(const SpectrumGrid& grid,
                                            std::span<const double> centers) {
  const double half_width = grid.params.max_gamma() / 2.0;
  std::vector<LineFeature> features;
  features.reserve(centers.size());

  for (double c : centers) {
    if (!grid.window.contains(c)) throw ValidationError("centers", "center outside the window");
    const double at_center = grid.value_at(c);

    const auto first = std::lower_bound(grid.detunings.begin(), grid.detunings.end(), c - half_width);
    const auto last = std::upper_bound(grid.detunings.begin(), grid.detunings.end(), c + half_width);
    double left_max = -1.0, right_max = -1.0;
    double left_min = at_center, right_min = at_center;
    double hood_max = at_center, hood_min = at_center;
    for (auto it = first; it != last; ++it) {
      const double v = grid.values[static_cast<std::size_t>(it - grid.detunings.begin())];
      hood_max = std::max(hood_max, v);
      hood_min = std::min(hood_min, v);
      if (*it < c) {
        left_max = std::max(left_max, v);
        left_min = std::min(left_min, v);
      } else if (*it > c) {
        right_max = std::max(right_max, v);
        right_min = std::min(right_min, v);
      }
    }

    LineFeature f;
    f.location = c;
    f.value = at_center;
    if (hood_max <= 0.0 || hood_max - hood_min <= 1e-6 * hood_max) {
      f.kind = FeatureKind::Flat;
    } else if (left_max >= 0.0 && right_max >= 0.0 && at_center < left_max &&
               at_center < right_max) {
      f.kind = FeatureKind::Dip;
      f.prominence = std::min(left_max, right_max) - at_center;
    } else if (left_max < 0.0 && right_max > at_center) {
      // Window edge on the left: a rising right flank still reads as a dip.
      f.kind = FeatureKind::Dip;
      f.prominence = right_max - at_center;
    } else if (right_max < 0.0 && left_max > at_center) {
      f.kind = FeatureKind::Dip;
      f.prominence = left_max - at_center;
    } else {
      f.kind = FeatureKind::Peak;
      f.prominence = at_center - std::max(left_min, right_min);
    }
    features.push_back(f);
  }
  return features;
}

double dk_consistency(const SystemParams& params, const AmplitudeVector& initial, double delta_k,
                      std::optional<double> t_end) {
  require_decaying(params);
  const CoefficientMatrix k = build_coefficient_matrix(params);
  const double horizon = t_end.value_or(40.0 / params.min_gamma());
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ValidationError("t_end", "must be positive and finite");

  // (a) Laplace route.
  const EmissionAmplitudes laplace = emission_at(params, k, initial.to_vector(), delta_k);

  // (b) Time route: integrate sqrt(gamma_s) e^{i delta^s t} s(t) over [0, horizon].
  const std::array<double, 3> freq = {delta_k,
                                      delta_k + params.omega_ab_split - params.delta_ab,
                                      delta_k - params.omega_ca_split + params.delta_ca};
  const std::array<double, 3> root_gamma = {std::sqrt(params.gamma_a), std::sqrt(params.gamma_b),
                                            std::sqrt(params.gamma_c)};
  double fastest = 3.0 * k.max_entry();
  for (double f : freq) fastest = std::max(fastest, std::abs(f) + 3.0 * k.max_entry());
  const auto panels = static_cast<std::size_t>(std::ceil(horizon * fastest / kPi));
  const double h = horizon / static_cast<double>(panels);

  constexpr std::size_t kChunk = 1024;
  std::array<Complex, 3> integral{};
  AmplitudeVector state = initial;
  std::vector<double> rel_times;
  rel_times.reserve(kChunk * 8 + 1);

  for (std::size_t p0 = 0; p0 < panels; p0 += kChunk) {
    const std::size_t p1 = std::min(panels, p0 + kChunk);
    const double t0 = h * static_cast<double>(p0);
    rel_times.clear();
    for (std::size_t p = p0; p < p1; ++p) {
      const double mid = h * (static_cast<double>(p) + 0.5) - t0;
      for (int j = 3; j >= 0; --j) rel_times.push_back(mid - 0.5 * h * kGaussNodes[j]);
      for (int j = 0; j < 4; ++j) rel_times.push_back(mid + 0.5 * h * kGaussNodes[j]);
    }
    rel_times.push_back(h * static_cast<double>(p1) - t0);

    const Trajectory traj = evolve_exact(params, state, rel_times);
    for (std::size_t q = 0; q + 1 < traj.size(); ++q) {
      const std::size_t node = q % 8;
      const double weight = 0.5 * h * kGaussWeights[node < 4 ? 3 - node : node - 4];
      const double t = t0 + rel_times[q];
      const auto& s = traj.states[q];
      const std::array<Complex, 3> amp = {s.a, s.b, s.c};
      for (int ch = 0; ch < 3; ++ch)
        integral[ch] += weight * root_gamma[ch] * std::polar(1.0, freq[ch] * t) * amp[ch];
    }
    state = traj.states.back();
  }

  const EmissionAmplitudes timed{integral[0], integral[1], integral[2]};
  if (params.topology == Topology::CommonLower)
    return std::abs(laplace.coherent_sum() - timed.coherent_sum());
  return std::max({std::abs(laplace.a - timed.a), std::abs(laplace.b - timed.b),
                   std::abs(laplace.c - timed.c)});
}

}  // namespace cyclemit
