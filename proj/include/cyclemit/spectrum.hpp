#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cyclemit/core_model.hpp"

namespace cyclemit {

/// Detuning interval [lo, hi], units of Gamma relative to omega_ad.
struct Window {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  double width() const noexcept { return hi - lo; }
};

/// Emission line centers in delta_k = omega_k - omega_ad coordinates.
struct LineCenters {
  double a = 0.0;  // omega_ad
  double b = 0.0;  // omega_bd
  double c = 0.0;  // omega_cd

  std::vector<double> all() const { return {b, a, c}; }
};

LineCenters line_centers(const SystemParams& params);

/// Sampled spontaneous emission spectrum.
struct SpectrumGrid {
  std::vector<double> detunings;
  std::vector<double> values;
  Topology topology = Topology::CommonLower;
  Window window;
  /// Uniform base resolution before local refinement.
  std::size_t base_points = 0;
  SystemParams params;
  AmplitudeVector initial;

  std::size_t size() const noexcept { return detunings.size(); }
  /// Linear interpolation; the point must lie inside the window.
  double value_at(double delta) const;
  double max_value() const;
};

enum class FeatureKind { Peak, Dip, Flat };

std::string to_string(FeatureKind kind);

struct LineFeature {
  FeatureKind kind = FeatureKind::Flat;
  double location = 0.0;
  double value = 0.0;
  double prominence = 0.0;
};

/// Per-channel emission amplitudes sqrt(gamma_s) * s_bar(-i delta^s) at one
/// detuning. The common-lower-level field is their sum; the distinct case
/// adds their moduli squared.
struct EmissionAmplitudes {
  Complex a{};
  Complex b{};
  Complex c{};

  Complex coherent_sum() const noexcept { return a + b + c; }
  double incoherent_sum() const noexcept { return std::norm(a) + std::norm(b) + std::norm(c); }
};

inline constexpr std::size_t kDefaultSpectrumPoints = 200000;
inline constexpr double kRefinementFactor = 10.0;
inline constexpr double kRefinementHalfWidth = 20.0;  // in linewidths

/// Laplace-domain amplitudes: solves (sI + K) Psi_bar = Psi0.
/// Throws NumericalError when M(s) is singular.
AmplitudeVector resolvent(const SystemParams& params, const AmplitudeVector& initial, Complex s);

EmissionAmplitudes emission_amplitudes(const SystemParams& params, const AmplitudeVector& initial,
                                       double delta_k);

/// S(delta_k) for the topology stored in params.
double spectral_density(const SystemParams& params, const AmplitudeVector& initial,
                        double delta_k);

/// S at each detuning, for the topology stored in params.
std::vector<double> spectral_values(const SystemParams& params, const AmplitudeVector& initial,
                                    std::span<const double> detunings);

/// [-1.2 w, 1.2 w] with w the larger splitting.
Window default_window(const SystemParams& params);

/// Uniform base grid plus x10 refinement within +-20 dressed linewidths of
/// every line center; the centers themselves are always grid points.
std::vector<double> refined_detunings(const SystemParams& params, const Window& window,
                                      std::size_t n_points);

SpectrumGrid spectrum_common(const SystemParams& params, const AmplitudeVector& initial,
                             std::optional<Window> window = std::nullopt,
                             std::size_t n_points = kDefaultSpectrumPoints);

SpectrumGrid spectrum_distinct(const SystemParams& params, const AmplitudeVector& initial,
                               std::optional<Window> window = std::nullopt,
                               std::size_t n_points = kDefaultSpectrumPoints);

/// Dispatches on params.topology.
SpectrumGrid compute_spectrum(const SystemParams& params, const AmplitudeVector& initial,
                              std::optional<Window> window = std::nullopt,
                              std::size_t n_points = kDefaultSpectrumPoints);

/// Trapezoidal integral of S over the grid.
double spectrum_normalization(const SpectrumGrid& grid);

struct PhaseSample {
  double phi = 0.0;
  double value = 0.0;
};

std::vector<PhaseSample> phase_sweep(const SystemParams& params, const AmplitudeVector& initial,
                                     double delta_k, std::span<const double> phis);

/// Classifies each center against a neighborhood of one local linewidth
/// (max(gamma)/2 of the grid's parameters).
std::vector<LineFeature> find_line_features(const SpectrumGrid& grid,
                                            std::span<const double> centers);

/// |D_k(inf) from the resolvent - D_k(inf) from time-integrating evolve_exact
/// amplitudes|. Default horizon is 40 / min(gamma).
double dk_consistency(const SystemParams& params, const AmplitudeVector& initial, double delta_k,
                      std::optional<double> t_end = std::nullopt);

}  // namespace cyclemit
