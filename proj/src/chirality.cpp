#include "cyclemit/chirality.hpp"

#include <algorithm>
#include <cmath>

#include "cyclemit/errors.hpp"

namespace cyclemit {

std::string to_string(Handedness handedness) {
  return handedness == Handedness::Left ? "left" : "right";
}

double effective_phase(const ChiralSample& sample) {
  return sample.handedness == Handedness::Left ? sample.drive_phase : sample.drive_phase - kPi;
}

SystemParams ChiralSample::effective_params() const {
  SystemParams p = params;
  p.phi = effective_phase(*this);
  p.topology = Topology::CommonLower;
  return p;
}

SpectrumGrid single_molecule_spectrum(const ChiralSample& sample, const AmplitudeVector& initial,
                                      std::optional<Window> window, std::size_t n_points) {
  return spectrum_common(sample.effective_params(), initial, window, n_points);
}

namespace {

void check_counts(double n_left, double n_right) {
  if (!std::isfinite(n_left) || n_left < 0.0)
    throw ValidationError("n_left", "must be a non-negative count");
  if (!std::isfinite(n_right) || n_right < 0.0)
    throw ValidationError("n_right", "must be a non-negative count");
  if (!(n_left + n_right > 0.0)) throw ValidationError("n_left", "mixture must not be empty");
}

}  // namespace

SpectrumGrid mixture_spectrum(double n_left, double n_right, double drive_phase,
                              const SystemParams& params, const AmplitudeVector& initial,
                              std::optional<Window> window, std::size_t n_points) {
  check_counts(n_left, n_right);
  SpectrumGrid left = single_molecule_spectrum({Handedness::Left, drive_phase, params}, initial,
                                               window, n_points);
  const ChiralSample right_sample{Handedness::Right, drive_phase, params};
  const SystemParams right = right_sample.effective_params();

  // The refinement bands follow each enantiomer's dressed linewidth, so the
  // shared grid is the union of both.
  std::vector<double> merged = refined_detunings(right, left.window, n_points);
  merged.insert(merged.end(), left.detunings.begin(), left.detunings.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  const std::vector<double> s_left =
      merged.size() == left.size() ? left.values : spectral_values(left.params, initial, merged);
  const std::vector<double> s_right = spectral_values(right, initial, merged);
  left.detunings = std::move(merged);
  left.values.resize(left.detunings.size());
  for (std::size_t j = 0; j < left.size(); ++j)
    left.values[j] = n_left * s_left[j] + n_right * s_right[j];
  left.params.phi = drive_phase;
  return left;
}

EnantiomerStrengths enantiomer_strengths(double drive_phase, const SystemParams& params,
                                         const AmplitudeVector& initial) {
  const LineCenters centers = line_centers(params);
  const SystemParams left = ChiralSample{Handedness::Left, drive_phase, params}.effective_params();
  const SystemParams right = ChiralSample{Handedness::Right, drive_phase, params}.effective_params();

  EnantiomerStrengths s;
  s.left_at_cd = spectral_density(left, initial, centers.c);
  s.left_at_ad = spectral_density(left, initial, centers.a);
  s.right_at_cd = spectral_density(right, initial, centers.c);
  s.right_at_ad = spectral_density(right, initial, centers.a);
  return s;
}

double calibrate_eta(double drive_phase, const SystemParams& params,
                     const AmplitudeVector& initial) {
  const EnantiomerStrengths s = enantiomer_strengths(drive_phase, params, initial);
  if (!(s.right_at_ad > 0.0)) throw NumericalError("right-handed ad line strength vanishes");
  const double eta = s.eta();
  if (!(eta > 0.0) || !std::isfinite(eta)) throw NumericalError("calibration eta is not positive");
  return eta;
}

double estimate_ee(double s_at_cd, double s_at_ad, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta", "must be positive");
  if (!(s_at_cd >= 0.0) || !(s_at_ad >= 0.0))
    throw ValidationError("line strengths", "must be non-negative");
  const double den = s_at_cd + eta * s_at_ad;
  if (!(den > 0.0)) throw ValidationError("line strengths", "both strengths are zero");
  return std::clamp((s_at_cd - eta * s_at_ad) / den, -1.0, 1.0);
}

MixtureReport assay_mixture(double n_left, double n_right, double drive_phase,
                            const SystemParams& params, const AmplitudeVector& initial) {
  check_counts(n_left, n_right);
  const EnantiomerStrengths s = enantiomer_strengths(drive_phase, params, initial);

  MixtureReport report;
  report.n_left = n_left;
  report.n_right = n_right;
  report.s_at_cd = n_left * s.left_at_cd + n_right * s.right_at_cd;
  report.s_at_ad = n_left * s.left_at_ad + n_right * s.right_at_ad;
  report.eta = calibrate_eta(drive_phase, params, initial);
  report.epsilon_est = estimate_ee(report.s_at_cd, report.s_at_ad, report.eta);
  report.epsilon_true = (n_left - n_right) / (n_left + n_right);
  return report;
}

}  // namespace cyclemit
