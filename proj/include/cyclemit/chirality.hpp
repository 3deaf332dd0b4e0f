#pragma once

#include <optional>

#include "cyclemit/core_model.hpp"
#include "cyclemit/spectrum.hpp"

namespace cyclemit {

enum class Handedness { Left, Right };

std::string to_string(Handedness handedness);

/// One enantiomer under a given set of drives. `params.phi` and
/// `params.topology` are ignored: the loop phase follows from handedness and
/// drive_phase, and the molecular model always has one common lower level.
struct ChiralSample {
  Handedness handedness = Handedness::Left;
  double drive_phase = 0.0;
  SystemParams params;

  /// Parameters with phi set to the effective loop phase.
  SystemParams effective_params() const;
};

/// drive_phase for left-handed molecules, drive_phase - pi for right-handed.
double effective_phase(const ChiralSample& sample);

SpectrumGrid single_molecule_spectrum(const ChiralSample& sample, const AmplitudeVector& initial,
                                      std::optional<Window> window = std::nullopt,
                                      std::size_t n_points = kDefaultSpectrumPoints);

/// Incoherent sum n_left * S_L + n_right * S_R on a shared grid.
SpectrumGrid mixture_spectrum(double n_left, double n_right, double drive_phase,
                              const SystemParams& params, const AmplitudeVector& initial,
                              std::optional<Window> window = std::nullopt,
                              std::size_t n_points = kDefaultSpectrumPoints);

/// Single-enantiomer line strengths read at exact line centers.
struct EnantiomerStrengths {
  double left_at_cd = 0.0;   // S_L: the line the left-handed molecule keeps
  double left_at_ad = 0.0;
  double right_at_cd = 0.0;
  double right_at_ad = 0.0;  // S_R: the line the right-handed molecule keeps

  double eta() const { return left_at_cd / right_at_ad; }
};

EnantiomerStrengths enantiomer_strengths(double drive_phase, const SystemParams& params,
                                         const AmplitudeVector& initial);

/// eta = S_L / S_R from simulated single-molecule spectra; no reference sample.
double calibrate_eta(double drive_phase, const SystemParams& params,
                     const AmplitudeVector& initial = AmplitudeVector::level_b());

/// (s_cd - eta s_ad) / (s_cd + eta s_ad), clamped to [-1, 1].
double estimate_ee(double s_at_cd, double s_at_ad, double eta);

struct MixtureReport {
  double n_left = 0.0;
  double n_right = 0.0;
  double s_at_cd = 0.0;
  double s_at_ad = 0.0;
  double eta = 0.0;
  double epsilon_est = 0.0;
  std::optional<double> epsilon_true;
};

/// Full assay: mixture line strengths at the cd and ad line centers, model
/// eta, and the excess estimate.
MixtureReport assay_mixture(double n_left, double n_right, double drive_phase,
                            const SystemParams& params,
                            const AmplitudeVector& initial = AmplitudeVector::level_b());

}  // namespace cyclemit
