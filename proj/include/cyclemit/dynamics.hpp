#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cyclemit/core_model.hpp"

namespace cyclemit {

enum class PropagationMethod {
  Eigendecomposition,
  ScalingAndSquaring,
  RungeKutta4,
  FullModelRungeKutta4,
};

std::string to_string(PropagationMethod method);

/// Sampled solution of the amplitude equations, rotating frame.
struct Trajectory {
  std::vector<double> times;
  std::vector<AmplitudeVector> states;

  PropagationMethod method = PropagationMethod::Eigendecomposition;
  /// 2-norm condition number of the eigenvector matrix (eigen route only, else 0).
  double eigenvector_condition = 0.0;
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return times.size(); }
  /// (|A|^2, |B|^2, |C|^2) at sample i. Rotating-frame phases drop out.
  std::array<double, 3> populations(std::size_t i) const;
};

/// Eigenvector condition number above which evolve_exact uses scaling-and-squaring.
inline constexpr double kEigenConditionLimit = 1.0e8;

/// Psi(t) = exp(-K t) Psi0 at each requested time (sorted, non-negative).
Trajectory evolve_exact(const SystemParams& params, const AmplitudeVector& initial,
                        std::span<const double> times);

/// Fixed-step classic RK4 on dPsi/dt = -K Psi. Records every `stride`-th step
/// plus the final one.
Trajectory evolve_rk(const SystemParams& params, const AmplitudeVector& initial, double t_end,
                     double dt, std::size_t stride = 1);

/// RK4 on the lab-frame equations with the cross-decay terms
/// p * sqrt(gamma gamma') / 2 * exp(+-i omega t) kept. States are returned in
/// the rotating frame so they compare directly with evolve_exact.
Trajectory evolve_full(const SystemParams& params, const AmplitudeVector& initial, double t_end,
                       double dt, std::size_t stride = 1);

/// n uniform samples over [0, t_end], both ends included.
std::vector<double> uniform_times(double t_end, std::size_t n = 1000);

}  // namespace cyclemit
