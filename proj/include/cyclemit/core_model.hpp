#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

namespace cyclemit {

using Complex = std::complex<double>;
using Vector3c = Eigen::Matrix<Complex, 3, 1>;
using Matrix3c = Eigen::Matrix<Complex, 3, 3>;

inline constexpr double kPi = 3.14159265358979323846;

/// Lower-level structure the three upper levels decay into.
enum class Topology { CommonLower, DistinctLower };

std::string to_string(Topology topology);

/// Physical parameters of the driven cyclic three-level system.
///
/// Every frequency and rate is expressed in units of one reference rate
/// Gamma; times are in units of 1/Gamma. Delta_cb is not stored: the
/// three-photon resonance Delta_cb = Delta_ca + Delta_ab holds by construction.
struct SystemParams {
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double gamma_c = 0.0;

  double omega_ab_rabi = 0.0;
  double omega_bc_rabi = 0.0;
  double omega_ca_rabi = 0.0;

  double delta_ab = 0.0;
  double delta_ca = 0.0;

  /// Closed-loop phase of the three drives, radians.
  double phi = 0.0;

  double omega_ab_split = 1.0e3;
  double omega_ca_split = 1.0e3;

  Topology topology = Topology::CommonLower;

  // Dipole alignment factors; only the full lab-frame model reads them.
  double p_ab = 0.0;
  double p_cb = 0.0;
  double p_ca = 0.0;

  double delta_cb() const noexcept { return delta_ca + delta_ab; }
  double omega_cb_split() const noexcept { return omega_ab_split + omega_ca_split; }
  double max_gamma() const noexcept;
  double min_gamma() const noexcept;

  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

/// Rotating-frame amplitudes (A, B~, C~).
struct AmplitudeVector {
  Complex a{};
  Complex b{};
  Complex c{};

  static AmplitudeVector from_vector(const Vector3c& v) { return {v(0), v(1), v(2)}; }
  Vector3c to_vector() const { return Vector3c(a, b, c); }

  double norm_squared() const noexcept { return std::norm(a) + std::norm(b) + std::norm(c); }

  static AmplitudeVector level_a() { return {1.0, 0.0, 0.0}; }
  static AmplitudeVector level_b() { return {0.0, 1.0, 0.0}; }
  static AmplitudeVector level_c() { return {0.0, 0.0, 1.0}; }
};

/// K in dPsi/dt = -K Psi; the Laplace-domain matrix is M(s) = sI + K.
struct CoefficientMatrix {
  Matrix3c k;

  Matrix3c laplace_matrix(Complex s) const { return k + s * Matrix3c::Identity(); }
  /// Largest entry modulus, the fastest rate in the system.
  double max_entry() const { return k.cwiseAbs().maxCoeff(); }
};

CoefficientMatrix build_coefficient_matrix(const SystemParams& params);

struct RegimeReport {
  double ratio = 0.0;
  double threshold = 0.0;
  bool valid = false;
};

inline constexpr double kDefaultRegimeThreshold = 0.2;

/// Checks that the level splittings dominate every rate and detuning, the
/// condition under which the oscillating cross-decay terms drop out.
RegimeReport validate_regime(const SystemParams& params,
                             double threshold = kDefaultRegimeThreshold);

}  // namespace cyclemit
