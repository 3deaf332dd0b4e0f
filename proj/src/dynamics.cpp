#include "cyclemit/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "cyclemit/errors.hpp"

namespace cyclemit {

std::string to_string(PropagationMethod method) {
  switch (method) {
    case PropagationMethod::Eigendecomposition: return "eigendecomposition";
    case PropagationMethod::ScalingAndSquaring: return "scaling-and-squaring";
    case PropagationMethod::RungeKutta4: return "rk4";
    case PropagationMethod::FullModelRungeKutta4: return "rk4-full-model";
  }
  return "unknown";
}

std::array<double, 3> Trajectory::populations(std::size_t i) const {
  const auto& s = states.at(i);
  return {std::norm(s.a), std::norm(s.b), std::norm(s.c)};
}

std::vector<double> uniform_times(double t_end, std::size_t n) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end", "must be positive");
  if (n < 2) throw ValidationError("n_samples", "need at least two samples");
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i)
    times[i] = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
  return times;
}

namespace {

void check_initial(const AmplitudeVector& initial) {
  const double n2 = initial.norm_squared();
  if (!std::isfinite(n2)) throw ValidationError("initial", "amplitudes must be finite");
  if (n2 > 1.0 + 1e-12) throw ValidationError("initial", "state norm must not exceed 1");
}

void check_times(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0)
      throw ValidationError("times", "must be finite and non-negative");
    if (i > 0 && times[i] < times[i - 1]) throw ValidationError("times", "must be sorted");
  }
}

double condition_number(const Matrix3c& m) {
  Eigen::JacobiSVD<Matrix3c> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(2) == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(2);
}

std::size_t step_count(double t_end, double dt) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
}

// One classic RK4 step for y' = f(t, y).
template <typename Rhs>
Vector3c rk4_step(const Rhs& f, double t, const Vector3c& y, double h) {
  const Vector3c k1 = f(t, y);
  const Vector3c k2 = f(t + h / 2.0, y + (h / 2.0) * k1);
  const Vector3c k3 = f(t + h / 2.0, y + (h / 2.0) * k2);
  const Vector3c k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Rhs, typename ToRotating>
Trajectory integrate(const Rhs& f, const ToRotating& to_rotating, const AmplitudeVector& initial,
                     double t_end, double dt, std::size_t stride, PropagationMethod method) {
  if (stride == 0) throw ValidationError("stride", "must be at least 1");
  const std::size_t n = step_count(t_end, dt);
  const double h = t_end / static_cast<double>(n);

  Trajectory traj;
  traj.method = method;
  traj.times.reserve(n / stride + 2);
  traj.states.reserve(n / stride + 2);

  Vector3c y = initial.to_vector();
  traj.times.push_back(0.0);
  traj.states.push_back(to_rotating(0.0, y));
  for (std::size_t step = 1; step <= n; ++step) {
    const double t0 = h * static_cast<double>(step - 1);
    y = rk4_step(f, t0, y, h);
    if (step % stride == 0 || step == n) {
      const double t = h * static_cast<double>(step);
      traj.times.push_back(t);
      traj.states.push_back(to_rotating(t, y));
    }
  }
  return traj;
}

void check_step(const CoefficientMatrix& k, double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("t_end", "must be positive");
  const double fastest = k.max_entry();
  if (fastest > 0.0 && dt > 0.1 / fastest)
    throw ValidationError("dt", "exceeds 0.1 x the shortest timescale 1/max|K_ij| = " +
                                    std::to_string(1.0 / fastest));
}

}  // namespace

Trajectory evolve_exact(const SystemParams& params, const AmplitudeVector& initial,
                        std::span<const double> times) {
  check_initial(initial);
  check_times(times);
  const CoefficientMatrix k = build_coefficient_matrix(params);
  const Vector3c psi0 = initial.to_vector();

  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.states.reserve(times.size());

  Eigen::ComplexEigenSolver<Matrix3c> solver(k.k);
  const double cond =
      solver.info() == Eigen::Success ? condition_number(solver.eigenvectors()) : 0.0;

  if (solver.info() == Eigen::Success && cond <= kEigenConditionLimit) {
    traj.method = PropagationMethod::Eigendecomposition;
    traj.eigenvector_condition = cond;
    const Matrix3c& v = solver.eigenvectors();
    const Eigen::Matrix<Complex, 3, 1>& lambda = solver.eigenvalues();
    // Expansion coefficients of Psi0 in the eigenbasis.
    const Vector3c coeff = v.partialPivLu().solve(psi0);
    for (double t : times) {
      Vector3c mode;
      for (int j = 0; j < 3; ++j) mode(j) = std::exp(-lambda(j) * t) * coeff(j);
      traj.states.push_back(AmplitudeVector::from_vector(v * mode));
    }
  } else {
    traj.method = PropagationMethod::ScalingAndSquaring;
    traj.eigenvector_condition = cond;
    for (double t : times) {
      const Matrix3c propagator = (-t * k.k).exp();
      traj.states.push_back(AmplitudeVector::from_vector(propagator * psi0));
    }
  }
  return traj;
}

Trajectory evolve_rk(const SystemParams& params, const AmplitudeVector& initial, double t_end,
                     double dt, std::size_t stride) {
  check_initial(initial);
  const CoefficientMatrix k = build_coefficient_matrix(params);
  check_step(k, t_end, dt);

  const Matrix3c minus_k = -k.k;
  auto rhs = [&minus_k](double, const Vector3c& y) -> Vector3c { return minus_k * y; };
  auto identity = [](double, const Vector3c& y) { return AmplitudeVector::from_vector(y); };
  return integrate(rhs, identity, initial, t_end, dt, stride, PropagationMethod::RungeKutta4);
}

Trajectory evolve_full(const SystemParams& params, const AmplitudeVector& initial, double t_end,
                       double dt, std::size_t stride) {
  check_initial(initial);
  const CoefficientMatrix k = build_coefficient_matrix(params);
  check_step(k, t_end, dt);
  if (dt > 0.05 / params.omega_cb_split())
    throw ValidationError("dt", "must resolve the fastest splitting (dt <= 0.05 / omega_cb)");

  const Complex i{0.0, 1.0};
  const double ga = params.gamma_a, gb = params.gamma_b, gc = params.gamma_c;
  const double w_ab = params.omega_ab_split, w_ca = params.omega_ca_split;
  const double w_cb = params.omega_cb_split();
  const double d_ab = params.delta_ab, d_ca = params.delta_ca, d_cb = params.delta_cb();
  const Complex drive_ab = params.omega_ab_rabi * std::polar(1.0, params.phi);
  const double drive_bc = params.omega_bc_rabi, drive_ca = params.omega_ca_rabi;

  // Cross-decay strengths p_{ss'} sqrt(gamma_s gamma_s') / 2.
  const double x_ab = params.p_ab * std::sqrt(ga * gb) / 2.0;
  const double x_cb = params.p_cb * std::sqrt(gb * gc) / 2.0;
  const double x_ca = params.p_ca * std::sqrt(ga * gc) / 2.0;

  auto rhs = [=](double t, const Vector3c& y) -> Vector3c {
    const Complex a = y(0), b = y(1), c = y(2);
    const Complex e_ab = std::polar(1.0, w_ab * t);
    const Complex e_ca = std::polar(1.0, w_ca * t);
    const Complex e_cb = std::polar(1.0, w_cb * t);
    const Complex r_ab = std::polar(1.0, d_ab * t);
    const Complex r_ca = std::polar(1.0, d_ca * t);
    const Complex r_cb = std::polar(1.0, d_cb * t);

    Vector3c dy;
    dy(0) = -ga / 2.0 * a - x_ab * e_ab * b - x_ca * std::conj(e_ca) * c -
            i * drive_ab * r_ab * b - i * drive_ca * std::conj(r_ca) * c;
    dy(1) = -gb / 2.0 * b - x_ab * std::conj(e_ab) * a - x_cb * std::conj(e_cb) * c -
            i * drive_bc * std::conj(r_cb) * c - i * std::conj(drive_ab) * std::conj(r_ab) * a;
    dy(2) = -gc / 2.0 * c - x_ca * e_ca * a - x_cb * e_cb * b - i * drive_ca * r_ca * a -
            i * drive_bc * r_cb * b;
    return dy;
  };
  auto to_rotating = [=](double t, const Vector3c& y) {
    return AmplitudeVector{y(0), std::polar(1.0, d_ab * t) * y(1), std::polar(1.0, -d_ca * t) * y(2)};
  };

  Trajectory traj = integrate(rhs, to_rotating, initial, t_end, dt, stride,
                              PropagationMethod::FullModelRungeKutta4);
  const RegimeReport regime = validate_regime(params);
  if (!regime.valid)
    traj.warnings.push_back("splittings do not dominate rates/detunings (ratio " +
                            std::to_string(regime.ratio) + "); cross-decay terms are not small");
  return traj;
}

}  // namespace cyclemit
