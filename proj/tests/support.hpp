#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "cyclemit/core_model.hpp"
#include "cyclemit/dynamics.hpp"

namespace test_support {

using cyclemit::AmplitudeVector;
using cyclemit::Complex;
using cyclemit::SystemParams;

// Fixed-seed draws for the property suites.
// Rates and Rabi frequencies in [gamma_lo, 5] / [0, 5], detunings in [-2, 2].
inline SystemParams random_params(std::mt19937_64& rng, double gamma_lo = 0.0) {
  std::uniform_real_distribution<double> rate(gamma_lo, 5.0), rabi(0.0, 5.0), det(-2.0, 2.0),
      phase(0.0, 2.0 * cyclemit::kPi);
  SystemParams p;
  p.gamma_a = rate(rng);
  p.gamma_b = rate(rng);
  p.gamma_c = rate(rng);
  p.omega_ab_rabi = rabi(rng);
  p.omega_bc_rabi = rabi(rng);
  p.omega_ca_rabi = rabi(rng);
  p.delta_ab = det(rng);
  p.delta_ca = det(rng);
  p.phi = phase(rng);
  return p;
}

inline AmplitudeVector random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  AmplitudeVector v{{g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}};
  const double n = std::sqrt(v.norm_squared());
  return {v.a / n, v.b / n, v.c / n};
}

inline double max_deviation(const AmplitudeVector& x, const AmplitudeVector& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c)});
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Time-domain integral of Psi(t) over [0, t_end], panels of width h.
inline AmplitudeVector integrate_state(const SystemParams& p, const AmplitudeVector& psi0,
                                       double t_end, double h) {
  std::vector<double> times;
  const auto panels = static_cast<std::size_t>(std::ceil(t_end / h));
  const double w = t_end / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k)
    for (double x : kGlNodes) times.push_back(w * (static_cast<double>(k) + 0.5 * (x + 1.0)));
  // Nodes are ascending within a panel and panels are ascending.
  const auto traj = cyclemit::evolve_exact(p, psi0, times);
  AmplitudeVector sum;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double wt = 0.5 * w * kGlWeights[j % 8];
    sum.a += wt * traj.states[j].a;
    sum.b += wt * traj.states[j].b;
    sum.c += wt * traj.states[j].c;
  }
  return sum;
}

}  // namespace test_support
