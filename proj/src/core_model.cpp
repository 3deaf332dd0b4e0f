#include "cyclemit/core_model.hpp"

#include <algorithm>
#include <cmath>

#include "cyclemit/errors.hpp"

namespace cyclemit {

std::string to_string(Topology topology) {
  return topology == Topology::CommonLower ? "common" : "distinct";
}

double SystemParams::max_gamma() const noexcept { return std::max({gamma_a, gamma_b, gamma_c}); }

double SystemParams::min_gamma() const noexcept { return std::min({gamma_a, gamma_b, gamma_c}); }

namespace {

void require_finite(const char* field, double value) {
  if (!std::isfinite(value)) throw ValidationError(field, "must be finite");
}

void require_non_negative(const char* field, double value) {
  require_finite(field, value);
  if (value < 0.0) throw ValidationError(field, "must be non-negative");
}

void require_positive(const char* field, double value) {
  require_finite(field, value);
  if (value <= 0.0) throw ValidationError(field, "must be strictly positive");
}

void require_alignment(const char* field, double value) {
  require_finite(field, value);
  if (value < -1.0 || value > 1.0) throw ValidationError(field, "must lie in [-1, 1]");
}

}  // namespace

void SystemParams::validate() const {
  require_non_negative("gamma_a", gamma_a);
  require_non_negative("gamma_b", gamma_b);
  require_non_negative("gamma_c", gamma_c);
  require_non_negative("omega_ab_rabi", omega_ab_rabi);
  require_non_negative("omega_bc_rabi", omega_bc_rabi);
  require_non_negative("omega_ca_rabi", omega_ca_rabi);
  require_finite("delta_ab", delta_ab);
  require_finite("delta_ca", delta_ca);
  require_finite("phi", phi);
  require_positive("omega_ab_split", omega_ab_split);
  require_positive("omega_ca_split", omega_ca_split);
  require_alignment("p_ab", p_ab);
  require_alignment("p_cb", p_cb);
  require_alignment("p_ca", p_ca);
}

CoefficientMatrix build_coefficient_matrix(const SystemParams& params) {
  params.validate();

  const Complex i{0.0, 1.0};
  const Complex loop = std::polar(1.0, params.phi);

  Matrix3c k;
  k << params.gamma_a / 2.0, i * params.omega_ab_rabi * loop, i * params.omega_ca_rabi,
      i * params.omega_ab_rabi * std::conj(loop), params.gamma_b / 2.0 - i * params.delta_ab,
      i * params.omega_bc_rabi,
      i * params.omega_ca_rabi, i * params.omega_bc_rabi, params.gamma_c / 2.0 + i * params.delta_ca;
  return {k};
}

RegimeReport validate_regime(const SystemParams& params, double threshold) {
  const double fastest = std::max({params.gamma_a, params.gamma_b, params.gamma_c,
                                   std::abs(params.delta_ab), std::abs(params.delta_ca),
                                   std::abs(params.delta_cb())});
  const double slowest_split =
      std::min({params.omega_ab_split, params.omega_ca_split, params.omega_cb_split()});

  RegimeReport report;
  report.threshold = threshold;
  report.ratio = fastest / slowest_split;
  report.valid = report.ratio < threshold;
  return report;
}

}  // namespace cyclemit
