#include <cmath>
#include <limits>
#include <random>

#include "cyclemit/core_model.hpp"
#include "cyclemit/errors.hpp"
#include "cyclemit/presets.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cyclemit;

TEST_CASE("coefficient matrix entries") {
  SystemParams p;
  p.gamma_a = 0.2;
  p.gamma_b = 0.4;
  p.gamma_c = 0.6;
  p.omega_ab_rabi = 1.0;
  p.omega_bc_rabi = 2.0;
  p.omega_ca_rabi = 3.0;
  p.delta_ab = 0.5;
  p.delta_ca = -0.25;
  p.phi = 0.3;
  const Matrix3c k = build_coefficient_matrix(p).k;
  const Complex i{0.0, 1.0};

  CHECK(std::abs(k(0, 0) - 0.1) < 1e-15);
  CHECK(std::abs(k(1, 1) - Complex(0.2, -0.5)) < 1e-15);
  CHECK(std::abs(k(2, 2) - Complex(0.3, -0.25)) < 1e-15);
  CHECK(std::abs(k(0, 1) - i * std::polar(1.0, 0.3)) < 1e-15);
  CHECK(std::abs(k(1, 0) - i * std::polar(1.0, -0.3)) < 1e-15);
  CHECK(std::abs(k(0, 2) - 3.0 * i) < 1e-15);
  CHECK(std::abs(k(2, 0) - 3.0 * i) < 1e-15);
  CHECK(std::abs(k(1, 2) - 2.0 * i) < 1e-15);
  CHECK(std::abs(k(2, 1) - 2.0 * i) < 1e-15);
  CHECK(p.delta_cb() == doctest::Approx(0.25));
}

TEST_CASE("fig2 parameters, phi = pi/2") {
  const Matrix3c k = build_coefficient_matrix(presets::nonreciprocal(kPi / 2.0)).k;
  CHECK(std::abs(k(0, 1) - Complex(-0.5, 0.0)) < 1e-15);
  CHECK(std::abs(k(1, 0) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(k(2, 2).real() == doctest::Approx(50.0));
  CHECK(std::abs(k(1, 2) - Complex(0.0, 5.0)) < 1e-15);
}

TEST_CASE("zero coupling gives a diagonal matrix") {
  SystemParams p;
  p.gamma_a = 1.0;
  p.gamma_b = 2.0;
  p.gamma_c = 3.0;
  const Matrix3c k = build_coefficient_matrix(p).k;
  CHECK(k.isApprox(Matrix3c(Vector3c(0.5, 1.0, 1.5).asDiagonal())));
}

TEST_CASE("phase reversal transposes K") {
  std::mt19937_64 rng(11);
  for (int draw = 0; draw < 20; ++draw) {
    SystemParams p = test_support::random_params(rng);
    const Matrix3c kp = build_coefficient_matrix(p).k;
    p.phi = -p.phi;
    const Matrix3c km = build_coefficient_matrix(p).k;
    CHECK((km - kp.transpose()).cwiseAbs().maxCoeff() < 1e-15);

    // With all detunings zero, the couplings of K(-phi) are minus the conjugates.
    p.delta_ab = p.delta_ca = 0.0;
    const Matrix3c k0 = build_coefficient_matrix(p).k;
    p.phi = -p.phi;
    const Matrix3c k1 = build_coefficient_matrix(p).k;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const Complex expect = r == c ? k1(r, c) : -std::conj(k1(r, c));
        CHECK(std::abs(k0(r, c) - expect) < 1e-15);
      }
  }
}

TEST_CASE("mirror exchange a <-> c") {
  // Holds for gamma_a = gamma_c, Omega_ab = Omega_bc and Delta_ca = 0, up to the
  // diagonal gauge diag(1, e^{i phi}, 1).
  std::mt19937_64 rng(12);
  for (int draw = 0; draw < 20; ++draw) {
    SystemParams p = test_support::random_params(rng);
    p.gamma_c = p.gamma_a;
    p.omega_bc_rabi = p.omega_ab_rabi;
    p.delta_ca = 0.0;
    const Matrix3c k = build_coefficient_matrix(p).k;
    SystemParams q = p;
    q.phi = -p.phi;
    const Matrix3c km = build_coefficient_matrix(q).k;

    Matrix3c swap = Matrix3c::Zero();
    swap(0, 2) = swap(1, 1) = swap(2, 0) = 1.0;
    const Matrix3c gauge = Vector3c(1.0, std::polar(1.0, p.phi), 1.0).asDiagonal();
    const Matrix3c lhs = swap * k * swap;
    const Matrix3c rhs = gauge.adjoint() * km * gauge;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("validation names the offending field") {
  auto field_of = [](SystemParams p) -> std::string {
    try {
      build_coefficient_matrix(p);
    } catch (const ValidationError& e) {
      return e.field();
    }
    return "";
  };
  SystemParams p;
  CHECK(field_of(p).empty());

  SystemParams bad = p;
  bad.gamma_b = -1.0;
  CHECK(field_of(bad) == "gamma_b");
  bad = p;
  bad.omega_bc_rabi = -0.1;
  CHECK(field_of(bad) == "omega_bc_rabi");
  bad = p;
  bad.delta_ca = std::numeric_limits<double>::quiet_NaN();
  CHECK(field_of(bad) == "delta_ca");
  bad = p;
  bad.omega_ca_split = 0.0;
  CHECK(field_of(bad) == "omega_ca_split");
  bad = p;
  bad.p_cb = 1.5;
  CHECK(field_of(bad) == "p_cb");
  bad = p;
  bad.phi = std::numeric_limits<double>::infinity();
  CHECK(field_of(bad) == "phi");
}

TEST_CASE("regime check") {
  const RegimeReport fig3 = validate_regime(presets::nonreciprocal(kPi / 2.0));
  CHECK(fig3.ratio == doctest::Approx(0.1));
  CHECK(fig3.valid);

  SystemParams close = presets::nonreciprocal(kPi / 2.0);
  close.omega_ab_split = close.omega_ca_split = 10.0;
  const RegimeReport r = validate_regime(close);
  CHECK(r.ratio == doctest::Approx(10.0));
  CHECK_FALSE(r.valid);

  SystemParams mild;
  mild.gamma_a = mild.gamma_b = mild.gamma_c = 1.0;
  const RegimeReport m = validate_regime(mild);
  CHECK(m.ratio == doctest::Approx(1e-3));
  CHECK(m.valid);
}
