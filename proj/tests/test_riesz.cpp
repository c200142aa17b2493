// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hillgap/eigensolver.hpp"
#include "hillgap/errors.hpp"
#include "hillgap/riesz.hpp"

using namespace hillgap;

namespace {

constexpr double kPi = std::numbers::pi;

FourierSequence trig() {
  return FourierSequence::from_pairs(Parity::Even, {{2, 1.0}, {-2, 1.0}, {6, complex{0.5, 0.5}}, {-6, complex{0.5, -0.5}}, {10, 0.25}});
}

FourierSequence random_unit(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  FourierSequence v(Parity::Even);
  for (long k = 2; k <= 40; k += 2) {
    v.set(k, complex{g(rng), g(rng)} / double(k));
    v.set(-k, complex{g(rng), g(rng)} / double(k));
  }
  return v.scaled(1.0 / weighted_norm(v, 0.0));
}

// l(2p) for p = +-(2n-1) by a plain sum over a wide index range.
complex l_oracle(const FourierSequence& v, int m, long n, int sign) {
  const long p = sign * (2 * n - 1);
  complex sum{};
  for (long i = -4001; i <= 4001; i += 2) {
    if (i == p || i == -p) continue;
    const double den = (std::pow(double(p), 2 * m) - std::pow(double(i), 2 * m)) * std::pow(kPi, 2 * m);
    sum += v(p - i) * v(i + p) / den;
  }
  return sum;
}

}  // namespace

TEST_CASE("contours") {
  const ContourSpec c = make_contour(2, 3, 64);
  CHECK(c.radius == 25.0);
  CHECK(c.center.real() == doctest::Approx(625 * std::pow(kPi, 4)).epsilon(1e-15));
  CHECK(c.points().size() == 64);
  CHECK_THROWS_AS(make_contour(1, 2, 48), PreconditionError);
  CHECK_THROWS_AS(make_contour(1, 2, 8), PreconditionError);
}

TEST_CASE("projector of the unperturbed operator") {
  const TruncatedOperator t = build_T(FourierSequence(Parity::Even), 1, 16);
  for (long n = 1; n <= 4; ++n) {
    const ProjectorPair pp = riesz_projector(t, make_contour(1, n, 64));
    CHECK(std::abs(pp.tr_P - 2.0) <= 1e-12);
    CHECK((pp.P - pp.P0).cwiseAbs().maxCoeff() <= 1e-12);
    const TauTraces tt = tau_from_traces(t, make_contour(1, n, 64));
    CHECK(std::abs(tt.tau - unperturbed_eigenvalue(1, 2 * n - 1)) <= 1e-12 * unperturbed_eigenvalue(1, 2 * n - 1));
  }
}

TEST_CASE("projector traces, idempotency and the trace formula") {
  for (const FourierSequence& v : {trig(), random_unit(3), random_unit(4)}) {
    const int K = 32;
    const TruncatedOperator t = build_T(v, 1, K);
    const EigenList e = eigenvalues(t);
    EigenPairTable table = pair_eigenvalues(e, 1, K, 8, RadiusRule::paper(1.1, 2.0, 0.0));
    refine_pairs(table, v);
    for (long n = 2; n <= 8; ++n) {
      const ProjectorPair pp = riesz_projector(t, make_contour(1, n, 64), &e.values);
      CHECK(std::abs(pp.tr_P - 2.0) <= 1e-9);
      CHECK(pp.idempotency <= 1e-10);
      CHECK(pp.quad_tol <= 1e-8);
      const TauTraces tt = tau_from_traces(t, make_contour(1, n, 64), &e.values);
      const PairRow& row = table.rows[std::size_t(n - 1)];
      CHECK(std::abs(tt.tau - row.tau) <= 1e-8 * (1 + std::abs(row.tau)));
      CHECK(tt.identity_gap <= std::max(1e-9, 10 * tt.quad_tol));
    }
  }
}

TEST_CASE("contour collisions are reported") {
  const TruncatedOperator t = build_T(FourierSequence(Parity::Even), 1, 16);
  // Circle around pi^2 through 9 pi^2.
  ContourSpec c{1, 1, complex{kPi * kPi}, 8 * kPi * kPi, 64};
  try {
    riesz_projector(t, c);
    FAIL("collision not detected");
  } catch (const ContourError& e) {
    CHECK(std::abs(e.offending() - 9 * kPi * kPi) <= 1e-9);
  }
}

TEST_CASE("first-order matrix") {
  const complex c{0.75, -0.5};
  const FourierSequence v = FourierSequence::from_pairs(Parity::Even, {{2, c}, {-2, std::conj(c) * 2.0}, {8, 0.3}});
  const int K = 16;
  const QuadratureMatrix q = q0_matrix(v, 1, 1, K);
  const OperatorShape shape{1, K};
  CHECK(std::abs(q.value(shape.index(1), shape.index(-1)) - v(2)) <= 1e-12);
  CHECK(std::abs(q.value(shape.index(-1), shape.index(1)) - v(-2)) <= 1e-12);
  CHECK(std::abs(q.value.trace()) <= 1e-12);
  CHECK((q.value - q0_closed_form(v, 1, 1, K)).cwiseAbs().maxCoeff() <= 1e-12);
  // No resonant coefficient for n = 3 (needs index +-10).
  CHECK(q0_matrix(v, 1, 3, K).value.cwiseAbs().maxCoeff() <= 1e-12);
  for (long n = 2; n <= 4; ++n) {
    const QuadratureMatrix r = q0_matrix(random_unit(n), 2, n, K);
    CHECK((r.value - q0_closed_form(random_unit(n), 2, n, K)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(std::abs(r.value.trace()) <= 1e-9);
  }
  FourierSequence with_zero = v;
  with_zero.set(0, 1.0);
  CHECK_THROWS_AS(q0_matrix(with_zero, 1, 1, K), PreconditionError);
}

TEST_CASE("second-order matrix and the correction sequence") {
  const int K = 32;
  CHECK(script_S_2x2(FourierSequence(Parity::Even), 1, 3, K).value.cwiseAbs().maxCoeff() == 0.0);
  CHECK(l_correction(FourierSequence(Parity::Even), 1, 3, LSide::Plus) == complex{});

  // Potential living only on the resonant indices of n = 3.
  const FourierSequence resonant = FourierSequence::from_pairs(Parity::Even, {{10, 1.0}, {-10, complex{0, 2}}});
  CHECK(std::abs(l_correction(resonant, 1, 3, LSide::Plus)) == 0.0);
  CHECK(std::abs(l_correction(resonant, 1, 3, LSide::Minus)) == 0.0);
  const Reduced2x2 sr = script_S_2x2(resonant, 1, 3, K);
  CHECK(std::abs(sr.value(0, 1)) <= 1e-12);
  CHECK(std::abs(sr.value(1, 0)) <= 1e-12);

  for (const FourierSequence& v : {trig(), random_unit(7)}) {
    for (const int m : {1, 2}) {
      for (long n = 2; n <= 6; ++n) {
        CHECK(std::abs(l_correction(v, m, n, LSide::Plus) - l_oracle(v, m, n, 1)) <= 1e-14);
        CHECK(std::abs(l_correction(v, m, n, LSide::Minus) - l_oracle(v, m, n, -1)) <= 1e-14);
        CHECK(l_direct(v, m, n) == l_correction(v, m, n, LSide::Plus));
        const Reduced2x2 s = script_S_2x2(v, m, n, K);
        CHECK(std::abs(s.value(0, 1) - l_direct(v, m, n, K)) <= std::max(1e-12, 10 * s.quad_tol));
        CHECK(std::abs(s.value(1, 0) - l_correction(v, m, n, LSide::Minus, K)) <= std::max(1e-12, 10 * s.quad_tol));
      }
    }
  }
}
