// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "hillgap/errors.hpp"
#include "hillgap/operator.hpp"

using namespace hillgap;

namespace {

constexpr double kPi = std::numbers::pi;

FourierSequence random_potential(std::uint64_t seed, long support, bool hermitian) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  FourierSequence v(Parity::Even);
  for (long k = 2; k <= support; k += 2) {
    const complex a{g(rng), g(rng)};
    v.set(k, a / double(k));
    v.set(-k, hermitian ? std::conj(a) / double(k) : complex{g(rng), g(rng)} / double(k));
  }
  return v;
}

double svd_norm(const Matrix& s) {
  Eigen::BDCSVD<Matrix> svd(s);
  return svd.singularValues()(0);
}

}  // namespace

TEST_CASE("unperturbed diagonal and Toeplitz stencil") {
  const TruncatedOperator a = build_A(1, 2);
  const double p2 = kPi * kPi;
  const double expected[] = {9 * p2, p2, p2, 9 * p2};
  for (int i = 0; i < 4; ++i) CHECK(a.entries(i, i).real() == doctest::Approx(expected[i]).epsilon(1e-15));
  CHECK(a.entries.isDiagonal());

  const FourierSequence v = FourierSequence::from_pairs(Parity::Even, {{2, 1.0}, {-2, 1.0}});
  const Matrix b = build_B(v, 1, 2).entries;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(b(i, j) == complex{std::abs(i - j) == 1 ? 1.0 : 0.0});
  }
  CHECK(OperatorShape{1, 2}.mode(0) == -3);
  CHECK(OperatorShape{1, 2}.index(3) == 3);
  CHECK(OperatorShape{1, 2}.index(5) == -1);
}

TEST_CASE("B is Hermitian for Hermitian-symmetric potentials") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix b = build_B(random_potential(seed, 40, true), 2, 24).entries;
    CHECK((b - b.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("unperturbed gaps are formed exactly") {
  CHECK(unperturbed_gap(1, 3, 1) == doctest::Approx(8 * kPi * kPi).epsilon(1e-15));
  CHECK(unperturbed_gap(3, 2047, -2047) == 0.0);
  const double big = unperturbed_gap(2, 2001, 1999);
  CHECK(big == doctest::Approx((std::pow(2001.0, 4) - std::pow(1999.0, 4)) * std::pow(kPi, 4)).epsilon(1e-12));
}

TEST_CASE("resolvent factors") {
  const OperatorShape shape{1, 2};
  const double p2 = kPi * kPi;
  const ResolventFactors f0 = build_resolvent_factors(shape, FourierSequence(Parity::Even), complex{2 * p2});
  CHECK(f0.s_lambda.cwiseAbs().maxCoeff() == 0.0);
  const double expected[] = {std::sqrt(7.0) * kPi, kPi, kPi, std::sqrt(7.0) * kPi};
  for (int i = 0; i < 4; ++i) CHECK(f0.a_half(i) == doctest::Approx(expected[i]).epsilon(1e-14));
  CHECK_THROWS_AS(build_resolvent_factors(shape, FourierSequence(Parity::Even), complex{9 * p2}),
                  SingularFactorError);
}

TEST_CASE("factorization reconstructs lambda - T") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-400.0, 400.0);
  for (const int m : {1, 2}) {
    const FourierSequence v = random_potential(10 + m, 30, false);
    const int K = 16;
    const Matrix t = build_T(v, m, K).entries;
    for (int trial = 0; trial < 10; ++trial) {
      const complex lambda{u(rng), u(rng)};
      const ResolventFactors f = build_resolvent_factors(OperatorShape{m, K}, v, lambda);
      // Independent reconstruction from the returned pieces.
      const Matrix half = f.a_half.cast<complex>().asDiagonal();
      Matrix inner = Matrix(f.i_lambda.asDiagonal()) - f.s_lambda;
      const Matrix rebuilt = half * inner * half;
      const Matrix direct = lambda * Matrix::Identity(2 * K, 2 * K) - t;
      const double scale = std::abs(lambda) + t.cwiseAbs().maxCoeff();
      CHECK((rebuilt - direct).cwiseAbs().maxCoeff() <= 1e-12 * scale);
      CHECK(factorization_residual(v, m, K, lambda) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("operator and Hilbert-Schmidt norms") {
  const ResolventFactors zero = build_resolvent_factors(OperatorShape{1, 8}, FourierSequence(Parity::Even), complex{0, 5});
  CHECK(op_norm_S(zero) == 0.0);
  CHECK(hs_norm_S(zero) == 0.0);

  Vector x = Vector::LinSpaced(12, 1.0, 2.0);
  const Matrix rank_one = x * x.adjoint();
  CHECK(spectral_norm(rank_one) == doctest::Approx(rank_one.norm()).epsilon(1e-12));

  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const FourierSequence v = random_potential(seed, 40, false);
    const ResolventFactors f = build_resolvent_factors(OperatorShape{1, 20}, v, complex{-30.0, 17.0});
    const double op = op_norm_S(f);
    CHECK(op <= hs_norm_S(f) * (1 + 1e-14));
    CHECK(op == doctest::Approx(svd_norm(f.s_lambda)).epsilon(1e-10));
  }

  // Beyond the dense limit the power iteration is used.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const Eigen::Index big = kDenseNormLimit + 40;
  Matrix s(big, big);
  for (Eigen::Index i = 0; i < big; ++i) {
    for (Eigen::Index j = 0; j < big; ++j) s(i, j) = complex{g(rng), g(rng)} / double(1 + i + j);
  }
  CHECK(spectral_norm(s) == doctest::Approx(svd_norm(s)).epsilon(1e-8));
}

TEST_CASE("regions") {
  CHECK_THROWS_AS(SpectralRegion::ext(0.5), PreconditionError);
  CHECK_THROWS_AS(SpectralRegion::vert(3, 100.0, 1), PreconditionError);
  CHECK_THROWS_AS(SpectralRegion::disc(complex{}, 0.0), PreconditionError);
  const SpectralRegion ext = SpectralRegion::ext(16);
  for (const complex z : ext.boundary_samples(32)) CHECK(ext.contains(z + complex{-1e-9, 0}));
  CHECK_FALSE(ext.contains(complex{0, 0}));
  const SpectralRegion vert = SpectralRegion::vert(10, 19.0, 1);
  for (const complex z : vert.boundary_samples(32)) {
    const complex c = z - unperturbed_eigenvalue(1, 19);
    CHECK(std::abs(c) >= 19.0 * (1 - 1e-12));
    CHECK(std::abs(c.real()) <= 19 * kPi * kPi * (1 + 1e-12));
  }
  CHECK(SpectralRegion::disc(complex{1, 1}, 2).contains(complex{2, 2}));
  CHECK(vert_threshold(1) == doctest::Approx(2.5));
}

TEST_CASE("Ext and Vert bound formulas") {
  CHECK(ext_bound(1, 0.0, 100, 1.0) == doctest::Approx(8 * std::pow(100.0, -0.75)).epsilon(1e-14));
  CHECK(ext_bound(1, 0.0, 100, 1.0) == doctest::Approx(0.2529822128).epsilon(1e-9));
  CHECK(ext_bound(2, 1.0, 16, 1.0) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(ext_bound(3, 0.5, 4, 0.0) == 0.0);
  CHECK(vert_bound(1, 0.0, 10, 19.0, 0.0, {0.0, 0.0}) == 0.0);
  const double expected = 2.0 / 19.0 + (8.0 / kPi) * (1.0 / 19.0 + 6.0 * std::log(19.0) / 19.0);
  CHECK(vert_bound(1, 0.0, 10, 19.0, 1.0, {1.0, 1.0}) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("sampled S norms respect the Ext and Vert bounds") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const FourierSequence v = random_potential(seed, 60, seed % 2 == 0);
    const double norm = weighted_norm(v, 0.0);
    const OperatorShape shape{1, 32};
    const Matrix b = toeplitz_block(v, 32);
    for (const double M : {4.0, 16.0, 100.0}) {
      for (const complex z : SpectralRegion::ext(M).boundary_samples(32)) {
        CHECK(hs_norm_S(build_resolvent_factors(shape, b, z)) <= ext_bound(1, 0.0, M, norm));
      }
    }
    const double bound = vert_bound(1, 0.0, 10, 19.0, norm, {v(38), v(-38)});
    for (const complex z : SpectralRegion::vert(10, 19.0, 1).boundary_samples(32)) {
      CHECK(op_norm_S(build_resolvent_factors(shape, b, z)) <= bound);
    }
  }
}

TEST_CASE("elementary estimates") {
  const ElementaryBoundsReport r1 = elementary_bounds_check(1, 0.0, 1, 16);
  CHECK(r1.sup_a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r1.bound_a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r1.holds_a);
  for (const int m : {1, 2, 3}) {
    const ElementaryBoundsReport r = elementary_bounds_check(m, 0.0, 7, 112);
    CHECK(r.sup_a == r.sup_b);
  }
  // Truncated sum at n = 10 by plain enumeration.
  double partial = 0.0;
  for (long k = -160; k <= 160; ++k) {
    if (k != 10 && k != -10) partial += 1.0 / std::sqrt(std::abs(double(k * k) - 100.0));
  }
  CHECK(partial > 5.0 * (1.0 + std::log(10.0)) / 10.0);
  const ElementaryBoundsReport r10 = elementary_bounds_check(1, 0.0, 10, 160);
  CHECK(r10.bound_c == doctest::Approx(1.6513).epsilon(1e-4));
  CHECK_FALSE(r10.holds_c);
  const ElementaryBoundsReport r2 = elementary_bounds_check(2, 0.5, 10, 160);
  CHECK(r2.all_hold);
  CHECK_THROWS_AS(elementary_bounds_check(3, 0.0, 2, 64), PreconditionError);
}

TEST_CASE("inequality on the Vert boundary and shifted resolvent norms") {
  CHECK(eq506_check(1, 5, 32, 64).holds);
  CHECK_THROWS_AS(eq506_check(2, 1, 32, 64), PreconditionError);
  const complex lambda{50.0, 3.0};
  double dist = std::numeric_limits<double>::infinity();
  for (long k = -127; k <= 127; k += 2) dist = std::min(dist, std::abs(lambda - unperturbed_eigenvalue(1, k)));
  CHECK(resolvent_shifted_norm(1, lambda, 0.0, 0.0, 0, 0, 64) == doctest::Approx(1.0 / dist).epsilon(1e-14));
}
