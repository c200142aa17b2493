// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hillgap/errors.hpp"
#include "hillgap/seqspace.hpp"

using namespace hillgap;

namespace {

FourierSequence even(std::vector<std::pair<long, complex>> e) { return FourierSequence::from_pairs(Parity::Even, e); }
FourierSequence odd(std::vector<std::pair<long, complex>> e) { return FourierSequence::from_pairs(Parity::Odd, e); }

// Plain least squares of log r on log n.
double slope_oracle(const std::vector<std::pair<long, double>>& r) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, v] : r) {
    const double x = std::log(static_cast<double>(n)), y = std::log(v);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double k = static_cast<double>(r.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace

TEST_CASE("sequences reject the wrong parity and non-finite values") {
  FourierSequence v(Parity::Even);
  CHECK_THROWS_AS(v.set(3, 1.0), ParityError);
  CHECK_THROWS_AS(v.set(2, complex{NAN, 0.0}), FormatError);
  v.set(2, 1.0);
  CHECK(v(2) == complex{1.0});
  CHECK(v(3) == complex{});
  CHECK(v(100) == complex{});
  v.set(2, 0.0);
  CHECK(v.empty());
}

TEST_CASE("weighted norm") {
  CHECK(weighted_norm(even({{0, 3.0}}), 2.5) == doctest::Approx(3.0).epsilon(1e-15));
  const FourierSequence a = even({{2, 1.0}, {-2, 1.0}});
  CHECK(weighted_norm(a, 1.0) == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(weighted_norm(a, -1.0, 2) == doctest::Approx(std::sqrt(1.0 / 25.0 + 1.0)).epsilon(1e-14));
}

TEST_CASE("convolution") {
  CHECK(convolve(even({{2, 1.0}}), odd({{-1, 1.0}})) == odd({{1, 1.0}}));
  const FourierSequence b = odd({{1, complex{1, 2}}, {-5, 3.0}});
  CHECK(convolve(even({{0, complex{0, 2}}}), b) == b.scaled(complex{0, 2}));
  CHECK(convolve(even({{2, 1.0}, {-2, 1.0}}), odd({{1, 1.0}, {-1, 1.0}})) ==
        odd({{3, 1.0}, {1, 1.0}, {-1, 1.0}, {-3, 1.0}}));
}

TEST_CASE("convolution agrees with a brute-force sum") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  FourierSequence a(Parity::Even), b(Parity::Odd);
  for (long k = -10; k <= 10; k += 2) a.set(k, {g(rng), g(rng)});
  for (long k = -9; k <= 9; k += 2) b.set(k, {g(rng), g(rng)});
  const FourierSequence c = convolve(a, b);
  for (long k = -21; k <= 21; k += 2) {
    complex sum{};
    for (long j = -30; j <= 30; ++j) sum += a(k - j) * b(j);
    CHECK(std::abs(c(k) - sum) <= 1e-13);
  }
}

TEST_CASE("Hermitian symmetry") {
  CHECK(is_real_valued(even({{2, 1.0}, {-2, 1.0}})));
  CHECK_FALSE(is_real_valued(even({{2, complex{0, 1}}})));
  CHECK(is_real_valued(even({{2, complex{1, 2}}, {-2, complex{1, -2}}})));
  const FourierSequence v = even({{4, complex{1, 3}}, {-2, 2.0}});
  CHECK(conjugate_seq(conjugate_seq(v)) == v);
}

TEST_CASE("zero-mode split") {
  const ZeroModeSplit s1 = normalize_zero_mode(even({{0, 5.0}}));
  CHECK(s1.v.empty());
  CHECK(s1.shift == complex{5.0});
  const FourierSequence v2 = even({{2, 1.0}});
  const ZeroModeSplit s2 = normalize_zero_mode(v2);
  CHECK(s2.v == v2);
  CHECK(s2.shift == complex{});
  const ZeroModeSplit s3 = normalize_zero_mode(even({{0, complex{1, 1}}, {4, 2.0}}));
  CHECK(s3.v == even({{4, 2.0}}));
  CHECK(s3.shift == complex{1, 1});
}

TEST_CASE("potential generation") {
  PotentialSpec trig;
  trig.family = PotentialFamily::TrigPolynomial;
  trig.coefficients = even({{2, 1.0}, {-2, 1.0}});
  trig.radius = 10.0;
  CHECK(make_potential(trig, {1, 0.0, 0.0, 0}) == trig.coefficients);

  for (const double alpha : {0.0, 0.5, 0.75}) {
    for (const bool real : {false, true}) {
      PotentialSpec rough;
      rough.family = PotentialFamily::RandomRough;
      rough.radius = 1.0;
      rough.seed = 11;
      rough.real_valued = real;
      const FourierSequence v = make_potential(rough, {1, alpha, 0.0, 0});
      CHECK(weighted_norm(v, -alpha) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(v(0) == complex{});
      CHECK(is_real_valued(v) == real);
      CHECK(make_potential(rough, {1, alpha, 0.0, 0}) == v);
    }
  }

  PotentialSpec bad;
  bad.family = PotentialFamily::Explicit;
  CHECK_THROWS_AS(bad.coefficients.set(3, 1.0), ParityError);
}

TEST_CASE("derivative-type potentials follow v(2k) = i 2 pi k q(2k)") {
  PotentialSpec d;
  d.family = PotentialFamily::DerivativeType;
  d.q = even({{2, 0.5}, {-4, complex{0, 1}}});
  d.radius = std::numeric_limits<double>::infinity();
  const FourierSequence v = make_potential(d, {1, 1.0, 0.0, 0});
  CHECK(std::abs(v(2) - complex{0, 2.0 * M_PI * 1.0} * 0.5) < 1e-14);
  CHECK(std::abs(v(-4) - complex{0, 2.0 * M_PI * -2.0} * complex{0, 1}) < 1e-14);
}

TEST_CASE("Sobolev parameters are validated") {
  CHECK_THROWS_AS((SobolevParams{0, 0.0, 0.0, 0}.validate()), PreconditionError);
  CHECK_THROWS_AS((SobolevParams{1, 1.5, 0.0, 0}.validate()), PreconditionError);
  CHECK_NOTHROW((SobolevParams{2, 1.0, 0.0, 0}.validate()));
}

TEST_CASE("decay exponent") {
  std::vector<std::pair<long, double>> exact, zeros, wiggle;
  for (long n = 10; n <= 100; ++n) exact.emplace_back(n, 1.0 / (double(n) * n));
  CHECK(decay_exponent(exact, 10, 100).slope == doctest::Approx(-2.0).epsilon(1e-6));
  for (long n = 1; n <= 50; ++n) zeros.emplace_back(n, 0.0);
  CHECK(decay_exponent(zeros, 1, 50).exact_zero);
  for (long n = 10; n <= 200; ++n) wiggle.emplace_back(n, (2.0 + (n % 2 ? -1.0 : 1.0)) / double(n));
  const double s = decay_exponent(wiggle, 10, 200).slope;
  CHECK(std::abs(s + 1.0) <= 0.1);
  CHECK(s == doctest::Approx(slope_oracle(wiggle)).epsilon(1e-10));
  CHECK_THROWS_AS(decay_exponent(exact, 10, 12), PreconditionError);
}

TEST_CASE("membership verdict separates decaying and growing sequences") {
  std::vector<std::pair<long, double>> good, bad;
  for (long n = 8; n <= 64; ++n) {
    good.emplace_back(n, std::pow(double(n), -1.5));
    bad.emplace_back(n, std::pow(double(n), 0.5));
  }
  CHECK(membership_verdict(good, 1.0, 8, 64));
  CHECK_FALSE(membership_verdict(bad, 1.0, 8, 64, 2.0));
}

TEST_CASE("potential JSON round trip and errors") {
  const FourierSequence v = even({{2, complex{1.5, -0.25}}, {-6, 3.0}, {0, 0.125}});
  CHECK(potential_from_json(potential_to_json(v)) == v);
  CHECK_THROWS_AS(potential_from_json("{"), FormatError);
  CHECK_THROWS_AS(potential_from_json(R"({"parity":"odd","coeffs":[]})"), FormatError);
  try {
    potential_from_json(R"({"parity":"even","coeffs":[[2,1,0],[3,1,0]]})");
    FAIL("odd index accepted");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("index 3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_potential("/nonexistent/potential.json"), FormatError);
}
