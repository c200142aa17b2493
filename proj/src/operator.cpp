// SPDX-License-Identifier: Apache-2.0
#include "hillgap/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hillgap/errors.hpp"

namespace hillgap {

namespace {

constexpr double kPi = std::numbers::pi;

__extension__ using wide = __int128;

wide ipow(long base, int exponent) {
  wide out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

double pi_pow(int exponent) { return std::pow(kPi, exponent); }

}  // namespace

Eigen::Index OperatorShape::index(long mode) const {
  if (mode % 2 == 0) return -1;
  const long i = (mode + 2L * K - 1) / 2;
  if (i < 0 || i >= 2L * K) return -1;
  return static_cast<Eigen::Index>(i);
}

void OperatorShape::validate() const {
  if (m < 1) throw PreconditionError("m must be >= 1");
  if (K < 1) throw PreconditionError("K must be >= 1");
  if (K > kMaxHalfWindow) throw PreconditionError("K exceeds the dense-window cap");
}

double unperturbed_eigenvalue(int m, long mode) {
  return std::pow(static_cast<double>(mode) * kPi, 2 * m);
}

double unperturbed_gap(int m, long mode, long ref) {
  const wide diff = ipow(mode, 2 * m) - ipow(ref, 2 * m);
  return static_cast<double>(diff) * pi_pow(2 * m);
}

Matrix toeplitz_block(const FourierSequence& v, int K) {
  if (v.parity() != Parity::Even) throw ParityError("B(v) needs an even-parity potential");
  const Eigen::Index dim = 2 * static_cast<Eigen::Index>(K);
  const long reach = 2 * (dim - 1);
  const std::vector<complex> dense = v.dense(reach);
  Matrix b(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      b(i, j) = dense[static_cast<std::size_t>(2 * (i - j) + reach)];
    }
  }
  return b;
}

TruncatedOperator build_A(int m, int K) {
  OperatorShape shape{m, K};
  shape.validate();
  TruncatedOperator op{shape, OperatorKind::Am, Matrix::Zero(shape.dim(), shape.dim())};
  for (Eigen::Index i = 0; i < shape.dim(); ++i) {
    op.entries(i, i) = unperturbed_eigenvalue(m, shape.mode(i));
  }
  return op;
}

TruncatedOperator build_B(const FourierSequence& v, int m, int K) {
  OperatorShape shape{m, K};
  shape.validate();
  return {shape, OperatorKind::Bv, toeplitz_block(v, K)};
}

TruncatedOperator build_T(const FourierSequence& v, int m, int K) {
  TruncatedOperator t = build_B(v, m, K);
  t.kind = OperatorKind::T;
  for (Eigen::Index i = 0; i < t.shape.dim(); ++i) {
    t.entries(i, i) += unperturbed_eigenvalue(m, t.shape.mode(i));
  }
  return t;
}

ResolventFactors build_resolvent_factors(const OperatorShape& shape, const Matrix& b,
                                         complex lambda) {
  shape.validate();
  const Eigen::Index dim = shape.dim();
  ResolventFactors f{shape, lambda, RealVector(dim), Vector(dim), Matrix(dim, dim)};
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double a = unperturbed_eigenvalue(shape.m, shape.mode(i));
    const complex d = lambda - a;
    const double mod = std::abs(d);
    if (mod < kCollisionTolerance * std::max(1.0, a)) {
      throw SingularFactorError("lambda collides with the unperturbed eigenvalue of mode " +
                                    std::to_string(shape.mode(i)),
                                lambda);
    }
    f.a_half(i) = std::sqrt(mod);
    f.i_lambda(i) = d / mod;
  }
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      f.s_lambda(i, j) = b(i, j) / (f.a_half(i) * f.a_half(j));
    }
  }
  return f;
}

ResolventFactors build_resolvent_factors(const OperatorShape& shape, const FourierSequence& v,
                                         complex lambda) {
  return build_resolvent_factors(shape, toeplitz_block(v, shape.K), lambda);
}

double factorization_residual(const FourierSequence& v, int m, int K, complex lambda) {
  const TruncatedOperator t = build_T(v, m, K);
  const ResolventFactors f = build_resolvent_factors(t.shape, v, lambda);
  const Eigen::Index dim = t.shape.dim();
  Matrix middle = -f.s_lambda;
  middle.diagonal() += f.i_lambda;
  const Matrix rebuilt = f.a_half.asDiagonal() * middle * f.a_half.asDiagonal();
  Matrix lhs = -t.entries;
  lhs.diagonal().array() += lambda;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) worst = std::max(worst, std::abs(lhs(i, j) - rebuilt(i, j)));
  }
  return worst;
}

double hs_norm_S(const ResolventFactors& f) { return f.s_lambda.norm(); }

double spectral_norm(const Matrix& s, double tol, int max_iter) {
  const Eigen::Index dim = s.cols();
  if (dim == 0 || s.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  if (dim <= kDenseNormLimit) {
    // Power iteration stalls on clustered top singular values; the dense
    // Hermitian solve is exact and cheap at this size.
    const Matrix gram = s.adjoint() * s;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
  }
  // Deterministic start with no special alignment to any structure.
  Vector x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    x(i) = complex{1.0 + 0.5 * std::sin(1.3 * static_cast<double>(i) + 0.7),
                   0.25 * std::cos(0.9 * static_cast<double>(i))};
  }
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector y = s.adjoint() * (s * x);
    const double next = std::sqrt(std::abs(x.dot(y)));
    const double ynorm = y.norm();
    if (ynorm == 0.0) return estimate;
    x = y / ynorm;
    if (std::abs(next - estimate) <= tol * std::max(next, 1e-300)) return next;
    estimate = next;
  }
  return estimate;
}

double op_norm_S(const ResolventFactors& f, double tol, int max_iter) {
  return spectral_norm(f.s_lambda, tol, max_iter);
}

// --- regions ----------------------------------------------------------------

SpectralRegion SpectralRegion::ext(double M) {
  if (!(M >= 1.0)) throw PreconditionError("Ext_M needs M >= 1");
  return SpectralRegion(ExtRegion{M});
}

SpectralRegion SpectralRegion::vert(int n, double r_n, int m) {
  if (n < 1 || m < 1) throw PreconditionError("Vert needs n >= 1 and m >= 1");
  const double half_width = std::pow(2.0 * n - 1.0, m) * pi_pow(2 * m);
  if (!(r_n > 0.0 && r_n < half_width)) {
    throw PreconditionError("Vert needs 0 < r_n < (2n-1)^m pi^{2m}");
  }
  return SpectralRegion(VertRegion{n, r_n, m});
}

SpectralRegion SpectralRegion::disc(complex center, double radius) {
  if (!(radius > 0.0)) throw PreconditionError("disc radius must be positive");
  return SpectralRegion(DiscRegion{center, radius});
}

bool SpectralRegion::contains(complex lambda) const {
  if (const auto* e = std::get_if<ExtRegion>(&region_)) {
    return lambda.real() <= std::abs(lambda.imag()) - e->M;
  }
  if (const auto* v = std::get_if<VertRegion>(&region_)) {
    const complex z = lambda - unperturbed_eigenvalue(v->m, 2L * v->n - 1);
    const double half_width = std::pow(2.0 * v->n - 1.0, v->m) * pi_pow(2 * v->m);
    return std::abs(z.real()) <= half_width && std::abs(z) >= v->r_n;
  }
  const auto& d = std::get<DiscRegion>(region_);
  return std::abs(lambda - d.center) < d.radius;
}

std::vector<complex> SpectralRegion::boundary_samples(int count) const {
  if (count < 4) throw PreconditionError("need at least 4 boundary samples");
  std::vector<complex> out;
  out.reserve(static_cast<std::size_t>(count));
  auto lin = [](double a, double b, int i, int total) {
    return total == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(total - 1);
  };
  if (const auto* e = std::get_if<ExtRegion>(&region_)) {
    for (int i = 0; i < count; ++i) {
      const double y = e->M * std::sinh(lin(-4.0, 4.0, i, count));
      out.emplace_back(std::abs(y) - e->M, y);
    }
    return out;
  }
  if (const auto* v = std::get_if<VertRegion>(&region_)) {
    const double c = unperturbed_eigenvalue(v->m, 2L * v->n - 1);
    const double half_width = std::pow(2.0 * v->n - 1.0, v->m) * pi_pow(2 * v->m);
    const int on_circle = count / 2;
    for (int i = 0; i < on_circle; ++i) {
      const double theta = 2.0 * kPi * (static_cast<double>(i) + 0.5) / on_circle;
      out.push_back(c + std::polar(v->r_n, theta));
    }
    const int rest = count - on_circle;
    const int left = rest / 2;
    const int right = rest - left;
    for (int i = 0; i < left; ++i) {
      out.emplace_back(c - half_width, half_width * std::sinh(lin(-2.0, 2.0, i, left)));
    }
    for (int i = 0; i < right; ++i) {
      out.emplace_back(c + half_width, half_width * std::sinh(lin(-2.0, 2.0, i, right)));
    }
    return out;
  }
  const auto& d = std::get<DiscRegion>(region_);
  for (int i = 0; i < count; ++i) {
    out.push_back(d.center + std::polar(d.radius, 2.0 * kPi * i / count));
  }
  return out;
}

double vert_threshold(int m) {
  return (8.0 * m * m + 4.0 * m - 7.0) / (2.0 * (8.0 * m - 7.0));
}

double ext_bound(int m, double alpha, double M, double v_norm) {
  if (!(M >= 1.0)) throw PreconditionError("ext_bound needs M >= 1");
  return std::pow(2.0, 2 * m + 1) * v_norm * std::pow(M, -((1.0 - alpha) / 2.0 + 0.25));
}

namespace {

void check_vert(int m, int n, double r_n) {
  if (m < 1) throw PreconditionError("m must be >= 1");
  if (static_cast<double>(n) < vert_threshold(m)) {
    throw PreconditionError("n is below (8m^2+4m-7)/(2(8m-7))");
  }
  const double half_width = std::pow(2.0 * n - 1.0, m) * pi_pow(2 * m);
  if (!(r_n > 0.0 && r_n < half_width)) {
    throw PreconditionError("r_n must satisfy 0 < r_n < (2n-1)^m pi^{2m}");
  }
}

double vert_tail(int m, double alpha, int n, double r_n, double v_norm) {
  const double q = 2.0 * n - 1.0;
  return 4.0 * std::pow(2.0 / kPi, m) *
         (std::pow(q, m * (alpha - 1.0 + 1.0 / (2.0 * m))) / std::sqrt(r_n) +
          6.0 * std::log(q) / std::pow(q, m * (1.0 - alpha))) *
         v_norm;
}

}  // namespace

double vert_bound(int m, double alpha, int n, double r_n, double v_norm,
                  std::pair<complex, complex> v_resonant) {
  check_vert(m, n, r_n);
  return (std::abs(v_resonant.first) + std::abs(v_resonant.second)) / r_n +
         vert_tail(m, alpha, n, r_n, v_norm);
}

double vert_bound_combined(int m, double alpha, int n, double r_n, double v_norm) {
  check_vert(m, n, r_n);
  return std::pow(3.0, m) * std::numbers::sqrt2 * std::pow(2.0 * n - 1.0, m * alpha) * v_norm /
             r_n +
         vert_tail(m, alpha, n, r_n, v_norm);
}

ElementaryBoundsReport elementary_bounds_check(int m, double alpha, int n, long cutoff) {
  if (m < 1 || n < m) throw PreconditionError("elementary bounds need n >= m >= 1");
  if (cutoff < 16L * n) throw PreconditionError("cutoff must be >= 16 n");
  ElementaryBoundsReport r;
  const double ma = m * alpha;
  for (long k = -cutoff; k <= cutoff; ++k) {
    if (k == n || k == -n) continue;
    const double den = std::sqrt(std::abs(static_cast<double>(ipow(k, 2 * m) - ipow(n, 2 * m))));
    r.sup_a = std::max(r.sup_a, std::pow(bracket(static_cast<double>(k)), ma) / den);
    const double wb = std::max(bracket(static_cast<double>(k + n)), bracket(static_cast<double>(k - n)));
    r.sup_b = std::max(r.sup_b, std::pow(wb, ma) / den);
    r.sum_c += 1.0 / den;
  }
  // Beyond the cutoff both suprema are attained inside (the terms decrease in
  // |k|); the sum needs the tail sum_{|k|>cutoff} |k|^{-m} (1 - 16^{-2m})^{-1/2}.
  if (m == 1) {
    r.sum_c = std::numeric_limits<double>::infinity();
  } else {
    r.sum_c += 4.0 * std::pow(static_cast<double>(cutoff), 1.0 - m) / (m - 1.0);
  }
  const double power = std::pow(static_cast<double>(n), m * (alpha - 1.0 + 1.0 / (2.0 * m)));
  r.bound_a = std::pow(3.0, ma) * power;
  r.bound_b = std::pow(4.0, ma) * power;
  r.bound_c = 5.0 * (1.0 + std::log(static_cast<double>(n))) / n;
  constexpr double slack = 1.0 + 1e-12;
  r.holds_a = r.sup_a <= r.bound_a * slack;
  r.holds_b = r.sup_b <= r.bound_b * slack;
  r.holds_c = r.sum_c <= r.bound_c * slack;
  r.all_hold = r.holds_a && r.holds_b && r.holds_c;
  return r;
}

Eq506Report eq506_check(int m, int n, int samples, int K) {
  if (static_cast<double>(n) < vert_threshold(m)) {
    throw PreconditionError("n is below (8m^2+4m-7)/(2(8m-7))");
  }
  if (2 * n - 1 > 2 * K - 1) throw PreconditionError("resonant modes fall outside the window");
  const long q = 2L * n - 1;
  const auto region = SpectralRegion::vert(n, std::pow(static_cast<double>(q), m), m);
  Eq506Report report;
  const double scale = 3.0 / pi_pow(2 * m);
  for (const complex lambda : region.boundary_samples(samples)) {
    ++report.samples;
    for (long k = -(2L * K - 1); k <= 2L * K - 1; k += 2) {
      if (k == q || k == -q) continue;
      const double lhs = 1.0 / std::abs(lambda - unperturbed_eigenvalue(m, k));
      const double rhs = scale / std::abs(static_cast<double>(ipow(k, 2 * m) - ipow(q, 2 * m)));
      report.worst_ratio = std::max(report.worst_ratio, lhs / rhs);
      if (lhs > rhs) report.holds = false;
    }
  }
  return report;
}

double resolvent_shifted_norm(int m, complex lambda, double s, double t, long shift_in,
                              long shift_out, int K) {
  const OperatorShape shape{m, K};
  shape.validate();
  double sup = 0.0;
  for (Eigen::Index i = 0; i < shape.dim(); ++i) {
    const long mode = shape.mode(i);
    const double a = unperturbed_eigenvalue(m, mode);
    const double dist = std::abs(lambda - a);
    if (dist < kCollisionTolerance * std::max(1.0, a)) {
      throw SingularFactorError("lambda collides with the unperturbed spectrum", lambda);
    }
    const double w = std::pow(bracket(static_cast<double>(mode + shift_out)), m * s) *
                     std::pow(bracket(static_cast<double>(mode + shift_in)), -m * t);
    sup = std::max(sup, w / dist);
  }
  return sup;
}

}  // namespace hillgap
