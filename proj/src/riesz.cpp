// SPDX-License-Identifier: Apache-2.0
#include "hillgap/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hillgap/eigensolver.hpp"
#include "hillgap/errors.hpp"

namespace hillgap {

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return a.rows() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

void check_window(long n, int K) {
  if (n < 1) throw PreconditionError("n must be >= 1");
  if (2 * n - 1 > 2L * K - 1) throw PreconditionError("resonant modes fall outside the window");
}

void check_clearance(const ContourSpec& c, complex lambda, const char* what) {
  if (std::abs(std::abs(lambda - c.center) - c.radius) < kContourClearance * c.radius) {
    throw ContourError(std::string(what) + " lies on the contour around n = " + std::to_string(c.n),
                       lambda);
  }
}

}  // namespace

void ContourSpec::validate() const {
  if (m < 1 || n < 1) throw PreconditionError("contour needs m >= 1 and n >= 1");
  if (nodes < 16 || (nodes & (nodes - 1)) != 0) {
    throw PreconditionError("quadrature nodes must be a power of two >= 16");
  }
  if (!(radius > 0.0)) throw PreconditionError("contour radius must be positive");
}

std::vector<complex> ContourSpec::offsets() const {
  std::vector<complex> out(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    out[static_cast<std::size_t>(j)] = std::polar(radius, 2.0 * std::numbers::pi * j / nodes);
  }
  return out;
}

std::vector<complex> ContourSpec::points() const {
  std::vector<complex> out = offsets();
  for (complex& z : out) z += center;
  return out;
}

ContourSpec make_contour(int m, long n, int nodes, complex shift) {
  ContourSpec c{m, n, unperturbed_eigenvalue(m, 2 * n - 1) + shift,
                std::pow(2.0 * static_cast<double>(n) - 1.0, m), nodes};
  c.validate();
  return c;
}

ProjectorPair riesz_projector(const TruncatedOperator& t, const ContourSpec& contour,
                              const std::vector<complex>* eigs, Backend backend) {
  contour.validate();
  const OperatorShape& shape = t.shape;
  check_window(contour.n, shape.K);
  const Eigen::Index dim = shape.dim();

  Matrix b = t.entries;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double a = unperturbed_eigenvalue(shape.m, shape.mode(i));
    b(i, i) -= a;
    check_clearance(contour, a, "an unperturbed eigenvalue");
  }
  if (eigs != nullptr) {
    for (const complex lambda : *eigs) check_clearance(contour, lambda, "an eigenvalue");
  } else {
    EigenOptions opts;
    opts.validate = false;
    for (const complex lambda : eigenvalues(t.entries, opts).values) {
      check_clearance(contour, lambda, "an eigenvalue");
    }
  }

  const std::vector<complex> offsets = contour.offsets();
  std::vector<complex> nodes(offsets.size());
  std::vector<complex> weights(offsets.size());
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    nodes[j] = contour.center + offsets[j];
    weights[j] = offsets[j] / static_cast<double>(contour.nodes);
  }
  ContourSums sums = contour_sums(shape, b, contour.center, nodes, weights, backend);

  ProjectorPair out;
  out.P = std::move(sums.p);
  out.P0 = Matrix::Zero(dim, dim);
  const long resonant = 2 * contour.n - 1;
  for (const long mode : {resonant, -resonant}) {
    const Eigen::Index i = shape.index(mode);
    out.P0(i, i) = 1.0;
  }
  out.tr_P = out.P.trace();
  out.tr_P0 = out.P0.trace();
  out.tr_TP = sums.tr_tp;
  out.tr_AP0 = 2.0 * unperturbed_eigenvalue(shape.m, resonant);
  out.tr_Q = sums.tr_q;
  out.quad_tol = std::max({max_abs_diff(out.P, sums.p_half), std::abs(out.tr_P - sums.p_half.trace()),
                           std::abs(sums.tr_tp - sums.tr_tp_half), std::abs(sums.tr_q - sums.tr_q_half)});
  out.idempotency = max_abs_diff(out.P * out.P, out.P);
  return out;
}

TauTraces tau_from_traces(const TruncatedOperator& t, const ContourSpec& contour,
                          const std::vector<complex>* eigs, Backend backend) {
  const ProjectorPair pp = riesz_projector(t, contour, eigs, backend);
  TauTraces out;
  out.tau = 0.5 * pp.tr_TP;
  out.tr_Q = pp.tr_Q;
  out.tr_P = pp.tr_P;
  out.identity_gap = std::abs(2.0 * out.tau - 2.0 * contour.center - out.tr_Q);
  out.quad_tol = pp.quad_tol;
  return out;
}

namespace {

// Gap a_mode - center of every window mode, formed exactly.
std::vector<double> window_gaps(int m, long n, int K) {
  const OperatorShape shape{m, K};
  std::vector<double> gaps(static_cast<std::size_t>(shape.dim()));
  for (Eigen::Index i = 0; i < shape.dim(); ++i) {
    gaps[static_cast<std::size_t>(i)] = unperturbed_gap(m, shape.mode(i), 2 * n - 1);
  }
  return gaps;
}

void check_zero_mode(const FourierSequence& v) {
  if (v(0) != complex{}) throw PreconditionError("this quantity needs v(0) = 0");
}

}  // namespace

QuadratureMatrix q0_matrix(const FourierSequence& v, int m, long n, int K, int nodes) {
  check_zero_mode(v);
  check_window(n, K);
  const ContourSpec contour = make_contour(m, n, nodes);
  const std::vector<complex> z = contour.offsets();
  const std::vector<double> gaps = window_gaps(m, n, K);
  const Matrix b = toeplitz_block(v, K);
  const Eigen::Index dim = b.rows();
  QuadratureMatrix out{Matrix::Zero(dim, dim), 0.0};
  const double inv_n = 1.0 / nodes;
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (b(i, j) == complex{}) continue;
      complex full{};
      complex half{};
      for (std::size_t k = 0; k < z.size(); ++k) {
        // w_k (lambda - c) / ((lambda - a_i)(lambda - a_j)), w_k = z_k / N
        const complex term = inv_n * z[k] * z[k] /
                             ((z[k] - gaps[static_cast<std::size_t>(i)]) *
                              (z[k] - gaps[static_cast<std::size_t>(j)]));
        full += term;
        if (k % 2 == 0) half += 2.0 * term;
      }
      out.value(i, j) = b(i, j) * full;
      out.quad_tol = std::max(out.quad_tol, std::abs(b(i, j) * (full - half)));
    }
  }
  return out;
}

Matrix q0_closed_form(const FourierSequence& v, int m, long n, int K) {
  check_window(n, K);
  const OperatorShape shape{m, K};
  Matrix q = Matrix::Zero(shape.dim(), shape.dim());
  const long p = 2 * n - 1;
  const Eigen::Index ip = shape.index(p);
  const Eigen::Index im = shape.index(-p);
  q(ip, im) = v(2 * p);
  q(im, ip) = v(-2 * p);
  q(ip, ip) = v(0);
  q(im, im) = v(0);
  return q;
}

Reduced2x2 script_S_2x2(const FourierSequence& v, int m, long n, int K, int nodes) {
  check_zero_mode(v);
  check_window(n, K);
  const ContourSpec contour = make_contour(m, n, nodes);
  const std::vector<complex> z = contour.offsets();
  const OperatorShape shape{m, K};
  const std::vector<double> gaps = window_gaps(m, n, K);
  const long p = 2 * n - 1;
  const long modes[2] = {p, -p};
  Reduced2x2 out{Eigen::Matrix2cd::Zero(), 0.0};
  Eigen::Matrix2cd half = Eigen::Matrix2cd::Zero();
  const double inv_n = 1.0 / nodes;
  for (Eigen::Index i = 0; i < shape.dim(); ++i) {
    const long mode = shape.mode(i);
    // (1/2 pi i) int dlambda / ((lambda - c)(lambda - a_i)) with weights z_k / N
    complex s_full{};
    complex s_half{};
    for (std::size_t k = 0; k < z.size(); ++k) {
      const complex term = inv_n / (z[k] - gaps[static_cast<std::size_t>(i)]);
      s_full += term;
      if (k % 2 == 0) s_half += 2.0 * term;
    }
    for (int a = 0; a < 2; ++a) {
      for (int c = 0; c < 2; ++c) {
        const complex coupling = v(modes[a] - mode) * v(mode - modes[c]);
        if (coupling == complex{}) continue;
        out.value(a, c) += coupling * s_full;
        half(a, c) += coupling * s_half;
      }
    }
  }
  out.quad_tol = (out.value - half).cwiseAbs().maxCoeff();
  return out;
}

complex l_correction(const FourierSequence& v, int m, long n, LSide side, std::optional<int> window) {
  if (n < 1) throw PreconditionError("n must be >= 1");
  const long resonant = 2 * n - 1;
  const long p = side == LSide::Plus ? resonant : -resonant;
  const long q = -p;
  complex sum{};
  for (const auto& [d, vd] : v.coeffs()) {
    const long i = p - d;
    if (i == resonant || i == -resonant) continue;
    if (window && std::abs(i) > 2L * *window - 1) continue;
    const complex partner = v(i - q);
    if (partner == complex{}) continue;
    sum += vd * partner / unperturbed_gap(m, p, i);
  }
  return sum;
}

complex l_direct(const FourierSequence& v, int m, long n, std::optional<int> window) {
  return l_correction(v, m, n, LSide::Plus, window);
}

}  // namespace hillgap
