// SPDX-License-Identifier: Apache-2.0
#include "hillgap/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "hillgap/errors.hpp"

namespace hillgap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_hermitian(const Matrix& t) {
  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    for (Eigen::Index i = j; i < t.rows(); ++i) {
      if (std::abs(t(i, j) - std::conj(t(j, i))) > 1e-14 * scale) return false;
    }
  }
  return true;
}

// Solves (H - shift) x = rhs for upper Hessenberg H, pivoting between
// adjacent rows only. Zero pivots are replaced by eps ||H||.
using RowMatrix = Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Row operations dominate, hence the row-major working copy.
Vector hessenberg_solve(const RowMatrix& h, complex shift, Vector rhs, double h_norm) {
  const Eigen::Index n = h.rows();
  RowMatrix u = h;
  u.diagonal().array() -= shift;
  const double tiny = std::max(kEps * h_norm, std::numeric_limits<double>::min());
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (std::abs(u(k + 1, k)) > std::abs(u(k, k))) {
      for (Eigen::Index j = k; j < n; ++j) std::swap(u(k, j), u(k + 1, j));
      std::swap(rhs(k), rhs(k + 1));
    }
    if (u(k, k) == complex{}) u(k, k) = tiny;
    const complex l = u(k + 1, k) / u(k, k);
    if (l != complex{}) {
      for (Eigen::Index j = k + 1; j < n; ++j) u(k + 1, j) -= l * u(k, j);
      rhs(k + 1) -= l * rhs(k);
    }
    u(k + 1, k) = 0.0;
  }
  if (u(n - 1, n - 1) == complex{}) u(n - 1, n - 1) = tiny;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    complex acc = rhs(i);
    for (Eigen::Index j = i + 1; j < n; ++j) acc -= u(i, j) * rhs(j);
    rhs(i) = acc / u(i, i);
  }
  return rhs;
}

// Same elimination for a Hermitian tridiagonal (diag, sub) matrix; pivoting
// fills one extra superdiagonal.
Vector tridiagonal_solve(const RealVector& diag, const RealVector& sub, complex shift, Vector rhs,
                         double t_norm) {
  const Eigen::Index n = diag.size();
  std::vector<complex> d(static_cast<std::size_t>(n)), up(static_cast<std::size_t>(n)),
      up2(static_cast<std::size_t>(n)), lo(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    d[k] = diag(i) - shift;
    up[k] = i + 1 < n ? complex{sub(i)} : complex{};
    lo[k] = i + 1 < n ? complex{sub(i)} : complex{};
  }
  const double tiny = std::max(kEps * t_norm, std::numeric_limits<double>::min());
  for (std::size_t k = 0; k + 1 < static_cast<std::size_t>(n); ++k) {
    // Row k: d[k] up[k] up2[k]; row k+1: lo[k] d[k+1] up[k+1].
    if (std::abs(lo[k]) > std::abs(d[k])) {
      const complex r0 = d[k], r1 = up[k];
      d[k] = lo[k];
      up[k] = d[k + 1];
      up2[k] = up[k + 1];
      lo[k] = r0;
      d[k + 1] = r1;
      up[k + 1] = 0.0;
      std::swap(rhs(static_cast<Eigen::Index>(k)), rhs(static_cast<Eigen::Index>(k + 1)));
    }
    if (d[k] == complex{}) d[k] = tiny;
    const complex l = lo[k] / d[k];
    d[k + 1] -= l * up[k];
    if (k + 2 < static_cast<std::size_t>(n)) up[k + 1] -= l * up2[k];
    rhs(static_cast<Eigen::Index>(k + 1)) -= l * rhs(static_cast<Eigen::Index>(k));
  }
  if (d.back() == complex{}) d.back() = tiny;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const auto k = static_cast<std::size_t>(i);
    complex acc = rhs(i);
    if (i + 1 < n) acc -= up[k] * rhs(i + 1);
    if (i + 2 < n) acc -= up2[k] * rhs(i + 2);
    rhs(i) = acc / d[k];
  }
  return rhs;
}

Vector random_phase_start(Eigen::Index n) {
  std::mt19937_64 rng(0x5eed5eedULL);
  Vector start(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    start(i) = std::polar(1.0, phase);
  }
  return start;
}

std::vector<double> tridiagonal_certificates(const Matrix& t, const std::vector<complex>& lambdas) {
  const Eigen::Tridiagonalization<Matrix> tri(t);
  const RealVector diag = tri.diagonal();
  const RealVector sub = tri.subDiagonal();
  const Eigen::Index n = diag.size();
  const double t_norm =
      std::max(std::sqrt(diag.squaredNorm() + 2.0 * sub.squaredNorm()), std::numeric_limits<double>::min());
  const Vector start = random_phase_start(n);
  std::vector<double> out(lambdas.size(), 0.0);
  parallel_for(lambdas.size(), default_backend(), [&](std::size_t i) {
    const complex lambda = lambdas[i];
    Vector x = tridiagonal_solve(diag, sub, lambda, start, t_norm);
    const double xn = x.norm();
    if (!std::isfinite(xn) || xn == 0.0) {
      out[i] = std::numeric_limits<double>::infinity();
      return;
    }
    x /= xn;
    Vector r = (diag.cast<complex>().array() - lambda) * x.array();
    r.head(n - 1) += sub.cast<complex>().cwiseProduct(x.tail(n - 1));
    r.tail(n - 1) += sub.cast<complex>().cwiseProduct(x.head(n - 1));
    out[i] = r.norm() / t_norm;
  });
  return out;
}

}  // namespace

bool lex_less(complex a, complex b, double tol) {
  const double band = tol * (1.0 + std::max(std::abs(a), std::abs(b)));
  if (std::abs(a.real() - b.real()) > band) return a.real() < b.real();
  return a.imag() < b.imag();
}

void sort_lexicographic(std::vector<complex>& values, double tol) {
  std::stable_sort(values.begin(), values.end(),
                   [](complex a, complex b) { return a.real() < b.real(); });
  std::size_t start = 0;
  while (start < values.size()) {
    const complex anchor = values[start];
    std::size_t end = start + 1;
    while (end < values.size() &&
           values[end].real() - anchor.real() <= tol * (1.0 + std::abs(anchor))) {
      ++end;
    }
    std::stable_sort(values.begin() + static_cast<long>(start), values.begin() + static_cast<long>(end),
                     [](complex a, complex b) { return a.imag() < b.imag(); });
    start = end;
  }
}

std::vector<double> residual_certificates(const Matrix& t, const std::vector<complex>& lambdas) {
  const Eigen::Index n = t.rows();
  std::vector<double> out;
  if (n == 0) return std::vector<double>(lambdas.size(), std::numeric_limits<double>::infinity());
  if (n > 1 && is_hermitian(t)) return tridiagonal_certificates(t, lambdas);
  const Eigen::HessenbergDecomposition<Matrix> hd(t);
  const RowMatrix h = hd.matrixH();
  const double h_norm = std::max(h.norm(), std::numeric_limits<double>::min());
  const Vector start = random_phase_start(n);
  out.assign(lambdas.size(), 0.0);
  parallel_for(lambdas.size(), default_backend(), [&](std::size_t i) {
    const complex lambda = lambdas[i];
    Vector x = hessenberg_solve(h, lambda, start, h_norm);
    const double xn = x.norm();
    if (!std::isfinite(xn) || xn == 0.0) {
      out[i] = std::numeric_limits<double>::infinity();
      return;
    }
    x /= xn;
    const Vector r = h * x - lambda * x;
    out[i] = r.norm() / h_norm;
  });
  return out;
}

EigenList eigenvalues(const Matrix& t, const EigenOptions& options) {
  if (!t.allFinite()) throw PreconditionError("matrix has non-finite entries");
  EigenList out;
  out.matrix_norm = t.norm();
  if (options.detect_hermitian && is_hermitian(t)) {
    out.hermitian_path = true;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(t, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw SolverError("symmetric QR did not converge");
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      out.values.emplace_back(solver.eigenvalues()(i), 0.0);
    }
  } else {
    Eigen::ComplexEigenSolver<Matrix> solver;
    // Eigen counts the total, not per row.
    solver.setMaxIterations(kQrIterationsPerRow * std::max<Eigen::Index>(t.rows(), 1));
    solver.compute(t, false);
    std::vector<complex> values(solver.eigenvalues().data(),
                                solver.eigenvalues().data() + solver.eigenvalues().size());
    if (solver.info() != Eigen::Success) {
      throw SolverError("QR iteration did not converge within " + std::to_string(kQrIterationsPerRow) + " iterations per row", values);
    }
    out.values = std::move(values);
  }
  sort_lexicographic(out.values, options.order_tol);
  if (options.validate) {
    const std::vector<double> res = residual_certificates(t, out.values);
    for (std::size_t i = 0; i < res.size(); ++i) {
      out.max_residual = std::max(out.max_residual, res[i]);
      if (!(res[i] <= options.residual_tol)) {
        throw SolverError("residual certificate " + std::to_string(res[i]) + " for eigenvalue " +
                              std::to_string(i) + " exceeds tolerance",
                          out.values);
      }
    }
  }
  return out;
}

EigenList eigenvalues(const TruncatedOperator& t, const EigenOptions& options) {
  return eigenvalues(t.entries, options);
}

// --- pairing ------------------------------------------------------------------

double RadiusRule::radius(int m, long n) const {
  if (kind == Kind::Fixed) return fixed;
  return std::pow(3.0, m) * std::numbers::sqrt2 * C * R *
         std::pow(2.0 * static_cast<double>(n) - 1.0, m * alpha);
}

namespace {

void check_pairing_config(int m, int K, long n_max, const RadiusRule& rule) {
  if (n_max < 1) throw PreconditionError("n_max must be >= 1");
  if (n_max > K / 4) {
    throw PreconditionError("n_max = " + std::to_string(n_max) + " exceeds K/4 = " +
                            std::to_string(K / 4));
  }
  if (!(rule.radius(m, 1) > 0.0)) throw ConfigurationError("pairing radius must be positive");
  for (long n = 1; n < n_max; ++n) {
    const double spacing = unperturbed_gap(m, 2 * n + 1, 2 * n - 1);
    if (spacing < rule.radius(m, n) + rule.radius(m, n + 1)) {
      throw ConfigurationError("pairing discs " + std::to_string(n) + " and " +
                               std::to_string(n + 1) + " overlap");
    }
  }
}

void fill_pair(PairRow& row, complex shift, complex lo, complex hi) {
  row.lambda_lo = lo;
  row.lambda_hi = hi;
  row.tau = 0.5 * (lo + hi);
  row.gamma = hi - lo;
  row.tau_offset = row.tau - row.center - shift;
  row.paired = true;
}

}  // namespace

EigenPairTable pair_eigenvalues(const EigenList& eigs, int m, int K, long n_max,
                                const RadiusRule& rule, complex shift) {
  check_pairing_config(m, K, n_max, rule);
  EigenPairTable table{m, K, shift, {}};
  for (long n = 1; n <= n_max; ++n) {
    PairRow row;
    row.n = n;
    row.center = unperturbed_eigenvalue(m, 2 * n - 1);
    row.disc_radius_used = rule.radius(m, n);
    std::vector<complex> hits;
    for (const complex lambda : eigs.values) {
      if (std::abs(lambda - (row.center + shift)) < row.disc_radius_used) hits.push_back(lambda);
    }
    row.hits = static_cast<int>(hits.size());
    if (hits.size() == 2) {
      if (lex_less(hits[1], hits[0])) std::swap(hits[0], hits[1]);
      fill_pair(row, shift, hits[0], hits[1]);
      row.resolution = kEps * eigs.matrix_norm;
    } else {
      row.lambda_lo = row.lambda_hi = row.tau = row.gamma = row.tau_offset = {kNaN, kNaN};
    }
    table.rows.push_back(row);
  }
  return table;
}

EigenPairTable pair_by_index(const EigenList& eigs, int m, int K, long n_max, complex shift) {
  if (n_max < 1) throw PreconditionError("n_max must be >= 1");
  if (static_cast<std::size_t>(2 * n_max) > eigs.values.size()) {
    throw PreconditionError("n_max exceeds half the number of eigenvalues");
  }
  EigenPairTable table{m, K, shift, {}};
  for (long n = 1; n <= n_max; ++n) {
    PairRow row;
    row.n = n;
    row.center = unperturbed_eigenvalue(m, 2 * n - 1);
    row.hits = -1;
    fill_pair(row, shift, eigs.values[static_cast<std::size_t>(2 * n - 2)],
              eigs.values[static_cast<std::size_t>(2 * n - 1)]);
    row.resolution = kEps * eigs.matrix_norm;
    table.rows.push_back(row);
  }
  return table;
}

// --- refinement -----------------------------------------------------------------

RefinedPair refine_pair(const OperatorShape& shape, const Matrix& b, long n, complex guess_lo,
                        complex guess_hi) {
  const long resonant = 2 * n - 1;
  const Eigen::Index r0 = shape.index(resonant);
  const Eigen::Index r1 = shape.index(-resonant);
  if (r0 < 0 || r1 < 0) throw PreconditionError("resonant modes fall outside the window");
  const Eigen::Index dim = shape.dim();
  const Eigen::Index rest = dim - 2;

  std::vector<Eigen::Index> others;
  others.reserve(static_cast<std::size_t>(rest));
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i != r0 && i != r1) others.push_back(i);
  }
  // -(H_oo + B_oo) with the diagonal a_o - center formed exactly.
  Matrix base(rest, rest);
  Matrix v_or(rest, 2);
  Matrix v_ro(2, rest);
  const Eigen::Index res[2] = {r0, r1};
  for (Eigen::Index j = 0; j < rest; ++j) {
    for (Eigen::Index i = 0; i < rest; ++i) base(i, j) = -b(others[i], others[j]);
    base(j, j) -= unperturbed_gap(shape.m, shape.mode(others[j]), resonant);
    for (int k = 0; k < 2; ++k) {
      v_or(j, k) = b(others[j], res[k]);
      v_ro(k, j) = b(res[k], others[j]);
    }
  }
  Eigen::Matrix2cd v_rr;
  v_rr << b(r0, r0), b(r0, r1), b(r1, r0), b(r1, r1);

  // F(mu) = V_rr + V_ro (mu - H_oo)^{-1} V_or, expanded around mu0 as
  // V_rr + sum_k (-delta)^k V_ro M^{-(k+1)} V_or with M = mu0 - H_oo. One LU
  // serves every term; terms are added until they drop below roundoff at
  // the largest offset `reach` the roots may take.
  struct Model {
    complex mu0;
    std::vector<Eigen::Matrix2cd> terms;  // terms[0] includes V_rr
    double magnitude = 0.0;               // largest |V_rr| + |V_ro| |M^{-1} V_or| entry
  };
  auto expand = [&](complex mu0, double reach) {
    Matrix shifted = base;
    shifted.diagonal().array() += mu0;
    const Eigen::PartialPivLU<Matrix> lu(shifted);
    Model model{mu0, {}};
    Matrix y = lu.solve(v_or);
    model.terms.push_back(v_rr + v_ro * y);
    model.magnitude =
        (v_rr.cwiseAbs() + v_ro.cwiseAbs() * y.cwiseAbs()).maxCoeff();
    const double size = model.terms[0].cwiseAbs().maxCoeff() + v_rr.cwiseAbs().maxCoeff();
    double power = 1.0;
    for (int k = 1; k < 64; ++k) {
      y = lu.solve(y);
      model.terms.push_back(v_ro * y);
      power *= reach;
      if (model.terms.back().cwiseAbs().maxCoeff() * power <= 1e-3 * kEps * size) break;
    }
    return model;
  };
  struct Eval {
    complex d, g;
  };
  auto evaluate = [](const Model& model, complex mu) {
    const complex delta = model.mu0 - mu;
    Eigen::Matrix2cd f = model.terms.back();
    for (std::size_t k = model.terms.size() - 1; k-- > 0;) f = model.terms[k] + delta * f;
    const complex half_diff = 0.5 * (f(0, 0) - f(1, 1));
    return Eval{0.5 * (f(0, 0) + f(1, 1)), 2.0 * std::sqrt(half_diff * half_diff + f(0, 1) * f(1, 0))};
  };

  RefinedPair out;
  complex mu0 = 0.5 * (guess_lo + guess_hi);
  double reach = 2.0 * std::abs(guess_hi - guess_lo) + 1e-6 * (1.0 + std::abs(mu0));
  complex reference{};
  Eval final_eval[2];
  complex roots[2];
  bool settled = false;
  double magnitude = 0.0;
  for (int outer = 0; outer < 20 && !settled; ++outer) {
    const Model model = expand(mu0, reach);
    magnitude = model.magnitude;
    const Eval e0 = evaluate(model, mu0);
    if (outer == 0) reference = std::abs(e0.g) > 0.0 ? e0.g : complex{1.0, 0.0};
    for (int s = 0; s < 2; ++s) {
      const double sigma = s == 0 ? 1.0 : -1.0;
      complex mu = e0.d + sigma * 0.5 * e0.g;
      bool done = false;
      for (int it = 0; it < 200 && !done; ++it) {
        Eval e = evaluate(model, mu);
        if (std::real(e.g * std::conj(reference)) < 0.0) e.g = -e.g;
        const complex next = e.d + sigma * 0.5 * e.g;
        done = std::abs(next - mu) <= 4.0 * kEps * std::abs(next) ||
               std::abs(next - mu) <= std::numeric_limits<double>::min();
        mu = next;
        final_eval[s] = e;
      }
      if (!done) throw SolverError("pair refinement did not converge for n = " + std::to_string(n));
      roots[s] = mu;
    }
    ++out.iterations;
    const complex mean = 0.5 * (roots[0] + roots[1]);
    settled = std::abs(mean - mu0) <= 1e-9 * (1.0 + std::abs(mu0));
    reach = 2.0 * std::abs(roots[0] - roots[1]) + 1e-6 * (1.0 + std::abs(mean));
    mu0 = mean;
  }
  if (!settled) throw SolverError("pair refinement did not settle for n = " + std::to_string(n));
  // mu_+ - mu_- without cancellation between the two (nearly equal) centers d.
  const complex plus_minus = (final_eval[0].d - final_eval[1].d) + 0.5 * (final_eval[0].g + final_eval[1].g);
  const bool plus_is_lo = roots[0].real() < roots[1].real() ||
                          (roots[0].real() == roots[1].real() && roots[0].imag() < roots[1].imag());
  // The Schur sums cancel between modes above and below the pair, so
  // rounding scales with the summands rather than with the result.
  out.resolution = 8.0 * kEps * std::max({magnitude, std::abs(roots[0]), std::abs(roots[1])});
  if (plus_is_lo) {
    out.mu_lo = roots[0];
    out.mu_hi = roots[1];
    out.gamma = -plus_minus;
  } else {
    out.mu_lo = roots[1];
    out.mu_hi = roots[0];
    out.gamma = plus_minus;
  }
  return out;
}

void refine_pairs(EigenPairTable& table, const FourierSequence& v, Backend backend) {
  if (v(0) != complex{}) throw PreconditionError("refinement needs v(0) = 0");
  const OperatorShape shape{table.m, table.K};
  shape.validate();
  const Matrix b = toeplitz_block(v, table.K);
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].paired) work.push_back(i);
  }
  parallel_for(work.size(), backend, [&](std::size_t w) {
    PairRow& row = table.rows[work[w]];
    const complex offset = row.center + table.shift;
    RefinedPair rp;
    try {
      rp = refine_pair(shape, b, row.n, row.lambda_lo - offset, row.lambda_hi - offset);
    } catch (const SolverError&) {
      return;  // row keeps its unrefined values
    }
    row.lambda_lo = offset + rp.mu_lo;
    row.lambda_hi = offset + rp.mu_hi;
    row.tau_offset = 0.5 * (rp.mu_lo + rp.mu_hi);
    row.tau = offset + row.tau_offset;
    row.gamma = rp.gamma;
    row.resolution = rp.resolution;
    row.refined = true;
  });
}

EigenPairTable solve_pairs(const FourierSequence& v_raw, int m, int K, long n_max,
                           const RadiusRule& rule, bool refine, Backend backend) {
  const ZeroModeSplit split = normalize_zero_mode(v_raw);
  const TruncatedOperator t = build_T(v_raw, m, K);
  const EigenList eigs = eigenvalues(t);
  EigenPairTable table = pair_eigenvalues(eigs, m, K, n_max, rule, split.shift);
  if (refine) refine_pairs(table, split.v, backend);
  return table;
}

void mark_convergence(EigenPairTable& table, const FourierSequence& v_raw, double tol,
                      Backend backend) {
  const int half = table.K / 2;
  for (PairRow& row : table.rows) row.converged = false;
  if (half < 1) return;
  const ZeroModeSplit split = normalize_zero_mode(v_raw);
  const OperatorShape shape{table.m, half};
  const Matrix b = toeplitz_block(split.v, half);
  std::vector<std::size_t> work;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const PairRow& row = table.rows[i];
    if (row.refined && 2 * row.n - 1 <= 2L * half - 1) work.push_back(i);
  }
  parallel_for(work.size(), backend, [&](std::size_t w) {
    PairRow& row = table.rows[work[w]];
    const complex offset = row.center + table.shift;
    const complex lo = row.lambda_lo - offset;
    const complex hi = row.lambda_hi - offset;
    try {
      const RefinedPair coarse = refine_pair(shape, b, row.n, lo, hi);
      row.converged = std::abs(coarse.mu_lo - lo) < tol && std::abs(coarse.mu_hi - hi) < tol;
    } catch (const SolverError&) {
      row.converged = false;
    }
  });

  // Unrefined rows: nearest raw eigenvalues of the coarse window, with the
  // band floored at the rounding level of the larger matrix.
  std::vector<std::size_t> raw;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const PairRow& row = table.rows[i];
    if (row.paired && !row.refined && 2 * row.n - 1 <= 2L * half - 1) raw.push_back(i);
  }
  if (raw.empty()) return;
  EigenList coarse;
  try {
    coarse = eigenvalues(build_T(v_raw, table.m, half));
  } catch (const SolverError&) {
    return;
  }
  const double band = std::max(tol, 64.0 * kEps * unperturbed_eigenvalue(table.m, 2L * table.K - 1));
  auto nearest = [&](complex z) {
    double best = std::numeric_limits<double>::infinity();
    for (const complex w : coarse.values) best = std::min(best, std::abs(w - z));
    return best;
  };
  for (const std::size_t i : raw) {
    PairRow& row = table.rows[i];
    row.converged = nearest(row.lambda_lo) < band && nearest(row.lambda_hi) < band;
  }
}

ConvergenceResult converge_truncation(const FourierSequence& v_raw, int m, long n_max,
                                      const RadiusRule& rule, double tol, Backend backend) {
  if (n_max < 1) throw PreconditionError("n_max must be >= 1");
  int K = static_cast<int>(std::max<long>(32, 4 * n_max));
  if (K > kMaxHalfWindow) throw PreconditionError("4 n_max exceeds the window cap");
  auto solve = [&](int k) { return solve_pairs(v_raw, m, k, n_max, rule, k <= kRefineWindowCap, backend); };
  auto floor_tol = [&](int k) {
    if (k <= kRefineWindowCap) return tol;
    const double norm = unperturbed_eigenvalue(m, 2L * k - 1);
    return std::max(tol, 64.0 * kEps * norm);
  };
  EigenPairTable prev = solve(K);
  if (2 * K > kMaxHalfWindow) return {K, prev};
  while (2 * K <= kMaxHalfWindow) {
    const int next_K = 2 * K;
    EigenPairTable next = solve(next_K);
    const double band = floor_tol(next_K);
    bool all = true;
    for (std::size_t i = 0; i < next.rows.size(); ++i) {
      PairRow& row = next.rows[i];
      const PairRow& old = prev.rows[i];
      row.converged = row.paired && old.paired && std::abs(row.lambda_lo - old.lambda_lo) < band &&
                      std::abs(row.lambda_hi - old.lambda_hi) < band;
      all = all && row.converged;
    }
    prev = std::move(next);
    K = next_K;
    if (all) break;
  }
  return {K, prev};
}

// --- localization -------------------------------------------------------------

LocalizationReport localization_report(const FourierSequence& v_raw, int m, double alpha, double R,
                                       double C, int K, const std::optional<EigenList>& eigs) {
  const EigenList list = eigs ? *eigs : eigenvalues(build_T(v_raw, m, K));
  const complex shift = v_raw(0);
  const RadiusRule rule = RadiusRule::paper(C, R, alpha);
  LocalizationReport report;
  report.n_checked = K / 4;
  for (long n = 1; n <= report.n_checked; ++n) {
    const complex center = unperturbed_eigenvalue(m, 2 * n - 1) + shift;
    const double r = rule.radius(m, n);
    int count = 0;
    for (const complex lambda : list.values) {
      if (std::abs(lambda - center) < r) ++count;
    }
    report.disc_counts.push_back(count);
    if (count != 2) report.n0_empirical = n;
  }
  for (long n = report.n0_empirical + 1; n <= report.n_checked; ++n) {
    const complex center = unperturbed_eigenvalue(m, 2 * n - 1) + shift;
    const double r = rule.radius(m, n);
    const complex lo = list.values[static_cast<std::size_t>(2 * n - 2)];
    const complex hi = list.values[static_cast<std::size_t>(2 * n - 1)];
    if (!(std::abs(lo - center) < r) || !(std::abs(hi - center) < r)) report.violations.push_back(n);
  }
  const double two_n0 = 2.0 * static_cast<double>(report.n0_empirical);
  report.cone_bound = (std::pow(two_n0, 2 * m) - std::pow(two_n0, m)) *
                          std::pow(std::numbers::pi, 2 * m) +
                      shift.real();
  for (const complex lambda : list.values) {
    if (lambda.real() <= report.cone_bound) ++report.cone_count;
  }
  return report;
}

}  // namespace hillgap
