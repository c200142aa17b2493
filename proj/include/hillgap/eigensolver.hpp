// SPDX-License-Identifier: Apache-2.0
//
// Dense eigenvalues of truncated operators, lexicographic ordering, pairing
// into (lambda_{2n-1}, lambda_{2n}) around the unperturbed centers, Schur
// complement refinement of each pair, truncation control and disc
// localization reports.
#pragma once

#include <optional>
#include <vector>

#include "hillgap/kernels.hpp"
#include "hillgap/operator.hpp"
#include "hillgap/seqspace.hpp"

namespace hillgap {

/// Relative tie band of the lexicographic order: 1e-9 (1 + |lambda|).
inline constexpr double kOrderTolerance = 1e-9;

/// Strict lexicographic comparison with tie band tol (1 + max|.|) on the real parts.
bool lex_less(complex a, complex b, double tol = kOrderTolerance);

/// Sorts by real part; runs whose real parts lie within the tie band of the
/// run's first element are then sorted by imaginary part.
void sort_lexicographic(std::vector<complex>& values, double tol = kOrderTolerance);

/// Shifted QR budget: this many iterations times the dimension.
inline constexpr int kQrIterationsPerRow = 30;

struct EigenOptions {
  bool detect_hermitian = true;  ///< use the symmetric solver on Hermitian input
  bool validate = true;          ///< inverse-iteration residual certificate per eigenvalue
  double residual_tol = 1e-8;    ///< max ||(T - lambda) x|| / ||T||
  double order_tol = kOrderTolerance;
};

struct EigenList {
  std::vector<complex> values;  ///< lexicographically ordered, with multiplicity
  bool hermitian_path = false;
  double matrix_norm = 0.0;     ///< Frobenius norm of the input
  double max_residual = 0.0;    ///< worst certificate (0 when not validated)
};

/// Throws SolverError (carrying whatever was computed) when QR fails to
/// converge or a residual certificate exceeds the tolerance.
EigenList eigenvalues(const Matrix& t, const EigenOptions& options = {});
EigenList eigenvalues(const TruncatedOperator& t, const EigenOptions& options = {});

/// Residual ||(H - lambda) x|| / ||H|| after one inverse-iteration step on
/// the Hessenberg form (tridiagonal for Hermitian input), for every lambda.
std::vector<double> residual_certificates(const Matrix& t, const std::vector<complex>& lambdas);

// --- pairing ----------------------------------------------------------------

/// Disc radius around the n-th center: 3^m sqrt2 C R (2n-1)^{m alpha}, or fixed.
struct RadiusRule {
  enum class Kind { Paper, Fixed };
  Kind kind = Kind::Paper;
  double C = 1.1;
  double R = 1.0;
  double alpha = 0.0;
  double fixed = 0.0;

  static RadiusRule paper(double C, double R, double alpha) { return {Kind::Paper, C, R, alpha, 0.0}; }
  static RadiusRule fixed_radius(double r) { return {Kind::Fixed, 0.0, 0.0, 0.0, r}; }
  double radius(int m, long n) const;
};

struct PairRow {
  long n = 0;
  double center = 0.0;          ///< (2n-1)^{2m} pi^{2m}
  complex lambda_lo{}, lambda_hi{};
  complex tau{}, gamma{};
  complex tau_offset{};         ///< tau - center - shift, formed without cancellation when refined
  double disc_radius_used = 0.0;
  double resolution = 0.0;      ///< absolute rounding level of lambda, tau and gamma
  int hits = 0;                 ///< eigenvalues found in the disc (-1 for index pairing)
  bool paired = false;
  bool refined = false;
  bool converged = false;
};

struct EigenPairTable {
  int m = 1;
  int K = 0;
  complex shift{};  ///< v(0), added to every center
  std::vector<PairRow> rows;
};

/// Disc pairing for n = 1..n_max; rows with other than two hits are kept and
/// flagged. Throws PreconditionError when n_max > K/4 and ConfigurationError
/// when consecutive discs overlap.
EigenPairTable pair_eigenvalues(const EigenList& eigs, int m, int K, long n_max,
                                const RadiusRule& rule, complex shift = {});

/// Rows from global lexicographic indices: lambda_{2n-1} = values[2n-2].
EigenPairTable pair_by_index(const EigenList& eigs, int m, int K, long n_max, complex shift = {});

/// Refined pair of one row: both roots of the 2x2 Schur complement on the
/// resonant modes +-(2n-1), solved in shifted coordinates mu = lambda - center.
struct RefinedPair {
  complex mu_lo{}, mu_hi{};
  complex gamma{};  ///< mu_hi - mu_lo without cancellation
  double resolution = 0.0;  ///< rounding level of mu_lo, mu_hi and gamma
  int iterations = 0;
};

/// `b` is B(v) for a potential with v(0) = 0; `guess_lo/hi` seed the roots
/// (in shifted coordinates).
RefinedPair refine_pair(const OperatorShape& shape, const Matrix& b, long n, complex guess_lo,
                        complex guess_hi);

/// Refines every paired row in place (v must have v(0) = table.shift removed).
void refine_pairs(EigenPairTable& table, const FourierSequence& v, Backend backend = default_backend());

/// Full pipeline at a fixed window: solve, pair (disc rule), refine.
EigenPairTable solve_pairs(const FourierSequence& v_raw, int m, int K, long n_max,
                           const RadiusRule& rule, bool refine = true,
                           Backend backend = default_backend());

/// Marks rows converged by comparing with the window K/2: refined rows are
/// re-refined there (shifted coordinates, absolute tolerance tol); unrefined
/// rows are matched to the nearest coarse eigenvalues with tol floored at
/// 64 eps a_{2K-1}.
void mark_convergence(EigenPairTable& table, const FourierSequence& v_raw, double tol = 1e-9,
                      Backend backend = default_backend());

struct ConvergenceResult {
  int K_final = 0;
  EigenPairTable table;
};

/// Doubles K from max(32, 4 n_max) up to the cap until every paired value
/// with n <= n_max moves less than tol between consecutive windows. Pairs are
/// refined while the window is at most kRefineWindowCap; beyond it the raw
/// eigenvalues are compared with tol floored at 64 eps ||T||.
ConvergenceResult converge_truncation(const FourierSequence& v_raw, int m, long n_max,
                                      const RadiusRule& rule, double tol = 1e-9,
                                      Backend backend = default_backend());

inline constexpr int kRefineWindowCap = 256;

// --- localization -------------------------------------------------------------

struct LocalizationReport {
  long n0_empirical = 0;
  long cone_count = 0;
  double cone_bound = 0.0;        ///< ((2 n0)^{2m} - (2 n0)^m) pi^{2m} + Re shift
  std::vector<long> violations;   ///< n > n0 with lambda_{2n-1} or lambda_{2n} off disc n
  std::vector<int> disc_counts;   ///< eigenvalues in disc n, n = 1..K/4
  long n_checked = 0;             ///< K/4
};

LocalizationReport localization_report(const FourierSequence& v_raw, int m, double alpha, double R,
                                       double C, int K,
                                       const std::optional<EigenList>& eigs = std::nullopt);

}  // namespace hillgap
