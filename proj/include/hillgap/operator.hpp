// SPDX-License-Identifier: Apache-2.0
//
// Truncated matrices of T = A^m + B(v) on the odd-mode window
// {2k-1 : -K+1 <= k <= K}, the resolvent factorization
//   lambda - A^m - B(v) = A_lambda^{m/2} (I_lambda - S_lambda) A_lambda^{m/2},
// the resolvent-control regions and the bounds that go with them.
#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hillgap/seqspace.hpp"

namespace hillgap {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Order m and half-window K of a truncation; the dimension is 2K.
struct OperatorShape {
  int m = 1;
  int K = 1;

  Eigen::Index dim() const { return 2 * static_cast<Eigen::Index>(K); }
  /// Odd mode carried by row i: 2i - 2K + 1, ascending from -(2K-1).
  long mode(Eigen::Index i) const { return 2 * static_cast<long>(i) - 2L * K + 1; }
  /// Row of an odd mode, or -1 when it falls outside the window.
  Eigen::Index index(long mode) const;
  void validate() const;
};

inline constexpr int kMaxHalfWindow = 1024;

/// Unperturbed eigenvalue mode^{2m} pi^{2m}.
double unperturbed_eigenvalue(int m, long mode);

/// (mode^{2m} - ref^{2m}) pi^{2m}, with the integer difference formed exactly.
double unperturbed_gap(int m, long mode, long ref);

enum class OperatorKind { Am, Bv, T, Slambda, Diagonal };

struct TruncatedOperator {
  OperatorShape shape;
  OperatorKind kind = OperatorKind::T;
  Matrix entries;
};

TruncatedOperator build_A(int m, int K);
TruncatedOperator build_B(const FourierSequence& v, int m, int K);
TruncatedOperator build_T(const FourierSequence& v, int m, int K);

/// Toeplitz stencil B(i, j) = v(mode_i - mode_j) = v(2(i - j)).
Matrix toeplitz_block(const FourierSequence& v, int K);

// --- resolvent factorization ----------------------------------------------

struct ResolventFactors {
  OperatorShape shape;
  complex lambda;
  RealVector a_half;   ///< |lambda - a_k|^{1/2}
  Vector i_lambda;     ///< (lambda - a_k) / |lambda - a_k|
  Matrix s_lambda;     ///< v(2k-2j) / (|lambda - a_k|^{1/2} |lambda - a_j|^{1/2})
};

/// Relative distance below which lambda counts as an unperturbed eigenvalue.
inline constexpr double kCollisionTolerance = 1e-10;

/// Throws SingularFactorError when lambda collides with some a_k.
ResolventFactors build_resolvent_factors(const OperatorShape& shape, const FourierSequence& v,
                                         complex lambda);
/// Same factors, with S_lambda scaled from an already assembled B(v).
ResolventFactors build_resolvent_factors(const OperatorShape& shape, const Matrix& b,
                                         complex lambda);

/// max |(lambda - T) - A^{1/2}(I - S)A^{1/2}| entrywise.
double factorization_residual(const FourierSequence& v, int m, int K, complex lambda);

double hs_norm_S(const ResolventFactors& f);
/// Up to this dimension norms come from a dense eigensolve of S^* S;
/// larger matrices use power iteration.
inline constexpr Eigen::Index kDenseNormLimit = 512;

/// Largest singular value of S_lambda.
double op_norm_S(const ResolventFactors& f, double tol = 1e-10, int max_iter = 10000);

/// Largest singular value of an arbitrary matrix (same power iteration).
double spectral_norm(const Matrix& s, double tol = 1e-10, int max_iter = 10000);

// --- regions ----------------------------------------------------------------

struct ExtRegion {
  double M;
};
struct VertRegion {
  int n;
  double r_n;
  int m;
};
struct DiscRegion {
  complex center;
  double radius;
};

/// Ext_M, Vert^m_n(r_n) or a disc; constructors validate the invariants.
class SpectralRegion {
 public:
  static SpectralRegion ext(double M);
  static SpectralRegion vert(int n, double r_n, int m);
  static SpectralRegion disc(complex center, double radius);

  const std::variant<ExtRegion, VertRegion, DiscRegion>& variant() const { return region_; }
  bool contains(complex lambda) const;
  /// `count` deterministic points on the region boundary.
  std::vector<complex> boundary_samples(int count) const;

 private:
  explicit SpectralRegion(std::variant<ExtRegion, VertRegion, DiscRegion> r) : region_(r) {}
  std::variant<ExtRegion, VertRegion, DiscRegion> region_;
};

/// Smallest n admitted by the Vert estimates: (8m^2+4m-7)/(2(8m-7)).
double vert_threshold(int m);

/// 2^{2m+1} ||v|| M^{-((1-alpha)/2 + 1/4)}.
double ext_bound(int m, double alpha, double M, double v_norm);

/// Raw Vert estimate with the resonant pair (v(2(2n-1)), v(-2(2n-1))).
double vert_bound(int m, double alpha, int n, double r_n, double v_norm,
                  std::pair<complex, complex> v_resonant);

/// Vert estimate with the resonant term replaced by 3^m sqrt2 (2n-1)^{m alpha} ||v|| / r_n.
double vert_bound_combined(int m, double alpha, int n, double r_n, double v_norm);

struct ElementaryBoundsReport {
  double sup_a = 0.0, bound_a = 0.0;
  double sup_b = 0.0, bound_b = 0.0;
  double sum_c = 0.0, bound_c = 0.0;  ///< sum_c includes the certified tail (inf when divergent)
  bool holds_a = false, holds_b = false, holds_c = false;
  bool all_hold = false;
};

/// Enumerates k in [-cutoff, cutoff] \ {+-n}; requires n >= m and cutoff >= 16 n.
ElementaryBoundsReport elementary_bounds_check(int m, double alpha, int n, long cutoff);

struct Eq506Report {
  bool holds = true;
  double worst_ratio = 0.0;  ///< max of lhs / rhs over samples and modes
  int samples = 0;
};

/// 1/|lambda - k^{2m} pi^{2m}| <= (3/pi^{2m}) / |k^{2m} - (2n-1)^{2m}| on Vert boundary samples
/// (radius r_n = (2n-1)^m), odd k != +-(2n-1) with |k| <= 2K-1.
Eq506Report eq506_check(int m, int n, int samples, int K = 64);

/// sup over window modes of <mode+shift_out>^{m s} <mode+shift_in>^{-m t} / |lambda - a_mode|.
double resolvent_shifted_norm(int m, complex lambda, double s, double t, long shift_in,
                              long shift_out, int K);

}  // namespace hillgap
