// SPDX-License-Identifier: Apache-2.0
//
// Riesz projectors on the circles Gamma_n by trapezoidal quadrature, the
// trace formula for tau_n, the first-order matrix Q_n^0, the reduced 2x2
// second-order matrix on the resonant modes and the correction sequence l.
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hillgap/kernels.hpp"
#include "hillgap/operator.hpp"
#include "hillgap/seqspace.hpp"

namespace hillgap {

/// |lambda - center| = (2n-1)^m, center = (2n-1)^{2m} pi^{2m} (+ shift).
struct ContourSpec {
  int m = 1;
  long n = 1;
  complex center{};
  double radius = 1.0;
  int nodes = 64;

  void validate() const;
  /// Node offsets z_j = radius e^{2 pi i j / nodes}.
  std::vector<complex> offsets() const;
  /// Nodes lambda_j = center + z_j.
  std::vector<complex> points() const;
};

/// nodes must be a power of two and at least 16.
ContourSpec make_contour(int m, long n, int nodes = 64, complex shift = {});

/// Minimum allowed distance of any eigenvalue from the contour, relative to the radius.
inline constexpr double kContourClearance = 1e-6;

struct ProjectorPair {
  Matrix P;
  Matrix P0;                 ///< indicator of modes +-(2n-1)
  complex tr_P{}, tr_P0{};
  complex tr_TP{};           ///< Tr(T P)
  complex tr_AP0{};          ///< Tr(A^m P0)
  complex tr_Q{};            ///< Tr of (1/2 pi i) int (lambda - c)(lambda - T)^{-1} B (lambda - A)^{-1}
  double quad_tol = 0.0;     ///< max |P(nodes) - P(nodes/2)| over entries and traces
  double idempotency = 0.0;  ///< max |P^2 - P|
};

/// Throws ContourError when an eigenvalue of T or of A^m lies within
/// kContourClearance * radius of the circle. `eigs` skips the solve.
ProjectorPair riesz_projector(const TruncatedOperator& t, const ContourSpec& contour,
                              const std::vector<complex>* eigs = nullptr,
                              Backend backend = default_backend());

struct TauTraces {
  complex tau{};              ///< Tr(T P) / 2
  complex tr_Q{};             ///< from the independent integrand
  complex tr_P{};
  double identity_gap = 0.0;  ///< |2 tau - 2 center - Tr(Q_n)|
  double quad_tol = 0.0;
};

TauTraces tau_from_traces(const TruncatedOperator& t, const ContourSpec& contour,
                          const std::vector<complex>* eigs = nullptr,
                          Backend backend = default_backend());

struct QuadratureMatrix {
  Matrix value;
  double quad_tol = 0.0;  ///< max |value(nodes) - value(nodes/2)|
};

/// Q_n^0 entrywise by quadrature; needs v(0) = 0.
QuadratureMatrix q0_matrix(const FourierSequence& v, int m, long n, int K, int nodes = 64);

/// Closed form: v(+-2(2n-1)) at the two resonant off-diagonal positions, zero elsewhere.
Matrix q0_closed_form(const FourierSequence& v, int m, long n, int K);

/// Second-order matrix on the resonant modes, ordered [2n-1, -(2n-1)], by
/// quadrature over the window. The off-diagonal holds l(+-2(2n-1)).
struct Reduced2x2 {
  Eigen::Matrix2cd value;
  double quad_tol = 0.0;
};

Reduced2x2 script_S_2x2(const FourierSequence& v, int m, long n, int K, int nodes = 64);

enum class LSide { Plus, Minus };

/// l(+-2(2n-1)) = sum over odd i != +-(2n-1) of v(p - i) v(i + p) / ((p^{2m} - i^{2m}) pi^{2m}),
/// p = +-(2n-1). With `window` set, only |i| <= 2 window - 1 contribute.
complex l_correction(const FourierSequence& v, int m, long n, LSide side,
                     std::optional<int> window = std::nullopt);

/// l(2(2n-1)).
complex l_direct(const FourierSequence& v, int m, long n, std::optional<int> window = std::nullopt);

}  // namespace hillgap
