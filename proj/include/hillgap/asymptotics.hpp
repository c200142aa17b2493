// SPDX-License-Identifier: Apache-2.0
//
// Predicted eigenvalue pairs and remainder sequences for tau_n and gamma_n,
// one-term disc ratios and the alpha = 1 experiment.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hillgap/eigensolver.hpp"
#include "hillgap/seqspace.hpp"

namespace hillgap {

/// Prediction for index n. Square roots use the principal branch; the sign
/// is resolved only when comparing (minimum over +-).
struct PredictionRow {
  long n = 0;
  double center = 0.0;
  complex shift{};                ///< v(0)
  complex v_plus{}, v_minus{};    ///< v(+-2(2n-1))
  complex l_plus{}, l_minus{};    ///< l(+-2(2n-1))
  complex root_term{};            ///< sqrt(v(-2(2n-1)) v(2(2n-1)))
  complex root_term_corr{};       ///< sqrt((v+l)(-2(2n-1)) (v+l)(2(2n-1)))
  std::pair<complex, complex> predicted_pair;       ///< center + shift -+ root_term
  std::pair<complex, complex> predicted_pair_corr;  ///< center + shift -+ root_term_corr
};

/// `window` restricts the l sums to the truncation window.
PredictionRow predict_pair(const FourierSequence& v_raw, int m, double alpha, long n,
                           std::optional<int> window = std::nullopt);

/// Decay exponents of the remainder classes for order m, singularity alpha.
struct RegimeExponents {
  double tau = 0.0;         ///< m(1 - 2 alpha) - eps
  double gamma = 0.0;       ///< m(1/2 - alpha) for alpha < 1/2, else m(1 - 2 alpha) - eps
  double gamma_corr = 0.0;  ///< m(1 - 2 alpha) - eps
};

RegimeExponents regime_exponents(int m, double alpha, double epsilon = 0.05);

enum class RemainderKind { TauRemainder, GammaRemainder, GammaRemainderCorrected, OneTerm, AlphaOne };

const char* to_string(RemainderKind k);

struct RemainderOptions {
  double epsilon = 0.05;
  long fit_lo = 8;
  long fit_hi = 0;              ///< 0: K/4 of the table
  double slope_tolerance = 0.2;
  bool converged_only = true;
};

struct RemainderReport {
  RemainderKind kind = RemainderKind::TauRemainder;
  std::vector<std::pair<long, double>> values;  ///< (n, r_n)
  std::vector<std::pair<long, double>> envelope;  ///< fitted series (values, or resolution when unresolved)
  long unresolved = 0;
  double target_exponent = 0.0;
  DecayFit fit;
  bool fit_available = false;   ///< enough positive samples for a regression
  long fit_lo = 0, fit_hi = 0;
  bool bounded_flag = false;    ///< membership rule for h^{target}
  bool slope_ok = false;        ///< fitted slope <= -target + slope_tolerance
  long n0 = 0;                  ///< alpha = 1: last n with ratio >= 1
};

/// r_n = |tau_n - center - v(0)| over paired (and, by default, converged) rows.
/// Here and in gamma_remainder, a remainder at or below the row's resolution
/// is recorded as 0 and replaced by the resolution in the envelope, so the
/// fitted slope bounds the decay from above.
RemainderReport tau_remainder(const EigenPairTable& table, const FourierSequence& v_raw, int m,
                              double alpha, const RemainderOptions& options = {});

/// r_n = min over +- of |gamma_n +- 2 root_term(_corr)|.
RemainderReport gamma_remainder(const EigenPairTable& table, const FourierSequence& v_raw, int m,
                                double alpha, bool corrected, const RemainderOptions& options = {},
                                std::optional<int> window = std::nullopt);

/// max(|lambda_lo - c|, |lambda_hi - c|) / (2n-1)^{m alpha}, c = center + shift; bounded_flag
/// iff every ratio is at most 3^m sqrt2 C R.
RemainderReport one_term_check(const EigenPairTable& table, int m, double alpha, double R, double C,
                               const RemainderOptions& options = {});

/// Ratios max(|lambda_{2n-1} - c|, |lambda_{2n} - c|) / (2n-1)^m from global
/// indices at window K; bounded_flag iff the fitted slope is negative.
RemainderReport alpha1_experiment(const FourierSequence& v_raw, int m, long n_max, int K,
                                  const RemainderOptions& options = {});

}  // namespace hillgap
