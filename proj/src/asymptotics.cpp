// SPDX-License-Identifier: Apache-2.0
#include "hillgap/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hillgap/errors.hpp"
#include "hillgap/riesz.hpp"

namespace hillgap {

PredictionRow predict_pair(const FourierSequence& v_raw, int m, double alpha, long n,
                           std::optional<int> window) {
  if (n < 1) throw PreconditionError("n must be >= 1");
  SobolevParams{m, alpha, 0.0, 0}.validate();
  PredictionRow row;
  row.n = n;
  row.center = unperturbed_eigenvalue(m, 2 * n - 1);
  row.shift = v_raw(0);
  const long resonant = 2 * (2 * n - 1);
  row.v_plus = v_raw(resonant);
  row.v_minus = v_raw(-resonant);
  row.l_plus = l_correction(v_raw, m, n, LSide::Plus, window);
  row.l_minus = l_correction(v_raw, m, n, LSide::Minus, window);
  row.root_term = std::sqrt(row.v_minus * row.v_plus);
  row.root_term_corr = std::sqrt((row.v_minus + row.l_minus) * (row.v_plus + row.l_plus));
  const complex base = row.center + row.shift;
  row.predicted_pair = {base - row.root_term, base + row.root_term};
  row.predicted_pair_corr = {base - row.root_term_corr, base + row.root_term_corr};
  return row;
}

RegimeExponents regime_exponents(int m, double alpha, double epsilon) {
  RegimeExponents e;
  e.tau = m * (1.0 - 2.0 * alpha) - epsilon;
  e.gamma_corr = e.tau;
  e.gamma = alpha < 0.5 ? m * (0.5 - alpha) : e.tau;
  return e;
}

const char* to_string(RemainderKind k) {
  switch (k) {
    case RemainderKind::TauRemainder: return "tau";
    case RemainderKind::GammaRemainder: return "gamma";
    case RemainderKind::GammaRemainderCorrected: return "gamma_corr";
    case RemainderKind::OneTerm: return "one_term";
    case RemainderKind::AlphaOne: return "alpha1";
  }
  return "?";
}

namespace {

void classify(RemainderReport& report, long fit_lo, long fit_hi, double slope_tolerance) {
  report.fit_lo = fit_lo;
  report.fit_hi = fit_hi;
  const auto& series = report.envelope.empty() ? report.values : report.envelope;
  try {
    report.fit = decay_exponent(series, fit_lo, fit_hi);
    report.fit_available = true;
  } catch (const PreconditionError&) {
    report.fit_available = false;
  }
  report.slope_ok = report.fit_available && report.fit.slope <= -report.target_exponent + slope_tolerance;
  report.bounded_flag = membership_verdict(series, report.target_exponent, fit_lo, fit_hi);
}

long resolve_hi(const EigenPairTable& table, const RemainderOptions& options) {
  return options.fit_hi > 0 ? options.fit_hi : std::max(1, table.K / 4);
}

bool usable(const PairRow& row, const RemainderOptions& options) {
  return row.paired && (row.converged || !options.converged_only);
}

// Remainders at or below the rounding level of the row carry no information:
// they are recorded as 0 and enter the fit through their upper bound.
void record(RemainderReport& report, const PairRow& row, double value) {
  if (value > row.resolution) {
    report.values.emplace_back(row.n, value);
    report.envelope.emplace_back(row.n, value);
  } else {
    report.values.emplace_back(row.n, 0.0);
    report.envelope.emplace_back(row.n, row.resolution);
    ++report.unresolved;
  }
}

}  // namespace

RemainderReport tau_remainder(const EigenPairTable& table, const FourierSequence& v_raw, int m,
                              double alpha, const RemainderOptions& options) {
  RemainderReport report;
  report.kind = RemainderKind::TauRemainder;
  report.target_exponent = regime_exponents(m, alpha, options.epsilon).tau;
  const complex correction = table.shift - v_raw(0);
  for (const PairRow& row : table.rows) {
    if (!usable(row, options)) continue;
    record(report, row, std::abs(row.tau_offset + correction));
  }
  if (report.values.empty()) throw PreconditionError("no usable rows for the tau remainder");
  classify(report, options.fit_lo, resolve_hi(table, options), options.slope_tolerance);
  return report;
}

RemainderReport gamma_remainder(const EigenPairTable& table, const FourierSequence& v_raw, int m,
                                double alpha, bool corrected, const RemainderOptions& options,
                                std::optional<int> window) {
  RemainderReport report;
  report.kind = corrected ? RemainderKind::GammaRemainderCorrected : RemainderKind::GammaRemainder;
  const RegimeExponents e = regime_exponents(m, alpha, options.epsilon);
  report.target_exponent = corrected ? e.gamma_corr : e.gamma;
  for (const PairRow& row : table.rows) {
    if (!usable(row, options)) continue;
    const PredictionRow p = predict_pair(v_raw, m, alpha, row.n, window);
    const complex root = corrected ? p.root_term_corr : p.root_term;
    const double r = std::min(std::abs(row.gamma - 2.0 * root), std::abs(row.gamma + 2.0 * root));
    record(report, row, r);
  }
  if (report.values.empty()) throw PreconditionError("no usable rows for the gamma remainder");
  classify(report, options.fit_lo, resolve_hi(table, options), options.slope_tolerance);
  return report;
}

RemainderReport one_term_check(const EigenPairTable& table, int m, double alpha, double R, double C,
                               const RemainderOptions& options) {
  RemainderReport report;
  report.kind = RemainderKind::OneTerm;
  report.target_exponent = 0.0;
  const double bound = std::pow(3.0, m) * std::numbers::sqrt2 * C * R;
  bool all = true;
  for (const PairRow& row : table.rows) {
    if (!row.paired) continue;
    const complex c = row.center + table.shift;
    const double scale = std::pow(2.0 * static_cast<double>(row.n) - 1.0, m * alpha);
    const double ratio = std::max(std::abs(row.lambda_lo - c), std::abs(row.lambda_hi - c)) / scale;
    report.values.emplace_back(row.n, ratio);
    all = all && ratio <= bound;
  }
  if (report.values.empty()) throw PreconditionError("no paired rows for the one-term check");
  classify(report, options.fit_lo, resolve_hi(table, options), options.slope_tolerance);
  report.bounded_flag = all;
  return report;
}

RemainderReport alpha1_experiment(const FourierSequence& v_raw, int m, long n_max, int K,
                                  const RemainderOptions& options) {
  if (n_max > K / 4) throw PreconditionError("n_max exceeds K/4");
  if (!std::isfinite(weighted_norm(v_raw, -static_cast<double>(m)))) {
    throw PreconditionError("potential is not in h^{-m}");
  }
  const EigenList eigs = eigenvalues(build_T(v_raw, m, K));
  const EigenPairTable table = pair_by_index(eigs, m, K, n_max, v_raw(0));
  RemainderReport report;
  report.kind = RemainderKind::AlphaOne;
  report.target_exponent = 0.0;
  for (const PairRow& row : table.rows) {
    const complex c = row.center + table.shift;
    const double scale = std::pow(2.0 * static_cast<double>(row.n) - 1.0, m);
    const double ratio = std::max(std::abs(row.lambda_lo - c), std::abs(row.lambda_hi - c)) / scale;
    report.values.emplace_back(row.n, ratio);
    if (ratio >= 1.0) report.n0 = row.n;
  }
  const long hi = options.fit_hi > 0 ? options.fit_hi : n_max;
  classify(report, options.fit_lo, hi, options.slope_tolerance);
  report.slope_ok = report.fit_available && report.fit.slope < 0.0;
  report.bounded_flag = report.slope_ok;
  return report;
}

}  // namespace hillgap
