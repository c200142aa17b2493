// SPDX-License-Identifier: Apache-2.0
#include "hillgap/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hillgap/asymptotics.hpp"
#include "hillgap/eigensolver.hpp"
#include "hillgap/errors.hpp"
#include "hillgap/operator.hpp"
#include "hillgap/riesz.hpp"
#include "hillgap/seqspace.hpp"

namespace hillgap::cli {

namespace {

const std::vector<std::string> kCommands = {"spectrum", "asymptotics", "localize",
                                            "lemmas",   "riesz-check", "alpha1"};

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void RunConfig::validate() const {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw PreconditionError("unknown command '" + command + "'");
  }
  if (m < 1 || m > 8) throw PreconditionError("--m must lie in [1, 8]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw PreconditionError("--alpha must lie in [0, 1]");
  if (K && (*K < 1 || *K > kMaxHalfWindow)) {
    throw PreconditionError("--K must be 'auto' or lie in [1, " + std::to_string(kMaxHalfWindow) + "]");
  }
  if (n_max && *n_max < 1) throw PreconditionError("--n-max must be >= 1");
  if (n_min < 1) throw PreconditionError("--n-min must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw PreconditionError("--R must be positive and finite");
  if (!(C > 1.0) || !std::isfinite(C)) throw PreconditionError("--C must exceed 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("--epsilon must lie in (0, 1)");
  if (quad_nodes < 16 || (quad_nodes & (quad_nodes - 1)) != 0) {
    throw PreconditionError("--quad-nodes must be a power of two >= 16");
  }
  if (format != "csv" && format != "json") throw PreconditionError("--format must be csv or json");
  if (!random_family.empty() && random_family != "rough" && random_family != "smooth") {
    throw PreconditionError("--random must be rough or smooth");
  }
  if (!random_family.empty() && !potential_path.empty()) {
    throw PreconditionError("--random and --potential are mutually exclusive");
  }
  if (support < 2) throw PreconditionError("--support must be >= 2");
  if (!(bound_scale > 0.0)) throw PreconditionError("--bound-scale must be positive");
}

std::string RunConfig::echo() const {
  std::ostringstream os;
  os << "command=" << command << " m=" << m << " alpha=" << shortest(alpha)
     << " K=" << (K ? std::to_string(*K) : std::string("auto"))
     << " n_max=" << (n_max ? std::to_string(*n_max) : std::string("default")) << " n_min=" << n_min
     << " R=" << shortest(R) << " C=" << shortest(C) << " epsilon=" << shortest(epsilon)
     << " seed=" << seed << " quad_nodes=" << quad_nodes << " potential=";
  if (!potential_path.empty()) {
    os << "file:" << potential_path;
  } else if (!random_family.empty()) {
    os << "random-" << random_family << "(support=" << support << ",real=" << (real_valued ? 1 : 0);
    if (power) os << ",power=" << shortest(*power);
    os << ")";
  } else {
    os << "zero";
  }
  os << " bound_scale=" << shortest(bound_scale) << " format=" << format;
  return os.str();
}

// --- writers ------------------------------------------------------------------

void write_csv(std::ostream& os, const Report& report, const std::string& incomplete) {
  for (const std::string& line : report.meta) os << "# " << line << "\n";
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    os << (i ? "," : "") << report.columns[i];
  }
  os << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  for (const auto& [key, value] : report.footer) os << "# result " << key << "=" << value << "\n";
  if (!incomplete.empty()) os << "INCOMPLETE: " << incomplete << "\n";
}

void write_json(std::ostream& os, const Report& report, const std::string& incomplete) {
  nlohmann::ordered_json doc;
  doc["meta"] = report.meta;
  doc["columns"] = report.columns;
  doc["rows"] = report.rows;
  nlohmann::ordered_json footer = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.footer) footer[key] = value;
  doc["footer"] = footer;
  if (!incomplete.empty()) doc["incomplete"] = incomplete;
  os << doc.dump(2) << "\n";
}

// --- commands -----------------------------------------------------------------

namespace {

FourierSequence load_config_potential(const RunConfig& c) {
  if (!c.potential_path.empty()) return load_potential(c.potential_path);
  if (c.random_family.empty()) return FourierSequence(Parity::Even);
  PotentialSpec spec;
  spec.family = c.random_family == "rough" ? PotentialFamily::RandomRough : PotentialFamily::RandomSmooth;
  spec.support = c.support;
  spec.real_valued = c.real_valued;
  spec.radius = c.R;
  spec.seed = c.seed;
  spec.power = c.power;
  return make_potential(spec, SobolevParams{c.m, c.alpha, 0.0, 0});
}

void require_norm_within_R(const RunConfig& c, const FourierSequence& v) {
  const double norm = weighted_norm(normalize_zero_mode(v).v, -c.m * c.alpha);
  if (norm > c.R * (1.0 + 1e-12)) {
    throw ConfigurationError("potential norm " + format_double(norm) + " in h^{-m alpha} exceeds R = " +
                             shortest(c.R));
  }
}

void add_common_meta(Report& rep, const RunConfig& c) {
  rep.meta.push_back(std::string("hillgap ") + kVersion);
  rep.meta.push_back("config " + c.echo());
  rep.meta.push_back(std::string("modules seqspace=") + kVersion + " operator=" + kVersion +
                     " eigensolver=" + kVersion + " riesz=" + kVersion + " asymptotics=" + kVersion +
                     " cli=" + kVersion);
  const RegimeExponents e = regime_exponents(c.m, c.alpha, c.epsilon);
  rep.meta.push_back("regime tau=" + format_double(e.tau) + " gamma=" + format_double(e.gamma) +
                     " gamma_corr=" + format_double(e.gamma_corr));
}

struct TableRun {
  EigenPairTable table;
  int K = 0;
};

TableRun compute_table(const RunConfig& c, const FourierSequence& v, long n_max) {
  const RadiusRule rule = RadiusRule::paper(c.C, c.R, c.alpha);
  if (!c.K) {
    ConvergenceResult res = converge_truncation(v, c.m, n_max, rule);
    return {std::move(res.table), res.K_final};
  }
  EigenPairTable table = solve_pairs(v, c.m, *c.K, n_max, rule, *c.K <= kRefineWindowCap);
  mark_convergence(table, v);
  return {std::move(table), *c.K};
}

void complex_cells(std::vector<std::string>& row, complex z) {
  row.push_back(format_double(z.real()));
  row.push_back(format_double(z.imag()));
}

void run_spectrum(const RunConfig& c, Report& rep) {
  const FourierSequence v = load_config_potential(c);
  require_norm_within_R(c, v);
  const long n_max = c.n_max.value_or(16);
  const TableRun tr = compute_table(c, v, n_max);
  rep.meta.push_back("window K=" + std::to_string(tr.K));
  rep.columns = {"n", "re_lo", "im_lo", "re_hi", "im_hi", "re_tau", "im_tau", "re_gamma", "im_gamma",
                 "converged"};
  for (const PairRow& r : tr.table.rows) {
    std::vector<std::string> row{std::to_string(r.n)};
    complex_cells(row, r.lambda_lo);
    complex_cells(row, r.lambda_hi);
    complex_cells(row, r.tau);
    complex_cells(row, r.gamma);
    row.push_back(flag(r.converged));
    rep.rows.push_back(std::move(row));
  }
}

std::string slope_text(const RemainderReport& r) {
  return r.fit_available ? format_double(r.fit.slope) : std::string("nan");
}

void run_asymptotics(const RunConfig& c, Report& rep) {
  const FourierSequence v = load_config_potential(c);
  require_norm_within_R(c, v);
  const long n_max = c.n_max.value_or(16);
  const TableRun tr = compute_table(c, v, n_max);
  rep.meta.push_back("window K=" + std::to_string(tr.K));
  rep.columns = {"n",         "center",  "re_root",  "im_root",   "re_root_corr",  "im_root_corr",
                 "rem_tau",   "rem_gamma", "rem_gamma_corr", "converged"};
  for (const PairRow& r : tr.table.rows) {
    if (!r.paired) continue;
    const PredictionRow p = predict_pair(v, c.m, c.alpha, r.n);
    std::vector<std::string> row{std::to_string(r.n), format_double(r.center)};
    complex_cells(row, p.root_term);
    complex_cells(row, p.root_term_corr);
    const complex tau_rem = r.tau_offset + tr.table.shift - p.shift;
    row.push_back(format_double(std::abs(tau_rem)));
    row.push_back(format_double(std::min(std::abs(r.gamma - 2.0 * p.root_term), std::abs(r.gamma + 2.0 * p.root_term))));
    row.push_back(format_double(
        std::min(std::abs(r.gamma - 2.0 * p.root_term_corr), std::abs(r.gamma + 2.0 * p.root_term_corr))));
    row.push_back(flag(r.converged));
    rep.rows.push_back(std::move(row));
  }
  RemainderOptions opts;
  opts.epsilon = c.epsilon;
  const RegimeExponents e = regime_exponents(c.m, c.alpha, c.epsilon);
  rep.footer.emplace_back("target_tau", format_double(e.tau));
  rep.footer.emplace_back("target_gamma", format_double(e.gamma));
  rep.footer.emplace_back("target_gamma_corr", format_double(e.gamma_corr));
  auto add = [&](const char* name, auto&& make) {
    try {
      const RemainderReport r = make();
      rep.footer.emplace_back(std::string("fitted_slope_") + name, slope_text(r));
      rep.footer.emplace_back(std::string("bounded_") + name, flag(r.bounded_flag));
      rep.footer.emplace_back(std::string("slope_ok_") + name, flag(r.slope_ok));
      rep.footer.emplace_back(std::string("unresolved_") + name, std::to_string(r.unresolved));
    } catch (const PreconditionError&) {
      rep.footer.emplace_back(std::string("fitted_slope_") + name, "nan");
      rep.footer.emplace_back(std::string("bounded_") + name, "n/a");
      rep.footer.emplace_back(std::string("slope_ok_") + name, "n/a");
      rep.footer.emplace_back(std::string("unresolved_") + name, "n/a");
    }
  };
  add("tau", [&] { return tau_remainder(tr.table, v, c.m, c.alpha, opts); });
  add("gamma", [&] { return gamma_remainder(tr.table, v, c.m, c.alpha, false, opts); });
  add("gamma_corr", [&] { return gamma_remainder(tr.table, v, c.m, c.alpha, true, opts); });
}

void run_localize(const RunConfig& c, Report& rep) {
  const FourierSequence v = load_config_potential(c);
  require_norm_within_R(c, v);
  const int K = c.K.value_or(128);
  const EigenList eigs = eigenvalues(build_T(v, c.m, K));
  const LocalizationReport loc = localization_report(v, c.m, c.alpha, c.R, c.C, K, eigs);
  const RadiusRule rule = RadiusRule::paper(c.C, c.R, c.alpha);
  rep.meta.push_back("window K=" + std::to_string(K));
  rep.columns = {"n", "radius", "disc_count", "lo_in_disc", "hi_in_disc"};
  for (long n = 1; n <= loc.n_checked; ++n) {
    const complex center = unperturbed_eigenvalue(c.m, 2 * n - 1) + v(0);
    const double r = rule.radius(c.m, n);
    const complex lo = eigs.values[static_cast<std::size_t>(2 * n - 2)];
    const complex hi = eigs.values[static_cast<std::size_t>(2 * n - 1)];
    rep.rows.push_back({std::to_string(n), format_double(r),
                        std::to_string(loc.disc_counts[static_cast<std::size_t>(n - 1)]),
                        flag(std::abs(lo - center) < r), flag(std::abs(hi - center) < r)});
  }
  std::string violations;
  for (const long n : loc.violations) violations += (violations.empty() ? "" : ";") + std::to_string(n);
  rep.footer.emplace_back("n0_empirical", std::to_string(loc.n0_empirical));
  rep.footer.emplace_back("cone_count", std::to_string(loc.cone_count));
  rep.footer.emplace_back("cone_bound", format_double(loc.cone_bound));
  rep.footer.emplace_back("violations", violations.empty() ? "none" : violations);
}

struct RieszTolerances {
  double trace = 1e-9;
  double q0 = 1e-9;
  double tau_rel = 1e-8;
  double l = 1e-8;
};

bool run_riesz_check(const RunConfig& c, Report& rep) {
  const FourierSequence v_raw = load_config_potential(c);
  const ZeroModeSplit split = normalize_zero_mode(v_raw);
  const int K = c.K.value_or(128);
  const long n_max = c.n_max.value_or(16);
  if (n_max < c.n_min) throw PreconditionError("--n-max must be >= --n-min");
  if (n_max > K / 4) throw PreconditionError("--n-max exceeds K/4");
  const TruncatedOperator t = build_T(split.v, c.m, K);
  const EigenList eigs = eigenvalues(t);
  EigenPairTable table = pair_eigenvalues(eigs, c.m, K, n_max, RadiusRule::paper(c.C, c.R, c.alpha));
  if (K <= kRefineWindowCap) refine_pairs(table, split.v);
  rep.meta.push_back("window K=" + std::to_string(K));
  rep.columns = {"n",        "re_tr_P",  "im_tr_P",  "re_tr_Q0", "im_tr_Q0", "q0_err", "re_tau_trace",
                 "im_tau_trace", "tau_gap", "re_l_contour", "im_l_contour", "l_gap", "quad_tol", "ok"};
  const RieszTolerances tol;
  bool all = true;
  for (long n = c.n_min; n <= n_max; ++n) {
    const ContourSpec contour = make_contour(c.m, n, c.quad_nodes);
    const ProjectorPair pp = riesz_projector(t, contour, &eigs.values);
    const complex tau_trace = 0.5 * pp.tr_TP + split.shift;
    const QuadratureMatrix q0 = q0_matrix(split.v, c.m, n, K, c.quad_nodes);
    const double q0_err = (q0.value - q0_closed_form(split.v, c.m, n, K)).cwiseAbs().maxCoeff();
    const Reduced2x2 s = script_S_2x2(split.v, c.m, n, K, c.quad_nodes);
    const complex l_dir = l_direct(split.v, c.m, n, K);
    const PairRow& row = table.rows[static_cast<std::size_t>(n - 1)];
    const double tau_gap = row.paired ? std::abs(tau_trace - (row.tau + split.shift))
                                      : std::numeric_limits<double>::infinity();
    const double l_gap = std::abs(s.value(0, 1) - l_dir);
    const complex tr_q0 = q0.value.trace();
    const bool ok = std::abs(pp.tr_P - 2.0) <= tol.trace && std::abs(tr_q0) <= tol.trace &&
                    q0_err <= tol.q0 && tau_gap <= tol.tau_rel * (1.0 + std::abs(tau_trace)) &&
                    l_gap <= tol.l;
    all = all && ok;
    std::vector<std::string> out{std::to_string(n)};
    complex_cells(out, pp.tr_P);
    complex_cells(out, tr_q0);
    out.push_back(format_double(q0_err));
    complex_cells(out, tau_trace);
    out.push_back(format_double(tau_gap));
    complex_cells(out, s.value(0, 1));
    out.push_back(format_double(l_gap));
    out.push_back(format_double(std::max({pp.quad_tol, q0.quad_tol, s.quad_tol})));
    out.push_back(flag(ok));
    rep.rows.push_back(std::move(out));
  }
  rep.footer.emplace_back("all_ok", flag(all));
  return all;
}

void run_alpha1(const RunConfig& c, Report& rep) {
  RunConfig local = c;
  if (local.potential_path.empty() && local.random_family.empty()) {
    local.random_family = "rough";
    if (!local.power) local.power = 0.4;
  }
  local.alpha = 1.0;
  const FourierSequence v = load_config_potential(local);
  const int K = c.K.value_or(256);
  const long n_max = c.n_max.value_or(K / 4);
  const RemainderReport r = alpha1_experiment(v, c.m, n_max, K);
  rep.meta.push_back("window K=" + std::to_string(K));
  rep.columns = {"n", "ratio", "below_one"};
  for (const auto& [n, ratio] : r.values) {
    rep.rows.push_back({std::to_string(n), format_double(ratio), flag(ratio < 1.0)});
  }
  rep.footer.emplace_back("n0_empirical", std::to_string(r.n0));
  rep.footer.emplace_back("fitted_slope", slope_text(r));
  rep.footer.emplace_back("slope_negative", flag(r.slope_ok));
}

// --- lemma sweep ---------------------------------------------------------------

struct LemmaRow {
  std::string check;
  int m;
  double alpha;
  long n;
  double value;
  double bound;
  std::string verdict;  // "hold", "FAIL", "skip"
  std::string note;
};

std::vector<LemmaRow> lemma_block(const RunConfig& c, int m, double alpha, long n_hi, bool first_alpha) {
  std::vector<LemmaRow> rows;
  const double scale = c.bound_scale;
  auto verdict = [](bool ok) { return std::string(ok ? "hold" : "FAIL"); };
  constexpr double slack = 1.0 + 1e-12;

  for (long n = 1; n <= n_hi; ++n) {
    if (n < m) {
      rows.push_back({"elementary", m, alpha, n, 0.0, 0.0, "skip", "n < m"});
      continue;
    }
    const ElementaryBoundsReport e = elementary_bounds_check(m, alpha, n, 16 * n);
    rows.push_back({"elementary_a", m, alpha, n, e.sup_a, e.bound_a * scale,
                    verdict(e.sup_a <= e.bound_a * scale * slack), ""});
    rows.push_back({"elementary_b", m, alpha, n, e.sup_b, e.bound_b * scale,
                    verdict(e.sup_b <= e.bound_b * scale * slack), ""});
    rows.push_back({"elementary_c", m, alpha, n, e.sum_c, e.bound_c * scale,
                    verdict(e.sum_c <= e.bound_c * scale * slack),
                    std::isinf(e.sum_c) ? "series diverges" : ""});
  }

  // Random potential with norm exactly R for the S_lambda bounds.
  PotentialSpec spec;
  spec.family = PotentialFamily::RandomRough;
  spec.support = c.support;
  spec.radius = c.R;
  spec.seed = c.seed;
  spec.real_valued = c.real_valued;
  const FourierSequence v = make_potential(spec, SobolevParams{m, alpha, 0.0, 0});
  const double v_norm = weighted_norm(v, -m * alpha);
  const int K = c.K.value_or(64);
  const OperatorShape shape{m, K};
  const Matrix b = toeplitz_block(v, K);

  for (const double M : {4.0, 16.0, 100.0}) {
    double worst = 0.0;
    for (const complex lambda : SpectralRegion::ext(M).boundary_samples(32)) {
      worst = std::max(worst, hs_norm_S(build_resolvent_factors(shape, b, lambda)));
    }
    const double bound = ext_bound(m, alpha, M, v_norm) * scale;
    rows.push_back({"ext_hs", m, alpha, static_cast<long>(M), worst, bound, verdict(worst <= bound), "n column holds M"});
  }

  const long vert_lo = static_cast<long>(std::ceil(vert_threshold(m)));
  std::vector<long> vert_ns{vert_lo};
  for (const long n : {10L, 16L}) {
    if (n > vert_lo && n <= K / 2) vert_ns.push_back(n);
  }
  for (const long n : vert_ns) {
    const double r_n = std::pow(2.0 * n - 1.0, m);
    double worst = 0.0;
    for (const complex lambda : SpectralRegion::vert(static_cast<int>(n), r_n, m).boundary_samples(32)) {
      worst = std::max(worst, op_norm_S(build_resolvent_factors(shape, b, lambda)));
    }
    const long res = 2 * (2 * n - 1);
    const double raw = vert_bound(m, alpha, static_cast<int>(n), r_n, v_norm, {v(res), v(-res)}) * scale;
    const double combined = vert_bound_combined(m, alpha, static_cast<int>(n), r_n, v_norm) * scale;
    rows.push_back({"vert_raw", m, alpha, n, worst, raw, verdict(worst <= raw), ""});
    rows.push_back({"vert_combined", m, alpha, n, worst, combined, verdict(worst <= combined), ""});
  }

  if (first_alpha) {
    // Bounds that do not involve alpha run once per m.
    for (long n = vert_lo; n <= 64; ++n) {
      const Eq506Report r = eq506_check(m, static_cast<int>(n), 32, 64);
      rows.push_back({"eq506", m, 0.0, n, r.worst_ratio, scale, verdict(r.worst_ratio <= scale),
                      "value is max lhs/rhs"});
    }
    std::vector<std::pair<long, double>> a_scan;
    std::vector<double> e_scan;
    for (long n = 8; n <= 64; ++n) {
      const long q = 2 * n - 1;
      const double r_n = std::pow(static_cast<double>(q), m);
      double a = 0.0, e = 0.0;
      for (const complex lambda : SpectralRegion::vert(static_cast<int>(n), r_n, m).boundary_samples(32)) {
        a = std::max(a, resolvent_shifted_norm(m, lambda, -1.0, -1.0, 0, 0, 128));
        e = std::max(e, resolvent_shifted_norm(m, lambda, 1.0, -1.0, q, -q, 128));
      }
      a_scan.emplace_back(n, a);
      e_scan.push_back(e);
    }
    const DecayFit fit = decay_exponent(a_scan, 8, 64);
    rows.push_back({"shifted_a_prime", m, 0.0, 64, fit.slope, -static_cast<double>(m),
                    verdict(std::abs(fit.slope + m) <= 0.2 * scale), "value is fitted slope over n in [8,64]"});
    const auto [mn, mx] = std::minmax_element(e_scan.begin(), e_scan.end());
    const double ratio = *mx / *mn;
    rows.push_back({"shifted_e_prime", m, 0.0, 64, ratio, 10.0 * scale, verdict(ratio < 10.0 * scale),
                    "value is max/min over n in [8,64]"});
  }
  return rows;
}

bool run_lemmas(const RunConfig& c, Report& rep, bool m_given, bool alpha_given) {
  const std::vector<int> ms = m_given ? std::vector<int>{c.m} : std::vector<int>{1, 2, 3};
  const std::vector<double> alphas =
      alpha_given ? std::vector<double>{c.alpha} : std::vector<double>{0.0, 0.25, 0.5, 0.75};
  const long n_hi = c.n_max.value_or(200);
  std::vector<std::pair<int, std::size_t>> tasks;
  for (const int m : ms) {
    for (std::size_t a = 0; a < alphas.size(); ++a) tasks.emplace_back(m, a);
  }
  std::vector<std::vector<LemmaRow>> blocks(tasks.size());
  parallel_for(tasks.size(), default_backend(), [&](std::size_t i) {
    blocks[i] = lemma_block(c, tasks[i].first, alphas[tasks[i].second], n_hi, tasks[i].second == 0);
  });
  rep.columns = {"check", "m", "alpha", "n", "value", "bound", "verdict", "note"};
  long failures = 0;
  for (const auto& block : blocks) {
    for (const LemmaRow& r : block) {
      if (r.verdict == "FAIL") ++failures;
      rep.rows.push_back({r.check, std::to_string(r.m), format_double(r.alpha), std::to_string(r.n),
                          format_double(r.value), format_double(r.bound), r.verdict, r.note});
    }
  }
  rep.footer.emplace_back("failures", std::to_string(failures));
  return failures == 0;
}

int exit_for_current_exception(std::ostream& err, std::string& reason) {
  try {
    throw;
  } catch (const ContourError& e) {
    reason = e.what();
    err << "hillgap: contour collision: " << e.what() << "\n";
    return kContour;
  } catch (const FormatError& e) {
    reason = e.what();
    err << "hillgap: input error: " << e.what() << "\n";
    return kFileIO;
  } catch (const SolverError& e) {
    reason = e.what();
    err << "hillgap: solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const SingularFactorError& e) {
    reason = e.what();
    err << "hillgap: solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const ParityError& e) {
    reason = e.what();
    err << "hillgap: input error: " << e.what() << "\n";
    return kFileIO;
  } catch (const Error& e) {
    reason = e.what();
    err << "hillgap: configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    reason = e.what();
    err << "hillgap: solver failure: " << e.what() << "\n";
    return kSolver;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Spectra and gap asymptotics of Hill-type operators on the semi-periodic lattice", "hillgap"};
  app.set_config("--config", "", "INI/TOML file with option values (flags override it)");
  std::string K_text = "auto";
  double n_max_value = 0;
  bool print_config = false;
  app.add_option("command", c.command, "spectrum|asymptotics|localize|lemmas|riesz-check|alpha1")
      ->required();
  auto* m_opt = app.add_option("--m", c.m, "operator order m");
  auto* alpha_opt = app.add_option("--alpha", c.alpha, "singularity exponent alpha in [0,1]");
  app.add_option("--K", K_text, "half-window K, or auto");
  auto* n_max_opt = app.add_option("--n-max", n_max_value, "largest pair index n")->type_name("INT");
  app.add_option("--n-min", c.n_min, "smallest pair index for riesz-check");
  app.add_option("--R", c.R, "norm bound R of the potential");
  app.add_option("--C", c.C, "disc constant C > 1");
  app.add_option("--epsilon", c.epsilon, "exponent slack epsilon");
  app.add_option("--seed", c.seed, "seed of random potentials");
  app.add_option("--quad-nodes", c.quad_nodes, "quadrature nodes per contour");
  app.add_option("--potential", c.potential_path, "potential JSON file");
  app.add_option("--random", c.random_family, "random potential family: rough|smooth");
  app.add_flag("--real", c.real_valued, "random potential with Hermitian symmetry");
  app.add_option("--support", c.support, "largest |index| of random potentials");
  auto* power_opt = app.add_option("--power", "rough family: |2k|^power coefficients")->type_name("FLOAT");
  app.add_option("--bound-scale", c.bound_scale, "lemmas: multiply every bound (fault injection)");
  app.add_option("--out", c.output_path, "output file (default: standard output)");
  app.add_option("--format", c.format, "csv|json");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::FileError& e) {
    err << "hillgap: " << e.what() << "\n";
    return kFileIO;
  } catch (const CLI::ParseError& e) {
    err << "hillgap: " << e.what() << "\n";
    return kConfig;
  }

  std::string reason;
  try {
    if (K_text != "auto") {
      int k = 0;
      const auto res = std::from_chars(K_text.data(), K_text.data() + K_text.size(), k);
      if (res.ec != std::errc() || res.ptr != K_text.data() + K_text.size()) {
        throw PreconditionError("--K must be 'auto' or an integer, got '" + K_text + "'");
      }
      c.K = k;
    }
    if (n_max_opt->count() > 0) {
      if (n_max_value != std::floor(n_max_value)) throw PreconditionError("--n-max must be an integer");
      c.n_max = static_cast<long>(n_max_value);
    }
    if (power_opt->count() > 0) c.power = power_opt->as<double>();
    c.validate();
  } catch (const std::exception& e) {
    err << "hillgap: configuration error: " << e.what() << "\n";
    return kConfig;
  }

  if (print_config) {
    out << app.config_to_str(true, false);
    return kOk;
  }

  Report rep;
  add_common_meta(rep, c);
  int code = kOk;
  try {
    if (c.command == "spectrum") {
      run_spectrum(c, rep);
    } else if (c.command == "asymptotics") {
      run_asymptotics(c, rep);
    } else if (c.command == "localize") {
      run_localize(c, rep);
    } else if (c.command == "lemmas") {
      if (!run_lemmas(c, rep, m_opt->count() > 0, alpha_opt->count() > 0)) code = kCheckFailed;
    } else if (c.command == "riesz-check") {
      if (!run_riesz_check(c, rep)) code = kCheckFailed;
    } else {
      run_alpha1(c, rep);
    }
  } catch (...) {
    code = exit_for_current_exception(err, reason);
    if (rep.rows.empty()) return code;
  }

  auto emit = [&](std::ostream& os) {
    if (c.format == "json") {
      write_json(os, rep, reason);
    } else {
      write_csv(os, rep, reason);
    }
  };
  if (c.output_path.empty()) {
    emit(out);
  } else {
    std::ofstream file(c.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "hillgap: cannot open output file '" << c.output_path << "'\n";
      return kFileIO;
    }
    emit(file);
    if (!file.flush()) {
      err << "hillgap: failed writing '" << c.output_path << "'\n";
      return kFileIO;
    }
  }
  if (code == kCheckFailed) err << "hillgap: " << c.command << ": one or more checks failed\n";
  return code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace hillgap::cli
