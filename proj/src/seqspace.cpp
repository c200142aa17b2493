// SPDX-License-Identifier: Apache-2.0
#include "hillgap/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hillgap/errors.hpp"

namespace hillgap {

namespace {

bool has_parity(long k, Parity p) {
  const bool even = (k % 2) == 0;
  return p == Parity::Even ? even : !even;
}

bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const char* to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

FourierSequence FourierSequence::from_pairs(Parity parity,
                                            const std::vector<std::pair<long, complex>>& entries) {
  FourierSequence out(parity);
  for (const auto& [k, value] : entries) out.set(k, out(k) + value);
  return out;
}

complex FourierSequence::operator()(long k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? complex{} : it->second;
}

void FourierSequence::set(long k, complex value) {
  if (!has_parity(k, parity_)) {
    throw ParityError("index " + std::to_string(k) + " does not belong to the " +
                      to_string(parity_) + " lattice");
  }
  if (!finite(value)) {
    throw FormatError("coefficient at index " + std::to_string(k) + " is not finite");
  }
  if (value == complex{}) {
    coeffs_.erase(k);
    return;
  }
  coeffs_[k] = value;
  window_ = std::max(window_, std::labs(k));
}

void FourierSequence::set_window(long w) {
  long needed = 0;
  if (!coeffs_.empty()) {
    needed = std::max(std::labs(coeffs_.begin()->first), std::labs(coeffs_.rbegin()->first));
  }
  window_ = std::max(w, needed);
}

FourierSequence FourierSequence::scaled(complex factor) const {
  FourierSequence out(parity_);
  for (const auto& [k, c] : coeffs_) out.set(k, c * factor);
  out.set_window(window_);
  return out;
}

std::vector<complex> FourierSequence::dense(long max_index) const {
  std::vector<complex> out(static_cast<std::size_t>(2 * max_index + 1));
  for (auto it = coeffs_.lower_bound(-max_index); it != coeffs_.end() && it->first <= max_index;
       ++it) {
    out[static_cast<std::size_t>(it->first + max_index)] = it->second;
  }
  return out;
}

void SobolevParams::validate() const {
  if (m < 1) throw PreconditionError("m must be a positive integer");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw PreconditionError("alpha must lie in [0, 1]");
}

double weighted_norm(const FourierSequence& a, double s, long shift) {
  double sum = 0.0;
  for (const auto& [k, c] : a.coeffs()) {
    sum += std::pow(bracket(static_cast<double>(k + shift)), 2.0 * s) * std::norm(c);
  }
  return std::sqrt(sum);
}

FourierSequence convolve(const FourierSequence& a, const FourierSequence& b) {
  const Parity parity = a.parity() == b.parity() ? Parity::Even : Parity::Odd;
  std::map<long, complex> acc;
  for (const auto& [i, ai] : a.coeffs()) {
    for (const auto& [j, bj] : b.coeffs()) acc[i + j] += ai * bj;
  }
  FourierSequence out(parity);
  for (const auto& [k, c] : acc) out.set(k, c);
  out.set_window(a.window() + b.window());
  return out;
}

FourierSequence conjugate_seq(const FourierSequence& a) {
  if (a.parity() != Parity::Even) {
    throw ParityError("real-valuedness is defined for even (potential) sequences only");
  }
  FourierSequence out(Parity::Even);
  for (const auto& [k, c] : a.coeffs()) out.set(-k, std::conj(c));
  out.set_window(a.window());
  return out;
}

bool is_real_valued(const FourierSequence& a, double tol) {
  const FourierSequence c = conjugate_seq(a);
  for (const auto& [k, value] : a.coeffs()) {
    if (std::abs(value - c(k)) > tol) return false;
  }
  for (const auto& [k, value] : c.coeffs()) {
    if (std::abs(value - a(k)) > tol) return false;
  }
  return true;
}

ZeroModeSplit normalize_zero_mode(const FourierSequence& v) {
  if (v.parity() != Parity::Even) throw ParityError("zero-mode normalization needs an even sequence");
  ZeroModeSplit out{v, v(0)};
  out.v.set(0, complex{});
  return out;
}

const char* to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::Explicit: return "explicit";
    case PotentialFamily::TrigPolynomial: return "trig";
    case PotentialFamily::RandomSmooth: return "random-smooth";
    case PotentialFamily::RandomRough: return "random-rough";
    case PotentialFamily::DerivativeType: return "derivative";
  }
  return "?";
}

PotentialFamily potential_family_from_string(const std::string& name) {
  for (auto f : {PotentialFamily::Explicit, PotentialFamily::TrigPolynomial,
                 PotentialFamily::RandomSmooth, PotentialFamily::RandomRough,
                 PotentialFamily::DerivativeType}) {
    if (name == to_string(f)) return f;
  }
  throw FormatError("unknown potential family '" + name + "'");
}

namespace {

FourierSequence random_phases(const PotentialSpec& spec, double exponent, bool absolute_index) {
  if (spec.support < 2) throw PreconditionError("random potentials need support >= 2");
  std::mt19937_64 rng(spec.seed);
  FourierSequence v(Parity::Even);
  for (long k = 1; 2 * k <= spec.support; ++k) {
    const double idx = static_cast<double>(2 * k);
    const double amp = std::pow(absolute_index ? idx : bracket(idx), exponent);
    const double theta_plus = 2.0 * std::numbers::pi * unit_uniform(rng);
    const complex plus = std::polar(amp, theta_plus);
    v.set(2 * k, plus);
    if (spec.real_valued) {
      v.set(-2 * k, std::conj(plus));
    } else {
      v.set(-2 * k, std::polar(amp, 2.0 * std::numbers::pi * unit_uniform(rng)));
    }
  }
  v.set_window(spec.support - spec.support % 2);
  return v;
}

FourierSequence rescale(const FourierSequence& v, double norm, double radius, bool exact) {
  if (norm == 0.0 || !std::isfinite(radius)) return v;
  if (exact || norm > radius) return v.scaled(radius / norm);
  return v;
}

}  // namespace

FourierSequence make_potential(const PotentialSpec& spec, const SobolevParams& params) {
  params.validate();
  if (!(spec.radius >= 0.0)) throw PreconditionError("radius must be >= 0");
  const double s = -params.m * params.alpha;

  FourierSequence v(Parity::Even);
  bool exact = false;
  switch (spec.family) {
    case PotentialFamily::Explicit:
    case PotentialFamily::TrigPolynomial:
      if (spec.coefficients.parity() != Parity::Even) {
        throw ParityError("explicit potentials must live on the even lattice");
      }
      if (spec.family == PotentialFamily::TrigPolynomial && spec.coefficients.empty()) {
        throw PreconditionError("trig polynomial needs at least one coefficient");
      }
      v = spec.coefficients;
      break;
    case PotentialFamily::RandomSmooth:
      v = random_phases(spec, -spec.smooth_decay, false);
      exact = true;
      break;
    case PotentialFamily::RandomRough:
      if (spec.power) {
        v = random_phases(spec, *spec.power, true);
      } else {
        if (!(spec.delta > 0.0)) throw PreconditionError("RandomRough needs delta > 0");
        v = random_phases(spec, params.m * params.alpha - 0.5 - spec.delta, false);
        exact = true;
      }
      break;
    case PotentialFamily::DerivativeType: {
      if (spec.q.parity() != Parity::Even || spec.q.empty()) {
        throw PreconditionError("derivative potential needs a nonempty even sequence q");
      }
      for (const auto& [k, c] : spec.q.coeffs()) {
        v.set(k, complex{0.0, std::numbers::pi * static_cast<double>(k)} * c);
      }
      v.set_window(spec.q.window());
      break;
    }
  }
  return rescale(v, weighted_norm(v, s), spec.radius, exact);
}

DecayFit decay_exponent(const std::vector<std::pair<long, double>>& r, long lo, long hi) {
  std::vector<double> xs, ys;
  std::size_t in_range = 0;
  for (const auto& [n, value] : r) {
    if (n < lo || n > hi) continue;
    if (!(value >= 0.0)) throw PreconditionError("decay samples must be nonnegative");
    ++in_range;
    if (value > 0.0 && n > 0) {
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(value));
    }
  }
  DecayFit fit;
  fit.points = xs.size();
  if (in_range > 0 && xs.empty()) {
    fit.slope = -std::numeric_limits<double>::infinity();
    fit.exact_zero = true;
    return fit;
  }
  if (xs.size() < 5) throw PreconditionError("decay fit needs at least 5 positive samples");

  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("decay fit needs at least two distinct n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / count);
  return fit;
}

bool membership_verdict(const std::vector<std::pair<long, double>>& r, double s, long lo,
                        long hi, double bound_factor) {
  std::vector<double> weighted;
  double upper_sup = 0.0;
  const long mid = lo + (hi - lo) / 2;
  for (const auto& [n, value] : r) {
    if (n < lo || n > hi) continue;
    const double w = value * std::pow(static_cast<double>(n), s);
    weighted.push_back(w);
    if (n >= mid) upper_sup = std::max(upper_sup, w);
  }
  if (weighted.empty()) return true;
  std::nth_element(weighted.begin(), weighted.begin() + weighted.size() / 2, weighted.end());
  const double median = weighted[weighted.size() / 2];
  if (upper_sup == 0.0) return true;
  return upper_sup <= bound_factor * median;
}

FourierSequence potential_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("potential file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("potential file must hold a JSON object");
  if (!doc.contains("parity") || doc["parity"] != "even") {
    throw FormatError("potential file: \"parity\" must be \"even\"");
  }
  if (!doc.contains("coeffs") || !doc["coeffs"].is_array()) {
    throw FormatError("potential file: \"coeffs\" must be an array");
  }
  FourierSequence v(Parity::Even);
  const auto& coeffs = doc["coeffs"];
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto& e = coeffs[i];
    const std::string where = "coeffs[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number() ||
        !e[2].is_number()) {
      throw FormatError(where + ": expected [k, re, im] with integer k");
    }
    const long k = e[0].get<long>();
    if (k % 2 != 0) throw FormatError(where + ": index " + std::to_string(k) + " is odd");
    const complex c{e[1].get<double>(), e[2].get<double>()};
    if (!finite(c)) throw FormatError(where + ": coefficient is not finite");
    v.set(k, v(k) + c);
  }
  return v;
}

FourierSequence load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open potential file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return potential_from_json(buf.str());
}

std::string potential_to_json(const FourierSequence& v) {
  nlohmann::json doc;
  doc["parity"] = to_string(v.parity());
  doc["coeffs"] = nlohmann::json::array();
  for (const auto& [k, c] : v.coeffs()) doc["coeffs"].push_back({k, c.real(), c.imag()});
  return doc.dump();
}

}  // namespace hillgap
