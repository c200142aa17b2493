// SPDX-License-Identifier: Apache-2.0
//
// Fourier-side sequence spaces: finitely supported sequences on the even
// (potential) or odd (semi-periodic) integer lattice, the weighted norms
// of h^{s,n}, convolution, Hermitian symmetry and potential generation.
#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hillgap {

using complex = std::complex<double>;

enum class Parity { Even, Odd };

const char* to_string(Parity p);

/// Japanese bracket <k> = 1 + |k|.
inline double bracket(double k) { return 1.0 + (k < 0 ? -k : k); }

/// Finitely supported complex sequence on one parity class of Z.
///
/// Every stored index has the declared parity; indices that are not stored
/// (including all indices outside the window) read as zero. Exact zeros are
/// not stored, so two sequences compare equal iff their coefficients do.
class FourierSequence {
 public:
  explicit FourierSequence(Parity parity = Parity::Even) : parity_(parity) {}

  /// Builds a sequence from (index, value) pairs; duplicate indices add up.
  static FourierSequence from_pairs(Parity parity,
                                    const std::vector<std::pair<long, complex>>& entries);

  Parity parity() const { return parity_; }

  /// Coefficient at index k; zero for unstored indices and the other parity.
  complex operator()(long k) const;

  /// Throws ParityError on a wrong-parity index, FormatError on NaN/Inf.
  void set(long k, complex value);

  /// Half-width W of the support window [-W, W]; never smaller than the
  /// largest stored |index|.
  long window() const { return window_; }
  void set_window(long w);

  bool empty() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }
  const std::map<long, complex>& coeffs() const { return coeffs_; }

  FourierSequence scaled(complex factor) const;

  /// Dense copy of v(-max_index..max_index) (stride 1, both parities).
  std::vector<complex> dense(long max_index) const;

  friend bool operator==(const FourierSequence& a, const FourierSequence& b) {
    return a.parity_ == b.parity_ && a.coeffs_ == b.coeffs_;
  }

 private:
  Parity parity_;
  long window_ = 0;
  std::map<long, complex> coeffs_;
};

/// Exponents of the weighted spaces h^{s,n}.
struct SobolevParams {
  int m = 1;
  double alpha = 0.0;
  double s = 0.0;
  long shift = 0;

  void validate() const;
};

/// (sum_k <k+shift>^{2s} |a(k)|^2)^{1/2}.
double weighted_norm(const FourierSequence& a, double s, long shift = 0);

/// (a*b)(k) = sum_j a(k-j) b(j), exact over the support product.
FourierSequence convolve(const FourierSequence& a, const FourierSequence& b);

/// k -> conj(a(-k)); defined for even (potential) sequences only.
FourierSequence conjugate_seq(const FourierSequence& a);

inline constexpr double kSymmetryTolerance = 1e-12;

bool is_real_valued(const FourierSequence& a, double tol = kSymmetryTolerance);

struct ZeroModeSplit {
  FourierSequence v;  ///< input with the index-0 entry removed
  complex shift;      ///< the removed constant v(0)
};

ZeroModeSplit normalize_zero_mode(const FourierSequence& v);

enum class PotentialFamily { Explicit, TrigPolynomial, RandomSmooth, RandomRough, DerivativeType };

const char* to_string(PotentialFamily f);
PotentialFamily potential_family_from_string(const std::string& name);

/// Recipe for a potential. Which fields are read depends on `family`:
///   Explicit, TrigPolynomial : `coefficients` (even parity)
///   RandomSmooth             : `support`, `smooth_decay`, `real_valued`
///   RandomRough              : `support`, `delta`, `power`, `real_valued`
///   DerivativeType           : `q`, v(2k) = i 2 pi k q(2k)
/// Random families leave v(0) = 0 and are rescaled to norm exactly `radius`
/// (unless `power` is set); the other families are only scaled down when
/// they overshoot `radius`.
struct PotentialSpec {
  PotentialFamily family = PotentialFamily::Explicit;
  FourierSequence coefficients{Parity::Even};
  FourierSequence q{Parity::Even};
  long support = 512;           ///< largest |index| drawn by random families
  double delta = 0.05;          ///< RandomRough exponent offset
  std::optional<double> power;  ///< RandomRough: v(2k) = |2k|^power e^{i theta}, no rescale to R
  double smooth_decay = 3.0;    ///< RandomSmooth: |v(2k)| ~ <2k>^{-smooth_decay}
  bool real_valued = false;     ///< random families: enforce Hermitian symmetry
  double radius = 1.0;          ///< R; +inf disables rescaling
  std::uint64_t seed = 1;
};

/// Realizes `spec` as an even sequence with weighted_norm(., -m alpha) <= R.
FourierSequence make_potential(const PotentialSpec& spec, const SobolevParams& params);

// --- decay diagnostics ----------------------------------------------------

struct DecayFit {
  double slope = 0.0;       ///< least-squares slope of log r_n vs log n
  double intercept = 0.0;
  double residual = 0.0;    ///< RMS residual of the log-log fit
  std::size_t points = 0;   ///< number of positive samples used
  bool exact_zero = false;  ///< every sample in range was exactly zero
};

/// Least-squares power-law fit over n in [lo, hi]; zero samples are skipped.
/// Throws PreconditionError with fewer than 5 positive samples (unless all
/// samples are zero, which returns slope = -inf flagged exact).
DecayFit decay_exponent(const std::vector<std::pair<long, double>>& r, long lo, long hi);

/// Growth test for membership of r in h^s over n in [lo, hi]: the supremum
/// of r_n n^s over the upper half of the range must not exceed
/// `bound_factor` times the median over the whole range.
bool membership_verdict(const std::vector<std::pair<long, double>>& r, double s, long lo,
                        long hi, double bound_factor = 10.0);

// --- potential files ------------------------------------------------------

/// {"parity":"even","coeffs":[[k, re, im], ...]}
FourierSequence potential_from_json(const std::string& text);
FourierSequence load_potential(const std::string& path);
std::string potential_to_json(const FourierSequence& v);

}  // namespace hillgap
