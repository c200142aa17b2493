// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hillgap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An index of the wrong lattice parity, or a sequence of the wrong parity.
class ParityError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (potential files, configuration values).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// lambda lies on (or numerically at) the unperturbed spectrum.
class SingularFactorError : public Error {
 public:
  SingularFactorError(const std::string& what, std::complex<double> lambda)
      : Error(what), lambda_(lambda) {}
  std::complex<double> lambda() const { return lambda_; }

 private:
  std::complex<double> lambda_;
};

/// An eigenvalue sits too close to a quadrature contour.
class ContourError : public Error {
 public:
  ContourError(const std::string& what, std::complex<double> offending)
      : Error(what), offending_(offending) {}
  std::complex<double> offending() const { return offending_; }

 private:
  std::complex<double> offending_;
};

/// Pairing discs overlap, so disc membership cannot separate clusters.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// The QR iteration or the residual certificate failed.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<std::complex<double>> partial = {})
      : Error(what), partial_(std::move(partial)) {}
  const std::vector<std::complex<double>>& partial() const { return partial_; }

 private:
  std::vector<std::complex<double>> partial_;
};

}  // namespace hillgap
