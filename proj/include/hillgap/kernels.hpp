// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel kernels. Every kernel has an OpenMP path and a serial
// reference path; both reduce in the same fixed block order, so their
// results agree bit for bit regardless of the thread count.
#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

#include "hillgap/operator.hpp"

namespace hillgap {

enum class Backend { Serial, OpenMP };

/// OpenMP when the library was built with it, Serial otherwise.
Backend default_backend();

/// Thread count from HILLGAP_THREADS (default: logical cores), capped at
/// `tasks` and never below 1.
int thread_count(std::size_t tasks);

/// Calls fn(i) for i in [0, count). Exceptions thrown by fn are rethrown
/// (the one with the smallest index wins) after the loop finishes.
void parallel_for(std::size_t count, Backend backend, const std::function<void(std::size_t)>& fn);

/// Nodes are reduced in blocks of this many, blocks in index order.
inline constexpr std::size_t kReductionBlock = 8;

/// Weighted resolvent sums over contour nodes lambda_j with weights w_j:
///   p       = sum_j w_j (lambda_j - T)^{-1}
///   tr_tp   = sum_j w_j Tr(T (lambda_j - T)^{-1})
///   tr_q    = sum_j w_j (lambda_j - center) Tr((lambda_j - T)^{-1} B (lambda_j - A)^{-1})
/// and the same three over the even-indexed nodes with doubled weights.
/// Resolvents are formed from the factorization through S_lambda.
struct ContourSums {
  Matrix p, p_half;
  complex tr_tp{}, tr_tp_half{};
  complex tr_q{}, tr_q_half{};
};

ContourSums contour_sums(const OperatorShape& shape, const Matrix& b, complex center,
                         const std::vector<complex>& nodes, const std::vector<complex>& weights,
                         Backend backend);

}  // namespace hillgap
