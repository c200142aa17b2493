// SPDX-License-Identifier: Apache-2.0
#include "hillgap/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hillgap/errors.hpp"

namespace hillgap {

Backend default_backend() {
#ifdef _OPENMP
  return Backend::OpenMP;
#else
  return Backend::Serial;
#endif
}

int thread_count(std::size_t tasks) {
  long threads = 0;
  if (const char* env = std::getenv("HILLGAP_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    threads = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || threads < 1) {
      throw ConfigurationError(std::string("HILLGAP_THREADS must be a positive integer, got '") +
                               env + "'");
    }
  } else {
    threads = static_cast<long>(std::max(1U, std::thread::hardware_concurrency()));
  }
  const long cap = static_cast<long>(std::max<std::size_t>(tasks, 1));
  return static_cast<int>(std::min(threads, cap));
}

void parallel_for(std::size_t count, Backend backend, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
#ifdef _OPENMP
  if (backend == Backend::OpenMP && count > 1) {
    const int threads = thread_count(count);
    const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long i = 0; i < n; ++i) guarded(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  }
#else
  (void)backend;
  for (std::size_t i = 0; i < count; ++i) guarded(i);
#endif
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

struct NodeTerm {
  Matrix r;
  complex tr_tp;
  complex tr_q;
};

NodeTerm node_term(const OperatorShape& shape, const Matrix& b, const Matrix& t, complex center,
                   complex lambda) {
  const ResolventFactors f = build_resolvent_factors(shape, b, lambda);
  Matrix middle = -f.s_lambda;
  middle.diagonal() += f.i_lambda;
  // (lambda - T)^{-1} = A^{-1/2} (I - S)^{-1} A^{-1/2}
  const RealVector inv_half = f.a_half.cwiseInverse();
  Matrix rhs = Matrix::Zero(shape.dim(), shape.dim());
  rhs.diagonal() = inv_half.cast<complex>();
  Matrix r = middle.partialPivLu().solve(rhs);
  r = inv_half.asDiagonal() * r;

  const Eigen::Index dim = shape.dim();
  complex tr_tp{};
  complex tr_rb{};
  for (Eigen::Index i = 0; i < dim; ++i) {
    const complex resolvent_a = 1.0 / (lambda - unperturbed_eigenvalue(shape.m, shape.mode(i)));
    complex row_t{};
    complex row_b{};
    for (Eigen::Index k = 0; k < dim; ++k) {
      row_t += t(i, k) * r(k, i);
      row_b += r(i, k) * b(k, i);
    }
    tr_tp += row_t;
    tr_rb += row_b * resolvent_a;
  }
  return {std::move(r), tr_tp, (lambda - center) * tr_rb};
}

}  // namespace

ContourSums contour_sums(const OperatorShape& shape, const Matrix& b, complex center,
                         const std::vector<complex>& nodes, const std::vector<complex>& weights,
                         Backend backend) {
  if (nodes.size() != weights.size()) throw PreconditionError("nodes and weights differ in length");
  const Eigen::Index dim = shape.dim();
  Matrix t = b;
  for (Eigen::Index i = 0; i < dim; ++i) t(i, i) += unperturbed_eigenvalue(shape.m, shape.mode(i));

  const std::size_t blocks = (nodes.size() + kReductionBlock - 1) / kReductionBlock;
  std::vector<ContourSums> partial(blocks);
  parallel_for(blocks, backend, [&](std::size_t blk) {
    ContourSums& acc = partial[blk];
    acc.p = Matrix::Zero(dim, dim);
    acc.p_half = Matrix::Zero(dim, dim);
    const std::size_t end = std::min(nodes.size(), (blk + 1) * kReductionBlock);
    for (std::size_t j = blk * kReductionBlock; j < end; ++j) {
      const NodeTerm term = node_term(shape, b, t, center, nodes[j]);
      const complex w = weights[j];
      acc.p += w * term.r;
      acc.tr_tp += w * term.tr_tp;
      acc.tr_q += w * term.tr_q;
      if (j % 2 == 0) {
        acc.p_half += (2.0 * w) * term.r;
        acc.tr_tp_half += (2.0 * w) * term.tr_tp;
        acc.tr_q_half += (2.0 * w) * term.tr_q;
      }
    }
  });

  ContourSums out;
  out.p = Matrix::Zero(dim, dim);
  out.p_half = Matrix::Zero(dim, dim);
  for (const ContourSums& part : partial) {
    out.p += part.p;
    out.p_half += part.p_half;
    out.tr_tp += part.tr_tp;
    out.tr_tp_half += part.tr_tp_half;
    out.tr_q += part.tr_q;
    out.tr_q_half += part.tr_q_half;
  }
  return out;
}

}  // namespace hillgap
