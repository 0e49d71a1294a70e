#include "hcivalue/kernels.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hcivalue::kernels {

namespace {

inline double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

inline double kl_term(double q, double p) { return q > 0.0 ? q * std::log2(q / p) : 0.0; }

inline double bernoulli_cell(std::span<const double> on, std::size_t combo) {
  const std::size_t k = on.size();
  double prob = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    const bool set = (combo >> (k - 1 - j)) & 1U;
    prob *= set ? on[j] : 1.0 - on[j];
  }
  return prob;
}

// Blocked reduction: block partials are computed in parallel and then added
// left to right, which fixes the summation order regardless of thread count.
template <typename Term>
double blocked_reduce(std::size_t n, Term term) {
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
    const std::size_t hi = std::min(n, lo + kBlockSize);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace

namespace serial {

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc;
}

double entropy_terms(std::span<const double> p) {
  double acc = 0.0;
  for (double v : p) acc += entropy_term(v);
  return acc;
}

double kl_terms(std::span<const double> q, std::span<const double> p) {
  assert(q.size() == p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) acc += kl_term(q[i], p[i]);
  return acc;
}

double mutual_information_terms(std::span<const double> joint, std::span<const double> row_marginal,
                                std::span<const double> col_marginal) {
  const std::size_t cols = col_marginal.size();
  assert(joint.size() == row_marginal.size() * cols);
  double acc = 0.0;
  for (std::size_t i = 0; i < row_marginal.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      acc += kl_term(joint[i * cols + j], row_marginal[i] * col_marginal[j]);
    }
  }
  return acc;
}

void bernoulli_product(std::span<const double> on, std::span<double> out) {
  assert(out.size() == (std::size_t{1} << on.size()));
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = bernoulli_cell(on, c);
}

void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(out.size() == a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
}

}  // namespace serial

namespace parallel {

double sum(std::span<const double> x) {
  return blocked_reduce(x.size(), [x](std::size_t i) { return x[i]; });
}

double entropy_terms(std::span<const double> p) {
  return blocked_reduce(p.size(), [p](std::size_t i) { return entropy_term(p[i]); });
}

double kl_terms(std::span<const double> q, std::span<const double> p) {
  assert(q.size() == p.size());
  return blocked_reduce(q.size(), [q, p](std::size_t i) { return kl_term(q[i], p[i]); });
}

double mutual_information_terms(std::span<const double> joint, std::span<const double> row_marginal,
                                std::span<const double> col_marginal) {
  const std::size_t cols = col_marginal.size();
  assert(joint.size() == row_marginal.size() * cols);
  return blocked_reduce(joint.size(), [=](std::size_t idx) {
    return kl_term(joint[idx], row_marginal[idx / cols] * col_marginal[idx % cols]);
  });
}

void bernoulli_product(std::span<const double> on, std::span<double> out) {
  assert(out.size() == (std::size_t{1} << on.size()));
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < n; ++c) {
    out[static_cast<std::size_t>(c)] = bernoulli_cell(on, static_cast<std::size_t>(c));
  }
}

void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(out.size() == a.size() * b.size());
  const auto n = static_cast<std::int64_t>(out.size());
  const std::size_t cols = b.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const auto u = static_cast<std::size_t>(idx);
    out[u] = a[u / cols] * b[u % cols];
  }
}

}  // namespace parallel

double sum(std::span<const double> x) {
  return x.size() >= kParallelThreshold ? parallel::sum(x) : serial::sum(x);
}

double entropy_terms(std::span<const double> p) {
  return p.size() >= kParallelThreshold ? parallel::entropy_terms(p) : serial::entropy_terms(p);
}

double kl_terms(std::span<const double> q, std::span<const double> p) {
  return q.size() >= kParallelThreshold ? parallel::kl_terms(q, p) : serial::kl_terms(q, p);
}

double mutual_information_terms(std::span<const double> joint, std::span<const double> row_marginal,
                                std::span<const double> col_marginal) {
  return joint.size() >= kParallelThreshold
             ? parallel::mutual_information_terms(joint, row_marginal, col_marginal)
             : serial::mutual_information_terms(joint, row_marginal, col_marginal);
}

void bernoulli_product(std::span<const double> on, std::span<double> out) {
  if (out.size() >= kParallelThreshold) {
    parallel::bernoulli_product(on, out);
  } else {
    serial::bernoulli_product(on, out);
  }
}

void outer_product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  if (out.size() >= kParallelThreshold) {
    parallel::outer_product(a, b, out);
  } else {
    serial::outer_product(a, b, out);
  }
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace hcivalue::kernels
