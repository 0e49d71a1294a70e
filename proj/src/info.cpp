#include "hcivalue/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hcivalue/error.hpp"
#include "hcivalue/kernels.hpp"

namespace hcivalue {

double entropy(std::span<const double> probabilities) {
  return std::max(0.0, kernels::entropy_terms(probabilities));
}

double entropy(const ProbabilityDistribution& d) { return entropy(d.probabilities()); }

double max_entropy(std::uint64_t n) {
  if (n == 0) throw DomainError("max_entropy: alphabet size must be >= 1");
  return std::log2(static_cast<double>(n));
}

ProbabilityDistribution epsilon_adjust(const ProbabilityDistribution& d, EpsilonPolicy policy) {
  const std::size_t n = d.size();
  if (n < 2) throw DomainError("epsilon_adjust: needs at least 2 letters (got " + std::to_string(n) + ")");

  const auto probs = d.probabilities();
  const auto zeros = static_cast<std::size_t>(std::count(probs.begin(), probs.end(), 0.0));
  if (zeros == 0) return d;

  const double fill = policy.value() / static_cast<double>(n - 1);
  const double remaining = 1.0 - static_cast<double>(zeros) * fill;
  std::vector<double> adjusted(probs.begin(), probs.end());
  for (double& p : adjusted) p = (p == 0.0) ? fill : p * remaining;
  return d.with_probabilities(std::move(adjusted));
}

double kl_divergence(const ProbabilityDistribution& q, const ProbabilityDistribution& p, EpsilonPolicy policy) {
  if (!q.same_labels(p)) throw AlignmentError("kl_divergence: the two alphabets carry different letters");
  if (q.size() == 1) return 0.0;

  const auto q_adj = epsilon_adjust(q, policy);
  const auto p_adj = epsilon_adjust(p, policy);
  const auto p_aligned = p_adj.probabilities_in_order_of(q_adj);
  return std::max(0.0, kernels::kl_terms(q_adj.probabilities(), p_aligned));
}

double mutual_information(const JointDistribution& joint) {
  const auto rows = joint.row_marginal();
  const auto cols = joint.col_marginal();
  return std::max(0.0, kernels::mutual_information_terms(joint.cells(), rows, cols));
}

StochasticMatrix::StochasticMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows_ == 0 || cols_ == 0) throw ValidationError("stochastic matrix must be at least 1x1");
  if (cells_.size() != rows_ * cols_) {
    throw ValidationError("stochastic matrix: expected " + std::to_string(rows_ * cols_) + " cells, got " +
                          std::to_string(cells_.size()));
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    double total = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) {
      const double v = cells_[r * cols_ + c];
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("stochastic matrix: row " + std::to_string(r) + " has a negative cell");
      }
      total += v;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      throw ValidationError("stochastic matrix: row " + std::to_string(r) + " does not sum to 1");
    }
    for (std::size_t c = 0; c < cols_; ++c) cells_[r * cols_ + c] /= total;
  }
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  std::vector<double> cells(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) cells[i * n + i] = 1.0;
  return {n, n, std::move(cells)};
}

StochasticMatrix StochasticMatrix::constant(std::size_t rows, std::size_t cols, std::size_t target) {
  if (target >= cols) throw DomainError("constant channel: target column out of range");
  std::vector<double> cells(rows * cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) cells[r * cols + target] = 1.0;
  return {rows, cols, std::move(cells)};
}

StochasticMatrix StochasticMatrix::then(const StochasticMatrix& next) const {
  if (cols_ != next.rows_) {
    throw AlignmentError("channel output size " + std::to_string(cols_) + " does not match next input size " +
                         std::to_string(next.rows_));
  }
  std::vector<double> out(rows_ * next.cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = cells_[i * cols_ + k];
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < next.cols_; ++j) out[i * next.cols_ + j] += a * next.cells_[k * next.cols_ + j];
    }
  }
  return {rows_, next.cols_, std::move(out)};
}

JointDistribution joint_through(const ProbabilityDistribution& source, const StochasticMatrix& channel) {
  if (source.size() != channel.rows()) {
    throw AlignmentError("source has " + std::to_string(source.size()) + " letters but the channel expects " +
                         std::to_string(channel.rows()));
  }
  std::vector<double> cells(channel.rows() * channel.cols());
  for (std::size_t i = 0; i < channel.rows(); ++i) {
    for (std::size_t j = 0; j < channel.cols(); ++j) {
      cells[i * channel.cols() + j] = source.probability(i) * channel.at(i, j);
    }
  }
  return {source.labels(), indexed_labels(channel.cols(), "y"), std::move(cells)};
}

DpiResult dpi_check(const ProbabilityDistribution& source, const StochasticMatrix& channel1,
                    const StochasticMatrix& channel2) {
  const auto combined = channel1.then(channel2);
  DpiResult r;
  r.i12 = mutual_information(joint_through(source, channel1));
  r.i13 = mutual_information(joint_through(source, combined));
  r.holds = r.i13 <= r.i12 + 1e-9;
  return r;
}

namespace {

// Random row: exponential draws with roughly a quarter of the cells zeroed.
std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> draw(1.0);
  std::bernoulli_distribution drop(0.25);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> v(n);
  double total = 0.0;
  for (auto& x : v) {
    x = drop(rng) ? 0.0 : draw(rng);
    total += x;
  }
  if (total == 0.0) {
    v[pick(rng)] = 1.0;
    total = 1.0;
  }
  for (auto& x : v) x /= total;
  return v;
}

DpiResult random_chain_trial(std::uint64_t seed, std::size_t trial, ChainSizes sizes) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> size_draw(2, 8);
  const std::size_t n1 = sizes.z1 ? sizes.z1 : size_draw(rng);
  const std::size_t n2 = sizes.z2 ? sizes.z2 : size_draw(rng);
  const std::size_t n3 = sizes.z3 ? sizes.z3 : size_draw(rng);

  auto source = ProbabilityDistribution(indexed_labels(n1, "z"), random_simplex(rng, n1));
  auto matrix = [&](std::size_t rows, std::size_t cols) {
    std::vector<double> cells;
    cells.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = random_simplex(rng, cols);
      cells.insert(cells.end(), row.begin(), row.end());
    }
    return StochasticMatrix(rows, cols, std::move(cells));
  };
  auto c1 = matrix(n1, n2);
  auto c2 = matrix(n2, n3);
  return dpi_check(source, c1, c2);
}

}  // namespace

DpiFuzzSummary dpi_fuzz_serial(std::uint64_t seed, std::size_t trials, ChainSizes sizes) {
  DpiFuzzSummary s;
  s.trials = trials;
  s.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    const auto r = random_chain_trial(seed, t, sizes);
    if (r.holds) ++s.holds;
    s.worst_margin = std::max(s.worst_margin, r.i13 - r.i12);
  }
  if (trials == 0) s.worst_margin = 0.0;
  return s;
}

DpiFuzzSummary dpi_fuzz(std::uint64_t seed, std::size_t trials, ChainSizes sizes) {
  std::vector<DpiResult> results(trials);
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t t = 0; t < n; ++t) {
    results[static_cast<std::size_t>(t)] = random_chain_trial(seed, static_cast<std::size_t>(t), sizes);
  }
  DpiFuzzSummary s;
  s.trials = trials;
  s.worst_margin = trials ? -std::numeric_limits<double>::infinity() : 0.0;
  for (const auto& r : results) {
    if (r.holds) ++s.holds;
    s.worst_margin = std::max(s.worst_margin, r.i13 - r.i12);
  }
  return s;
}

}  // namespace hcivalue
