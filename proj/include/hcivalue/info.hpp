#pragma once

// Discrete information measures over ProbabilityDistribution values. All
// quantities are in bits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hcivalue/distribution.hpp"

namespace hcivalue {

/// Shannon entropy, -sum p log2 p, with 0 log 0 = 0.
double entropy(const ProbabilityDistribution& d);
double entropy(std::span<const double> probabilities);

/// log2 n, the entropy of a uniform alphabet with n letters. Throws DomainError for n = 0.
double max_entropy(std::uint64_t n);

/// Replaces zero cells by epsilon/(n-1) and rescales the remaining mass so the
/// total stays 1. A one-hot distribution becomes (1 - epsilon, epsilon/(n-1), ...).
/// Distributions without zero cells are returned unchanged. Throws DomainError for n < 2.
ProbabilityDistribution epsilon_adjust(const ProbabilityDistribution& d, EpsilonPolicy policy = {});

/// KL(q || p) after epsilon-adjusting both sides, so the result is always finite.
/// The two alphabets must carry the same labels (order may differ); otherwise AlignmentError.
double kl_divergence(const ProbabilityDistribution& q, const ProbabilityDistribution& p, EpsilonPolicy policy = {});

/// I(X;Y) of a joint distribution.
double mutual_information(const JointDistribution& joint);

/// A row-stochastic matrix: row i is the conditional distribution of the output given input i.
class StochasticMatrix {
 public:
  StochasticMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells);

  static StochasticMatrix identity(std::size_t n);
  /// Every row puts all of its mass on column `target`.
  static StochasticMatrix constant(std::size_t rows, std::size_t cols, std::size_t target);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t r, std::size_t c) const { return cells_.at(r * cols_ + c); }
  std::span<const double> cells() const noexcept { return cells_; }

  /// Matrix product; the composition of two channels applied in sequence.
  StochasticMatrix then(const StochasticMatrix& next) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> cells_;
};

/// Joint of (input, output) when `source` is sent through `channel`.
JointDistribution joint_through(const ProbabilityDistribution& source, const StochasticMatrix& channel);

struct DpiResult {
  double i12 = 0.0;  ///< I(Z1; Z2)
  double i13 = 0.0;  ///< I(Z1; Z3)
  bool holds = false;
};

/// Builds the chain Z1 -> Z2 -> Z3 and checks I(Z1;Z3) <= I(Z1;Z2) + 1e-9.
/// Throws AlignmentError when the dimensions do not chain.
DpiResult dpi_check(const ProbabilityDistribution& source, const StochasticMatrix& channel1,
                    const StochasticMatrix& channel2);

struct DpiFuzzSummary {
  std::size_t trials = 0;
  std::size_t holds = 0;
  double worst_margin = 0.0;  ///< max over trials of I(Z1;Z3) - I(Z1;Z2); never positive when DPI holds
};

/// Alphabet sizes for one random chain. A zero size is drawn uniformly from [2, 8] per trial.
struct ChainSizes {
  std::size_t z1 = 0;
  std::size_t z2 = 0;
  std::size_t z3 = 0;
};

/// Runs dpi_check on `trials` random Markov chains. Trial t draws from its own
/// generator seeded with (seed, t), so the summary is identical between the
/// serial and parallel runners.
DpiFuzzSummary dpi_fuzz(std::uint64_t seed, std::size_t trials, ChainSizes sizes = {});
DpiFuzzSummary dpi_fuzz_serial(std::uint64_t seed, std::size_t trials, ChainSizes sizes = {});

}  // namespace hcivalue
