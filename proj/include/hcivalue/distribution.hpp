#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hcivalue {

/// Tolerance on probability sums and on per-cell equality.
inline constexpr double kProbabilityTolerance = 1e-9;

/// Default epsilon used to keep KL divergence finite.
inline constexpr double kDefaultEpsilon = 0.006299;

struct Letter {
  std::string label;
  double probability = 0.0;
};

/// An alphabet: unique, non-empty labels with a probability per letter.
///
/// Construction validates and renormalizes: probabilities must be finite and
/// non-negative and sum to 1 within kProbabilityTolerance, after which they
/// are divided by their sum so downstream code sees an exact distribution.
/// Instances are immutable; the label set is shared between distributions
/// derived from one another, so reweighting a large alphabet does not copy
/// its labels.
class ProbabilityDistribution {
 public:
  explicit ProbabilityDistribution(std::vector<Letter> letters);
  ProbabilityDistribution(std::vector<std::string> labels, std::vector<double> probabilities);

  static ProbabilityDistribution uniform(std::vector<std::string> labels);
  static ProbabilityDistribution one_hot(std::vector<std::string> labels, std::size_t index);

  /// Same labels, new weights (validated like the constructor).
  ProbabilityDistribution with_probabilities(std::vector<double> probabilities) const;

  std::size_t size() const noexcept { return probabilities_.size(); }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  const std::vector<std::string>& labels() const noexcept { return labels_->names; }
  const std::string& label(std::size_t i) const { return labels_->names.at(i); }
  double probability(std::size_t i) const { return probabilities_.at(i); }

  /// Probability of a label; throws AlignmentError when the label is unknown.
  double probability(std::string_view label) const;
  std::optional<std::size_t> find(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }

  /// True when both distributions carry the same label set (order ignored).
  bool same_labels(const ProbabilityDistribution& other) const;

  /// Reorders this distribution's probabilities into `reference`'s label order.
  /// Throws AlignmentError when the label sets differ.
  std::vector<double> probabilities_in_order_of(const ProbabilityDistribution& reference) const;

  /// Label-aware, per-cell comparison.
  bool approx_equal(const ProbabilityDistribution& other, double tolerance = kProbabilityTolerance) const;

  /// Index of the single letter holding (within tolerance) all the mass, if any.
  std::optional<std::size_t> one_hot_index() const;

  std::vector<Letter> letters() const;

 private:
  struct LabelSet {
    std::vector<std::string> names;
    std::unordered_map<std::string, std::size_t> index;
  };

  ProbabilityDistribution(std::shared_ptr<const LabelSet> labels, std::vector<double> probabilities);

  static std::shared_ptr<const LabelSet> make_label_set(std::vector<std::string> names);

  std::shared_ptr<const LabelSet> labels_;
  std::vector<double> probabilities_;
};

/// A joint distribution over (row, column) letter pairs, stored row-major.
class JointDistribution {
 public:
  JointDistribution(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                    std::vector<double> cells);

  std::size_t rows() const noexcept { return row_labels_.size(); }
  std::size_t cols() const noexcept { return col_labels_.size(); }
  const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
  const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }
  std::span<const double> cells() const noexcept { return cells_; }
  double at(std::size_t row, std::size_t col) const { return cells_.at(row * cols() + col); }

  std::vector<double> row_marginal() const;
  std::vector<double> col_marginal() const;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<double> cells_;
};

/// The epsilon used to soften degenerate distributions before taking KL divergence.
class EpsilonPolicy {
 public:
  EpsilonPolicy() = default;
  /// Throws DomainError unless 0 < epsilon < 0.5.
  explicit EpsilonPolicy(double epsilon);

  double value() const noexcept { return epsilon_; }

  friend bool operator==(const EpsilonPolicy&, const EpsilonPolicy&) = default;

 private:
  double epsilon_ = kDefaultEpsilon;
};

/// Generates `n` labels "a1".."an".
std::vector<std::string> indexed_labels(std::size_t n, std::string_view prefix = "a");

/// All k-bit strings in ascending binary order ("00", "01", "10", "11" for k = 2).
std::vector<std::string> bit_string_labels(std::size_t k);

/// True if `s` is non-empty and only holds '0' / '1'.
bool is_bit_string(std::string_view s);

}  // namespace hcivalue
