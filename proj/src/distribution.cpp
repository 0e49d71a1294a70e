#include "hcivalue/distribution.hpp"

#include <cmath>
#include <sstream>

#include "hcivalue/error.hpp"
#include "hcivalue/kernels.hpp"

namespace hcivalue {

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Checks every cell and the total; returns the probabilities divided by their sum.
std::vector<double> validated(std::vector<double> probabilities, const std::vector<std::string>* labels,
                              std::string_view what) {
  if (probabilities.empty()) {
    throw ValidationError(std::string(what) + " has no letters");
  }
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    if (!std::isfinite(p) || p < 0.0) {
      std::string name = labels ? "'" + (*labels)[i] + "'" : "#" + std::to_string(i);
      throw ValidationError(std::string(what) + ": probability of letter " + name + " must be >= 0 (got " +
                            describe(p) + ")");
    }
  }
  const double total = kernels::sum(probabilities);
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw ValidationError(std::string(what) + ": probabilities must sum to 1 within 1e-9 (sum is " +
                          describe(total) + ")");
  }
  if (total != 1.0) {
    for (double& p : probabilities) p /= total;
  }
  return probabilities;
}

}  // namespace

ProbabilityDistribution::ProbabilityDistribution(std::vector<Letter> letters) {
  std::vector<std::string> names;
  std::vector<double> probs;
  names.reserve(letters.size());
  probs.reserve(letters.size());
  for (auto& letter : letters) {
    names.push_back(std::move(letter.label));
    probs.push_back(letter.probability);
  }
  *this = ProbabilityDistribution(std::move(names), std::move(probs));
}

ProbabilityDistribution::ProbabilityDistribution(std::vector<std::string> labels, std::vector<double> probabilities) {
  if (labels.size() != probabilities.size()) {
    throw ValidationError("distribution: " + std::to_string(labels.size()) + " labels but " +
                          std::to_string(probabilities.size()) + " probabilities");
  }
  auto set = make_label_set(std::move(labels));
  probabilities_ = validated(std::move(probabilities), &set->names, "distribution");
  labels_ = std::move(set);
}

ProbabilityDistribution::ProbabilityDistribution(std::shared_ptr<const LabelSet> labels,
                                                 std::vector<double> probabilities)
    : labels_(std::move(labels)) {
  if (probabilities.size() != labels_->names.size()) {
    throw ValidationError("distribution: " + std::to_string(labels_->names.size()) + " labels but " +
                          std::to_string(probabilities.size()) + " probabilities");
  }
  probabilities_ = validated(std::move(probabilities), &labels_->names, "distribution");
}

std::shared_ptr<const ProbabilityDistribution::LabelSet> ProbabilityDistribution::make_label_set(
    std::vector<std::string> names) {
  auto set = std::make_shared<LabelSet>();
  set->index.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) {
      throw ValidationError("distribution: label at index " + std::to_string(i) + " is empty");
    }
    if (!set->index.emplace(names[i], i).second) {
      throw ValidationError("distribution: duplicate label '" + names[i] + "'");
    }
  }
  set->names = std::move(names);
  return set;
}

ProbabilityDistribution ProbabilityDistribution::uniform(std::vector<std::string> labels) {
  const std::size_t n = labels.size();
  if (n == 0) throw ValidationError("distribution has no letters");
  return ProbabilityDistribution(std::move(labels), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityDistribution ProbabilityDistribution::one_hot(std::vector<std::string> labels, std::size_t index) {
  if (index >= labels.size()) {
    throw DomainError("one_hot: index " + std::to_string(index) + " out of range");
  }
  std::vector<double> probs(labels.size(), 0.0);
  probs[index] = 1.0;
  return ProbabilityDistribution(std::move(labels), std::move(probs));
}

ProbabilityDistribution ProbabilityDistribution::with_probabilities(std::vector<double> probabilities) const {
  return ProbabilityDistribution(labels_, std::move(probabilities));
}

double ProbabilityDistribution::probability(std::string_view label) const {
  auto i = find(label);
  if (!i) throw AlignmentError("unknown letter '" + std::string(label) + "'");
  return probabilities_[*i];
}

std::optional<std::size_t> ProbabilityDistribution::find(std::string_view label) const {
  auto it = labels_->index.find(std::string(label));
  if (it == labels_->index.end()) return std::nullopt;
  return it->second;
}

bool ProbabilityDistribution::same_labels(const ProbabilityDistribution& other) const {
  if (labels_ == other.labels_) return true;
  if (size() != other.size()) return false;
  for (const auto& name : labels_->names) {
    if (!other.contains(name)) return false;
  }
  return true;
}

std::vector<double> ProbabilityDistribution::probabilities_in_order_of(const ProbabilityDistribution& reference) const {
  if (labels_ == reference.labels_) return probabilities_;
  if (size() != reference.size()) {
    throw AlignmentError("label sets differ in size (" + std::to_string(size()) + " vs " +
                         std::to_string(reference.size()) + ")");
  }
  std::vector<double> out(size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    auto j = find(reference.label(i));
    if (!j) throw AlignmentError("letter '" + reference.label(i) + "' missing from the other alphabet");
    out[i] = probabilities_[*j];
  }
  return out;
}

bool ProbabilityDistribution::approx_equal(const ProbabilityDistribution& other, double tolerance) const {
  if (!same_labels(other)) return false;
  const auto theirs = other.probabilities_in_order_of(*this);
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(probabilities_[i] - theirs[i]) > tolerance) return false;
  }
  return true;
}

std::optional<std::size_t> ProbabilityDistribution::one_hot_index() const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (probabilities_[i] >= 1.0 - kProbabilityTolerance) return i;
  }
  return std::nullopt;
}

std::vector<Letter> ProbabilityDistribution::letters() const {
  std::vector<Letter> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back({labels_->names[i], probabilities_[i]});
  return out;
}

JointDistribution::JointDistribution(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                                     std::vector<double> cells)
    : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
  if (row_labels_.empty() || col_labels_.empty()) {
    throw ValidationError("joint distribution needs at least one row and one column");
  }
  if (cells.size() != row_labels_.size() * col_labels_.size()) {
    throw ValidationError("joint distribution: expected " + std::to_string(row_labels_.size() * col_labels_.size()) +
                          " cells, got " + std::to_string(cells.size()));
  }
  cells_ = validated(std::move(cells), nullptr, "joint distribution");
}

std::vector<double> JointDistribution::row_marginal() const {
  std::vector<double> out(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) out[i] += cells_[i * cols() + j];
  }
  return out;
}

std::vector<double> JointDistribution::col_marginal() const {
  std::vector<double> out(cols(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) out[j] += cells_[i * cols() + j];
  }
  return out;
}

EpsilonPolicy::EpsilonPolicy(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw DomainError("epsilon must lie in (0, 0.5) (got " + describe(epsilon) + ")");
  }
}

std::vector<std::string> indexed_labels(std::size_t n, std::string_view prefix) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(std::string(prefix) + std::to_string(i));
  return out;
}

std::vector<std::string> bit_string_labels(std::size_t k) {
  const std::size_t n = std::size_t{1} << k;
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::string s(k, '0');
    for (std::size_t j = 0; j < k; ++j) {
      if ((c >> (k - 1 - j)) & 1U) s[j] = '1';
    }
    out.push_back(std::move(s));
  }
  return out;
}

bool is_bit_string(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c != '0' && c != '1') return false;
  }
  return true;
}

}  // namespace hcivalue
