#include "hcivalue/action.hpp"

#include <cmath>
#include <unordered_set>

#include "hcivalue/error.hpp"
#include "hcivalue/info.hpp"
#include "hcivalue/kernels.hpp"

namespace hcivalue {

namespace {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::vector<double> box_probabilities(std::size_t k, const std::optional<std::span<const double>>& per_box) {
  if (!per_box) return std::vector<double>(k, 0.5);
  if (per_box->size() != k) {
    throw ValidationError("checkbox: expected " + std::to_string(k) + " per-box probabilities, got " +
                          std::to_string(per_box->size()));
  }
  for (double p : *per_box) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw ValidationError("checkbox: per-box probabilities must lie in [0, 1]");
    }
  }
  return {per_box->begin(), per_box->end()};
}

}  // namespace

std::string_view to_string(AlphabetKind kind) {
  switch (kind) {
    case AlphabetKind::radio: return "radio";
    case AlphabetKind::checkbox: return "checkbox";
    case AlphabetKind::freehand: return "freehand";
    case AlphabetKind::gesture: return "gesture";
    case AlphabetKind::composite: return "composite";
    case AlphabetKind::custom: return "custom";
  }
  return "custom";
}

std::optional<AlphabetKind> parse_alphabet_kind(std::string_view text) {
  for (auto k : {AlphabetKind::radio, AlphabetKind::checkbox, AlphabetKind::freehand, AlphabetKind::gesture,
                 AlphabetKind::composite, AlphabetKind::custom}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

ActionAlphabet::ActionAlphabet(ProbabilityDistribution distribution, AlphabetKind kind,
                               std::optional<std::vector<std::string>> codewords)
    : distribution_(std::move(distribution)), kind_(kind), codewords_(std::move(codewords)) {
  if (!codewords_) return;
  const auto& cw = *codewords_;
  if (cw.size() != distribution_.size()) {
    throw ValidationError("alphabet has " + std::to_string(distribution_.size()) + " letters but " +
                          std::to_string(cw.size()) + " codewords");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& w : cw) {
    if (!is_bit_string(w)) throw ValidationError("codeword '" + w + "' is not a bit string");
    if (w.size() != cw.front().size()) throw ValidationError("codewords must all have the same length");
    if (!seen.insert(w).second) throw ValidationError("duplicate codeword '" + w + "'");
  }
}

std::size_t ActionAlphabet::codeword_bits() const noexcept {
  return codewords_ && !codewords_->empty() ? codewords_->front().size() : 0;
}

double ActionAlphabet::capacity() const { return entropy(distribution_); }

ActionAlphabet radio_alphabet(std::vector<Letter> options) {
  const std::size_t k = options.size();
  ProbabilityDistribution d(std::move(options));
  std::vector<std::string> codewords;
  codewords.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::string w(k, '0');
    w[k - 1 - i] = '1';
    codewords.push_back(std::move(w));
  }
  return {std::move(d), AlphabetKind::radio, std::move(codewords)};
}

ActionAlphabet checkbox_alphabet(std::size_t k, std::optional<std::vector<double>> per_box) {
  if (k < 1) throw DomainError("checkbox: needs at least one box");
  if (k > kMaxEnumerationBits) {
    throw SizeError("checkbox: 2^" + std::to_string(k) + " combinations are too many to enumerate (limit 2^" +
                    std::to_string(kMaxEnumerationBits) + "); capacity is " +
                    std::to_string(checkbox_capacity(k, per_box ? std::optional<std::span<const double>>(*per_box)
                                                                : std::nullopt)) +
                    " bits");
  }
  const auto on = box_probabilities(k, per_box ? std::optional<std::span<const double>>(*per_box) : std::nullopt);
  std::vector<double> probs(std::size_t{1} << k);
  kernels::bernoulli_product(on, probs);
  auto labels = bit_string_labels(k);
  auto codewords = labels;
  return {ProbabilityDistribution(std::move(labels), std::move(probs)), AlphabetKind::checkbox, std::move(codewords)};
}

double checkbox_capacity(std::size_t k, std::optional<std::span<const double>> per_box) {
  if (k < 1) throw DomainError("checkbox: needs at least one box");
  double bits = 0.0;
  for (double p : box_probabilities(k, per_box)) bits += binary_entropy(p);
  return bits;
}

double checkbox_letter_count_bits(std::size_t k) { return std::ldexp(1.0, static_cast<int>(k)); }

FreehandCapacity freehand_capacity(std::uint64_t width, std::uint64_t height, std::uint64_t max_points) {
  if (width < 1 || height < 1) throw DomainError("freehand: canvas dimensions must be >= 1");
  if (width == 1 && height == 1) throw DomainError("freehand: a 1x1 canvas admits a single path");
  if (max_points < 1) throw DomainError("freehand: max_points must be >= 1");

  // A = W * H; sum_{k=1..m} A^k = A (A^m - 1) / (A - 1), so
  // log2 of it = m log2 A + [ln(1 - A^-m) - ln(1 - 1/A)] / ln 2.
  const double log_a = std::log2(static_cast<double>(width)) + std::log2(static_cast<double>(height));
  const double m = static_cast<double>(max_points);
  const double inv_a = std::exp2(-log_a);
  const double inv_a_m = std::exp2(-m * log_a);

  FreehandCapacity c;
  c.per_point_bits = log_a;
  c.fixed_length_bits = m * log_a;
  c.total_bits = m * log_a + (std::log1p(-inv_a_m) - std::log1p(-inv_a)) / std::log(2.0);
  return c;
}

ActionAlphabet gesture_alphabet(std::size_t n_elementary, bool composite) {
  if (n_elementary < 2) throw DomainError("gesture: needs at least 2 elementary gestures");
  if (!composite) {
    return {ProbabilityDistribution::uniform(indexed_labels(n_elementary, "g")), AlphabetKind::gesture};
  }
  if (2 * std::log2(static_cast<double>(n_elementary)) > static_cast<double>(kMaxEnumerationBits)) {
    throw SizeError("gesture: " + std::to_string(n_elementary) + "^2 composite gestures are too many to enumerate");
  }
  const auto base = indexed_labels(n_elementary, "g");
  std::vector<std::string> labels;
  labels.reserve(n_elementary * n_elementary);
  for (const auto& first : base) {
    for (const auto& second : base) labels.push_back(first + "+" + second);
  }
  return {ProbabilityDistribution::uniform(std::move(labels)), AlphabetKind::gesture};
}

ActionAlphabet uniform_alphabet(std::size_t n, std::string_view prefix) {
  if (n < 1) throw DomainError("uniform alphabet needs at least one letter");
  return {ProbabilityDistribution::uniform(indexed_labels(n, prefix)), AlphabetKind::custom};
}

ActionAlphabet concat_submodels(std::span<const ActionAlphabet> parts) {
  if (parts.empty()) throw ContractError("concat_submodels: no parts given");
  double log_size = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!parts[i].codewords()) {
      throw ContractError("concat_submodels: part " + std::to_string(i + 1) + " has no codewords");
    }
    log_size += std::log2(static_cast<double>(parts[i].size()));
  }
  if (parts.size() == 1) return parts.front();
  if (log_size > static_cast<double>(kMaxEnumerationBits) + 1e-9) {
    throw SizeError("concat_submodels: product alphabet exceeds 2^" + std::to_string(kMaxEnumerationBits) +
                    " letters");
  }

  std::vector<double> probs(parts.front().distribution().probabilities().begin(),
                            parts.front().distribution().probabilities().end());
  std::vector<std::string> words = *parts.front().codewords();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& next_probs = parts[i].distribution().probabilities();
    const auto& next_words = *parts[i].codewords();
    std::vector<double> product(probs.size() * next_probs.size());
    kernels::outer_product(probs, next_probs, product);
    std::vector<std::string> joined;
    joined.reserve(product.size());
    for (const auto& w : words) {
      for (const auto& v : next_words) joined.push_back(w + v);
    }
    probs = std::move(product);
    words = std::move(joined);
  }
  auto labels = words;
  return {ProbabilityDistribution(std::move(labels), std::move(probs)), AlphabetKind::composite, std::move(words)};
}

std::string_view to_string(KnowledgeCategory category) {
  switch (category) {
    case KnowledgeCategory::explicit_prompt: return "explicit_prompt";
    case KnowledgeCategory::situational: return "situational";
    case KnowledgeCategory::soft_alphabet: return "soft_alphabet";
    case KnowledgeCategory::soft_model: return "soft_model";
  }
  return "soft_alphabet";
}

std::optional<KnowledgeCategory> parse_knowledge_category(std::string_view text) {
  for (auto c : {KnowledgeCategory::explicit_prompt, KnowledgeCategory::situational, KnowledgeCategory::soft_alphabet,
                 KnowledgeCategory::soft_model}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

KnowledgeLedger::KnowledgeLedger(std::vector<KnowledgeEntry> entries, std::string name)
    : name_(std::move(name)), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (!std::isfinite(e.bits) || e.bits < 0.0) {
      throw ValidationError("ledger entry '" + e.name + "' must carry >= 0 bits");
    }
  }
}

double ledger_total(const KnowledgeLedger& ledger) {
  double bits = 0.0;
  for (const auto& e : ledger.entries()) bits += e.bits;
  return bits;
}

}  // namespace hcivalue
