#pragma once

// Input action alphabets: every action a user can perform for a task that
// yields an input the computer understands, together with its probability.
// The entropy of that alphabet is the task's action capacity.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcivalue/distribution.hpp"

namespace hcivalue {

/// Largest alphabet (in bits of letter count) that is ever materialized letter by letter.
inline constexpr std::size_t kMaxEnumerationBits = 24;

enum class AlphabetKind { radio, checkbox, freehand, gesture, composite, custom };

std::string_view to_string(AlphabetKind kind);
std::optional<AlphabetKind> parse_alphabet_kind(std::string_view text);

class ActionAlphabet {
 public:
  /// Codewords, when given, must be distinct bit strings of one common length, one per letter.
  ActionAlphabet(ProbabilityDistribution distribution, AlphabetKind kind,
                 std::optional<std::vector<std::string>> codewords = std::nullopt);

  const ProbabilityDistribution& distribution() const noexcept { return distribution_; }
  AlphabetKind kind() const noexcept { return kind_; }
  const std::optional<std::vector<std::string>>& codewords() const noexcept { return codewords_; }
  std::size_t size() const noexcept { return distribution_.size(); }
  std::size_t codeword_bits() const noexcept;

  /// Action capacity: the entropy of the distribution.
  double capacity() const;

 private:
  ProbabilityDistribution distribution_;
  AlphabetKind kind_;
  std::optional<std::vector<std::string>> codewords_;
};

/// k radio buttons (or multiple-choice options). Option i carries the one-hot
/// k-bit codeword with its 1 in position k - i, i.e. option 1 is 0..01.
ActionAlphabet radio_alphabet(std::vector<Letter> options);

/// k check boxes: 2^k combinations labelled b1..bk, each box independently on
/// with probability per_box[j] (0.5 when omitted). Throws SizeError for
/// k > kMaxEnumerationBits; use checkbox_capacity for those.
ActionAlphabet checkbox_alphabet(std::size_t k, std::optional<std::vector<double>> per_box = std::nullopt);

/// Capacity of the checkbox alphabet without enumerating it: the sum of the
/// per-box binary entropies (k bits for the uniform case).
double checkbox_capacity(std::size_t k, std::optional<std::span<const double>> per_box = std::nullopt);

/// The 2^k-bit figure that is sometimes quoted for k uniform check boxes. It is
/// the letter count, not the entropy; reports print it next to the entropy
/// figure so the two can be reconciled.
double checkbox_letter_count_bits(std::size_t k);

struct FreehandCapacity {
  double per_point_bits = 0.0;     ///< log2(W * H)
  double fixed_length_bits = 0.0;  ///< paths of exactly max_points points: max_points * log2(W * H)
  double total_bits = 0.0;         ///< paths of 1..max_points points: log2 sum_k (W * H)^k
};

/// Capacity of a freehand path on a W x H canvas with up to `max_points`
/// sampled points, every path equally likely. Evaluated in log space via the
/// geometric-series closed form. Throws DomainError for a 1-pixel canvas or
/// max_points = 0.
FreehandCapacity freehand_capacity(std::uint64_t width, std::uint64_t height, std::uint64_t max_points);

/// n elementary gestures (capacity log2 n) or, when `composite`, every ordered
/// pair of elementary gestures (n * n letters, capacity 2 log2 n).
ActionAlphabet gesture_alphabet(std::size_t n_elementary, bool composite);

/// n equally likely letters "u1".."un" with no codewords.
ActionAlphabet uniform_alphabet(std::size_t n, std::string_view prefix = "u");

/// Cross product of independent sub-model alphabets. Letters are labelled by
/// their concatenated codewords, the first part being the most significant;
/// probabilities multiply. A single part is returned as is.
/// Throws ContractError if a part has no codewords and SizeError when the
/// product exceeds 2^kMaxEnumerationBits letters.
ActionAlphabet concat_submodels(std::span<const ActionAlphabet> parts);

enum class KnowledgeCategory { explicit_prompt, situational, soft_alphabet, soft_model };

std::string_view to_string(KnowledgeCategory category);
std::optional<KnowledgeCategory> parse_knowledge_category(std::string_view text);

struct KnowledgeEntry {
  std::string name;
  KnowledgeCategory category = KnowledgeCategory::soft_alphabet;
  double bits = 0.0;
};

/// Knowledge a user brings to a task before choosing an action.
class KnowledgeLedger {
 public:
  /// Throws ValidationError if any entry has negative or non-finite bits.
  explicit KnowledgeLedger(std::vector<KnowledgeEntry> entries, std::string name = {});

  const std::string& name() const noexcept { return name_; }
  const std::vector<KnowledgeEntry>& entries() const noexcept { return entries_; }

 private:
  std::string name_;
  std::vector<KnowledgeEntry> entries_;
};

double ledger_total(const KnowledgeLedger& ledger);

}  // namespace hcivalue
