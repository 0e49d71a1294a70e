#pragma once

// Turns controlled-study trials (accuracy and response time) into benefit and
// cost. Each answer is a k-bit codeword built by concatenating the bit slices
// of the sub-models under investigation. Four distributions over the 2^k
// answers are involved:
//   a1  ground truth, epsilon-softened one-hot
//   a2  the question as posed, uniform
//   a3  one participant's decision, epsilon-softened one-hot
//   a4  the frequencies of all collected responses
// benefit = H(a2) - H(a3) - KL(a4 || a1)   (H(a4) replaces H(a3) in aggregate mode)
// cost    = mean response time

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcivalue/distribution.hpp"

namespace hcivalue {

struct SubModelSpec {
  std::string name;
  std::size_t bits = 1;
};

enum class AggregationMode {
  /// Responses stand for one consistent decision process (an individual or an organized team).
  consistent_individual,
  /// A randomly chosen team member decides each time, or one inconsistent participant is measured repeatedly.
  random_team_or_single_participant,
};

std::string_view to_string(AggregationMode mode);
std::optional<AggregationMode> parse_aggregation_mode(std::string_view text);

class StudyDesign {
 public:
  /// Throws ValidationError unless the ground truth is a bit string of
  /// sum(bits) characters, every sub-model has bits >= 1 and a unique name,
  /// and the total stays within kMaxEnumerationBits.
  StudyDesign(std::vector<SubModelSpec> submodels, std::string ground_truth, EpsilonPolicy epsilon = {},
              AggregationMode mode = AggregationMode::consistent_individual,
              std::optional<std::uint64_t> stimulus_space_size = std::nullopt, std::string name = {});

  const std::string& name() const noexcept { return name_; }
  const std::vector<SubModelSpec>& submodels() const noexcept { return submodels_; }
  const std::string& ground_truth() const noexcept { return ground_truth_; }
  EpsilonPolicy epsilon() const noexcept { return epsilon_; }
  AggregationMode aggregation_mode() const noexcept { return mode_; }
  std::optional<std::uint64_t> stimulus_space_size() const noexcept { return stimulus_space_size_; }
  std::size_t total_bits() const noexcept { return total_bits_; }

  StudyDesign with_epsilon(EpsilonPolicy epsilon) const;
  StudyDesign with_mode(AggregationMode mode) const;

 private:
  std::string name_;
  std::vector<SubModelSpec> submodels_;
  std::string ground_truth_;
  EpsilonPolicy epsilon_;
  AggregationMode mode_;
  std::optional<std::uint64_t> stimulus_space_size_;
  std::size_t total_bits_ = 0;
};

struct TrialRecord {
  std::string participant_id;
  std::string trial_id;
  std::string ground_truth;
  std::string response;
  double response_time_ms = 0.0;
};

struct StageAlphabets {
  ProbabilityDistribution a1;
  ProbabilityDistribution a2;
  ProbabilityDistribution a3;
  ProbabilityDistribution a4;
};

/// Builds the four stage distributions for one ground truth. `responses` maps
/// answers to counts or frequencies (normalized here); a4 keeps zero cells at
/// zero, epsilon is applied to it only inside KL. Throws FormatError for bad bit strings.
StageAlphabets build_stage_alphabets(const StudyDesign& design, std::string_view decision,
                                     const std::map<std::string, double>& responses);
StageAlphabets build_stage_alphabets(const StudyDesign& design, std::string_view ground_truth,
                                     std::string_view decision, const std::map<std::string, double>& responses);

struct StudyResult {
  double alphabet_compression = 0.0;   ///< bits
  double potential_distortion = 0.0;   ///< bits
  double benefit = 0.0;                ///< bits
  double mean_response_time_s = 0.0;   ///< s
  double median_response_time_s = 0.0; ///< s, reported only
  double cost_benefit = 0.0;           ///< bits/s
  std::map<std::string, double> per_submodel_accuracy;
  double question_entropy = 0.0;       ///< H(a2), bits
  double decision_entropy = 0.0;       ///< H(a3), bits
  double response_entropy = 0.0;       ///< H(a4), bits (size-weighted across ground-truth groups)
  std::size_t records = 0;
  std::size_t groups = 0;
  std::optional<double> stimulus_entropy_bound;  ///< log2 N when the stimulus space size is declared
};

/// Records are grouped by ground truth; AC and PD are computed per group and
/// averaged with the group sizes as weights. The result does not depend on
/// record order. Throws DomainError for an empty record set and
/// ValidationError for records that do not match the design.
StudyResult study_cost_benefit(const StudyDesign& design, std::span<const TrialRecord> records);

/// For each sub-model, the fraction of records whose response slice equals the ground-truth slice.
std::map<std::string, double> per_submodel_accuracy(const StudyDesign& design, std::span<const TrialRecord> records);

/// The exact trial CSV header.
inline constexpr std::string_view kTrialCsvHeader = "participant,trial,ground_truth,response,response_time_ms";

/// Parses trial CSV (LF or CRLF). When `expected_bits` is set, bit strings
/// must have that length. All bad rows are collected into one IngestError
/// that names their line numbers; a file without data rows is a DomainError.
std::vector<TrialRecord> ingest_trials(std::string_view csv, std::optional<std::size_t> expected_bits = std::nullopt);

}  // namespace hcivalue
