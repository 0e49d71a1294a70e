#include "hcivalue/study.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "hcivalue/action.hpp"
#include "hcivalue/error.hpp"
#include "hcivalue/info.hpp"

namespace hcivalue {

std::string_view to_string(AggregationMode mode) {
  switch (mode) {
    case AggregationMode::consistent_individual: return "consistent_individual";
    case AggregationMode::random_team_or_single_participant: return "random_team_or_single_participant";
  }
  return "consistent_individual";
}

std::optional<AggregationMode> parse_aggregation_mode(std::string_view text) {
  if (text == "consistent_individual" || text == "consistent") return AggregationMode::consistent_individual;
  if (text == "random_team_or_single_participant" || text == "aggregate") {
    return AggregationMode::random_team_or_single_participant;
  }
  return std::nullopt;
}

StudyDesign::StudyDesign(std::vector<SubModelSpec> submodels, std::string ground_truth, EpsilonPolicy epsilon,
                         AggregationMode mode, std::optional<std::uint64_t> stimulus_space_size, std::string name)
    : name_(std::move(name)),
      submodels_(std::move(submodels)),
      ground_truth_(std::move(ground_truth)),
      epsilon_(epsilon),
      mode_(mode),
      stimulus_space_size_(stimulus_space_size) {
  if (submodels_.empty()) throw ValidationError("study design needs at least one sub-model");
  std::set<std::string> names;
  for (const auto& s : submodels_) {
    if (s.name.empty()) throw ValidationError("sub-model with an empty name");
    if (!names.insert(s.name).second) throw ValidationError("duplicate sub-model '" + s.name + "'");
    if (s.bits < 1) throw ValidationError("sub-model '" + s.name + "' needs at least 1 bit");
    total_bits_ += s.bits;
  }
  if (total_bits_ > kMaxEnumerationBits) {
    throw ValidationError("study design uses " + std::to_string(total_bits_) + " bits; at most " +
                          std::to_string(kMaxEnumerationBits) + " are supported");
  }
  if (!is_bit_string(ground_truth_) || ground_truth_.size() != total_bits_) {
    throw ValidationError("ground truth '" + ground_truth_ + "' must be a bit string of length " +
                          std::to_string(total_bits_));
  }
  if (stimulus_space_size_ && *stimulus_space_size_ < 1) {
    throw ValidationError("stimulus space size must be >= 1");
  }
}

StudyDesign StudyDesign::with_epsilon(EpsilonPolicy epsilon) const {
  StudyDesign copy = *this;
  copy.epsilon_ = epsilon;
  return copy;
}

StudyDesign StudyDesign::with_mode(AggregationMode mode) const {
  StudyDesign copy = *this;
  copy.mode_ = mode;
  return copy;
}

namespace {

std::size_t codeword_index(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) index = (index << 1) | static_cast<std::size_t>(c == '1');
  return index;
}

void require_codeword(std::string_view bits, std::size_t k, std::string_view what) {
  if (!is_bit_string(bits) || bits.size() != k) {
    throw FormatError(std::string(what) + " '" + std::string(bits) + "' is not a " + std::to_string(k) +
                      "-bit string");
  }
}

void require_record(const TrialRecord& r, std::size_t k, std::size_t position) {
  const std::string where = "record " + std::to_string(position + 1);
  if (!is_bit_string(r.ground_truth) || r.ground_truth.size() != k) {
    throw ValidationError(where + ": ground truth '" + r.ground_truth + "' is not a " + std::to_string(k) +
                          "-bit string");
  }
  if (!is_bit_string(r.response) || r.response.size() != k) {
    throw ValidationError(where + ": response '" + r.response + "' is not a " + std::to_string(k) + "-bit string");
  }
  if (!std::isfinite(r.response_time_ms) || r.response_time_ms <= 0.0) {
    throw ValidationError(where + ": response time must be > 0 ms");
  }
}

StageAlphabets build_stages(const ProbabilityDistribution& question, const StudyDesign& design,
                            std::string_view ground_truth, std::string_view decision,
                            const std::map<std::string, double>& responses) {
  const std::size_t k = design.total_bits();
  require_codeword(ground_truth, k, "ground truth");
  require_codeword(decision, k, "decision");

  std::vector<double> freq(question.size(), 0.0);
  double total = 0.0;
  for (const auto& [answer, weight] : responses) {
    require_codeword(answer, k, "response");
    if (!std::isfinite(weight) || weight < 0.0) throw ValidationError("response weights must be >= 0");
    freq[codeword_index(answer)] += weight;
    total += weight;
  }
  if (total <= 0.0) throw DomainError("no responses to aggregate");
  for (double& f : freq) f /= total;

  auto softened_one_hot = [&](std::string_view letter) {
    std::vector<double> p(question.size(), 0.0);
    p[codeword_index(letter)] = 1.0;
    return epsilon_adjust(question.with_probabilities(std::move(p)), design.epsilon());
  };
  return {softened_one_hot(ground_truth), question, softened_one_hot(decision),
          question.with_probabilities(std::move(freq))};
}

}  // namespace

StageAlphabets build_stage_alphabets(const StudyDesign& design, std::string_view ground_truth,
                                     std::string_view decision, const std::map<std::string, double>& responses) {
  const auto question = ProbabilityDistribution::uniform(bit_string_labels(design.total_bits()));
  return build_stages(question, design, ground_truth, decision, responses);
}

StageAlphabets build_stage_alphabets(const StudyDesign& design, std::string_view decision,
                                     const std::map<std::string, double>& responses) {
  return build_stage_alphabets(design, design.ground_truth(), decision, responses);
}

StudyResult study_cost_benefit(const StudyDesign& design, std::span<const TrialRecord> records) {
  if (records.empty()) throw DomainError("no records");
  const std::size_t k = design.total_bits();
  for (std::size_t i = 0; i < records.size(); ++i) require_record(records[i], k, i);

  std::map<std::string, std::map<std::string, double>> groups;
  for (const auto& r : records) groups[r.ground_truth][r.response] += 1.0;

  const auto question = ProbabilityDistribution::uniform(bit_string_labels(k));
  const double n = static_cast<double>(records.size());

  StudyResult result;
  result.records = records.size();
  result.groups = groups.size();
  result.question_entropy = entropy(question);
  // H(a3) depends only on epsilon and the letter count; summing in sorted order
  // keeps it bit-identical whichever letter is the decision.
  const auto a3 = epsilon_adjust(ProbabilityDistribution::one_hot(bit_string_labels(k), 0), design.epsilon());
  std::vector<double> sorted(a3.probabilities().begin(), a3.probabilities().end());
  std::sort(sorted.begin(), sorted.end());
  result.decision_entropy = entropy(sorted);
  double response_compression = 0.0;
  for (const auto& [truth, counts] : groups) {
    double size = 0.0;
    for (const auto& entry : counts) size += entry.second;
    const auto stages = build_stages(question, design, truth, truth, counts);
    const double weight = size / n;
    const double h4 = entropy(stages.a4);
    result.response_entropy += weight * h4;
    response_compression += weight * (result.question_entropy - h4);
    result.potential_distortion += weight * kl_divergence(stages.a4, stages.a1, design.epsilon());
  }
  result.alphabet_compression = design.aggregation_mode() == AggregationMode::consistent_individual
                                    ? result.question_entropy - result.decision_entropy
                                    : response_compression;
  result.benefit = result.alphabet_compression - result.potential_distortion;

  std::vector<double> seconds;
  seconds.reserve(records.size());
  for (const auto& r : records) seconds.push_back(r.response_time_ms / 1000.0);
  std::sort(seconds.begin(), seconds.end());
  double total = 0.0;
  for (double s : seconds) total += s;
  result.mean_response_time_s = total / n;
  const std::size_t mid = seconds.size() / 2;
  result.median_response_time_s = seconds.size() % 2 ? seconds[mid] : 0.5 * (seconds[mid - 1] + seconds[mid]);
  result.cost_benefit = result.benefit / result.mean_response_time_s;

  result.per_submodel_accuracy = per_submodel_accuracy(design, records);
  if (design.stimulus_space_size()) {
    result.stimulus_entropy_bound = max_entropy(*design.stimulus_space_size());
  }
  return result;
}

std::map<std::string, double> per_submodel_accuracy(const StudyDesign& design, std::span<const TrialRecord> records) {
  if (records.empty()) throw DomainError("no records");
  const std::size_t k = design.total_bits();
  for (std::size_t i = 0; i < records.size(); ++i) require_record(records[i], k, i);

  std::map<std::string, double> accuracy;
  std::size_t offset = 0;
  for (const auto& s : design.submodels()) {
    std::size_t correct = 0;
    for (const auto& r : records) {
      if (r.response.compare(offset, s.bits, r.ground_truth, offset, s.bits) == 0) ++correct;
    }
    accuracy[s.name] = static_cast<double>(correct) / static_cast<double>(records.size());
    offset += s.bits;
  }
  return accuracy;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<TrialRecord> ingest_trials(std::string_view csv, std::optional<std::size_t> expected_bits) {
  if (csv.starts_with("\xEF\xBB\xBF")) csv.remove_prefix(3);

  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < csv.size();) {
    const auto pos = csv.find('\n', start);
    const auto end = pos == std::string_view::npos ? csv.size() : pos;
    lines.push_back(csv.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw DomainError("no records");

  const auto header = split(trim(lines.front()), ',');
  const auto expected = split(kTrialCsvHeader, ',');
  if (header != expected) {
    std::string missing;
    for (auto col : expected) {
      if (std::find(header.begin(), header.end(), col) == header.end()) {
        missing += (missing.empty() ? "" : ", ") + std::string(col);
      }
    }
    throw FormatError("line 1: header must be '" + std::string(kTrialCsvHeader) + "'" +
                      (missing.empty() ? std::string(" (columns out of order)") : " (missing: " + missing + ")"));
  }

  std::vector<TrialRecord> records;
  std::vector<IngestError::RowError> errors;
  std::optional<std::size_t> width = expected_bits;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != expected.size()) {
      errors.push_back({line_no, "expected 5 fields, found " + std::to_string(fields.size())});
      continue;
    }
    std::vector<std::string> problems;
    if (fields[0].empty()) problems.emplace_back("participant is empty");
    if (fields[1].empty()) problems.emplace_back("trial is empty");
    for (std::size_t f : {std::size_t{2}, std::size_t{3}}) {
      const auto bits = fields[f];
      if (!is_bit_string(bits)) {
        problems.push_back(std::string(expected[f]) + " '" + std::string(bits) + "' is not a bit string");
      } else if (width && bits.size() != *width) {
        problems.push_back(std::string(expected[f]) + " '" + std::string(bits) + "' has " +
                           std::to_string(bits.size()) + " bits, expected " + std::to_string(*width));
      } else if (!width) {
        width = bits.size();
      }
    }
    double ms = 0.0;
    const auto tf = fields[4];
    const auto [ptr, ec] = std::from_chars(tf.data(), tf.data() + tf.size(), ms);
    if (ec != std::errc() || ptr != tf.data() + tf.size() || !std::isfinite(ms)) {
      problems.push_back("response_time_ms '" + std::string(tf) + "' is not a number");
    } else if (ms <= 0.0) {
      problems.push_back("response_time_ms must be > 0");
    }
    if (!problems.empty()) {
      std::string msg;
      for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
      errors.push_back({line_no, std::move(msg)});
      continue;
    }
    records.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
                       std::string(fields[3]), ms});
  }
  if (!errors.empty()) throw IngestError(std::move(errors));
  if (records.empty()) throw DomainError("no records");
  return records;
}

}  // namespace hcivalue
