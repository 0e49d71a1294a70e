#pragma once

// Benefit / cost of an interaction: (alphabet compression - potential
// distortion) / cost, with cost measured in seconds.

#include <map>
#include <optional>
#include <string>

#include "hcivalue/action.hpp"
#include "hcivalue/device.hpp"
#include "hcivalue/distribution.hpp"

namespace hcivalue {

/// Cost of selecting each letter: a count of elementary steps, each taking `unit_step_seconds`.
struct CostModel {
  std::map<std::string, unsigned> per_letter_steps;
  double unit_step_seconds = 1.0;
  double fixed_overhead_seconds = 0.0;
};

/// Checks `cost` against an alphabet: every letter needs a step count >= 1 and
/// no unknown labels may appear. Throws AlignmentError / ValidationError.
void validate_cost_model(const CostModel& cost, const ProbabilityDistribution& alphabet);

/// Users who meant `from_label` pick `to_label` instead in a fraction `mass` of
/// all cases (absolute probability mass), paying `extra_cost_seconds` to recover.
struct MistakeModel {
  std::string from_label;
  std::string to_label;
  double mass = 0.0;
  double extra_cost_seconds = 0.0;
};

struct TaskEvaluation {
  double action_capacity = 0.0;        ///< bits
  double alphabet_compression = 0.0;   ///< bits
  double potential_distortion = 0.0;   ///< bits
  double expected_cost_seconds = 0.0;  ///< s
  std::optional<double> du;            ///< device utilization, when a device and task time are known
  double cost_benefit = 0.0;           ///< bits/s

  double benefit() const { return alphabet_compression - potential_distortion; }
};

/// action_capacity / (task_seconds * bandwidth). Throws DomainError for non-positive time or bandwidth.
double device_utilization(double action_capacity_bits, double task_seconds, double bandwidth_bits_per_s);

/// H(input) - H(output).
double alphabet_compression(const ProbabilityDistribution& input, const ProbabilityDistribution& output);

/// Moves `mass` from `from_label` to `to_label`. Throws DomainError when the
/// mass is negative or exceeds p(from), AlignmentError for unknown labels.
ProbabilityDistribution apply_mistake_shift(const ProbabilityDistribution& d, const MistakeModel& mistake);

/// Full evaluation of a completed single-answer task. The output alphabet has
/// one letter, so alphabet compression equals the action capacity. With a
/// mistake model, potential distortion is KL(shifted || original) and the
/// recovery cost is added in proportion to the mistaken mass.
TaskEvaluation evaluate_task(const ActionAlphabet& alphabet, const CostModel& cost,
                             const std::optional<MistakeModel>& mistake = std::nullopt,
                             const InputDeviceSpec* device = nullptr, std::optional<double> task_seconds = std::nullopt,
                             EpsilonPolicy policy = {});

/// H(d) - KL(shift(d, mass) || d) for a from -> to mistake of the given mass.
double mistake_benefit(const ProbabilityDistribution& d, const std::string& from_label, const std::string& to_label,
                       double mass, EpsilonPolicy policy = {});

/// Smallest mistaken mass in [0, p(from)] that makes mistake_benefit negative,
/// found by bisection to 1e-6. nullopt when no such mass exists.
std::optional<double> negative_threshold(const ProbabilityDistribution& d, const std::string& from_label,
                                         const std::string& to_label, EpsilonPolicy policy = {});

/// Re-evaluates a task after moving letters to different positions: letter l
/// takes over the step count previously assigned to permutation[l]. Labels
/// absent from the map keep their own position. Probabilities are unchanged.
/// Throws ValidationError when the map is not a bijection on the alphabet.
TaskEvaluation reassign_steps(const ActionAlphabet& alphabet, const CostModel& cost,
                              const std::map<std::string, std::string>& permutation);

/// DU of k uniform check boxes computed two ways: from the alphabet entropy (k
/// bits) and from the 2^k letter-count figure.
struct CheckboxDuFigures {
  double entropy_bits = 0.0;
  double letter_count_bits = 0.0;
  double du_entropy = 0.0;
  double du_letter_count = 0.0;
};

CheckboxDuFigures checkbox_du_figures(std::size_t k, double task_seconds, double bandwidth_bits_per_s);

/// Knowledge rate of a task seen as two transformations: F1 turns the context
/// the user takes in (the ledger) into a choice, F2 turns the choice into input.
struct KnowledgeRate {
  double ledger_bits = 0.0;
  double f2_bits = 0.0;
  double f1_compression = 0.0;  ///< ledger_bits - f2_bits; reported as-is when negative
  double total_benefit = 0.0;   ///< f1 + f2
  double bits_per_second = 0.0;
  bool f1_negative = false;     ///< the ledger declares less than the action alphabet carries
};

/// With an empty ledger F1 is not modeled and only F2 contributes.
/// Throws DomainError for non-positive task time.
KnowledgeRate estimate_f1_f2_rate(const KnowledgeLedger& ledger, const ActionAlphabet& f2, double task_seconds);

}  // namespace hcivalue
