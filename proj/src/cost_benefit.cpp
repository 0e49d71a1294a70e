#include "hcivalue/cost_benefit.hpp"

#include <cmath>
#include <set>

#include "hcivalue/error.hpp"
#include "hcivalue/info.hpp"

namespace hcivalue {

namespace {

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) throw DomainError(std::string(what) + " must be > 0");
}

double expected_steps(const CostModel& cost, const ProbabilityDistribution& d) {
  double steps = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) steps += d.probability(i) * cost.per_letter_steps.at(d.label(i));
  return steps;
}

void validate_mistake(const MistakeModel& m, const ProbabilityDistribution& d) {
  if (m.from_label == m.to_label) throw ValidationError("mistake: from and to must differ ('" + m.from_label + "')");
  if (!d.contains(m.from_label)) throw AlignmentError("mistake: unknown letter '" + m.from_label + "'");
  if (!d.contains(m.to_label)) throw AlignmentError("mistake: unknown letter '" + m.to_label + "'");
  if (!std::isfinite(m.mass) || m.mass < 0.0 || m.mass >= 1.0) throw DomainError("mistake: mass must lie in [0, 1)");
  if (!std::isfinite(m.extra_cost_seconds) || m.extra_cost_seconds < 0.0) {
    throw DomainError("mistake: extra cost must be >= 0 s");
  }
  const double available = d.probability(m.from_label);
  if (m.mass > available + kProbabilityTolerance) {
    throw DomainError("mistake: mass " + std::to_string(m.mass) + " exceeds p(" + m.from_label +
                      ") = " + std::to_string(available));
  }
}

ProbabilityDistribution shift_mass(const ProbabilityDistribution& d, std::size_t from, std::size_t to, double mass) {
  std::vector<double> shifted(d.probabilities().begin(), d.probabilities().end());
  shifted[to] += mass;
  shifted[from] = std::max(0.0, shifted[from] - mass);
  return d.with_probabilities(std::move(shifted));
}

}  // namespace

void validate_cost_model(const CostModel& cost, const ProbabilityDistribution& alphabet) {
  require_positive(cost.unit_step_seconds, "unit step time");
  if (!std::isfinite(cost.fixed_overhead_seconds) || cost.fixed_overhead_seconds < 0.0) {
    throw ValidationError("fixed overhead must be >= 0 s");
  }
  for (const auto& [label, steps] : cost.per_letter_steps) {
    if (!alphabet.contains(label)) throw AlignmentError("cost model names unknown letter '" + label + "'");
    if (steps < 1) throw ValidationError("cost model: letter '" + label + "' needs at least one step");
  }
  for (const auto& label : alphabet.labels()) {
    if (!cost.per_letter_steps.contains(label)) {
      throw AlignmentError("cost model has no step count for letter '" + label + "'");
    }
  }
}

double device_utilization(double action_capacity_bits, double task_seconds, double bandwidth_bits_per_s) {
  require_positive(task_seconds, "task time");
  require_positive(bandwidth_bits_per_s, "device bandwidth");
  return action_capacity_bits / (task_seconds * bandwidth_bits_per_s);
}

double alphabet_compression(const ProbabilityDistribution& input, const ProbabilityDistribution& output) {
  return entropy(input) - entropy(output);
}

ProbabilityDistribution apply_mistake_shift(const ProbabilityDistribution& d, const MistakeModel& mistake) {
  validate_mistake(mistake, d);
  return shift_mass(d, *d.find(mistake.from_label), *d.find(mistake.to_label), mistake.mass);
}

TaskEvaluation evaluate_task(const ActionAlphabet& alphabet, const CostModel& cost,
                             const std::optional<MistakeModel>& mistake, const InputDeviceSpec* device,
                             std::optional<double> task_seconds, EpsilonPolicy policy) {
  const auto& d = alphabet.distribution();
  validate_cost_model(cost, d);

  TaskEvaluation e;
  e.action_capacity = alphabet.capacity();
  e.alphabet_compression = e.action_capacity;
  e.expected_cost_seconds = cost.unit_step_seconds * expected_steps(cost, d) + cost.fixed_overhead_seconds;
  if (mistake) {
    const auto reconstructed = apply_mistake_shift(d, *mistake);
    e.potential_distortion = kl_divergence(reconstructed, d, policy);
    e.expected_cost_seconds += mistake->mass * mistake->extra_cost_seconds;
  }
  if (device && task_seconds) {
    e.du = device_utilization(e.action_capacity, *task_seconds, bandwidth(*device));
  }
  require_positive(e.expected_cost_seconds, "expected cost");
  e.cost_benefit = e.benefit() / e.expected_cost_seconds;
  return e;
}

double mistake_benefit(const ProbabilityDistribution& d, const std::string& from_label, const std::string& to_label,
                       double mass, EpsilonPolicy policy) {
  const auto from = d.find(from_label);
  const auto to = d.find(to_label);
  if (!from || !to) throw AlignmentError("unknown letter '" + (from ? to_label : from_label) + "'");
  if (!(mass >= 0.0) || mass > d.probability(*from) + kProbabilityTolerance) {
    throw DomainError("mistaken mass must lie in [0, p(" + from_label + ")]");
  }
  return entropy(d) - kl_divergence(shift_mass(d, *from, *to, mass), d, policy);
}

std::optional<double> negative_threshold(const ProbabilityDistribution& d, const std::string& from_label,
                                         const std::string& to_label, EpsilonPolicy policy) {
  if (!d.contains(from_label)) throw AlignmentError("unknown letter '" + from_label + "'");
  if (!d.contains(to_label)) throw AlignmentError("unknown letter '" + to_label + "'");
  if (from_label == to_label) return std::nullopt;
  const double available = d.probability(from_label);
  if (available <= 0.0) return std::nullopt;

  auto benefit = [&](double s) { return mistake_benefit(d, from_label, to_label, s, policy); };

  // Epsilon-adjustment makes the benefit jump where a cell empties, so the
  // first sign change is located on a coarse scan before bisecting.
  constexpr int kScanSteps = 1024;
  double lo = 0.0;
  std::optional<double> hi;
  for (int i = 1; i <= kScanSteps && !hi; ++i) {
    const double s = i == kScanSteps ? std::nextafter(available, 0.0) : available * i / kScanSteps;
    if (benefit(s) < 0.0) {
      hi = s;
    } else {
      lo = s;
    }
  }
  if (!hi && benefit(available) < 0.0) hi = available;
  if (!hi) return std::nullopt;

  while (*hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + *hi);
    if (benefit(mid) < 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

TaskEvaluation reassign_steps(const ActionAlphabet& alphabet, const CostModel& cost,
                              const std::map<std::string, std::string>& permutation) {
  const auto& d = alphabet.distribution();
  validate_cost_model(cost, d);

  std::set<std::string> targets;
  for (const auto& [from, to] : permutation) {
    if (!d.contains(from)) throw ValidationError("permutation names unknown letter '" + from + "'");
    if (!d.contains(to)) throw ValidationError("permutation names unknown letter '" + to + "'");
  }
  CostModel moved = cost;
  for (const auto& label : d.labels()) {
    auto it = permutation.find(label);
    const std::string& source = it == permutation.end() ? label : it->second;
    if (!targets.insert(source).second) {
      throw ValidationError("permutation is not a bijection: '" + source + "' is used twice");
    }
    moved.per_letter_steps[label] = cost.per_letter_steps.at(source);
  }
  return evaluate_task(alphabet, moved);
}

CheckboxDuFigures checkbox_du_figures(std::size_t k, double task_seconds, double bandwidth_bits_per_s) {
  CheckboxDuFigures f;
  f.entropy_bits = checkbox_capacity(k);
  f.letter_count_bits = checkbox_letter_count_bits(k);
  f.du_entropy = device_utilization(f.entropy_bits, task_seconds, bandwidth_bits_per_s);
  f.du_letter_count = device_utilization(f.letter_count_bits, task_seconds, bandwidth_bits_per_s);
  return f;
}

KnowledgeRate estimate_f1_f2_rate(const KnowledgeLedger& ledger, const ActionAlphabet& f2, double task_seconds) {
  require_positive(task_seconds, "task time");
  KnowledgeRate r;
  r.ledger_bits = ledger_total(ledger);
  r.f2_bits = f2.capacity();
  if (ledger.entries().empty()) {
    r.total_benefit = r.f2_bits;
  } else {
    r.f1_compression = r.ledger_bits - r.f2_bits;
    r.f1_negative = r.f1_compression < 0.0;
    // F1 + F2 = (ledger - H(f2)) + H(f2).
    r.total_benefit = r.ledger_bits;
  }
  r.bits_per_second = r.total_benefit / task_seconds;
  return r;
}

}  // namespace hcivalue
