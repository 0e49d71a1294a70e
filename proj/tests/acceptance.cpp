// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hcivalue/action.hpp"
#include "hcivalue/cli.hpp"
#include "hcivalue/cost_benefit.hpp"
#include "hcivalue/device.hpp"
#include "hcivalue/info.hpp"
#include "hcivalue/report.hpp"
#include "hcivalue/scenario.hpp"
#include "hcivalue/study.hpp"
#include "oracles.hpp"

using namespace hcivalue;

namespace {

constexpr double kExact = 1e-12;

class Check {
 public:
  void that(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void near(double actual, double expected, double tol, const std::string& what) {
    std::ostringstream os;
    os << what << ": got " << actual << ", want " << expected << " +/- " << tol;
    that(std::abs(actual - expected) <= tol, os.str());
  }
  void within(double actual, double lo, double hi, const std::string& what, bool open = false) {
    std::ostringstream os;
    os << what << ": got " << actual << ", want " << (open ? "(" : "[") << lo << ", " << hi << (open ? ")" : "]");
    that(open ? (actual > lo && actual < hi) : (actual >= lo && actual <= hi), os.str());
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

std::string fixture(const std::string& name) { return std::string(HCIVALUE_FIXTURE_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ScenarioFile load(const std::string& name) { return parse_scenario(slurp(fixture(name))); }

ActionAlphabet task_alphabet(const ScenarioFile& s, const std::string& task) { return *s.find_task(task)->alphabet.enumerated; }

double row(const Report& r, const std::string& section_prefix, const std::string& label) {
  for (const auto& s : r.sections) {
    if (s.title.rfind(section_prefix, 0) != 0) continue;
    for (const auto& row : s.rows) {
      if (row.label == label) return std::get<double>(row.value);
    }
  }
  throw std::runtime_error("report has no row '" + label + "' under '" + section_prefix + "'");
}

Report json_command(std::vector<std::string> args, Check& c) {
  args.insert(args.end(), {"--format", "json"});
  const auto o = run_command(args);
  c.that(o.exit_code == kExitOk, args[0] + " " + args[1] + " exited with " + std::to_string(o.exit_code) + ": " +
                                     o.diagnostics);
  c.that(o.report.has_value(), "no report");
  c.that(render(parse_json_report(o.output), ReportFormat::json) == o.output,
         args[0] + " " + args[1] + ": JSON report does not round-trip");
  return o.report.value_or(Report{});
}

void device_capacity(Check& c) {
  const auto s = load("devices.json");
  const auto& mouse = *s.find_device("mouse");
  c.near(instantaneous_capacity(mouse), 22.984, 0.001, "mouse capacity");
  c.near(bandwidth(mouse), 2298.4, 0.1, "mouse bandwidth");
  c.near(bandwidth(*s.find_device("glove")), 10888.6, 0.5, "glove bandwidth");
}

void action_capacity(Check& c) {
  const auto s = load("tv_menu.json");
  c.near(task_alphabet(s, "tv_a").capacity(), 1.58, 0.01, "thirds");
  c.near(task_alphabet(s, "tv_b").capacity(), 1.16, 0.01, "(0.2, 0.7, 0.1)");
  c.near(task_alphabet(s, "tv_c").capacity(), 0.52, 0.01, "(0.09, 0.9, 0.01)");
}

void device_utilization_examples(Check& c) {
  const auto s = load("devices.json");
  const auto du = [&](const std::string& task, double bits) {
    const auto& t = *s.find_task(task);
    return device_utilization(bits, *t.task_seconds, bandwidth(*s.find_device(*t.device)));
  };
  c.near(100 * du("radio_4", task_alphabet(s, "radio_4").capacity()), 0.0625, kExact, "radio DU %");
  c.near(100 * du("freehand_100", s.find_task("freehand_100")->alphabet.capacity_bits), 87.5, kExact,
         "freehand DU %");
  c.near(100 * du("gesture_16", task_alphabet(s, "gesture_16").capacity()), 0.0184, 0.001, "gesture DU %");
  c.near(100 * du("checkbox_4", task_alphabet(s, "checkbox_4").capacity()), 0.0625, kExact, "checkbox DU %");

  const auto o = run_command({"task", "eval", fixture("devices.json"), "--task", "checkbox_4"});
  c.that(o.exit_code == kExitOk, "checkbox report failed");
  c.that(o.output.find("erratum") != std::string::npos, "checkbox report lacks the erratum note");
  c.that(o.output.find("0.250 %") != std::string::npos, "checkbox report lacks the 0.25% figure");
  c.that(o.output.find("0.0625 %") != std::string::npos, "checkbox report lacks the 0.0625% figure");
}

void freehand(Check& c) {
  c.near(freehand_capacity(512, 512, 1).total_bits, 18.0, kExact, "m = 1");
  c.within(freehand_capacity(512, 512, 20).total_bits, 360.0, 360.01, "m = 20", true);
}

void tv_scenario(Check& c) {
  const auto s = load("tv_menu.json");
  const std::map<std::string, std::string> swap{{"a1", "a2"}, {"a2", "a1"}};
  const std::vector<std::string> names{"tv_a", "tv_b", "tv_c"};
  const double cost[] = {4.0, 3.8, 3.84};
  const double ratio[] = {0.40, 0.30, 0.13};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& t = *s.find_task(names[i]);
    const auto e = evaluate_task(*t.alphabet.enumerated, *t.cost);
    c.near(e.expected_cost_seconds, cost[i], kExact, names[i] + " cost");
    c.near(e.cost_benefit, ratio[i], 0.005, names[i] + " ratio");
  }
  const double swapped[] = {0.41, 0.23};
  const double pd[] = {0.16, 0.24};
  const double degraded[] = {0.22, 0.06};
  for (std::size_t i = 1; i < 3; ++i) {
    const auto& t = *s.find_task(names[i]);
    c.near(reassign_steps(*t.alphabet.enumerated, *t.cost, swap).cost_benefit, swapped[i - 1], 0.005,
           names[i] + " swapped ratio");
    const auto m = evaluate_task(*t.alphabet.enumerated, *t.cost, t.mistake);
    c.near(m.potential_distortion, pd[i - 1], 0.005, names[i] + " mistake PD");
    c.near(m.cost_benefit, degraded[i - 1], 0.005, names[i] + " mistake ratio");
  }
}

void threshold(Check& c) {
  const auto d = task_alphabet(load("tv_menu.json"), "tv_c").distribution();
  const auto t = negative_threshold(d, "a2", "a1");
  c.that(t.has_value(), "no threshold found");
  if (!t) return;
  c.within(*t, 0.30, 0.33, "threshold");
  const double grid = oracle::grid_threshold({0.09, 0.9, 0.01}, 1, 0, kDefaultEpsilon);
  c.that(grid > 0.0, "grid scan found no negative benefit");
  c.within(*t, grid - 0.001, grid, "bisection vs grid scan");
}

void ledger(Check& c) {
  const auto s = load("latex_save.json");
  const auto r = estimate_f1_f2_rate(*s.find_ledger("latex_save"), task_alphabet(s, "save_prompt"), 1.0);
  c.near(r.bits_per_second, 57.0, kExact, "F1+F2 rate");
  c.near(r.f1_compression, 57.0 - std::log2(15.0), kExact, "F1 compression");
}

void study(Check& c) {
  const auto design = parse_study_design(slurp(fixture("study3bit.json")));
  c.that(design.epsilon().value() == 0.006299, "design epsilon");
  const auto records = ingest_trials(slurp(fixture("kijmongkolchai.csv")), design.total_bits());
  const auto r = study_cost_benefit(design, records);
  c.near(r.question_entropy, 3.0, kExact, "H(a2)");
  c.within(r.decision_entropy, 0.072, 0.074, "H(a3)");
  c.within(r.alphabet_compression, 2.925, 2.929, "AC");
  c.within(r.potential_distortion, 1.583, 1.603, "PD");
  c.within(r.benefit, 1.325, 1.345, "benefit");
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> draw(1.0);
  std::bernoulli_distribution zero(0.25);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = zero(rng) ? 0.0 : draw(rng));
  if (total == 0.0) p[0] = total = 1.0;
  for (auto& x : p) x /= total;
  return p;
}

void properties(Check& c) {
  std::mt19937_64 rng(20240601);
  const EpsilonPolicy policy;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    const auto p = random_simplex(rng, n);
    const auto q = random_simplex(rng, n);
    const ProbabilityDistribution dp(indexed_labels(n), p), dq(indexed_labels(n), q);
    const double h = entropy(dp);
    c.that(h >= 0.0 && h <= std::log2(static_cast<double>(n)) + 1e-12, "entropy bounds");
    c.that(entropy(ProbabilityDistribution::uniform(indexed_labels(n))) >= h - 1e-12, "uniform maximum");
    const double d = kl_divergence(dq, dp, policy);
    c.that(d >= 0.0, "KL non-negative");
    c.that(kl_divergence(dq, dq, policy) <= 1e-12, "KL of identical inputs");
    if (!epsilon_adjust(dq, policy).approx_equal(epsilon_adjust(dp, policy))) c.that(d > 0.0, "KL of distinct inputs");

    const std::size_t from = rng() % n;
    const std::size_t to = (from + 1 + rng() % (n - 1)) % n;
    const double mass = p[from] * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (mass < 1.0) {
      const auto s = apply_mistake_shift(dp, {dp.label(from), dp.label(to), mass, 0.0});
      double total = 0.0;
      for (double x : s.probabilities()) total += x;
      c.that(std::abs(total - 1.0) <= 1e-15, "mistake shift conserves mass");
    }
  }

  const auto dpi = dpi_fuzz(7, 1000);
  c.that(dpi.holds == 1000, "DPI held on " + std::to_string(dpi.holds) + "/1000 chains");

  const auto tv = load("tv_menu.json");
  const std::vector<std::string> labels{"a1", "a2", "a3"};
  for (const auto& t : tv.tasks) {
    std::vector<std::string> perm = labels;
    do {
      std::map<std::string, std::string> m;
      for (std::size_t i = 0; i < 3; ++i) m[labels[i]] = perm[i];
      c.that(reassign_steps(*t.alphabet.enumerated, *t.cost, m).action_capacity == t.alphabet.enumerated->capacity(),
             "reassign_steps changed capacity");
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  const auto design = parse_study_design(slurp(fixture("study3bit.json")));
  const auto letters = bit_string_labels(3);
  std::vector<double> seen;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TrialRecord> records;
    const int count = 1 + static_cast<int>(rng() % 200);
    for (int i = 0; i < count; ++i) {
      records.push_back({"p", "t" + std::to_string(i), "111", letters[rng() % 8], 1000.0 + rng() % 3000});
    }
    seen.push_back(study_cost_benefit(design, records).alphabet_compression);
  }
  for (double ac : seen) c.that(ac == seen.front(), "consistent-mode AC depends on responses");
}

void cli_end_to_end(Check& c) {
  const auto dev = json_command({"device", "cap", fixture("devices.json"), "--device", "mouse"}, c);
  c.near(row(dev, "device", "instantaneous capacity"), 22.984, 0.001, "cli mouse capacity");
  c.near(row(dev, "device", "bandwidth"), 2298.4, 0.1, "cli mouse bandwidth");
  const auto glove = json_command({"device", "cap", fixture("devices.json"), "--device", "glove"}, c);
  c.near(row(glove, "device", "bandwidth"), 10888.6, 0.5, "cli glove bandwidth");

  const std::vector<std::string> names{"tv_a", "tv_b", "tv_c"};
  const double cost[] = {4.0, 3.8, 3.84};
  const double ratio[] = {0.40, 0.30, 0.13};
  const double swapped[] = {0.41, 0.23};
  const double pd[] = {0.16, 0.24};
  const double degraded[] = {0.22, 0.06};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto r = json_command({"task", "eval", fixture("tv_menu.json"), "--task", names[i]}, c);
    c.near(row(r, "task " + names[i], "expected cost"), cost[i], kExact, "cli " + names[i] + " cost");
    c.near(row(r, "task " + names[i], "cost-benefit"), ratio[i], 0.005, "cli " + names[i] + " ratio");
    if (i == 0) continue;
    c.near(row(r, "task " + names[i] + " with mistake", "potential distortion"), pd[i - 1], 0.005,
           "cli " + names[i] + " mistake PD");
    c.near(row(r, "task " + names[i] + " with mistake", "cost-benefit"), degraded[i - 1], 0.005,
           "cli " + names[i] + " mistake ratio");
    const auto s = json_command({"task", "eval", fixture("tv_menu.json"), "--task", names[i], "--swap", "a1,a2"}, c);
    c.near(row(s, "task " + names[i] + " with a1 and a2 swapped", "cost-benefit"), swapped[i - 1], 0.005,
           "cli " + names[i] + " swapped ratio");
  }

  const auto st = json_command({"study", "analyze", fixture("study3bit.json"), fixture("kijmongkolchai.csv")}, c);
  c.near(row(st, "study", "H(question)"), 3.0, kExact, "cli H(a2)");
  c.within(row(st, "study", "H(decision)"), 0.072, 0.074, "cli H(a3)");
  c.within(row(st, "study", "alphabet compression"), 2.925, 2.929, "cli AC");
  c.within(row(st, "study", "potential distortion"), 1.583, 1.603, "cli PD");
  c.within(row(st, "study", "benefit"), 1.325, 1.345, "cli benefit");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"device capacity and bandwidth", device_capacity},
      {"action capacities", action_capacity},
      {"device utilization worked examples", device_utilization_examples},
      {"freehand capacity", freehand},
      {"TV menu scenario", tv_scenario},
      {"negative-benefit threshold", threshold},
      {"LaTeX ledger rate", ledger},
      {"study replication", study},
      {"property suites", properties},
      {"CLI end to end", cli_end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.that(false, std::string("exception: ") + e.what());
    }
    const bool ok = c.failures().empty();
    failed += !ok;
    std::printf("criterion %2zu %s  %s\n", i + 1, ok ? "PASS" : "FAIL", criteria[i].first.c_str());
    for (const auto& f : c.failures()) std::printf("    %s\n", f.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
