#include "hcivalue/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hcivalue/cost_benefit.hpp"
#include "hcivalue/error.hpp"
#include "hcivalue/info.hpp"
#include "hcivalue/kernels.hpp"
#include "hcivalue/scenario.hpp"
#include "hcivalue/study.hpp"

namespace hcivalue {

namespace {

struct GlobalOptions {
  std::string format = "text";
  std::optional<double> epsilon;
  bool verbose = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("cannot read '" + path + "'");
  return buf.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

EpsilonPolicy pick_epsilon(const GlobalOptions& g, std::optional<double> from_file) {
  if (g.epsilon) return EpsilonPolicy(*g.epsilon);
  if (from_file) return EpsilonPolicy(*from_file);
  return {};
}

const TaskSpec& require_task(const ScenarioFile& s, const std::string& name) {
  const auto* t = s.find_task(name);
  if (!t) throw ValidationError("unknown task '" + name + "'");
  return *t;
}

const ActionAlphabet& require_enumerated(const TaskSpec& t) {
  if (!t.alphabet.enumerated) {
    throw ValidationError("task '" + t.name + "' has an analytic-only alphabet; this command needs its letters");
  }
  return *t.alphabet.enumerated;
}

void add_evaluation_rows(ReportSection& s, const TaskEvaluation& e) {
  s.add("alphabet compression", e.alphabet_compression, Unit::bits)
      .add("potential distortion", e.potential_distortion, Unit::bits)
      .add("benefit", e.benefit(), Unit::bits)
      .add("expected cost", e.expected_cost_seconds, Unit::seconds)
      .add("cost-benefit", e.cost_benefit, Unit::bits_per_second);
}

Report device_cap(const ScenarioFile& scenario, const std::string& name) {
  const auto* d = scenario.find_device(name);
  if (!d) throw ValidationError("unknown device '" + name + "'");
  Report r;
  auto& s = r.sections.emplace_back(ReportSection{"device " + d->name(), {}});
  s.add("state variables", static_cast<double>(d->variables().size()), Unit::count)
      .add("sampling rate", d->sampling_rate_hz(), Unit::hertz)
      .add("instantaneous capacity", instantaneous_capacity(*d), Unit::bits)
      .add("bandwidth", bandwidth(*d), Unit::bits_per_second);
  return r;
}

Report task_eval(const ScenarioFile& scenario, const std::string& name, const std::optional<std::string>& swap,
                 EpsilonPolicy policy) {
  const auto& t = require_task(scenario, name);
  const InputDeviceSpec* device = t.device ? scenario.find_device(*t.device) : nullptr;

  Report r;
  auto& main = r.sections.emplace_back(ReportSection{"task " + t.name, {}});
  main.add("alphabet kind", std::string(to_string(t.alphabet.kind)));
  if (t.alphabet.enumerated) main.add("letters", static_cast<double>(t.alphabet.enumerated->size()), Unit::count);
  if (t.alphabet.freehand) {
    main.add("bits per point", t.alphabet.freehand->per_point_bits, Unit::bits)
        .add("fixed-length path capacity", t.alphabet.freehand->fixed_length_bits, Unit::bits)
        .add("variable-length path capacity", t.alphabet.freehand->total_bits, Unit::bits);
  }
  main.add("action capacity", t.alphabet.capacity_bits, Unit::bits);

  std::optional<double> du;
  if (device && t.task_seconds) {
    main.add("device bandwidth", bandwidth(*device), Unit::bits_per_second)
        .add("task time", *t.task_seconds, Unit::seconds);
    du = device_utilization(t.alphabet.capacity_bits, *t.task_seconds, bandwidth(*device));
    main.add("device utilization", 100.0 * *du, Unit::percent);
  }

  if (t.alphabet.checkbox_boxes) {
    const auto k = *t.alphabet.checkbox_boxes;
    const double count_bits = checkbox_letter_count_bits(k);
    std::ostringstream note;
    note << "checkbox erratum: " << k << " boxes give 2^" << k << " letters; with equally likely combinations "
         << "the entropy is " << k << " bits, not the letter count 2^" << k << " = " << count_bits << " bits";
    if (du && t.alphabet.uniform_checkbox) {
      const auto f = checkbox_du_figures(k, *t.task_seconds, bandwidth(*device));
      main.add("device utilization (2^k-bit figure)", 100.0 * f.du_letter_count, Unit::percent);
      note << "; DU is " << std::fixed << std::setprecision(4) << 100.0 * f.du_entropy << "% from entropy vs "
           << 100.0 * f.du_letter_count << "% from the 2^k figure";
    }
    r.notes.push_back(note.str());
  }

  if (t.cost) {
    const auto& alphabet = require_enumerated(t);
    const auto base = evaluate_task(alphabet, *t.cost, std::nullopt, nullptr, std::nullopt, policy);
    add_evaluation_rows(main, base);

    if (t.mistake) {
      const auto& m = *t.mistake;
      const auto e = evaluate_task(alphabet, *t.cost, m, nullptr, std::nullopt, policy);
      std::ostringstream title;
      title << "task " << t.name << " with mistake " << m.from_label << " -> " << m.to_label;
      auto& s = r.sections.emplace_back(ReportSection{title.str(), {}});
      s.add("mistaken mass", m.mass, Unit::ratio).add("recovery cost", m.extra_cost_seconds, Unit::seconds);
      add_evaluation_rows(s, e);
    }
    if (swap) {
      const auto pair = split_list(*swap);
      if (pair.size() != 2) throw ValidationError("--swap expects two letters separated by a comma");
      const auto e = reassign_steps(alphabet, *t.cost, {{pair[0], pair[1]}, {pair[1], pair[0]}});
      auto& s = r.sections.emplace_back(ReportSection{"task " + t.name + " with " + pair[0] + " and " + pair[1] +
                                                          " swapped", {}});
      add_evaluation_rows(s, e);
    }
  } else if (swap) {
    throw ValidationError("task '" + t.name + "' has no cost model to reassign");
  }
  return r;
}

Report task_threshold(const ScenarioFile& scenario, const std::string& name, const std::string& from,
                      const std::string& to, EpsilonPolicy policy) {
  const auto& t = require_task(scenario, name);
  const auto& d = require_enumerated(t).distribution();
  const auto s = negative_threshold(d, from, to, policy);
  Report r;
  auto& sec = r.sections.emplace_back(ReportSection{"task " + t.name + " mistake " + from + " -> " + to, {}});
  sec.add("action capacity", entropy(d), Unit::bits).add("available mass", d.probability(from), Unit::ratio);
  if (s) {
    sec.add("negative-benefit threshold", *s, Unit::ratio);
  } else {
    sec.add("negative-benefit threshold", std::string("none"));
  }
  return r;
}

Report ledger_rate(const ScenarioFile& scenario, const std::string& ledger_name, const std::string& task_name,
                   double seconds) {
  const auto* ledger = scenario.find_ledger(ledger_name);
  if (!ledger) throw ValidationError("unknown ledger '" + ledger_name + "'");
  const auto& t = require_task(scenario, task_name);
  const auto rate = estimate_f1_f2_rate(*ledger, require_enumerated(t), seconds);
  Report r;
  auto& s = r.sections.emplace_back(ReportSection{"ledger " + ledger->name() + " with task " + t.name, {}});
  s.add("declared knowledge", rate.ledger_bits, Unit::bits)
      .add("F2 compression", rate.f2_bits, Unit::bits)
      .add("F1 compression", rate.f1_compression, Unit::bits)
      .add("total benefit", rate.total_benefit, Unit::bits)
      .add("task time", seconds, Unit::seconds)
      .add("knowledge rate", rate.bits_per_second, Unit::bits_per_second);
  if (rate.f1_negative) {
    r.notes.push_back("warning: the ledger declares less knowledge than the action alphabet carries; "
                      "F1 compression is negative");
  }
  if (ledger->entries().empty()) r.notes.push_back("empty ledger: only F2 contributes");
  return r;
}

Report study_analyze(const StudyDesign& design, const std::vector<TrialRecord>& records) {
  const auto result = study_cost_benefit(design, records);
  Report r;
  auto& s = r.sections.emplace_back(
      ReportSection{"study" + (design.name().empty() ? std::string() : " " + design.name()), {}});
  s.add("aggregation mode", std::string(to_string(design.aggregation_mode())))
      .add("epsilon", design.epsilon().value(), Unit::ratio)
      .add("records", static_cast<double>(result.records), Unit::count)
      .add("ground-truth groups", static_cast<double>(result.groups), Unit::count)
      .add("H(question)", result.question_entropy, Unit::bits)
      .add("H(decision)", result.decision_entropy, Unit::bits)
      .add("H(responses)", result.response_entropy, Unit::bits)
      .add("alphabet compression", result.alphabet_compression, Unit::bits)
      .add("potential distortion", result.potential_distortion, Unit::bits)
      .add("benefit", result.benefit, Unit::bits)
      .add("mean response time", result.mean_response_time_s, Unit::seconds)
      .add("median response time", result.median_response_time_s, Unit::seconds)
      .add("cost-benefit", result.cost_benefit, Unit::bits_per_second);
  if (result.stimulus_entropy_bound) s.add("stimulus entropy bound", *result.stimulus_entropy_bound, Unit::bits);
  auto& acc = r.sections.emplace_back(ReportSection{"sub-model accuracy", {}});
  for (const auto& sub : design.submodels()) acc.add(sub.name, result.per_submodel_accuracy.at(sub.name), Unit::ratio);
  return r;
}

Report dpi_demo(std::uint64_t seed, const std::optional<std::string>& sizes_text, std::size_t trials) {
  ChainSizes sizes;
  if (sizes_text) {
    const auto parts = split_list(*sizes_text);
    if (parts.size() != 3) throw ValidationError("--sizes expects three alphabet sizes, e.g. 4,3,2");
    std::size_t v[3];
    for (int i = 0; i < 3; ++i) {
      try {
        std::size_t used = 0;
        const long long parsed = std::stoll(parts[i], &used);
        if (used != parts[i].size() || parsed < 1 || parsed > 64) throw std::invalid_argument("range");
        v[i] = static_cast<std::size_t>(parsed);
      } catch (const std::exception&) {
        throw ValidationError("--sizes: '" + parts[i] + "' is not an alphabet size in [1, 64]");
      }
    }
    sizes = {v[0], v[1], v[2]};
  }
  const auto summary = dpi_fuzz(seed, trials, sizes);
  Report r;
  auto& s = r.sections.emplace_back(ReportSection{"data processing inequality", {}});
  s.add("seed", static_cast<double>(seed), Unit::count)
      .add("trials", static_cast<double>(summary.trials), Unit::count)
      .add("holds", std::to_string(summary.holds) + "/" + std::to_string(summary.trials))
      .add("worst I(Z1;Z3) - I(Z1;Z2)", summary.worst_margin, Unit::bits);
  return r;
}

void append_metadata(Report& r) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  auto& s = r.sections.emplace_back(ReportSection{"metadata", {}});
  s.add("generated at", std::string(stamp)).add("threads", static_cast<double>(kernels::max_threads()), Unit::count);
}

}  // namespace

CommandOutcome run_command(const std::vector<std::string>& args) {
  CLI::App app{"Information-theoretic measures of human input: device capacity, action capacity, "
               "cost-benefit and controlled-study analysis",
               "hcivalue"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--epsilon", g.epsilon, "Epsilon for KL capping (overrides the file value)");
  app.add_flag("--verbose", g.verbose, "Append a metadata section (timestamp, threads)");

  std::string file;
  std::string csv_file;
  std::string name;
  std::string other_name;
  std::string from;
  std::string to;
  std::optional<std::string> swap;
  std::optional<std::string> sizes;
  std::optional<std::string> mode;
  std::optional<std::string> study_name;
  double seconds = 0.0;
  std::uint64_t seed = 1;
  std::size_t trials = 1000;

  auto* device = app.add_subcommand("device", "Input devices")->require_subcommand(1);
  auto* device_cap_cmd = device->add_subcommand("cap", "Instantaneous capacity and bandwidth");
  device_cap_cmd->add_option("file", file, "Scenario file")->required();
  device_cap_cmd->add_option("--device", name, "Device name")->required();

  auto* task = app.add_subcommand("task", "Interaction tasks")->require_subcommand(1);
  auto* task_eval_cmd = task->add_subcommand("eval", "Capacity, cost and cost-benefit of a task");
  task_eval_cmd->add_option("file", file, "Scenario file")->required();
  task_eval_cmd->add_option("--task", name, "Task name")->required();
  task_eval_cmd->add_option("--swap", swap, "Swap the positions of two letters, e.g. a1,a2");
  auto* task_threshold_cmd = task->add_subcommand("threshold", "Mistaken mass at which the benefit turns negative");
  task_threshold_cmd->add_option("file", file, "Scenario file")->required();
  task_threshold_cmd->add_option("--task", name, "Task name")->required();
  task_threshold_cmd->add_option("--from", from, "Intended letter")->required();
  task_threshold_cmd->add_option("--to", to, "Letter chosen by mistake")->required();

  auto* ledger = app.add_subcommand("ledger", "Knowledge ledgers")->require_subcommand(1);
  auto* ledger_rate_cmd = ledger->add_subcommand("rate", "F1 + F2 knowledge rate");
  ledger_rate_cmd->add_option("file", file, "Scenario file")->required();
  ledger_rate_cmd->add_option("--ledger", name, "Ledger name")->required();
  ledger_rate_cmd->add_option("--task", other_name, "Task whose alphabet is the F2 output")->required();
  ledger_rate_cmd->add_option("--seconds", seconds, "Task time in seconds")->required();

  auto* study = app.add_subcommand("study", "Controlled studies")->require_subcommand(1);
  auto* study_analyze_cmd = study->add_subcommand("analyze", "Benefit and cost from trial data");
  study_analyze_cmd->add_option("design", file, "Study design (JSON)")->required();
  study_analyze_cmd->add_option("responses", csv_file, "Trial CSV")->required();
  study_analyze_cmd->add_option("--mode", mode, "consistent or aggregate")
      ->check(CLI::IsMember({"consistent", "aggregate"}));
  study_analyze_cmd->add_option("--study", study_name, "Study name when the file declares several");

  auto* dpi = app.add_subcommand("dpi", "Data processing inequality")->require_subcommand(1);
  auto* dpi_demo_cmd = dpi->add_subcommand("demo", "Check DPI on random Markov chains");
  dpi_demo_cmd->add_option("--seed", seed, "Random seed");
  dpi_demo_cmd->add_option("--sizes", sizes, "Alphabet sizes of Z1,Z2,Z3 (random in [2,8] when omitted)");
  dpi_demo_cmd->add_option("--trials", trials, "Number of random chains");

  for (auto* sub : {device, task, ledger, study, dpi}) {
    sub->fallthrough();
    for (auto* leaf : sub->get_subcommands({})) leaf->fallthrough();
  }

  CommandOutcome outcome;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    std::ostringstream err;
    outcome.exit_code = app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    outcome.output = out.str();
    outcome.diagnostics = err.str();
    return outcome;
  }

  try {
    Report report;
    if (device_cap_cmd->parsed()) {
      report = device_cap(parse_scenario(read_file(file)), name);
    } else if (task_eval_cmd->parsed()) {
      const auto scenario = parse_scenario(read_file(file));
      report = task_eval(scenario, name, swap, pick_epsilon(g, scenario.epsilon));
    } else if (task_threshold_cmd->parsed()) {
      const auto scenario = parse_scenario(read_file(file));
      report = task_threshold(scenario, name, from, to, pick_epsilon(g, scenario.epsilon));
    } else if (ledger_rate_cmd->parsed()) {
      report = ledger_rate(parse_scenario(read_file(file)), name, other_name, seconds);
    } else if (study_analyze_cmd->parsed()) {
      auto design = parse_study_design(read_file(file), study_name);
      if (g.epsilon) design = design.with_epsilon(EpsilonPolicy(*g.epsilon));
      if (mode) design = design.with_mode(*parse_aggregation_mode(*mode));
      const auto records = ingest_trials(read_file(csv_file), design.total_bits());
      report = study_analyze(design, records);
    } else if (dpi_demo_cmd->parsed()) {
      report = dpi_demo(seed, sizes, trials);
    }
    if (g.verbose) append_metadata(report);
    outcome.output = render(report, *parse_report_format(g.format));
    outcome.report = std::move(report);
  } catch (const Error& e) {
    outcome.exit_code = kExitFailure;
    outcome.diagnostics = std::string("error: ") + e.what() + "\n";
  }
  return outcome;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto outcome = run_command(args);
  out << outcome.output;
  err << outcome.diagnostics;
  return outcome.exit_code;
}

}  // namespace hcivalue
