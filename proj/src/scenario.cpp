#include "hcivalue/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <map>
#include <set>

#include <json.hpp>

#include "hcivalue/error.hpp"

namespace hcivalue {

namespace {

using json = nlohmann::json;

// A JSON value together with its path, for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(&value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *value_; }

  [[noreturn]] void fail(const std::string& message) const { throw FormatError(path_ + ": " + message); }

  void require_object(std::initializer_list<std::string_view> allowed) const {
    if (!value_->is_object()) fail("expected an object");
    for (const auto& [key, _] : value_->items()) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) Node(*value_, path_ + "." + key).fail("unknown key");
    }
  }

  bool has(std::string_view key) const { return value_->contains(key); }

  Node at(std::string_view key) const {
    if (!value_->contains(key)) fail("missing required key '" + std::string(key) + "'");
    return {(*value_)[std::string(key)], path_ + "." + std::string(key)};
  }

  std::optional<Node> maybe(std::string_view key) const {
    if (!value_->contains(key) || (*value_)[std::string(key)].is_null()) return std::nullopt;
    return at(key);
  }

  std::vector<Node> elements() const {
    if (!value_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_->size(); ++i) out.emplace_back((*value_)[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  std::string text() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }

  std::string name() const {
    auto s = text();
    if (s.empty()) fail("must not be empty");
    return s;
  }

  double number() const {
    if (!value_->is_number()) fail("expected a number");
    const double v = value_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  std::uint64_t count() const {
    if (!value_->is_number_integer() || value_->get<std::int64_t>() < 0) fail("expected a non-negative integer");
    return value_->get<std::uint64_t>();
  }

  bool boolean() const {
    if (!value_->is_boolean()) fail("expected true or false");
    return value_->get<bool>();
  }

 private:
  const json* value_;
  std::string path_;
};

// Runs a domain constructor and prefixes any library error with the JSON path.
template <typename F>
auto at_path(const Node& node, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(node.path() + ": " + e.what());
  }
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("$: invalid JSON: ") + e.what());
  }
}

void require_schema_version(const Node& root) {
  const auto v = root.at("schema_version");
  if (v.count() != static_cast<std::uint64_t>(kScenarioSchemaVersion)) {
    v.fail("unsupported schema version (expected " + std::to_string(kScenarioSchemaVersion) + ")");
  }
}

template <typename T>
void require_unique(const std::vector<T>& items, const std::vector<Node>& nodes, std::function<std::string(const T&)> key,
                    std::string_view what) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!seen.insert(key(items[i])).second) {
      nodes[i].fail("duplicate " + std::string(what) + " name '" + key(items[i]) + "'");
    }
  }
}

InputDeviceSpec parse_device(const Node& n) {
  n.require_object({"name", "sampling_rate_hz", "variables"});
  auto name = n.at("name").name();
  const double rate = n.at("sampling_rate_hz").number();
  std::vector<DeviceVariable> vars;
  for (const auto& v : n.at("variables").elements()) {
    v.require_object({"name", "cardinality"});
    vars.push_back({v.at("name").name(), v.at("cardinality").count()});
  }
  return at_path(n, [&] { return InputDeviceSpec(name, std::move(vars), rate); });
}

std::vector<Letter> parse_letters(const Node& list) {
  const auto items = list.elements();
  if (items.empty()) list.fail("needs at least one letter");
  std::vector<Letter> letters;
  std::size_t with_p = 0;
  for (const auto& item : items) {
    item.require_object({"label", "p"});
    Letter l{item.at("label").name(), 0.0};
    if (auto p = item.maybe("p")) {
      l.probability = p->number();
      ++with_p;
    }
    letters.push_back(std::move(l));
  }
  if (with_p == 0) {
    for (auto& l : letters) l.probability = 1.0 / static_cast<double>(letters.size());
  } else if (with_p != letters.size()) {
    list.fail("give 'p' for every letter or for none (uniform)");
  }
  return letters;
}

AlphabetSpec parse_alphabet(const Node& n);

AlphabetSpec finish(AlphabetSpec spec) {
  if (spec.enumerated) spec.capacity_bits = spec.enumerated->capacity();
  return spec;
}

AlphabetSpec parse_alphabet(const Node& n) {
  if (!n.raw().is_object()) n.fail("expected an object");
  const auto kind_text = n.at("kind").text();
  const auto kind = parse_alphabet_kind(kind_text);
  if (!kind) n.at("kind").fail("unknown alphabet kind '" + kind_text + "'");

  AlphabetSpec spec;
  spec.kind = *kind;
  switch (*kind) {
    case AlphabetKind::radio: {
      n.require_object({"kind", "options"});
      auto letters = parse_letters(n.at("options"));
      spec.enumerated = at_path(n, [&] { return radio_alphabet(std::move(letters)); });
      break;
    }
    case AlphabetKind::checkbox: {
      n.require_object({"kind", "boxes", "box_probabilities"});
      const auto k = static_cast<std::size_t>(n.at("boxes").count());
      std::optional<std::vector<double>> per_box;
      if (auto b = n.maybe("box_probabilities")) {
        per_box.emplace();
        for (const auto& e : b->elements()) per_box->push_back(e.number());
      }
      spec.checkbox_boxes = k;
      spec.uniform_checkbox = !per_box.has_value();
      if (k > kMaxEnumerationBits) {
        spec.capacity_bits = at_path(n, [&] {
          return checkbox_capacity(k, per_box ? std::optional<std::span<const double>>(*per_box) : std::nullopt);
        });
      } else {
        spec.enumerated = at_path(n, [&] { return checkbox_alphabet(k, per_box); });
      }
      break;
    }
    case AlphabetKind::gesture: {
      n.require_object({"kind", "elementary", "composite"});
      const auto count = static_cast<std::size_t>(n.at("elementary").count());
      const bool composite = n.has("composite") && n.at("composite").boolean();
      spec.enumerated = at_path(n, [&] { return gesture_alphabet(count, composite); });
      break;
    }
    case AlphabetKind::freehand: {
      n.require_object({"kind", "width", "height", "max_points", "exact_length"});
      const auto fh = at_path(n, [&] {
        return freehand_capacity(n.at("width").count(), n.at("height").count(), n.at("max_points").count());
      });
      const bool exact = n.has("exact_length") && n.at("exact_length").boolean();
      spec.freehand = fh;
      spec.capacity_bits = exact ? fh.fixed_length_bits : fh.total_bits;
      break;
    }
    case AlphabetKind::custom: {
      n.require_object({"kind", "letters", "uniform"});
      if (n.has("letters") == n.has("uniform")) n.fail("give exactly one of 'letters' or 'uniform'");
      if (n.has("uniform")) {
        const auto size = static_cast<std::size_t>(n.at("uniform").count());
        spec.enumerated = at_path(n, [&] { return uniform_alphabet(size); });
      } else {
        auto letters = parse_letters(n.at("letters"));
        spec.enumerated = at_path(n, [&] {
          return ActionAlphabet(ProbabilityDistribution(std::move(letters)), AlphabetKind::custom);
        });
      }
      break;
    }
    case AlphabetKind::composite: {
      n.require_object({"kind", "parts"});
      std::vector<ActionAlphabet> parts;
      for (const auto& p : n.at("parts").elements()) {
        auto part = parse_alphabet(p);
        if (!part.enumerated) p.fail("composite parts must be enumerable");
        parts.push_back(std::move(*part.enumerated));
      }
      spec.enumerated = at_path(n, [&] { return concat_submodels(parts); });
      break;
    }
  }
  return finish(std::move(spec));
}

CostModel parse_cost(const Node& n) {
  n.require_object({"unit_step_seconds", "fixed_overhead_seconds", "steps"});
  CostModel c;
  c.unit_step_seconds = n.at("unit_step_seconds").number();
  if (auto o = n.maybe("fixed_overhead_seconds")) c.fixed_overhead_seconds = o->number();
  const auto steps = n.at("steps");
  if (!steps.raw().is_object()) steps.fail("expected an object mapping letters to step counts");
  for (const auto& [label, _] : steps.raw().items()) {
    c.per_letter_steps[label] = static_cast<unsigned>(steps.at(label).count());
  }
  return c;
}

MistakeModel parse_mistake(const Node& n) {
  n.require_object({"from", "to", "mass", "extra_cost_seconds"});
  MistakeModel m;
  m.from_label = n.at("from").name();
  m.to_label = n.at("to").name();
  m.mass = n.at("mass").number();
  if (auto e = n.maybe("extra_cost_seconds")) m.extra_cost_seconds = e->number();
  return m;
}

TaskSpec parse_task(const Node& n) {
  n.require_object({"name", "alphabet", "cost", "mistake", "device", "task_seconds"});
  TaskSpec t;
  t.name = n.at("name").name();
  t.alphabet = parse_alphabet(n.at("alphabet"));
  if (auto c = n.maybe("cost")) {
    if (!t.alphabet.enumerated) c->fail("a cost model needs an enumerable alphabet");
    t.cost = parse_cost(*c);
    at_path(*c, [&] { validate_cost_model(*t.cost, t.alphabet.enumerated->distribution()); });
  }
  if (auto m = n.maybe("mistake")) {
    if (!t.alphabet.enumerated) m->fail("a mistake model needs an enumerable alphabet");
    t.mistake = parse_mistake(*m);
    at_path(*m, [&] { apply_mistake_shift(t.alphabet.enumerated->distribution(), *t.mistake); });
  }
  if (auto d = n.maybe("device")) t.device = d->name();
  if (auto s = n.maybe("task_seconds")) {
    t.task_seconds = s->number();
    if (*t.task_seconds <= 0.0) s->fail("must be > 0");
  }
  return t;
}

KnowledgeLedger parse_ledger(const Node& n) {
  n.require_object({"name", "entries"});
  auto name = n.at("name").name();
  std::vector<KnowledgeEntry> entries;
  for (const auto& e : n.at("entries").elements()) {
    e.require_object({"name", "category", "bits"});
    const auto cat_text = e.at("category").text();
    const auto cat = parse_knowledge_category(cat_text);
    if (!cat) e.at("category").fail("unknown knowledge category '" + cat_text + "'");
    entries.push_back({e.at("name").name(), *cat, e.at("bits").number()});
  }
  return at_path(n, [&] { return KnowledgeLedger(std::move(entries), name); });
}

StudyDesign parse_design(const Node& n, const std::map<std::string, SubModelSpec>& shared,
                         std::optional<double> fallback_epsilon,
                         std::initializer_list<std::string_view> extra_keys = {}) {
  std::vector<std::string_view> allowed = {"name", "submodels", "epsilon", "ground_truth", "aggregation_mode",
                                           "stimulus_space_size"};
  allowed.insert(allowed.end(), extra_keys.begin(), extra_keys.end());
  if (!n.raw().is_object()) n.fail("expected an object");
  for (const auto& [key, _] : n.raw().items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) n.at(key).fail("unknown key");
  }

  std::vector<SubModelSpec> subs;
  for (const auto& s : n.at("submodels").elements()) {
    if (s.raw().is_string()) {
      auto it = shared.find(s.text());
      if (it == shared.end()) s.fail("unknown sub-model '" + s.text() + "'");
      subs.push_back(it->second);
    } else {
      s.require_object({"name", "bits"});
      subs.push_back({s.at("name").name(), static_cast<std::size_t>(s.at("bits").count())});
    }
  }
  std::optional<double> eps = fallback_epsilon;
  if (auto e = n.maybe("epsilon")) eps = e->number();
  auto mode = AggregationMode::consistent_individual;
  if (auto m = n.maybe("aggregation_mode")) {
    auto parsed = parse_aggregation_mode(m->text());
    if (!parsed) m->fail("unknown aggregation mode '" + m->text() + "'");
    mode = *parsed;
  }
  std::optional<std::uint64_t> stimulus;
  if (auto s = n.maybe("stimulus_space_size")) stimulus = s->count();
  std::string name;
  if (auto nm = n.maybe("name")) name = nm->name();
  auto truth = n.at("ground_truth").text();
  return at_path(n, [&] {
    return StudyDesign(std::move(subs), truth, eps ? EpsilonPolicy(*eps) : EpsilonPolicy{}, mode, stimulus, name);
  });
}

std::map<std::string, SubModelSpec> parse_shared_submodels(const Node& root) {
  std::map<std::string, SubModelSpec> out;
  if (auto list = root.maybe("submodels")) {
    for (const auto& s : list->elements()) {
      s.require_object({"name", "bits"});
      SubModelSpec spec{s.at("name").name(), static_cast<std::size_t>(s.at("bits").count())};
      if (!out.emplace(spec.name, spec).second) s.fail("duplicate sub-model name '" + spec.name + "'");
    }
  }
  return out;
}

std::optional<double> parse_epsilon(const Node& root) {
  if (auto e = root.maybe("epsilon")) {
    const double v = e->number();
    at_path(*e, [&] { EpsilonPolicy{v}; });
    return v;
  }
  return std::nullopt;
}

}  // namespace

const InputDeviceSpec* ScenarioFile::find_device(std::string_view name) const {
  for (const auto& d : devices) {
    if (d.name() == name) return &d;
  }
  return nullptr;
}

const TaskSpec* ScenarioFile::find_task(std::string_view name) const {
  for (const auto& t : tasks) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const KnowledgeLedger* ScenarioFile::find_ledger(std::string_view name) const {
  for (const auto& l : ledgers) {
    if (l.name() == name) return &l;
  }
  return nullptr;
}

const StudyDesign* ScenarioFile::find_study(std::string_view name) const {
  for (const auto& s : studies) {
    if (s.name() == name) return &s;
  }
  return nullptr;
}

ScenarioFile parse_scenario(std::string_view json_text) {
  const auto doc = parse_json(json_text);
  const Node root(doc, "$");
  root.require_object({"schema_version", "epsilon", "devices", "tasks", "ledgers", "submodels", "studies"});
  require_schema_version(root);

  ScenarioFile s;
  s.epsilon = parse_epsilon(root);

  std::vector<Node> device_nodes;
  std::vector<Node> task_nodes;
  std::vector<Node> ledger_nodes;
  std::vector<Node> study_nodes;
  if (auto list = root.maybe("devices")) device_nodes = list->elements();
  if (auto list = root.maybe("tasks")) task_nodes = list->elements();
  if (auto list = root.maybe("ledgers")) ledger_nodes = list->elements();
  if (auto list = root.maybe("studies")) study_nodes = list->elements();

  for (const auto& n : device_nodes) s.devices.push_back(parse_device(n));
  for (const auto& n : task_nodes) s.tasks.push_back(parse_task(n));
  for (const auto& n : ledger_nodes) s.ledgers.push_back(parse_ledger(n));
  const auto shared = parse_shared_submodels(root);
  for (const auto& n : study_nodes) s.studies.push_back(parse_design(n, shared, s.epsilon));

  require_unique<InputDeviceSpec>(s.devices, device_nodes, [](const auto& d) { return d.name(); }, "device");
  require_unique<TaskSpec>(s.tasks, task_nodes, [](const auto& t) { return t.name; }, "task");
  require_unique<KnowledgeLedger>(s.ledgers, ledger_nodes, [](const auto& l) { return l.name(); }, "ledger");
  require_unique<StudyDesign>(s.studies, study_nodes, [](const auto& d) { return d.name(); }, "study");

  for (std::size_t i = 0; i < s.tasks.size(); ++i) {
    const auto& t = s.tasks[i];
    if (t.device && !s.find_device(*t.device)) {
      task_nodes[i].at("device").fail("unknown device '" + *t.device + "'");
    }
  }
  return s;
}

StudyDesign parse_study_design(std::string_view json_text, const std::optional<std::string>& study_name) {
  const auto doc = parse_json(json_text);
  const Node root(doc, "$");
  if (!doc.is_object()) root.fail("expected an object");

  if (doc.contains("studies") || doc.contains("tasks") || doc.contains("devices")) {
    auto scenario = parse_scenario(json_text);
    if (scenario.studies.empty()) root.fail("scenario declares no studies");
    if (study_name) {
      const auto* found = scenario.find_study(*study_name);
      if (!found) root.at("studies").fail("unknown study '" + *study_name + "'");
      return *found;
    }
    if (scenario.studies.size() > 1) root.at("studies").fail("several studies declared; choose one by name");
    return scenario.studies.front();
  }

  require_schema_version(root);
  auto design = parse_design(root, {}, std::nullopt, {"schema_version"});
  if (study_name && design.name() != *study_name) root.fail("design is named '" + design.name() + "'");
  return design;
}

}  // namespace hcivalue
