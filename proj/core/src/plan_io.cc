#include <algorithm>
#include <map>
#include <sstream>

#include "causalplan/planner.h"

namespace causalplan {
namespace {

struct PlanText {
  std::optional<int> horizon;
  std::optional<std::int64_t> cost;
  std::map<int, std::vector<int>> steps;
  std::map<int, PartialState> states;
};

[[noreturn]] void Fail(int line, const std::string& message) {
  throw PlanningError("plan line " + std::to_string(line) + ": " + message);
}

std::int64_t ParseNumber(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (used != text.size() || value < 0) Fail(line, "bad number '" + text + "'");
    return value;
  } catch (const std::logic_error&) {
    Fail(line, "bad number '" + text + "'");
  }
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits on commas outside parentheses: "a(x,y), b" -> {"a(x,y)", "b"}.
std::vector<std::string> SplitTopLevel(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(Trim(item));
      item.clear();
    } else {
      item += ch;
    }
  }
  out.push_back(Trim(item));
  return out;
}

PlanText ParsePlanText(const GroundDomain& ground, std::string_view text) {
  PlanText out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto comment = raw.find('%');
    if (comment != std::string::npos) raw.resize(comment);
    const std::string l = Trim(raw);
    if (l.empty()) continue;
    std::istringstream words(l);
    std::string keyword;
    words >> keyword;
    if (keyword == "horizon" || keyword == "cost") {
      std::string number;
      words >> number;
      const std::int64_t value = ParseNumber(number, line);
      if (keyword == "horizon") {
        out.horizon = static_cast<int>(value);
      } else {
        out.cost = value;
      }
      continue;
    }
    if (keyword != "step" && keyword != "state") {
      Fail(line, "expected 'horizon', 'cost', 'step' or 'state'");
    }
    const auto colon = l.find(':');
    if (colon == std::string::npos) Fail(line, "missing ':'");
    const int index = static_cast<int>(
        ParseNumber(Trim(l.substr(keyword.size(), colon - keyword.size())), line));
    const std::string body = l.substr(colon + 1);
    if (keyword == "step") {
      if (out.steps.count(index)) Fail(line, "duplicate step");
      std::vector<int>& acts = out.steps[index];
      for (const std::string& item : SplitTopLevel(body)) {
        if (item.empty()) continue;
        std::optional<int> c = ground.FindConstant(item);
        if (!c || !ground.IsAction(*c)) Fail(line, "unknown action '" + item + "'");
        acts.push_back(*c);
      }
      std::sort(acts.begin(), acts.end());
      acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
      continue;
    }
    if (out.states.count(index)) Fail(line, "duplicate state");
    PartialState& state = out.states[index];
    state.assign(ground.num_fluents, -1);
    std::istringstream items(body);
    std::string item;
    while (items >> item) {
      const auto eq = item.rfind('=');
      if (eq == std::string::npos) Fail(line, "expected fluent=value in '" + item + "'");
      std::optional<int> c = ground.FindConstant(item.substr(0, eq));
      if (!c || ground.IsAction(*c)) {
        Fail(line, "unknown fluent '" + item.substr(0, eq) + "'");
      }
      std::optional<int> v = ground.FindValue(*c, item.substr(eq + 1));
      if (!v) Fail(line, "bad value in '" + item + "'");
      if (state[*c] >= 0 && state[*c] != *v) Fail(line, "conflicting values");
      state[*c] = *v;
    }
  }
  return out;
}

std::vector<std::vector<int>> StepList(const PlanText& text, int horizon) {
  std::vector<std::vector<int>> steps(horizon);
  for (const auto& [index, acts] : text.steps) {
    if (index < 0 || index >= horizon) {
      throw PlanningError("step " + std::to_string(index) +
                          " is outside the horizon");
    }
    steps[index] = acts;
  }
  return steps;
}

}  // namespace

std::string StateText(const GroundDomain& ground, const State& state) {
  std::string out;
  for (int c = 0; c < ground.num_fluents; ++c) {
    if (c > 0) out += " ";
    out += ground.constants[c].Label() + "=" +
           ground.constants[c].values.at(state.at(c));
  }
  return out;
}

std::string WritePlan(const GroundDomain& ground, const Plan& plan) {
  std::ostringstream out;
  const Trajectory& t = plan.trajectory;
  out << "horizon " << t.horizon() << "\n";
  if (plan.cost) out << "cost " << *plan.cost << "\n";
  for (int k = 0; k < t.horizon(); ++k) {
    out << "step " << k << ":";
    for (std::size_t i = 0; i < t.actions[k].size(); ++i) {
      out << (i == 0 ? " " : ", ") << ground.constants[t.actions[k][i]].Label();
    }
    out << "\n";
  }
  for (int k = 0; k <= t.horizon(); ++k) {
    out << "state " << k << ": " << StateText(ground, t.states[k]) << "\n";
  }
  return out.str();
}

Plan ReadPlan(const GroundDomain& ground, std::string_view text) {
  const PlanText parsed = ParsePlanText(ground, text);
  if (!parsed.horizon) throw PlanningError("plan has no 'horizon' line");
  const int h = *parsed.horizon;
  Plan plan;
  plan.cost = parsed.cost;
  plan.trajectory.actions = StepList(parsed, h);
  for (int k = 0; k <= h; ++k) {
    auto it = parsed.states.find(k);
    if (it == parsed.states.end()) {
      throw PlanningError("plan has no 'state " + std::to_string(k) + "' line");
    }
    for (int c = 0; c < ground.num_fluents; ++c) {
      if (it->second[c] < 0) {
        throw PlanningError("state " + std::to_string(k) + " gives no value for " +
                            ground.constants[c].Label());
      }
    }
    plan.trajectory.states.push_back(it->second);
  }
  if (static_cast<int>(parsed.states.size()) != h + 1) {
    throw PlanningError("plan has states beyond its horizon");
  }
  return plan;
}

PredictionInput ReadPredictionInput(const GroundDomain& ground,
                                    std::string_view text) {
  const PlanText parsed = ParsePlanText(ground, text);
  PredictionInput input;
  int h = 0;
  if (!parsed.steps.empty()) h = parsed.steps.rbegin()->first + 1;
  if (parsed.horizon) h = *parsed.horizon;
  input.actions = StepList(parsed, h);
  auto it = parsed.states.find(0);
  input.init = it == parsed.states.end() ? PartialState(ground.num_fluents, -1)
                                         : it->second;
  if (parsed.states.size() > (it == parsed.states.end() ? 0u : 1u)) {
    throw PlanningError("prediction input may only give 'state 0'");
  }
  return input;
}

}  // namespace causalplan
