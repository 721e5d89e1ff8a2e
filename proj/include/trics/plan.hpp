#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trics/atom.hpp"
#include "trics/tptp.hpp"

namespace trics {

enum class StepKind : std::uint8_t {
  LineThrough,          // (point, point) -> line
  PerpThrough,          // (line, point) -> line
  CircleCentered,       // (center, point) -> circle
  RatioPoint,           // (point a, point b, num, den) -> point P with ab : aP = num : den
  IntersectLines,       // (line, line) -> point
  IntersectLineCircle,  // (line, circle) -> point, point
};

inline std::string_view step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::LineThrough: return "LineThrough";
    case StepKind::PerpThrough: return "PerpThrough";
    case StepKind::CircleCentered: return "CircleCentered";
    case StepKind::RatioPoint: return "RatioPoint";
    case StepKind::IntersectLines: return "IntersectLines";
    case StepKind::IntersectLineCircle: return "IntersectLineCircle";
  }
  return "?";
}

inline std::optional<StepKind> step_kind_from_name(std::string_view s) {
  for (auto k : {StepKind::LineThrough, StepKind::PerpThrough, StepKind::CircleCentered, StepKind::RatioPoint,
                 StepKind::IntersectLines, StepKind::IntersectLineCircle}) {
    if (step_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

/// Sorts of the object inputs of a step kind.
inline std::vector<Sort> step_input_sorts(StepKind k) {
  switch (k) {
    case StepKind::LineThrough: return {Sort::Point, Sort::Point};
    case StepKind::PerpThrough: return {Sort::Line, Sort::Point};
    case StepKind::CircleCentered: return {Sort::Point, Sort::Point};
    case StepKind::RatioPoint: return {Sort::Point, Sort::Point};
    case StepKind::IntersectLines: return {Sort::Line, Sort::Line};
    case StepKind::IntersectLineCircle: return {Sort::Line, Sort::Circle};
  }
  return {};
}

inline Sort step_output_sort(StepKind k) {
  switch (k) {
    case StepKind::LineThrough:
    case StepKind::PerpThrough: return Sort::Line;
    case StepKind::CircleCentered: return Sort::Circle;
    default: return Sort::Point;
  }
}

inline std::size_t step_output_count(StepKind k) { return k == StepKind::IntersectLineCircle ? 2 : 1; }

struct ConstructionStep {
  StepKind kind = StepKind::LineThrough;
  std::vector<std::string> inputs;
  int num = 0;
  int den = 0;
  std::vector<std::string> outputs;
  // Significant objects the outputs reconstruct, parallel to outputs.
  std::vector<std::string> intent;
  // For RatioPoint: the knowledge-base ratio fact the point comes from.
  std::optional<Atom> provenance;

  bool operator==(const ConstructionStep&) const = default;
};

struct ConstructionPlan {
  // Given significant points in problem order: (plan name, significant id).
  std::vector<std::pair<std::string, std::string>> given;
  std::vector<ConstructionStep> steps;
  // Vertex id -> plan name.
  std::map<std::string, std::string> outputs;

  bool operator==(const ConstructionPlan&) const = default;

  /// Sort of every plan name.
  std::map<std::string, Sort> sorts() const {
    std::map<std::string, Sort> out;
    for (const auto& g : given) out[g.first] = Sort::Point;
    for (const auto& s : steps) {
      for (const auto& o : s.outputs) out[o] = step_output_sort(s.kind);
    }
    return out;
  }

  /// Significant object each plan name stands for.
  std::map<std::string, std::string> interpretation() const {
    std::map<std::string, std::string> out;
    for (const auto& g : given) out[g.first] = g.second;
    for (const auto& s : steps) {
      for (std::size_t i = 0; i < s.outputs.size() && i < s.intent.size(); ++i) out[s.outputs[i]] = s.intent[i];
    }
    return out;
  }
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws PlanError unless the plan is well formed: inputs bound before use
/// with the right sorts, fresh outputs, ratio terms in {1,2,3}, all three
/// vertices bound.
inline void check_plan(const ConstructionPlan& plan) {
  std::map<std::string, Sort> bound;
  for (const auto& [name, sig] : plan.given) {
    if (!bound.emplace(name, Sort::Point).second) throw PlanError("duplicate given " + name);
  }
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& s = plan.steps[i];
    const std::string where = "step " + std::to_string(i + 1) + ": ";
    auto sorts = step_input_sorts(s.kind);
    if (s.inputs.size() != sorts.size()) throw PlanError(where + "wrong number of inputs");
    for (std::size_t k = 0; k < sorts.size(); ++k) {
      auto it = bound.find(s.inputs[k]);
      if (it == bound.end()) throw PlanError(where + "input " + s.inputs[k] + " is not bound");
      if (it->second != sorts[k]) {
        throw PlanError(where + "input " + s.inputs[k] + " must be a " + std::string(sort_name(sorts[k])));
      }
    }
    if (s.kind == StepKind::RatioPoint) {
      if (s.num < 1 || s.num > 3 || s.den < 1 || s.den > 3) throw PlanError(where + "ratio terms must be in 1..3");
    }
    if (s.outputs.size() != step_output_count(s.kind)) throw PlanError(where + "wrong number of outputs");
    if (s.outputs.size() == 2 && s.outputs[0] == s.outputs[1]) throw PlanError(where + "outputs must be distinct");
    for (const auto& o : s.outputs) {
      if (!bound.emplace(o, step_output_sort(s.kind)).second) throw PlanError(where + "output " + o + " rebinds a name");
    }
  }
  for (const auto& v : {"pA", "pB", "pC"}) {
    auto it = plan.outputs.find(v);
    if (it == plan.outputs.end()) throw PlanError(std::string("vertex ") + v + " is not an output");
    auto b = bound.find(it->second);
    if (b == bound.end() || b->second != Sort::Point) throw PlanError("vertex output " + it->second + " is not a point");
  }
}

// ---------------------------------------------------------------------------
// Text format

inline std::string step_to_string(const ConstructionStep& s) {
  std::string out;
  for (std::size_t i = 0; i < s.outputs.size(); ++i) out += (i ? "," : "") + s.outputs[i];
  out += " = " + std::string(step_kind_name(s.kind)) + "(";
  for (std::size_t i = 0; i < s.inputs.size(); ++i) out += (i ? ", " : "") + s.inputs[i];
  if (s.kind == StepKind::RatioPoint) out += ", " + std::to_string(s.num) + ", " + std::to_string(s.den);
  out += ")";
  if (!s.intent.empty()) {
    out += " [";
    for (std::size_t i = 0; i < s.intent.size(); ++i) out += (i ? "," : "") + s.intent[i];
    out += "]";
  }
  if (s.provenance) out += " {" + to_string(*s.provenance, AtomStyle::Tptp) + "}";
  return out;
}

inline std::string plan_to_string(const ConstructionPlan& plan) {
  std::string out = "given";
  for (const auto& [name, sig] : plan.given) out += " " + name + "=" + sig;
  out += "\n";
  for (const auto& s : plan.steps) out += step_to_string(s) + "\n";
  out += "outputs";
  for (const auto& [vertex, name] : plan.outputs) out += " " + name + "=" + vertex;
  out += "\n";
  return out;
}

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

inline std::pair<std::string, std::string> binding(const std::string& word, std::size_t line) {
  auto eqp = word.find('=');
  if (eqp == std::string::npos || eqp == 0 || eqp + 1 == word.size()) {
    throw PlanError("line " + std::to_string(line) + ": expected name=object, got '" + word + "'");
  }
  return {word.substr(0, eqp), word.substr(eqp + 1)};
}

}  // namespace detail

/// Parses the plan text format. Throws PlanError with a line number.
inline ConstructionPlan parse_plan(std::string_view text) {
  ConstructionPlan plan;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool seen_given = false, seen_outputs = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto err = [&](const std::string& m) { return PlanError("line " + std::to_string(lineno) + ": " + m); };
    if (line.rfind("given", 0) == 0 && (line.size() == 5 || line[5] == ' ')) {
      if (seen_given) throw err("duplicate given line");
      seen_given = true;
      std::istringstream words(line.substr(5));
      std::string w;
      while (words >> w) plan.given.push_back(detail::binding(w, lineno));
      continue;
    }
    if (line.rfind("outputs", 0) == 0 && (line.size() == 7 || line[7] == ' ')) {
      if (seen_outputs) throw err("duplicate outputs line");
      seen_outputs = true;
      std::istringstream words(line.substr(7));
      std::string w;
      while (words >> w) {
        auto [name, vertex] = detail::binding(w, lineno);
        plan.outputs[vertex] = name;
      }
      continue;
    }
    ConstructionStep s;
    auto eqp = line.find('=');
    auto open = line.find('(');
    auto close = line.find(')');
    if (eqp == std::string::npos || open == std::string::npos || close == std::string::npos || open < eqp ||
        close < open) {
      throw err("expected '<out> = <Kind>(<args>)'");
    }
    s.outputs = detail::split(std::string_view(line).substr(0, eqp), ',');
    auto kind = step_kind_from_name(detail::trim(std::string_view(line).substr(eqp + 1, open - eqp - 1)));
    if (!kind) throw err("unknown step kind");
    s.kind = *kind;
    auto args = detail::split(std::string_view(line).substr(open + 1, close - open - 1), ',');
    if (s.kind == StepKind::RatioPoint) {
      if (args.size() != 4) throw err("RatioPoint takes two points and two integers");
      try {
        s.num = std::stoi(args[2]);
        s.den = std::stoi(args[3]);
      } catch (const std::exception&) {
        throw err("ratio terms must be integers");
      }
      args.resize(2);
    }
    s.inputs = args;
    std::string rest = detail::trim(std::string_view(line).substr(close + 1));
    if (!rest.empty() && rest.front() == '[') {
      auto end = rest.find(']');
      if (end == std::string::npos) throw err("unterminated intent list");
      s.intent = detail::split(std::string_view(rest).substr(1, end - 1), ',');
      rest = detail::trim(std::string_view(rest).substr(end + 1));
    }
    if (!rest.empty() && rest.front() == '{') {
      auto end = rest.rfind('}');
      if (end == std::string::npos) throw err("unterminated provenance");
      try {
        s.provenance = tptp::parse_atom(rest.substr(1, end - 1));
      } catch (const tptp::ParseError& e) {
        throw err(std::string("bad provenance atom: ") + e.what());
      }
      rest = detail::trim(std::string_view(rest).substr(end + 1));
    }
    if (!rest.empty()) throw err("trailing text '" + rest + "'");
    for (const auto& o : s.outputs) {
      if (o.empty()) throw err("empty output name");
    }
    plan.steps.push_back(std::move(s));
  }
  if (!seen_given) throw PlanError("missing given line");
  check_plan(plan);
  return plan;
}

// ---------------------------------------------------------------------------
// Natural-language rendering

inline std::string explain_step(const ConstructionStep& s) {
  const auto& in = s.inputs;
  switch (s.kind) {
    case StepKind::LineThrough: return "Construct the line " + s.outputs[0] + " = " + in[0] + in[1] + ".";
    case StepKind::PerpThrough:
      return "Construct the line " + s.outputs[0] + " such that it is perpendicular to the line " + in[0] +
             " and that it contains " + in[1] + ".";
    case StepKind::CircleCentered:
      return "Construct the circle " + s.outputs[0] + " centered at " + in[0] + " containing " + in[1] + ".";
    case StepKind::RatioPoint:
      return "Construct the point " + s.outputs[0] + " such that " + in[0] + in[1] + " : " + in[0] + s.outputs[0] +
             " = " + std::to_string(s.num) + ":" + std::to_string(s.den) + ".";
    case StepKind::IntersectLines:
      return "Let " + s.outputs[0] + " be the intersection of the lines " + in[0] + " and " + in[1] + ".";
    case StepKind::IntersectLineCircle:
      return "Let " + s.outputs[0] + " and " + s.outputs[1] + " be the intersections of the line " + in[0] +
             " and the circle " + in[1] + ".";
  }
  return {};
}

inline std::string explain_plan(const ConstructionPlan& plan) {
  if (plan.steps.empty()) return "Points A, B, C are given.\n";
  std::string out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    out += std::to_string(i + 1) + ". " + explain_step(plan.steps[i]) + "\n";
  }
  return out;
}

}  // namespace trics
