#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trics/kb.hpp"
#include "trics/oracle.hpp"

namespace trics {

struct Counterexample {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Substitution binding;
  Diagram diagram;
};

struct RuleResult {
  std::string rule;
  bool passed = true;
  std::size_t instances = 0;  // premise-satisfying instances checked
  std::optional<Counterexample> counterexample;
};

struct ValidationReport {
  std::vector<RuleResult> rules;
  std::size_t facts_checked = 0;
  std::vector<std::string> false_facts;

  std::size_t failures() const {
    std::size_t n = false_facts.size();
    for (const auto& r : rules) n += r.passed ? 0 : 1;
    return n;
  }

  const RuleResult* find(std::string_view name) const {
    for (const auto& r : rules) {
      if (r.rule == name) return &r;
    }
    return nullptr;
  }

  std::string table() const {
    std::string out;
    for (const auto& r : rules) {
      out += (r.passed ? "pass  " : "FAIL  ") + r.rule + "  instances=" + std::to_string(r.instances);
      if (r.counterexample) {
        out += "  seed=" + std::to_string(r.counterexample->seed) + " {";
        bool first = true;
        for (const auto& [v, t] : r.counterexample->binding) {
          out += (first ? "" : ", ") + v + "->" + t;
          first = false;
        }
        out += "}";
      }
      out += "\n";
    }
    for (const auto& f : false_facts) out += "FAIL  fact " + f + "\n";
    out += std::to_string(rules.size()) + " rules, " + std::to_string(facts_checked) + " facts, " +
           std::to_string(failures()) + " failures\n";
    return out;
  }
};

namespace detail {

class RuleModelChecker {
 public:
  RuleModelChecker(const CoherentRule& rule, Diagram& d, double tol) : rule_(rule), d_(d), tol_(tol) {
    sorts_ = infer_variable_sorts(rule);
    for (const auto& [name, _] : d.points) by_sort_[0].push_back(name);
    for (const auto& [name, _] : d.lines) by_sort_[1].push_back(name);
    for (const auto& [name, _] : d.circles) by_sort_[2].push_back(name);
  }

  /// Calls `visit` for every binding of the universals satisfying all
  /// premises; stops early when visit returns false.
  void for_each_instance(const std::function<bool(const Substitution&)>& visit) {
    Substitution s;
    stop_ = false;
    match(0, s, visit);
  }

  bool conclusion_holds(const Substitution& s) {
    for (const auto& b : rule_.conclusions) {
      if (branch_holds(b, s)) return true;
    }
    return false;
  }

 private:
  std::vector<std::string> candidates(const std::string& var) const {
    auto it = sorts_.find(var);
    if (it != sorts_.end()) return by_sort_[static_cast<int>(it->second)];
    std::vector<std::string> all;
    for (const auto& v : by_sort_) all.insert(all.end(), v.begin(), v.end());
    return all;
  }

  bool holds(const Atom& a) const {
    if (is_equality(a.pred) && d_.sort_of(a.args[0].name) != d_.sort_of(a.args[1].name)) return false;
    return eval_atom(a, d_, tol_);
  }

  // Binds the unbound variables of atom `a` one by one, then evaluates it.
  void bind_atom(const Atom& a, std::size_t arg, Substitution& s, const std::function<void()>& k) {
    if (stop_) return;
    if (arg == a.args.size()) {
      if (holds(substitute(a, s))) k();
      return;
    }
    const Term& t = a.args[arg];
    if (!t.variable || s.count(t.name)) {
      bind_atom(a, arg + 1, s, k);
      return;
    }
    for (const auto& c : candidates(t.name)) {
      s[t.name] = c;
      bind_atom(a, arg + 1, s, k);
      s.erase(t.name);
      if (stop_) return;
    }
  }

  void match(std::size_t i, Substitution& s, const std::function<bool(const Substitution&)>& visit) {
    if (stop_) return;
    if (i == rule_.premises.size()) {
      bind_rest(0, s, visit);
      return;
    }
    bind_atom(rule_.premises[i], 0, s, [&] { match(i + 1, s, visit); });
  }

  // Universals not constrained by any premise range over all objects.
  void bind_rest(std::size_t k, Substitution& s, const std::function<bool(const Substitution&)>& visit) {
    if (stop_) return;
    if (k == rule_.universals.size()) {
      if (!visit(s)) stop_ = true;
      return;
    }
    const auto& v = rule_.universals[k];
    if (s.count(v)) {
      bind_rest(k + 1, s, visit);
      return;
    }
    for (const auto& c : candidates(v)) {
      s[v] = c;
      bind_rest(k + 1, s, visit);
      s.erase(v);
      if (stop_) return;
    }
  }

  bool branch_holds(const Branch& b, const Substitution& s) {
    if (b.existentials.empty()) {
      for (const auto& a : b.atoms) {
        if (!holds(substitute(a, s))) return false;
      }
      return true;
    }
    return witness_search(b, 0, s) || analytic_witness(b, s);
  }

  bool witness_search(const Branch& b, std::size_t k, Substitution s) {
    if (k == b.existentials.size()) {
      for (const auto& a : b.atoms) {
        if (!holds(substitute(a, s))) return false;
      }
      return true;
    }
    const auto& v = b.existentials[k];
    for (const auto& c : candidates(v)) {
      s[v] = c;
      if (witness_search(b, k + 1, s)) return true;
    }
    return false;
  }

  // A single existential line through the bound points it must contain.
  bool analytic_witness(const Branch& b, const Substitution& s) {
    if (b.existentials.size() != 1) return false;
    const std::string& v = b.existentials[0];
    std::vector<Vec2> on;
    for (const auto& a : b.atoms) {
      Atom g = substitute(a, s);
      if (g.pred == Predicate::Line && a.args[2].name == v) {
        on.push_back(d_.points.at(g.args[0].name));
        on.push_back(d_.points.at(g.args[1].name));
      } else if (g.pred == Predicate::Inc && a.args[1].name == v) {
        on.push_back(d_.points.at(g.args[0].name));
      }
    }
    if (on.empty()) return false;
    Vec2 p = on[0], q = p + Vec2{1, 0};
    for (const auto& r : on) {
      if ((r - p).norm() > tol_) q = r;
    }
    static const std::string scratch = "__witness";
    d_.lines[scratch] = geom::through(p, q);
    Substitution t = s;
    t[v] = scratch;
    bool ok = true;
    for (const auto& a : b.atoms) ok = ok && holds(substitute(a, t));
    d_.lines.erase(scratch);
    return ok;
  }

  const CoherentRule& rule_;
  Diagram& d_;
  double tol_;
  SortTable sorts_;
  std::array<std::vector<std::string>, 3> by_sort_;
  bool stop_ = false;
};

}  // namespace detail

/// Model-checks every fact and rule of the knowledge base on random
/// non-degenerate triangles.
inline ValidationReport validate_kb(const KnowledgeBase& kb, std::size_t trials, std::uint64_t seed,
                                    double tol = 1e-7) {
  if (trials == 0) throw std::invalid_argument("validate_kb needs at least one trial");
  ValidationReport rep;
  std::vector<Diagram> diagrams;
  for (std::size_t i = 0; i < trials; ++i) diagrams.push_back(sample_triangle(trial_seed(seed, i)));
  for (const auto& f : kb.facts()) {
    ++rep.facts_checked;
    for (const auto& d : diagrams) {
      if (!eval_atom(f, d, tol)) {
        rep.false_facts.push_back(to_string(f));
        break;
      }
    }
  }
  for (const auto& rule : kb.rules()) {
    RuleResult res;
    res.rule = rule.name;
    for (std::size_t i = 0; i < trials && res.passed; ++i) {
      Diagram d = diagrams[i];
      detail::RuleModelChecker checker(rule, d, tol);
      checker.for_each_instance([&](const Substitution& s) {
        ++res.instances;
        if (checker.conclusion_holds(s)) return true;
        res.passed = false;
        res.counterexample = Counterexample{i, trial_seed(seed, i), s, diagrams[i]};
        return false;
      });
    }
    rep.rules.push_back(std::move(res));
  }
  return rep;
}

}  // namespace trics
