#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "trics/kb.hpp"
#include "trics/proof.hpp"

namespace trics {

struct CheckResult {
  bool valid = false;
  std::size_t step = 0;  // 1-based offending step, 0 for whole-proof problems
  std::string reason;

  explicit operator bool() const { return valid; }
};

namespace detail {

inline Atom mirror(const Atom& a) {
  Atom m = a;
  if (a.pred == Predicate::Eq) std::swap(m.args[0], m.args[1]);
  return m;
}

}  // namespace detail

/// Replays a proof against its task. Each Fact step must be a knowledge-base
/// fact; each Derive step must be a Horn instance of a task axiom whose cited
/// premises are earlier steps or hypotheses (an equality may be cited in
/// either orientation); witnesses must be fresh; the last step must close the
/// task's goal. Never throws.
inline CheckResult check_proof(const Proof& proof) {
  auto fail = [](std::size_t step, std::string why) { return CheckResult{false, step, std::move(why)}; };
  try {
    const ProofTask& task = proof.task;
    if (!proof.proved()) return fail(0, "proof is not marked proved");
    if (proof.steps.empty()) return fail(0, "empty proof");
    std::set<Atom> kb(task.kb_facts.begin(), task.kb_facts.end());
    std::set<std::string> known;
    for (const auto& [name, _] : task.constants) known.insert(name);
    for (const auto& a : task.hypotheses) {
      for (const auto& t : a.args) known.insert(t.name);
    }
    for (const auto& t : task.goal.args) known.insert(t.name);
    SortTable sorts = task.constants;

    auto cited = [&](const StepRef& r, std::size_t i, Atom& out) -> bool {
      if (r.kind == StepRef::Kind::Hyp) {
        if (r.index >= task.hypotheses.size()) return false;
        out = task.hypotheses[r.index];
        return true;
      }
      if (r.index >= i || proof.steps[r.index].kind == ProofStepKind::Qed) return false;
      out = proof.steps[r.index].atom;
      return true;
    };

    for (std::size_t i = 0; i < proof.steps.size(); ++i) {
      const ProofStep& s = proof.steps[i];
      const std::size_t n = i + 1;
      if (!s.atom.ground()) return fail(n, "atom is not ground");
      if (s.kind == ProofStepKind::Qed) {
        if (i + 1 != proof.steps.size()) return fail(n, "steps after the conclusion");
        if (s.atom != task.goal) return fail(n, "concludes " + to_string(s.atom) + " instead of the goal");
        Atom c;
        if (s.premises.size() != 1 || !cited(s.premises[0], i, c) || c != task.goal) {
          return fail(n, "goal is not established by the cited step");
        }
        return CheckResult{true, 0, ""};
      }
      if (s.kind == ProofStepKind::Fact) {
        if (!kb.count(s.atom)) return fail(n, to_string(s.atom) + " is not a knowledge-base fact");
        if (s.rule != fact_name(s.atom)) return fail(n, "wrong fact name " + s.rule);
        if (!s.premises.empty() || !s.instantiation.empty()) return fail(n, "fact with premises");
        continue;
      }

      // Derive and Witness.
      const CoherentRule* rule = nullptr;
      for (const auto& r : task.axioms) {
        if (r.name == s.rule) rule = &r;
      }
      CoherentRule refl;
      if (!rule && s.rule == "eq_refl" && s.kind == ProofStepKind::Derive) {
        refl = reflexivity_rule();
        rule = &refl;
      }
      if (!rule) return fail(n, "unknown axiom " + s.rule);
      if (rule->conclusions.size() != 1) return fail(n, "axiom " + s.rule + " is disjunctive");
      const Branch& branch = rule->conclusions[0];
      if (s.instantiation.size() != rule->universals.size()) return fail(n, "instantiation does not cover the universals");
      auto var_sorts = infer_variable_sorts(*rule);
      Substitution sub;
      for (std::size_t u = 0; u < rule->universals.size(); ++u) {
        const auto& [var, val] = s.instantiation[u];
        if (var != rule->universals[u]) return fail(n, "instantiation variable " + var + " out of order");
        if (!known.count(val)) return fail(n, "unknown constant " + val);
        auto vs = var_sorts.find(var);
        auto cs = sorts.find(val);
        if (vs != var_sorts.end() && cs != sorts.end() && vs->second != cs->second) {
          return fail(n, var + " -> " + val + " has the wrong sort");
        }
        sub[var] = val;
      }
      if (s.premises.size() != rule->premises.size()) return fail(n, "premise count does not match the axiom");
      for (std::size_t k = 0; k < rule->premises.size(); ++k) {
        Atom want = substitute(rule->premises[k], sub);
        Atom got;
        if (!cited(s.premises[k], i, got)) return fail(n, "premise " + std::to_string(k + 1) + " refers forward or out of range");
        if (got != want && !(want.pred == Predicate::Eq && got == detail::mirror(want))) {
          return fail(n, "premise " + std::to_string(k + 1) + " is " + to_string(got) + ", axiom needs " + to_string(want));
        }
      }
      if (s.kind == ProofStepKind::Derive) {
        if (!branch.existentials.empty()) return fail(n, "existential axiom used without a witness");
        if (!s.witnesses.empty()) return fail(n, "witnesses on a plain step");
        bool ok = false;
        for (const auto& a : branch.atoms) ok = ok || substitute(a, sub) == s.atom;
        if (!ok) return fail(n, to_string(s.atom) + " is not a conclusion of " + s.rule);
        continue;
      }
      if (s.witnesses.size() != branch.existentials.size() || branch.existentials.empty()) {
        return fail(n, "witness count does not match the axiom");
      }
      for (std::size_t w = 0; w < s.witnesses.size(); ++w) {
        const auto& name = s.witnesses[w];
        if (known.count(name)) return fail(n, "witness " + name + " is not fresh");
        if (name.empty() || looks_like_variable(name)) return fail(n, "bad witness name " + name);
        sub[branch.existentials[w]] = name;
      }
      bool ok = false;
      for (const auto& a : branch.atoms) ok = ok || substitute(a, sub) == s.atom;
      if (!ok) return fail(n, to_string(s.atom) + " is not the witnessed conclusion of " + s.rule);
      for (std::size_t w = 0; w < s.witnesses.size(); ++w) {
        known.insert(s.witnesses[w]);
        auto vs = var_sorts.find(branch.existentials[w]);
        if (vs != var_sorts.end()) sorts[s.witnesses[w]] = vs->second;
      }
    }
    return fail(0, "proof does not end with the goal");
  } catch (const std::exception& e) {
    return fail(0, std::string("malformed proof: ") + e.what());
  }
}

}  // namespace trics
