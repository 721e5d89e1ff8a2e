#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "trics/kb.hpp"
#include "trics/oracle.hpp"
#include "trics/plan.hpp"
#include "trics/tptp.hpp"

namespace trics {

class UnmappedObject : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Conjecture {
  std::string name;
  std::vector<Atom> hypotheses;
  std::vector<Atom> nondegeneracy;
  std::vector<Atom> goals;
  SortTable constants;  // KB constants plus the primed ones
};

struct ProofTask {
  std::string name;
  std::vector<CoherentRule> axioms;
  std::vector<Atom> hypotheses;  // cited by position in proofs
  std::vector<Atom> kb_facts;    // cited through explicit fact steps
  Atom goal;
  SortTable constants;
};

/// Name of the constructed copy of a significant object: sides become a1, b1,
/// c1 (for bc, ca, ab); everything else gets a 1 suffix. Vertices are never
/// primed because the construction outputs them directly.
inline std::string primed(const std::string& sig) {
  if (is_vertex(sig)) return sig;
  if (auto letter = side_letter(sig)) return *letter + "1";
  return sig + "1";
}

namespace detail {

inline void push_unique(std::vector<Atom>& v, Atom a) {
  if (std::find(v.begin(), v.end(), a) == v.end()) v.push_back(std::move(a));
}

}  // namespace detail

/// Whether two significant points coincide in some non-degenerate triangle:
/// right, isosceles or equilateral, at every vertex. A and H meet when the
/// angle at A is right; A and Ha never do.
inline bool may_coincide(const std::string& p, const std::string& q) {
  if (p == q) return true;
  static const std::vector<Diagram> special = [] {
    const std::vector<std::array<Vec2, 3>> shapes{
        {{{0, 0}, {4, 0}, {0, 3}}},      // right angle at the first vertex
        {{{0, 3}, {-2, 0}, {2, 0}}},     // isosceles with apex at the first vertex
        {{{0, 0}, {2, 0}, {1, std::sqrt(3.0)}}},
    };
    std::vector<Diagram> out;
    for (const auto& s : shapes) {
      for (int r = 0; r < 3; ++r) out.push_back(triangle_diagram(s[r], s[(r + 1) % 3], s[(r + 2) % 3]));
    }
    return out;
  }();
  for (const auto& d : special) {
    auto a = d.points.find(p), b = d.points.find(q);
    if (a == d.points.end() || b == d.points.end()) return false;
    if ((a->second - b->second).norm() < 1e-9) return true;
  }
  return false;
}

/// Hypotheses describing what each step constructs, nondegeneracy conditions
/// the construction relies on, and goals identifying every given non-vertex
/// point with its constructed copy.
inline Conjecture conjecture_from_plan(const ConstructionPlan& plan, const KnowledgeBase& kb) {
  check_plan(plan);
  Conjecture c;
  c.name = "th";
  for (const auto& [name, sig] : plan.given) c.name += "_" + name;
  c.constants = kb.sorts();

  std::map<std::string, std::string> rename;
  std::set<std::string> given;
  for (const auto& [name, sig] : plan.given) {
    auto s = kb.sort_of(sig);
    if (!s || *s != Sort::Point) throw UnmappedObject("given " + name + " is not a significant point");
    rename[name] = primed(sig);
    given.insert(name);
  }
  for (const auto& s : plan.steps) {
    if (s.intent.size() != s.outputs.size()) {
      throw UnmappedObject("step output " + (s.outputs.empty() ? std::string("?") : s.outputs[0]) +
                           " has no significant-object interpretation");
    }
    for (std::size_t i = 0; i < s.outputs.size(); ++i) {
      auto sort = kb.sort_of(s.intent[i]);
      if (!sort || *sort != step_output_sort(s.kind)) {
        throw UnmappedObject("plan object " + s.outputs[i] + " is interpreted as unknown object " + s.intent[i]);
      }
      rename[s.outputs[i]] = primed(s.intent[i]);
      c.constants[primed(s.intent[i])] = *sort;
    }
  }
  for (const auto& [name, sig] : plan.given) c.constants[primed(sig)] = Sort::Point;
  auto r = [&](const std::string& n) { return rename.at(n); };
  auto atom = [](Predicate p, std::initializer_list<std::string> args) {
    Atom a{p, {}};
    for (const auto& x : args) a.args.push_back(Term::constant(x));
    return a;
  };

  auto& h = c.hypotheses;
  for (const auto& s : plan.steps) {
    const auto& in = s.inputs;
    const auto& out = s.outputs;
    switch (s.kind) {
      case StepKind::LineThrough:
        detail::push_unique(h, atom(Predicate::Inc, {r(in[0]), r(out[0])}));
        detail::push_unique(h, atom(Predicate::Inc, {r(in[1]), r(out[0])}));
        // The line needs distinct inputs. Two given points that can never
        // coincide need no condition; the others get one.
        if (!given.count(in[0]) || !given.count(in[1]) ||
            may_coincide(plan.interpretation().at(in[0]), plan.interpretation().at(in[1]))) {
          detail::push_unique(c.nondegeneracy, atom(Predicate::Neq, {r(in[0]), r(in[1])}));
        }
        break;
      case StepKind::PerpThrough:
        detail::push_unique(h, atom(Predicate::Perp, {r(in[0]), r(out[0])}));
        detail::push_unique(h, atom(Predicate::Inc, {r(in[1]), r(out[0])}));
        break;
      case StepKind::CircleCentered:
        detail::push_unique(h, atom(Predicate::IncC, {r(in[1]), r(out[0])}));
        detail::push_unique(h, atom(Predicate::Center, {r(in[0]), r(out[0])}));
        break;
      case StepKind::IntersectLines:
        detail::push_unique(h, atom(Predicate::Inc, {r(out[0]), r(in[0])}));
        detail::push_unique(h, atom(Predicate::Inc, {r(out[0]), r(in[1])}));
        break;
      case StepKind::IntersectLineCircle:
        for (const auto& o : out) {
          detail::push_unique(h, atom(Predicate::IncC, {r(o), r(in[1])}));
          detail::push_unique(h, atom(Predicate::Inc, {r(o), r(in[0])}));
        }
        detail::push_unique(c.nondegeneracy, atom(Predicate::Neq, {r(out[0]), r(out[1])}));
        break;
      case StepKind::RatioPoint: {
        if (!s.provenance) throw UnmappedObject("ratio point " + out[0] + " has no source ratio fact");
        // The source fact is over significant ids; rename it to the plan's copies.
        std::map<std::string, std::string> sig_to_plan;
        for (const auto& [name, sig] : plan.interpretation()) sig_to_plan[sig] = name;
        Atom a = *s.provenance;
        for (auto& t : a.args) {
          auto it = sig_to_plan.find(t.name);
          if (it == sig_to_plan.end()) throw UnmappedObject("ratio fact mentions unconstructed " + t.name);
          t.name = r(it->second);
        }
        detail::push_unique(h, a);
        break;
      }
    }
  }
  const auto& v = vertex_points();
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) detail::push_unique(c.nondegeneracy, neq(v[i], v[j]));
  }
  for (const auto& [name, sig] : plan.given) {
    if (!is_vertex(sig)) c.goals.push_back(eq(sig, primed(sig)));
  }
  return c;
}

/// Hypotheses plus the nondegeneracy conditions the knowledge base does not
/// already state.
inline std::vector<Atom> task_hypotheses(const Conjecture& c, const KnowledgeBase& kb) {
  std::vector<Atom> out = c.hypotheses;
  for (const auto& a : c.nondegeneracy) {
    if (!kb.has_fact(a)) detail::push_unique(out, a);
  }
  return out;
}

/// Recall-oriented relevance filter. A rule is kept once every predicate of
/// its premises is reachable; its conclusions then become reachable. An
/// existential rule without premises is kept when some kept rule consumes
/// what it produces. Congruence axioms come along for every reachable
/// predicate.
inline std::vector<CoherentRule> select_axioms(const ProofTask& task, const KnowledgeBase& kb) {
  std::set<Predicate> reach;
  for (const auto& a : task.hypotheses) reach.insert(a.pred);
  for (const auto& a : task.kb_facts) reach.insert(a.pred);
  reach.insert(task.goal.pred);
  std::set<std::string> congruence;
  for (const auto& r : congruence_rules(congruence_signature())) congruence.insert(r.name);

  std::set<std::string> chosen;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : kb.rules()) {
      if (chosen.count(r.name) || congruence.count(r.name) || r.premises.empty()) continue;
      bool ok = std::all_of(r.premises.begin(), r.premises.end(), [&](const Atom& a) { return reach.count(a.pred); });
      if (!ok) continue;
      chosen.insert(r.name);
      changed = true;
      for (const auto& b : r.conclusions) {
        for (const auto& a : b.atoms) reach.insert(a.pred);
      }
    }
    for (const auto& r : kb.rules()) {
      if (chosen.count(r.name) || !r.premises.empty() || !r.existential()) continue;
      std::set<Predicate> produced;
      for (const auto& b : r.conclusions) {
        for (const auto& a : b.atoms) produced.insert(a.pred);
      }
      bool consumed = false;
      for (const auto& q : kb.rules()) {
        if (!chosen.count(q.name)) continue;
        for (const auto& p : q.premises) consumed = consumed || produced.count(p.pred);
      }
      if (!consumed) continue;
      chosen.insert(r.name);
      changed = true;
      for (auto p : produced) reach.insert(p);
    }
  }
  std::vector<CoherentRule> out;
  for (const auto& r : kb.rules()) {
    if (chosen.count(r.name)) {
      out.push_back(r);
      continue;
    }
    if (!congruence.count(r.name)) continue;
    bool keep = r.name == "eq_sym" || r.name == "eqnativeEqSub0";
    if (!keep) keep = reach.count(r.premises.front().pred) > 0;
    if (keep) out.push_back(r);
  }
  return out;
}

/// One task per goal, each with the full hypothesis and fact set.
inline std::vector<ProofTask> split_goals(const Conjecture& c, const KnowledgeBase& kb) {
  std::vector<ProofTask> out;
  for (std::size_t i = 0; i < c.goals.size(); ++i) {
    ProofTask t;
    t.name = c.name + std::to_string(i);
    t.hypotheses = task_hypotheses(c, kb);
    t.kb_facts = kb.facts();
    t.goal = c.goals[i];
    t.constants = c.constants;
    t.axioms = select_axioms(t, kb);
    out.push_back(std::move(t));
  }
  return out;
}

/// A task for an arbitrary goal over the conjecture's hypotheses, used by the
/// staged workflow. Extra facts (earlier stage conclusions) join the
/// hypotheses. Uses every KB rule.
inline ProofTask stage_task(const std::string& name, const Conjecture& c, const KnowledgeBase& kb, const Atom& goal,
                            const std::vector<Atom>& extra) {
  ProofTask t;
  t.name = name;
  t.hypotheses = task_hypotheses(c, kb);
  for (const auto& a : extra) detail::push_unique(t.hypotheses, a);
  t.kb_facts = kb.facts();
  t.goal = goal;
  t.constants = c.constants;
  t.axioms = kb.rules();
  return t;
}

// ---------------------------------------------------------------------------
// TPTP export

inline tptp::FofUnit conjecture_unit(const Conjecture& c, const KnowledgeBase& kb) {
  using tptp::Formula;
  std::vector<Formula> hyps, goals;
  for (const auto& a : task_hypotheses(c, kb)) hyps.push_back(Formula::atomic(a));
  for (const auto& a : c.goals) goals.push_back(Formula::atomic(a));
  Formula concl = tptp::conjunction(std::move(goals));
  Formula f = hyps.empty() ? concl
                           : Formula::binary(Formula::Kind::Implies, tptp::conjunction(std::move(hyps)), concl);
  return tptp::FofUnit{c.name, tptp::Role::Conjecture, f};
}

/// Axioms (KB facts and the union of selected rules over all goals) followed by
/// the conjecture.
inline std::vector<tptp::FofUnit> tptp_problem(const Conjecture& c, const KnowledgeBase& kb) {
  std::vector<tptp::FofUnit> out;
  for (const auto& f : kb.facts()) out.push_back(tptp::fact_unit(f));
  std::set<std::string> used;
  auto tasks = split_goals(c, kb);
  if (tasks.empty()) {
    ProofTask t;
    t.hypotheses = task_hypotheses(c, kb);
    t.kb_facts = kb.facts();
    t.goal = eq("pA", "pA");
    tasks.push_back(t);
    tasks.back().axioms = select_axioms(tasks.back(), kb);
  }
  for (const auto& t : tasks) {
    for (const auto& r : t.axioms) used.insert(r.name);
  }
  for (const auto& r : kb.rules()) {
    if (used.count(r.name)) out.push_back(tptp::rule_unit(r));
  }
  out.push_back(conjecture_unit(c, kb));
  return out;
}

}  // namespace trics
