#pragma once

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "trics/trics.hpp"

namespace trics::fixture {

inline std::string data_file(const std::string& name) {
  std::ifstream in(std::string(TRICS_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing data file " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ConstructionPlan solved(const std::vector<std::string>& pts, const KnowledgeBase& kb) {
  auto r = solve(make_problem(pts), kb);
  if (!std::holds_alternative<ConstructionPlan>(r)) throw std::runtime_error("problem unsolved");
  return std::get<ConstructionPlan>(r);
}

// Independent coordinates for a reference triangle, worked out by hand.
struct Reference {
  Vec2 a{0, 0}, b{4, 0}, c{1, 3};
  Vec2 o{2, 1}, g{5.0 / 3.0, 1}, h{1, 1};
  Vec2 ma{2.5, 1.5}, ha{2, 2};
};

/// A diagram that interprets every constant of a conjecture built from `plan`:
/// the true significant objects of the triangle from `seed`, plus each primed
/// object at the coordinates the plan actually constructs for it.
inline Diagram hypothesis_diagram(const ConstructionPlan& plan, std::uint64_t seed) {
  Diagram truth = sample_triangle(seed);
  std::map<std::string, Vec2> given;
  for (const auto& [name, sig] : plan.given) given[name] = truth.points.at(sig);
  Diagram built = execute_plan(plan, given);
  Diagram d = truth;
  for (const auto& [name, sig] : plan.interpretation()) {
    std::string c = primed(sig);
    if (c == sig) continue;  // vertices keep their own names and coordinates
    if (auto p = built.points.find(name); p != built.points.end()) d.points[c] = p->second;
    if (auto l = built.lines.find(name); l != built.lines.end()) d.lines[c] = l->second;
    if (auto k = built.circles.find(name); k != built.circles.end()) d.circles[c] = k->second;
  }
  return d;
}

/// Binds the witnesses a proof introduces. The only existential axiom is
/// ex_line, whose witness is the line through its two points.
inline void bind_witnesses(const Proof& p, Diagram& d) {
  for (const auto& s : p.steps) {
    if (s.kind != ProofStepKind::Witness) continue;
    if (s.atom.pred != Predicate::Line || s.witnesses.size() != 1) {
      throw std::runtime_error("no numeric model for witness step using " + s.rule);
    }
    Vec2 a = d.points.at(s.atom.args[0].name), b = d.points.at(s.atom.args[1].name);
    d.lines[s.witnesses[0]] = geom::through(a, b);
  }
}

inline std::vector<Proof> golden_proofs(const KnowledgeBase& kb) {
  std::vector<Proof> out;
  auto c1 = conjecture_from_plan(solved({"A", "Ha", "O"}, kb), kb);
  for (const auto& t : split_goals(c1, kb)) out.push_back(prove(t));
  auto c2 = conjecture_from_plan(solved({"A", "O", "G"}, kb), kb);
  for (auto& s : prove_staged(c2, kb, parse_stages(data_file("th_A_O_G.stages")))) out.push_back(std::move(s.proof));
  return out;
}

/// Every single-field mutation of a proof: each step's rule name, each
/// instantiation value, each premise reference, each atom argument and each
/// witness name, changed one at a time.
inline std::vector<std::pair<std::string, Proof>> mutations(const Proof& p) {
  std::vector<std::pair<std::string, Proof>> out;
  std::vector<std::string> consts;
  for (const auto& [name, _] : p.task.constants) consts.push_back(name);
  auto other = [&](const std::string& v) {
    for (const auto& c : consts) {
      if (c != v && p.task.constants.at(c) == (p.task.constants.count(v) ? p.task.constants.at(v) : Sort::Point)) return c;
    }
    return consts.front() == v ? consts.back() : consts.front();
  };
  std::vector<std::string> rules;
  for (const auto& r : p.task.axioms) rules.push_back(r.name);
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    std::string at = "step " + std::to_string(i + 1);
    if (s.kind != ProofStepKind::Qed) {
      Proof m = p;
      auto pos = std::find(rules.begin(), rules.end(), s.rule);
      m.steps[i].rule = pos == rules.end() || pos + 1 == rules.end() ? rules.front() : *(pos + 1);
      if (m.steps[i].rule == s.rule) m.steps[i].rule = rules.back();
      out.emplace_back(at + " rule", std::move(m));
      for (std::size_t a = 0; a < s.atom.args.size(); ++a) {
        Proof m2 = p;
        m2.steps[i].atom.args[a].name = other(s.atom.args[a].name);
        out.emplace_back(at + " atom arg " + std::to_string(a), std::move(m2));
      }
    }
    for (std::size_t k = 0; k < s.instantiation.size(); ++k) {
      Proof m = p;
      m.steps[i].instantiation[k].second = other(s.instantiation[k].second);
      out.emplace_back(at + " instantiation " + s.instantiation[k].first, std::move(m));
    }
    for (std::size_t k = 0; k < s.premises.size(); ++k) {
      Proof m = p;
      StepRef& r = m.steps[i].premises[k];
      if (r.kind == StepRef::Kind::Hyp) {
        r.index = (r.index + 1) % p.task.hypotheses.size();
      } else {
        r = r.index > 0 ? StepRef::step(r.index - 1) : StepRef::hyp(0);
      }
      out.emplace_back(at + " premise " + std::to_string(k), std::move(m));
    }
    for (std::size_t w = 0; w < s.witnesses.size(); ++w) {
      Proof m = p;
      m.steps[i].witnesses[w] = other(s.witnesses[w]);
      out.emplace_back(at + " witness name", std::move(m));
    }
  }
  return out;
}

// Random formulas over the geometry signature; variables are only used under
// a quantifier that binds them.
class FormulaGenerator {
 public:
  explicit FormulaGenerator(std::uint64_t seed) : rng_(seed) {}

  tptp::FofUnit unit(std::size_t i) {
    tptp::FofUnit u;
    u.name = "u" + std::to_string(i);
    u.role = pick(2) ? tptp::Role::Axiom : tptp::Role::Conjecture;
    u.formula = formula(3, {});
    return u;
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::string term(Sort s, const std::vector<std::string>& vars) {
    static const std::vector<std::string> points{"pA", "pB", "pC", "pHa", "pOc", "pG", "pMa1", "w"};
    static const std::vector<std::string> lines{"bc", "ha", "a1", "bisa", "l"};
    static const std::vector<std::string> circles{"cc", "cc1"};
    if (!vars.empty() && pick(2)) return vars[pick(vars.size())];
    const auto& pool = s == Sort::Point ? points : s == Sort::Line ? lines : circles;
    return pool[pick(pool.size())];
  }

  Atom atom(const std::vector<std::string>& vars) {
    auto p = static_cast<Predicate>(pick(kPredicateCount));
    Atom a{p, {}};
    Sort generic = static_cast<Sort>(pick(3));
    for (std::size_t k = 0; k < arity(p); ++k) {
      auto s = argument_sort(p, k).value_or(generic);
      std::string n = term(s, vars);
      a.args.push_back(Term{n, looks_like_variable(n)});
    }
    return a;
  }

  tptp::Formula formula(int depth, std::vector<std::string> vars) {
    std::size_t k = depth <= 0 ? 0 : pick(9);
    switch (k) {
      case 0:
      case 1: return tptp::Formula::atomic(atom(vars));
      case 2: return tptp::Formula::negation(formula(depth - 1, vars));
      case 3:
      case 4: {
        std::vector<tptp::Formula> fs;
        for (std::size_t i = 0, n = 2 + pick(3); i < n; ++i) fs.push_back(formula(depth - 1, vars));
        return tptp::Formula::nary(k == 3 ? tptp::Formula::Kind::And : tptp::Formula::Kind::Or, std::move(fs));
      }
      case 5: return tptp::Formula::binary(tptp::Formula::Kind::Implies, formula(depth - 1, vars), formula(depth - 1, vars));
      case 6: return tptp::Formula::binary(tptp::Formula::Kind::Iff, formula(depth - 1, vars), formula(depth - 1, vars));
      case 7:
      case 8: {
        std::vector<std::string> bound;
        for (std::size_t i = 0, n = 1 + pick(2); i < n; ++i) {
          bound.push_back("V" + std::to_string(vars.size() + i));
        }
        vars.insert(vars.end(), bound.begin(), bound.end());
        return tptp::Formula::quantified(k == 7 ? tptp::Formula::Kind::Forall : tptp::Formula::Kind::Exists, bound, formula(depth - 1, vars));
      }
    }
    return tptp::Formula::truth(pick(2));
  }

  std::mt19937_64 rng_;
};

}  // namespace trics::fixture
