#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trics/atom.hpp"

namespace trics {

enum class ObjectKind : std::uint8_t { GivenConstant, SignificantConstant, FreshWitness };

struct ObjectId {
  std::string name;
  Sort sort = Sort::Point;
  ObjectKind kind = ObjectKind::SignificantConstant;

  auto operator<=>(const ObjectId&) const = default;
};

/// One disjunct of a coherent rule conclusion: exists `existentials`. /\ atoms.
struct Branch {
  std::vector<std::string> existentials;
  std::vector<Atom> atoms;

  auto operator<=>(const Branch&) const = default;
};

/// forall universals. premises => branch_1 \/ ... \/ branch_k
struct CoherentRule {
  std::string name;
  std::vector<std::string> universals;
  std::vector<Atom> premises;
  std::vector<Branch> conclusions;

  auto operator<=>(const CoherentRule&) const = default;

  bool existential() const {
    for (const auto& b : conclusions) {
      if (!b.existentials.empty()) return true;
    }
    return false;
  }
};

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Infers the sort of every variable of `rule` from predicate argument
/// positions, propagating through equalities. Variables that only meet other
/// variables through `=` / `!=` stay generic and are absent from the result.
/// Throws RuleError on a conflict.
inline SortTable infer_variable_sorts(const CoherentRule& rule) {
  SortTable sorts;
  std::vector<const Atom*> atoms;
  for (const auto& a : rule.premises) atoms.push_back(&a);
  for (const auto& b : rule.conclusions) {
    for (const auto& a : b.atoms) atoms.push_back(&a);
  }
  auto assign = [&](const std::string& v, Sort s) {
    auto [it, inserted] = sorts.emplace(v, s);
    if (!inserted && it->second != s) {
      throw RuleError("rule " + rule.name + ": variable " + v + " used as both " +
                      std::string(sort_name(it->second)) + " and " + std::string(sort_name(s)));
    }
    return inserted;
  };
  for (const Atom* a : atoms) {
    if (is_equality(a->pred)) continue;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
      if (a->args[i].variable) assign(a->args[i].name, *argument_sort(a->pred, i));
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Atom* a : atoms) {
      if (!is_equality(a->pred)) continue;
      const auto& l = a->args[0];
      const auto& r = a->args[1];
      auto lookup = [&](const Term& t) -> std::optional<Sort> {
        auto it = sorts.find(t.name);
        if (!t.variable || it == sorts.end()) return std::nullopt;
        return it->second;
      };
      auto ls = lookup(l);
      auto rs = lookup(r);
      if (l.variable && r.variable) {
        if (ls && !rs) changed |= assign(r.name, *ls);
        if (rs && !ls) changed |= assign(l.name, *rs);
        if (ls && rs && *ls != *rs) assign(l.name, *rs);
      }
    }
  }
  return sorts;
}

/// Checks the structural invariants of a rule: every conclusion variable is a
/// universal or an existential of its branch, every premise variable is a
/// universal. Returns an error message or nullopt.
inline std::optional<std::string> rule_error(const CoherentRule& rule) {
  std::set<std::string> universals(rule.universals.begin(), rule.universals.end());
  if (universals.size() != rule.universals.size()) return "duplicate universal in " + rule.name;
  for (const auto& p : rule.premises) {
    for (const auto& t : p.args) {
      if (t.variable && !universals.count(t.name)) {
        return "premise variable " + t.name + " of " + rule.name + " is not quantified";
      }
    }
  }
  if (rule.conclusions.empty()) return "rule " + rule.name + " has no conclusion";
  for (const auto& b : rule.conclusions) {
    std::set<std::string> ex(b.existentials.begin(), b.existentials.end());
    for (const auto& e : ex) {
      if (universals.count(e)) return "existential " + e + " shadows a universal in " + rule.name;
    }
    for (const auto& a : b.atoms) {
      for (const auto& t : a.args) {
        if (t.variable && !universals.count(t.name) && !ex.count(t.name)) {
          return "conclusion variable " + t.name + " of " + rule.name + " is not quantified";
        }
      }
    }
  }
  try {
    infer_variable_sorts(rule);
  } catch (const RuleError& e) {
    return e.what();
  }
  return std::nullopt;
}

using Substitution = std::map<std::string, std::string, std::less<>>;

inline Atom substitute(const Atom& a, const Substitution& s) {
  Atom out = a;
  for (auto& t : out.args) {
    if (!t.variable) continue;
    auto it = s.find(t.name);
    if (it != s.end()) t = Term::constant(it->second);
  }
  return out;
}

/// Canonical axiom name of a ground fact, e.g. inc_c_pA_cc or neq_pA_pB.
inline std::string fact_name(const Atom& a) {
  std::string n = a.pred == Predicate::Eq    ? "eq"
                  : a.pred == Predicate::Neq ? "neq"
                                             : std::string(predicate_name(a.pred));
  for (const auto& t : a.args) n += "_" + t.name;
  return n;
}

class KnowledgeBase {
 public:
  void add_object(ObjectId o) {
    if (sorts_.count(o.name)) throw RuleError("duplicate object " + o.name);
    sorts_.emplace(o.name, o.sort);
    objects_.push_back(std::move(o));
  }

  void add_fact(Atom a) {
    if (!a.ground()) throw RuleError("fact is not ground: " + to_string(a));
    if (auto err = sort_error(a, sorts_)) throw RuleError(*err);
    if (fact_set_.insert(a).second) facts_.push_back(std::move(a));
  }

  void add_rule(CoherentRule r) {
    if (auto err = rule_error(r)) throw RuleError(*err);
    if (rule_index_.count(r.name)) throw RuleError("duplicate rule " + r.name);
    for (const auto* atoms : {&r.premises}) {
      for (const auto& a : *atoms) check_constants(a, r.name);
    }
    for (const auto& b : r.conclusions) {
      for (const auto& a : b.atoms) check_constants(a, r.name);
    }
    rule_index_.emplace(r.name, rules_.size());
    rules_.push_back(std::move(r));
  }

  const std::vector<ObjectId>& objects() const { return objects_; }
  const std::vector<Atom>& facts() const { return facts_; }
  const std::vector<CoherentRule>& rules() const { return rules_; }
  const SortTable& sorts() const { return sorts_; }

  bool has_fact(const Atom& a) const { return fact_set_.count(a) > 0; }

  const CoherentRule* find_rule(std::string_view name) const {
    auto it = rule_index_.find(name);
    return it == rule_index_.end() ? nullptr : &rules_[it->second];
  }

  std::optional<Sort> sort_of(std::string_view name) const {
    auto it = sorts_.find(name);
    if (it == sorts_.end()) return std::nullopt;
    return it->second;
  }

  const ObjectId* find_object(std::string_view name) const {
    for (const auto& o : objects_) {
      if (o.name == name) return &o;
    }
    return nullptr;
  }

 private:
  void check_constants(const Atom& a, const std::string& rule) const {
    for (const auto& t : a.args) {
      if (!t.variable && !sorts_.count(t.name)) {
        throw RuleError("rule " + rule + " mentions undeclared constant " + t.name);
      }
    }
  }

  std::vector<ObjectId> objects_;
  SortTable sorts_;
  std::vector<Atom> facts_;
  std::set<Atom> fact_set_;
  std::vector<CoherentRule> rules_;
  std::map<std::string, std::size_t, std::less<>> rule_index_;
};

// ---------------------------------------------------------------------------
// Significant objects of triangle ABC.

/// The twelve significant points in canonical order. The order fixes corpus
/// canonicalization and problem names (th_A_O_G rather than th_A_G_O).
inline const std::vector<std::string>& significant_points() {
  static const std::vector<std::string> pts{"pA",  "pB",  "pC",  "pMa", "pMb", "pMc",
                                            "pHa", "pHb", "pHc", "pOc", "pG",  "pH"};
  return pts;
}

inline const std::vector<std::string>& significant_lines() {
  static const std::vector<std::string> lines{"ab",   "bc",   "ca",   "ha",     "hb",     "hc",
                                              "bisa", "bisb", "bisc", "ma_med", "mb_med", "mc_med"};
  return lines;
}

inline const std::vector<std::string>& vertex_points() {
  static const std::vector<std::string> v{"pA", "pB", "pC"};
  return v;
}

inline bool is_vertex(std::string_view p) { return p == "pA" || p == "pB" || p == "pC"; }

/// Short user-facing names: A, Ma, Ha, O, G, H.
inline std::string short_name(std::string_view sig) {
  if (sig == "pOc") return "O";
  if (sig.size() > 1 && sig.front() == 'p') return std::string(sig.substr(1));
  return std::string(sig);
}

inline std::optional<std::string> significant_from_short(std::string_view s) {
  for (const auto& p : significant_points()) {
    if (short_name(p) == s || p == s) return p;
  }
  return std::nullopt;
}

namespace detail {

struct TriangleIndex {
  std::string letter;  // a
  std::string vertex;  // pA
  std::string u, w;    // pB, pC: the other two vertices
  std::string side;    // bc
  std::string alt;     // ha
  std::string foot;    // pHa
  std::string mid;     // pMa
  std::string bis;     // bisa
  std::string med;     // ma_med
};

inline const std::array<TriangleIndex, 3>& triangle_indices() {
  static const std::array<TriangleIndex, 3> idx{{
      {"a", "pA", "pB", "pC", "bc", "ha", "pHa", "pMa", "bisa", "ma_med"},
      {"b", "pB", "pC", "pA", "ca", "hb", "pHb", "pMb", "bisb", "mb_med"},
      {"c", "pC", "pA", "pB", "ab", "hc", "pHc", "pMc", "bisc", "mc_med"},
  }};
  return idx;
}

inline Atom atom(Predicate p, std::initializer_list<std::string_view> names) { return make_atom(p, names); }

inline CoherentRule horn(std::string name, std::vector<std::string> universals, std::vector<Atom> premises,
                         std::vector<Atom> conclusion) {
  return CoherentRule{std::move(name), std::move(universals), std::move(premises), {Branch{{}, std::move(conclusion)}}};
}

}  // namespace detail

/// Side line of a vertex letter or the name of the side opposite a vertex.
/// bc -> a, ca -> b, ab -> c.
inline std::optional<std::string> side_letter(std::string_view line) {
  for (const auto& t : detail::triangle_indices()) {
    if (t.side == line) return t.letter;
  }
  return std::nullopt;
}

/// Congruence (substitution) axioms: for each predicate p and argument
/// position i, pEqSub<i>: p(.., a_i, ..) /\ a_i = X => p(.., X, ..). Equality
/// itself gets eqnativeEqSub0 and eq_sym.
inline std::vector<CoherentRule> congruence_rules(const std::vector<Predicate>& signature) {
  static const std::array<std::string_view, 4> names{"A", "B", "C", "D"};
  std::vector<CoherentRule> out;
  for (Predicate p : signature) {
    if (is_equality(p)) continue;
    const std::size_t n = arity(p);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> universals;
      Atom prem{p, {}};
      Atom concl{p, {}};
      for (std::size_t k = 0; k < n; ++k) {
        universals.emplace_back(names[k]);
        prem.args.push_back(Term::var(std::string(names[k])));
        concl.args.push_back(Term::var(std::string(k == i ? "X" : names[k])));
      }
      universals.emplace_back("X");
      Atom link = eq(names[i], "X");
      out.push_back(detail::horn(std::string(predicate_name(p)) + "EqSub" + std::to_string(i), universals,
                                 {prem, link}, {concl}));
    }
  }
  out.push_back(detail::horn("eqnativeEqSub0", {"A", "B", "X"}, {eq("B", "A"), eq("A", "X")}, {eq("X", "B")}));
  out.push_back(detail::horn("eq_sym", {"A", "B"}, {eq("A", "B")}, {eq("B", "A")}));
  return out;
}

/// Predicates that receive congruence axioms.
inline std::vector<Predicate> congruence_signature() {
  std::vector<Predicate> sig;
  for (std::size_t i = 0; i < kPredicateCount; ++i) {
    auto p = static_cast<Predicate>(i);
    if (!is_equality(p)) sig.push_back(p);
  }
  return sig;
}

/// Reflexivity is native to the prover and the checker; it is listed in the
/// KB so exports stay complete.
inline CoherentRule reflexivity_rule() { return detail::horn("eq_refl", {"X"}, {}, {eq("X", "X")}); }

/// The instantiated knowledge base for triangle ABC: definitional facts,
/// non-degeneracy facts, instantiated uniqueness lemmas, general lemmas,
/// ratio conversions and equality axioms.
inline KnowledgeBase standard_kb() {
  using detail::atom;
  using detail::horn;
  using P = Predicate;
  const auto& idx = detail::triangle_indices();

  KnowledgeBase kb;
  for (const auto& p : significant_points()) kb.add_object({p, Sort::Point, ObjectKind::SignificantConstant});
  for (const auto& l : significant_lines()) kb.add_object({l, Sort::Line, ObjectKind::SignificantConstant});
  kb.add_object({"cc", Sort::Circle, ObjectKind::SignificantConstant});

  // Definitional facts. Their order is the solver's table order.
  for (const auto& t : idx) {
    kb.add_fact(atom(P::Inc, {t.u, t.side}));
    kb.add_fact(atom(P::Inc, {t.w, t.side}));
  }
  for (const auto& t : idx) {
    kb.add_fact(atom(P::Inc, {t.vertex, t.alt}));
    kb.add_fact(atom(P::Perp, {t.alt, t.side}));
  }
  for (const auto& t : idx) {
    kb.add_fact(atom(P::Inc, {t.foot, t.alt}));
    kb.add_fact(atom(P::Inc, {t.foot, t.side}));
  }
  for (const auto& t : idx) kb.add_fact(atom(P::Inc, {"pH", t.alt}));
  for (const auto& t : idx) {
    kb.add_fact(atom(P::Inc, {t.mid, t.side}));
    kb.add_fact(atom(P::Inc, {t.mid, t.bis}));
    kb.add_fact(atom(P::Inc, {"pOc", t.bis}));
    kb.add_fact(atom(P::Perp, {t.bis, t.side}));
  }
  for (const auto& t : idx) {
    kb.add_fact(atom(P::Inc, {t.vertex, t.med}));
    kb.add_fact(atom(P::Inc, {t.mid, t.med}));
    kb.add_fact(atom(P::Inc, {"pG", t.med}));
  }
  for (const auto& v : vertex_points()) kb.add_fact(atom(P::IncC, {v, "cc"}));
  kb.add_fact(atom(P::Center, {"pOc", "cc"}));
  for (const auto& t : idx) kb.add_fact(atom(P::Ratio23, {t.vertex, "pG", t.vertex, t.mid}));
  kb.add_fact(atom(P::Ratio23, {"pH", "pG", "pH", "pOc"}));
  kb.add_fact(atom(P::Ratio13, {"pOc", "pG", "pOc", "pH"}));
  for (const auto& t : idx) {
    kb.add_fact(atom(P::Ratio12, {t.u, t.mid, t.u, t.w}));
    kb.add_fact(atom(P::Ratio12, {t.w, t.mid, t.w, t.u}));
  }
  // Non-degeneracy: the twelve significant points are pairwise distinct.
  const auto& pts = significant_points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) kb.add_fact(neq(pts[i], pts[j]));
  }

  auto points_on = [&](const std::string& line) {
    std::vector<std::string> out;
    for (const auto& f : kb.facts()) {
      if (f.pred == P::Inc && f.args[1].name == line) out.push_back(f.args[0].name);
    }
    return out;
  };
  auto lines_through = [&](const std::string& point) {
    std::vector<std::string> out;
    for (const auto& f : kb.facts()) {
      if (f.pred == P::Inc && f.args[0].name == point) out.push_back(f.args[1].name);
    }
    return out;
  };
  std::vector<CoherentRule> rules;

  // Uniqueness: a significant line is the only line through two of its points.
  for (const auto& line : significant_lines()) {
    auto on = points_on(line);
    for (std::size_t i = 0; i < on.size(); ++i) {
      for (std::size_t j = i + 1; j < on.size(); ++j) {
        std::string name = line + "_" + on[i] + "_" + on[j];
        for (const auto& t : idx) {
          if (t.side == line && on[i] == t.u && on[j] == t.w) name = line + "_unique";
        }
        rules.push_back(horn(name, {"L"}, {atom(P::Inc, {on[i], "L"}), atom(P::Inc, {on[j], "L"})}, {eq("L", line)}));
      }
    }
  }
  // Uniqueness: the perpendicular to a line through a point.
  for (const auto& f : kb.facts()) {
    if (f.pred != P::Perp) continue;
    for (int flip = 0; flip < 2; ++flip) {
      const std::string& target = f.args[flip].name;
      const std::string& other = f.args[1 - flip].name;
      for (const auto& p : points_on(target)) {
        std::string name = target + "_perp_" + other + "_" + p;
        for (const auto& t : idx) {
          if (t.alt == target && t.side == other && t.vertex == p) name = t.alt + short_name(p);
        }
        rules.push_back(
            horn(name, {"H"}, {atom(P::Perp, {"H", other}), atom(P::Inc, {p, "H"})}, {eq(target, "H")}));
      }
    }
  }
  // Uniqueness: a significant point is the only common point of two of its lines.
  for (const auto& point : significant_points()) {
    auto through = lines_through(point);
    for (std::size_t i = 0; i < through.size(); ++i) {
      for (std::size_t j = i + 1; j < through.size(); ++j) {
        std::string name = point + "_" + through[i] + "_" + through[j];
        std::string var = "P";
        for (const auto& t : idx) {
          if (point == t.foot && through[i] == t.alt && through[j] == t.side) {
            name = t.foot + "_def";
            var = "H1";
          }
          if (point == t.mid && through[i] == t.side && through[j] == t.bis) {
            name = t.mid + "_is_interect_" + t.bis + "_" + t.side;
          }
        }
        rules.push_back(horn(name, {var}, {atom(P::Inc, {var, through[i]}), atom(P::Inc, {var, through[j]})},
                             {eq(var, point)}));
      }
    }
  }
  // Uniqueness of the circumcircle.
  rules.push_back(horn("cc_unique", {"C"},
                       {atom(P::IncC, {"pA", "C"}), atom(P::IncC, {"pB", "C"}), atom(P::IncC, {"pC", "C"})},
                       {eq("C", "cc")}));
  for (const auto& v : vertex_points()) {
    rules.push_back(horn("cc_center_" + v, {"C"}, {atom(P::Center, {"pOc", "C"}), atom(P::IncC, {v, "C"})},
                         {eq("C", "cc")}));
  }
  // Uniqueness of the point completing a ratio fact R(X, Y, X, Z).
  for (const auto& f : kb.facts()) {
    if (!ratio_of(f.pred) || f.args[0] != f.args[2]) continue;
    const std::string x = f.args[0].name, y = f.args[1].name, z = f.args[3].name;
    const std::string base = std::string(predicate_name(f.pred)) + "_" + x + "_" + y + "_" + z;
    std::string y_name = base + "_at1";
    for (const auto& t : idx) {
      if (f.pred == P::Ratio23 && x == t.vertex && y == "pG" && z == t.mid) {
        y_name = "ratio23_" + short_name(t.mid) + "_Gsat0";
      }
    }
    rules.push_back(horn(y_name, {"X"}, {atom(f.pred, {x, "X", x, z})}, {eq(y, "X")}));
    rules.push_back(horn(base + "_at3", {"X"}, {atom(f.pred, {x, y, x, "X"})}, {eq(z, "X")}));
    rules.push_back(horn(base + "_at0", {"X"}, {atom(f.pred, {"X", y, "X", z})}, {eq(x, "X")}));
  }

  // General lemmas.
  rules.push_back(horn("center_unique", {"C", "C1", "C2"},
                       {atom(P::Center, {"C1", "C"}), atom(P::Center, {"C2", "C"})}, {eq("C1", "C2")}));
  rules.push_back(horn("perp_unique", {"P", "L", "L1", "L2"},
                       {atom(P::Perp, {"L1", "L"}), atom(P::Inc, {"P", "L1"}), atom(P::Perp, {"L2", "L"}),
                        atom(P::Inc, {"P", "L2"})},
                       {eq("L1", "L2")}));
  rules.push_back(horn("line_unique", {"P1", "P2", "L1", "L2"},
                       {atom(P::Inc, {"P1", "L1"}), atom(P::Inc, {"P2", "L1"}), atom(P::Inc, {"P1", "L2"}),
                        atom(P::Inc, {"P2", "L2"}), neq("P1", "P2")},
                       {eq("L1", "L2")}));
  rules.push_back(horn("perp_sym", {"L1", "L2"}, {atom(P::Perp, {"L1", "L2"})}, {atom(P::Perp, {"L2", "L1"})}));
  rules.push_back(horn("para_sym", {"L1", "L2"}, {atom(P::Para, {"L1", "L2"})}, {atom(P::Para, {"L2", "L1"})}));
  rules.push_back(horn("neq_sym", {"A", "B"}, {neq("A", "B")}, {neq("B", "A")}));
  rules.push_back(horn("inc_line", {"P1", "P2", "L"},
                       {atom(P::Inc, {"P1", "L"}), atom(P::Inc, {"P2", "L"}), neq("P1", "P2")},
                       {atom(P::Line, {"P1", "P2", "L"})}));
  rules.push_back(horn("line_inc", {"P1", "P2", "L"}, {atom(P::Line, {"P1", "P2", "L"})},
                       {atom(P::Inc, {"P1", "L"}), atom(P::Inc, {"P2", "L"})}));
  rules.push_back(CoherentRule{"ex_line", {"P1", "P2"}, {}, {Branch{{"L"}, {atom(P::Line, {"P1", "P2", "L"})}}}});
  rules.push_back(horn("ratio21_para", {"A", "G", "Ma", "H", "Oc", "Lba", "Lha"},
                       {atom(P::Ratio21, {"A", "G", "G", "Ma"}), atom(P::Ratio21, {"H", "G", "G", "Oc"}),
                        atom(P::Line, {"Oc", "Ma", "Lba"}), atom(P::Line, {"A", "H", "Lha"}), neq("A", "H")},
                       {atom(P::Para, {"Lba", "Lha"})}));
  rules.push_back(horn("perp_para", {"Lba", "Lha", "A"}, {atom(P::Perp, {"Lha", "A"}), atom(P::Para, {"Lba", "Lha"})},
                       {atom(P::Perp, {"Lba", "A"})}));

  // Ratio conversions.
  rules.push_back(horn("ratio13_ratio12", {"A", "B", "C"}, {atom(P::Ratio13, {"A", "B", "A", "C"})},
                       {atom(P::Ratio12, {"A", "B", "B", "C"})}));
  rules.push_back(horn("ratio23_ratio21", {"A", "B", "C"}, {atom(P::Ratio23, {"A", "B", "A", "C"})},
                       {atom(P::Ratio21, {"A", "B", "B", "C"})}));
  rules.push_back(horn("ratio13_ratio23", {"A", "B", "C"}, {atom(P::Ratio13, {"A", "B", "A", "C"})},
                       {atom(P::Ratio23, {"C", "B", "C", "A"})}));

  // Equality.
  rules.push_back(reflexivity_rule());
  for (auto& r : congruence_rules(congruence_signature())) rules.push_back(std::move(r));

  for (auto& r : rules) kb.add_rule(std::move(r));
  return kb;
}

}  // namespace trics
