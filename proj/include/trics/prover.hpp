#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "trics/conjecture.hpp"
#include "trics/kb.hpp"
#include "trics/plan.hpp"
#include "trics/proof.hpp"
#include "trics/tptp.hpp"

namespace trics {

struct ProverLimits {
  std::size_t max_rounds = 200;
  std::size_t max_witnesses = 64;
  double timeout_seconds = 10;
};

namespace detail {

// Argument codes: >= 0 is a constant id, < 0 is variable slot -(code + 1).
struct Pattern {
  Predicate pred;
  std::vector<int> args;
};

struct CompiledRule {
  const CoherentRule* src = nullptr;
  std::size_t index = 0;
  std::size_t slots = 0;  // universals first, then existentials of the first branch
  std::vector<Pattern> premises;
  std::vector<std::vector<Pattern>> branches;
  bool saturating = false;  // Horn, no existentials, every universal bound by premises
  bool existential = false;
  std::optional<std::string> unsupported;
};

struct Justification {
  enum class Kind : std::uint8_t { Kb, Hyp, Rule, Witness } kind = Kind::Kb;
  std::size_t index = 0;           // hypothesis or rule index
  std::vector<int> binding;        // universals
  std::vector<std::size_t> premises;
  std::vector<int> witnesses;
};

struct StoredFact {
  Predicate pred;
  std::vector<int> args;
  Justification just;
};

class Saturator {
 public:
  Saturator(const ProofTask& task, const ProverLimits& limits) : task_(task), limits_(limits) {
    for (const auto& [name, sort] : task.constants) intern(name, sort);
    for (std::size_t i = 0; i < task.axioms.size(); ++i) rules_.push_back(compile(task.axioms[i], i));
    goal_ = ground(task.goal);
    start_ = std::chrono::steady_clock::now();
  }

  Proof run() {
    Proof proof;
    proof.task = task_;
    const Atom& g = task_.goal;
    if (g.pred == Predicate::Eq && g.args[0] == g.args[1]) {
      ProofStep s{ProofStepKind::Derive, g, "eq_refl", {{"X", g.args[0].name}}, {}, {}};
      proof.steps.push_back(s);
      proof.steps.push_back({ProofStepKind::Qed, g, "", {}, {StepRef::step(0)}, {}});
      proof.status = ProofStatus::Proved;
      return finish(std::move(proof));
    }
    for (const auto& f : task_.kb_facts) {
      if (add(ground(f), {Justification::Kind::Kb, 0, {}, {}, {}})) break;
    }
    for (std::size_t i = 0; !found_ && i < task_.hypotheses.size(); ++i) {
      add(ground(task_.hypotheses[i]), {Justification::Kind::Hyp, i, {}, {}, {}});
    }
    if (mirror_ && !found_) close_by_symmetry(*mirror_);
    std::size_t d0 = 0;
    while (!found_ && !failure_) {
      std::size_t d1 = facts_.size();
      if (d0 == d1) {
        if (!introduce_witness()) {
          if (!failure_) failure_ = FailureReason::Fixpoint;
          break;
        }
        continue;  // the witness fact forms the next delta
      }
      if (++rounds_ > limits_.max_rounds) {
        failure_ = FailureReason::RoundLimit;
        break;
      }
      for (const auto& r : rules_) {
        if (found_ || failure_) break;
        if (!r.saturating && !r.unsupported) continue;
        for (std::size_t i = 0; i < r.premises.size() && !found_ && !failure_; ++i) {
          std::vector<int> bind(r.slots, -1);
          std::vector<std::size_t> used(r.premises.size());
          join(r, i, d0, d1, 0, bind, used);
        }
        // A mirrored goal closes by symmetry once the rule that produced it
        // has had every match, so a rule yielding both orientations gives the
        // goal directly.
        if (mirror_ && !found_ && !failure_) close_by_symmetry(*mirror_);
      }
      d0 = d1;
    }
    if (found_) {
      extract(proof);
      proof.status = ProofStatus::Proved;
    } else {
      proof.reason = *failure_;
      proof.detail = detail_;
      if (proof.detail.empty()) {
        proof.detail = std::string(failure_reason_name(*failure_)) + " after " + std::to_string(rounds_) +
                       " rounds, " + std::to_string(facts_.size()) + " facts";
      }
    }
    return finish(std::move(proof));
  }

 private:
  Proof finish(Proof p) {
    p.stats.rounds = rounds_;
    p.stats.facts = facts_.size();
    p.stats.witnesses = witness_count_;
    p.stats.seconds = elapsed();
    return p;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  int intern(const std::string& name, std::optional<Sort> sort = std::nullopt) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    sorts_.push_back(sort);
    ids_.emplace(name, id);
    return id;
  }

  StoredFact ground(const Atom& a) {
    StoredFact f{a.pred, {}, {}};
    for (const auto& t : a.args) f.args.push_back(intern(t.name));
    return f;
  }

  Atom to_atom(Predicate p, const std::vector<int>& args) const {
    Atom a{p, {}};
    for (int c : args) a.args.push_back(Term::constant(names_[static_cast<std::size_t>(c)]));
    return a;
  }

  CompiledRule compile(const CoherentRule& r, std::size_t index) {
    CompiledRule c;
    c.src = &r;
    c.index = index;
    std::map<std::string, int> slot;
    for (const auto& u : r.universals) slot.emplace(u, static_cast<int>(slot.size()));
    std::set<std::string> bound;
    auto pattern = [&](const Atom& a) {
      Pattern p{a.pred, {}};
      for (const auto& t : a.args) {
        if (!t.variable) {
          p.args.push_back(intern(t.name));
        } else {
          auto [it, _] = slot.emplace(t.name, static_cast<int>(slot.size()));
          p.args.push_back(-(it->second + 1));
        }
      }
      return p;
    };
    for (const auto& a : r.premises) {
      c.premises.push_back(pattern(a));
      for (const auto& t : a.args) {
        if (t.variable) bound.insert(t.name);
      }
    }
    if (!r.conclusions.empty()) {
      for (const auto& e : r.conclusions[0].existentials) slot.emplace(e, static_cast<int>(slot.size()));
    }
    for (const auto& b : r.conclusions) {
      std::vector<Pattern> atoms;
      for (const auto& a : b.atoms) atoms.push_back(pattern(a));
      c.branches.push_back(std::move(atoms));
    }
    c.slots = slot.size();
    c.existential = r.existential();
    bool all_bound = std::all_of(r.universals.begin(), r.universals.end(), [&](const auto& u) { return bound.count(u); });
    if (r.conclusions.size() != 1) {
      c.unsupported = "rule " + r.name + " has " + std::to_string(r.conclusions.size()) + " conclusion branches";
    } else if (!c.existential && all_bound && !r.premises.empty()) {
      c.saturating = true;
    }
    if (c.unsupported && r.premises.empty()) c.unsupported.reset();  // can never fire
    return c;
  }

  // --- fact store -----------------------------------------------------------

  static std::uint64_t key(Predicate p, const std::vector<int>& args) {
    std::uint64_t k = static_cast<std::uint64_t>(p) << 60;
    for (std::size_t i = 0; i < args.size(); ++i) k |= static_cast<std::uint64_t>(args[i]) << (15 * i);
    return k;
  }
  static std::uint32_t index_key(Predicate p, std::size_t pos, int c) {
    return (static_cast<std::uint32_t>(p) << 20) | (static_cast<std::uint32_t>(pos) << 18) | static_cast<std::uint32_t>(c);
  }

  const std::vector<std::size_t>& lookup(Predicate p, std::size_t pos, int c) const {
    static const std::vector<std::size_t> empty;
    auto it = index_.find(index_key(p, pos, c));
    return it == index_.end() ? empty : it->second;
  }

  std::optional<std::size_t> find(Predicate p, const std::vector<int>& args) const {
    auto it = set_.find(key(p, args));
    if (it == set_.end()) return std::nullopt;
    return it->second;
  }

  // Returns true when the goal has been reached.
  bool add(StoredFact f, Justification j) {
    if (f.pred == Predicate::Eq && f.args[0] == f.args[1]) return false;
    if (names_.size() >= (1u << 15)) throw std::length_error("too many constants");
    auto k = key(f.pred, f.args);
    if (set_.count(k)) return false;
    if (f.pred == Predicate::Neq && f.args[0] == f.args[1]) {
      throw InconsistencyDetected(to_atom(Predicate::Eq, f.args), to_atom(Predicate::Neq, f.args));
    }
    if (f.pred == Predicate::Eq || f.pred == Predicate::Neq) {
      Predicate other = f.pred == Predicate::Eq ? Predicate::Neq : Predicate::Eq;
      std::vector<int> rev{f.args[1], f.args[0]};
      if (find(other, f.args) || find(other, rev)) {
        Atom e = to_atom(Predicate::Eq, f.args), n = to_atom(Predicate::Neq, f.args);
        throw InconsistencyDetected(e, n);
      }
    }
    std::size_t id = facts_.size();
    set_.emplace(k, id);
    by_pred_[static_cast<std::size_t>(f.pred)].push_back(id);
    for (std::size_t i = 0; i < f.args.size(); ++i) index_[index_key(f.pred, i, f.args[i])].push_back(id);
    f.just = std::move(j);
    facts_.push_back(std::move(f));
    if (facts_.back().pred == goal_.pred) {
      if (facts_.back().args == goal_.args) {
        goal_fact_ = id;
        found_ = true;
      } else if (goal_.pred == Predicate::Eq && facts_.back().args[0] == goal_.args[1] &&
                 facts_.back().args[1] == goal_.args[0]) {
        mirror_ = id;
      }
    }
    return found_;
  }

  void close_by_symmetry(std::size_t mirror) {
    for (const auto& r : rules_) {
      if (r.src->name != "eq_sym") continue;
      std::vector<int> bind(r.slots, -1);
      if (!unify(r.premises[0], facts_[mirror].args, bind)) continue;
      std::vector<int> b(bind.begin(), bind.begin() + static_cast<long>(r.src->universals.size()));
      StoredFact g{goal_.pred, goal_.args, {}};
      add(g, {Justification::Kind::Rule, r.index, b, {mirror}, {}});
      return;
    }
  }

  // --- matching -------------------------------------------------------------

  bool unify(const Pattern& p, const std::vector<int>& args, std::vector<int>& bind) const {
    std::array<std::size_t, 4> set{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < args.size(); ++i) {
      int code = p.args[i];
      bool ok = true;
      if (code >= 0) {
        ok = code == args[i];
      } else {
        auto s = static_cast<std::size_t>(-(code + 1));
        if (bind[s] < 0) {
          bind[s] = args[i];
          set[n++] = s;
        } else {
          ok = bind[s] == args[i];
        }
      }
      if (!ok) {
        for (std::size_t k = 0; k < n; ++k) bind[set[k]] = -1;
        return false;
      }
    }
    return true;
  }

  int value(int code, const std::vector<int>& bind) const {
    return code >= 0 ? code : bind[static_cast<std::size_t>(-(code + 1))];
  }

  // Facts that may match `p` under `bind`, ascending. Uses the most selective
  // bound position; equality patterns also look at the swapped position.
  std::vector<std::size_t> candidates(const Pattern& p, const std::vector<int>& bind, std::size_t hi) const {
    const std::vector<std::size_t>* best = &by_pred_[static_cast<std::size_t>(p.pred)];
    std::vector<std::size_t> merged;
    bool symmetric = p.pred == Predicate::Eq;
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      int v = value(p.args[i], bind);
      if (v < 0) continue;
      if (symmetric) {
        const auto& a = lookup(p.pred, 0, v);
        const auto& b = lookup(p.pred, 1, v);
        merged.clear();
        std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        best = &merged;
        break;
      }
      const auto& l = lookup(p.pred, i, v);
      if (l.size() < best->size()) best = &l;
    }
    auto end = std::lower_bound(best->begin(), best->end(), hi);
    return {best->begin(), end};
  }

  // Tries both orientations for equality premises.
  template <class F>
  void each_unifier(const Pattern& p, std::size_t fact, std::vector<int>& bind, F&& k) {
    const std::vector<int> args = facts_[fact].args;  // k() may grow the store
    std::vector<int> saved = bind;
    if (unify(p, args, bind)) {
      k();
      bind = saved;
    }
    if (p.pred == Predicate::Eq && !stop()) {
      std::vector<int> rev{args[1], args[0]};
      if (unify(p, rev, bind)) {
        k();
        bind = saved;
      }
    }
  }

  bool stop() const { return found_ || failure_.has_value(); }

  void check_clock() {
    if ((++ticks_ & 1023u) == 0 && elapsed() > limits_.timeout_seconds) failure_ = FailureReason::Timeout;
  }

  // Semi-naive join: premise `delta` ranges over [d0, d1), earlier premises
  // over [0, d0), later ones over [0, d1).
  void join(const CompiledRule& r, std::size_t delta, std::size_t d0, std::size_t d1, std::size_t j,
            std::vector<int>& bind, std::vector<std::size_t>& used) {
    if (stop()) return;
    if (j == r.premises.size()) {
      fire(r, bind, used);
      return;
    }
    // the delta premise goes first so the join starts from the new facts
    std::size_t pj = j == 0 ? delta : (j <= delta ? j - 1 : j);
    std::size_t lo = pj == delta ? d0 : 0;
    std::size_t hi = pj < delta ? d0 : d1;
    for (std::size_t f : candidates(r.premises[pj], bind, hi)) {
      if (f < lo) continue;
      each_unifier(r.premises[pj], f, bind, [&] {
        used[pj] = f;
        join(r, delta, d0, d1, j + 1, bind, used);
      });
      if (stop()) return;
    }
  }

  void fire(const CompiledRule& r, const std::vector<int>& bind, const std::vector<std::size_t>& used) {
    check_clock();
    if (r.unsupported) {
      failure_ = FailureReason::Unsupported;
      detail_ = *r.unsupported;
      return;
    }
    if (r.branches.empty()) {
      throw InconsistencyDetected(task_.goal, to_atom(r.premises[0].pred, ground_args(r.premises[0], bind)));
    }
    std::vector<int> b(bind.begin(), bind.begin() + static_cast<long>(r.src->universals.size()));
    for (const auto& p : r.branches[0]) {
      if (add({p.pred, ground_args(p, bind), {}}, {Justification::Kind::Rule, r.index, b, used, {}})) return;
    }
  }

  std::vector<int> ground_args(const Pattern& p, const std::vector<int>& bind) const {
    std::vector<int> out;
    for (int c : p.args) out.push_back(value(c, bind));
    return out;
  }

  // --- witnesses ------------------------------------------------------------

  // At a fixpoint, an existential axiom is applied only where a Horn axiom
  // needs its conclusion: some premise of the Horn axiom has the existential
  // shape with a variable that no other premise mentions, and all its other
  // premises already hold. The first such instance gets one fresh witness.
  bool introduce_witness() {
    for (const auto& r : rules_) {
      if (!r.saturating) continue;
      for (std::size_t k = 0; k < r.premises.size(); ++k) {
        const Pattern& q = r.premises[k];
        for (const auto& e : rules_) {
          if (!e.existential || !e.premises.empty() || e.unsupported || e.branches[0].size() != 1) continue;
          const Pattern& ep = e.branches[0][0];
          if (ep.pred != q.pred || !witness_shape(r, k, e)) continue;
          std::vector<int> bind(r.slots, -1);
          std::vector<std::size_t> used(r.premises.size());
          std::optional<std::vector<int>> hit;
          search_rest(r, k, 0, bind, used, [&] {
            auto eb = existential_binding(e, q, bind);
            if (!eb || memo_.count({e.index, *eb})) return false;
            if (satisfied(e, *eb)) return false;
            hit = eb;
            return true;
          });
          if (failure_) return false;
          if (!hit) continue;
          if (witness_count_ >= limits_.max_witnesses) {
            failure_ = FailureReason::WitnessLimit;
            return false;
          }
          memo_.insert({e.index, *hit});
          std::vector<int> full = *hit;
          full.resize(e.slots, -1);
          std::vector<int> fresh;
          for (std::size_t x = e.src->universals.size(); x < e.slots; ++x) {
            int w = fresh_witness(*sort_of_slot(e, x));
            full[x] = w;
            fresh.push_back(w);
          }
          ++witness_count_;
          add({ep.pred, ground_args(ep, full), {}}, {Justification::Kind::Witness, e.index, *hit, {}, fresh});
          return true;
        }
      }
    }
    return false;
  }

  // Premise k of r matches the existential atom of e position by position,
  // with an existential position facing a variable private to premise k.
  bool witness_shape(const CompiledRule& r, std::size_t k, const CompiledRule& e) const {
    const Pattern& q = r.premises[k];
    const Pattern& ep = e.branches[0][0];
    auto universals = static_cast<int>(e.src->universals.size());
    bool has_private = false;
    for (std::size_t i = 0; i < ep.args.size(); ++i) {
      int code = ep.args[i];
      bool existential_pos = code < 0 && -(code + 1) >= universals;
      if (!existential_pos) {
        if (code >= 0 && q.args[i] >= 0 && q.args[i] != code) return false;
        continue;
      }
      if (q.args[i] >= 0) return false;
      for (std::size_t j = 0; j < r.premises.size(); ++j) {
        if (j == k) continue;
        for (int c : r.premises[j].args) {
          if (c == q.args[i]) return false;
        }
      }
      has_private = true;
    }
    return has_private;
  }

  // Universals of e, read off premise q under r's binding.
  std::optional<std::vector<int>> existential_binding(const CompiledRule& e, const Pattern& q,
                                                      const std::vector<int>& bind) const {
    const Pattern& ep = e.branches[0][0];
    std::vector<int> out(e.src->universals.size(), -1);
    for (std::size_t i = 0; i < ep.args.size(); ++i) {
      int code = ep.args[i];
      if (code >= 0) continue;
      auto s = static_cast<std::size_t>(-(code + 1));
      if (s >= out.size()) continue;
      int v = value(q.args[i], bind);
      if (v < 0) return std::nullopt;
      if (out[s] >= 0 && out[s] != v) return std::nullopt;
      out[s] = v;
    }
    if (std::any_of(out.begin(), out.end(), [](int v) { return v < 0; })) return std::nullopt;
    return out;
  }

  bool satisfied(const CompiledRule& e, const std::vector<int>& universals) const {
    const Pattern& ep = e.branches[0][0];
    std::vector<int> bind = universals;
    bind.resize(e.slots, -1);
    for (std::size_t f : candidates(ep, bind, facts_.size())) {
      std::vector<int> b = bind;
      if (unify(ep, facts_[f].args, b)) return true;
    }
    return false;
  }

  // Matches every premise of r except k against the whole store; stops when
  // `accept` returns true.
  template <class F>
  bool search_rest(const CompiledRule& r, std::size_t k, std::size_t j, std::vector<int>& bind,
                   std::vector<std::size_t>& used, F&& accept) {
    if (j == k) return search_rest(r, k, j + 1, bind, used, accept);
    if (j == r.premises.size()) return accept();
    check_clock();
    if (failure_) return false;
    bool done = false;
    for (std::size_t f : candidates(r.premises[j], bind, facts_.size())) {
      each_unifier(r.premises[j], f, bind, [&] {
        if (!done) {
          used[j] = f;
          done = search_rest(r, k, j + 1, bind, used, accept);
        }
      });
      if (done) return true;
    }
    return false;
  }

  std::optional<Sort> sort_of_slot(const CompiledRule& e, std::size_t slot) const {
    std::string var = slot < e.src->universals.size() ? e.src->universals[slot]
                                                      : e.src->conclusions[0].existentials[slot - e.src->universals.size()];
    auto sorts = infer_variable_sorts(*e.src);
    auto it = sorts.find(var);
    if (it == sorts.end()) return Sort::Point;
    return it->second;
  }

  int fresh_witness(Sort s) {
    for (std::size_t n = witness_count_ + 1;; ++n) {
      std::string name = n == 1 ? "w" : "w" + std::to_string(n);
      if (!ids_.count(name)) {
        return intern(name, s);
      }
    }
  }

  // --- proof extraction -----------------------------------------------------

  void extract(Proof& proof) {
    std::set<std::size_t> need;
    std::vector<std::size_t> todo{goal_fact_};
    while (!todo.empty()) {
      std::size_t f = todo.back();
      todo.pop_back();
      if (!need.insert(f).second) continue;
      for (auto p : facts_[f].just.premises) todo.push_back(p);
    }
    std::map<std::size_t, StepRef> ref;
    for (std::size_t f : need) {
      const auto& fact = facts_[f];
      const auto& j = fact.just;
      Atom atom = to_atom(fact.pred, fact.args);
      if (j.kind == Justification::Kind::Hyp) {
        ref[f] = StepRef::hyp(j.index);
        continue;
      }
      ProofStep s;
      s.atom = atom;
      if (j.kind == Justification::Kind::Kb) {
        s.kind = ProofStepKind::Fact;
        s.rule = fact_name(atom);
      } else {
        const CoherentRule& rule = task_.axioms[j.index];
        s.kind = j.kind == Justification::Kind::Witness ? ProofStepKind::Witness : ProofStepKind::Derive;
        s.rule = rule.name;
        for (std::size_t u = 0; u < rule.universals.size(); ++u) {
          s.instantiation.emplace_back(rule.universals[u], names_[static_cast<std::size_t>(j.binding[u])]);
        }
        for (auto p : j.premises) s.premises.push_back(ref.at(p));
        for (int w : j.witnesses) s.witnesses.push_back(names_[static_cast<std::size_t>(w)]);
      }
      ref[f] = StepRef::step(proof.steps.size());
      proof.steps.push_back(std::move(s));
    }
    proof.steps.push_back({ProofStepKind::Qed, task_.goal, "", {}, {ref.at(goal_fact_)}, {}});
    rename_witnesses(proof);
  }

  // Witnesses that made it into the proof are renamed w, w2, ... in order of
  // introduction, so the text does not depend on discarded search branches.
  void rename_witnesses(Proof& proof) const {
    std::map<std::string, std::string> to;
    std::size_t n = 0;
    for (const auto& s : proof.steps) {
      for (const auto& w : s.witnesses) {
        std::string name;
        do {
          ++n;
          name = n == 1 ? "w" : "w" + std::to_string(n);
        } while (task_.constants.count(name));
        to[w] = name;
      }
    }
    auto fix = [&](std::string& x) {
      auto it = to.find(x);
      if (it != to.end()) x = it->second;
    };
    for (auto& s : proof.steps) {
      for (auto& t : s.atom.args) fix(t.name);
      for (auto& [_, v] : s.instantiation) fix(v);
      for (auto& w : s.witnesses) fix(w);
    }
  }

  const ProofTask& task_;
  ProverLimits limits_;
  std::vector<std::string> names_;
  std::vector<std::optional<Sort>> sorts_;
  std::unordered_map<std::string, int> ids_;
  std::vector<CompiledRule> rules_;
  StoredFact goal_;
  std::vector<StoredFact> facts_;
  std::unordered_map<std::uint64_t, std::size_t> set_;
  std::unordered_map<std::uint32_t, std::vector<std::size_t>> index_;
  std::array<std::vector<std::size_t>, kPredicateCount> by_pred_;
  std::set<std::pair<std::size_t, std::vector<int>>> memo_;
  std::size_t witness_count_ = 0;
  std::size_t rounds_ = 0;
  std::size_t goal_fact_ = 0;
  std::optional<std::size_t> mirror_;
  std::uint64_t ticks_ = 0;
  bool found_ = false;
  std::optional<FailureReason> failure_;
  std::string detail_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Forward-chains the task's axioms from its facts and hypotheses until the
/// goal appears. Throws InconsistencyDetected when the facts contradict.
inline Proof prove(const ProofTask& task, const ProverLimits& limits = {}) {
  return detail::Saturator(task, limits).run();
}

// ---------------------------------------------------------------------------
// Staged proving

struct StageSpec {
  std::string name;
  Atom goal;
};

struct StageResult {
  StageSpec spec;
  Proof proof;
};

class StageFailed : public std::runtime_error {
 public:
  StageFailed(std::string stage, FailureReason reason, const std::string& detail)
      : std::runtime_error("stage " + stage + " failed: " + detail), stage(std::move(stage)), reason(reason) {}
  std::string stage;
  FailureReason reason;
};

/// Reads "name : goal-atom" lines; blank lines and lines starting with # are
/// skipped.
inline std::vector<StageSpec> parse_stages(std::string_view text) {
  std::vector<StageSpec> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string l = detail::trim(raw);
    if (l.empty() || l[0] == '#') continue;
    auto colon = l.find(" : ");
    if (colon == std::string::npos) throw PlanError("stage line " + std::to_string(line) + ": expected 'name : atom'");
    StageSpec s{detail::trim(std::string_view(l).substr(0, colon)), {}};
    try {
      s.goal = tptp::parse_atom(l.substr(colon + 3));
    } catch (const std::exception& e) {
      throw PlanError("stage line " + std::to_string(line) + ": " + e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Proves the stages in order over the conjecture's hypotheses with every
/// knowledge-base rule. Each proved goal becomes a hypothesis of the later
/// stages. Throws StageFailed at the first stage that does not go through.
inline std::vector<StageResult> prove_staged(const Conjecture& c, const KnowledgeBase& kb,
                                             const std::vector<StageSpec>& stages, const ProverLimits& limits = {}) {
  std::vector<StageResult> out;
  std::vector<Atom> proved;
  for (const auto& spec : stages) {
    ProofTask t = stage_task(spec.name, c, kb, spec.goal, proved);
    Proof p = prove(t, limits);
    if (!p.proved()) throw StageFailed(spec.name, p.reason, p.detail);
    proved.push_back(spec.goal);
    out.push_back({spec, std::move(p)});
  }
  return out;
}

}  // namespace trics
