#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "trics/corpus.hpp"
#include "trics/kb.hpp"
#include "trics/plan.hpp"

namespace trics {

struct SearchLimits {
  std::size_t max_steps = 12;
  std::size_t max_nodes = 100000;
};

enum class UnsolvedReason : std::uint8_t { BudgetExhausted, NoDetermination };

inline std::string_view unsolved_reason_name(UnsolvedReason r) {
  return r == UnsolvedReason::BudgetExhausted ? "BudgetExhausted" : "NoDetermination";
}

struct Unsolved {
  UnsolvedReason reason = UnsolvedReason::NoDetermination;
  std::string detail;
};

using SolveResult = std::variant<ConstructionPlan, Unsolved>;

namespace detail {

// A determination over significant ids: how an object follows from known ones.
struct Determination {
  StepKind kind = StepKind::LineThrough;
  std::vector<std::string> inputs;
  int num = 0, den = 0;
  std::vector<std::string> outputs;
  std::optional<Atom> provenance;

  bool operator==(const Determination&) const = default;
};

// Writes t = p/q as d/n with n, d in {1, 2, 3}.
inline std::optional<std::pair<int, int>> small_ratio(int p, int q) {
  if (q < 0) {
    p = -p;
    q = -q;
  }
  if (p <= 0 || q == 0) return std::nullopt;
  int g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (p > 3 || q > 3) return std::nullopt;
  return std::pair{q, p};
}

class DeterminationTable {
 public:
  explicit DeterminationTable(const KnowledgeBase& kb) : kb_(kb) {
    for (const auto& f : kb.facts()) {
      switch (f.pred) {
        case Predicate::Inc:
          points_on_[f.args[1].name].push_back(f.args[0].name);
          lines_through_[f.args[0].name].push_back(f.args[1].name);
          break;
        case Predicate::Perp:
          perps_.emplace_back(f.args[0].name, f.args[1].name);
          break;
        case Predicate::IncC:
          on_circle_[f.args[1].name].push_back(f.args[0].name);
          break;
        case Predicate::Center:
          centers_[f.args[1].name].push_back(f.args[0].name);
          break;
        default:
          if (ratio_of(f.pred) && f.args[0] == f.args[2]) ratios_.push_back(f);
      }
    }
  }

  /// Candidate determinations of `obj` from `known`, best first.
  std::vector<Determination> candidates(const std::string& obj, const std::set<std::string>& known,
                                        std::size_t& nodes) const {
    std::vector<Determination> out;
    auto is_known = [&](const std::string& x) { return known.count(x) > 0; };
    auto sort = kb_.sort_of(obj);
    if (!sort) return out;
    if (*sort == Sort::Line) {
      const auto& on = list(points_on_, obj);
      for (std::size_t i = 0; i < on.size(); ++i) {
        for (std::size_t j = i + 1; j < on.size(); ++j) {
          ++nodes;
          if (is_known(on[i]) && is_known(on[j])) out.push_back({StepKind::LineThrough, {on[i], on[j]}, 0, 0, {obj}, {}});
        }
      }
      for (const auto& [l, m] : perps_) {
        if (l != obj && m != obj) continue;
        const std::string& base = l == obj ? m : l;
        if (!is_known(base)) continue;
        for (const auto& p : on) {
          ++nodes;
          if (is_known(p)) out.push_back({StepKind::PerpThrough, {base, p}, 0, 0, {obj}, {}});
        }
      }
    } else if (*sort == Sort::Circle) {
      for (const auto& o : list(centers_, obj)) {
        if (!is_known(o)) continue;
        for (const auto& p : list(on_circle_, obj)) {
          ++nodes;
          if (is_known(p) && p != o) out.push_back({StepKind::CircleCentered, {o, p}, 0, 0, {obj}, {}});
        }
      }
    } else {
      for (const auto& f : ratios_) {
        ++nodes;
        if (auto d = ratio_determination(f, obj, is_known)) out.push_back(*d);
      }
      const auto& through = list(lines_through_, obj);
      for (std::size_t i = 0; i < through.size(); ++i) {
        for (std::size_t j = i + 1; j < through.size(); ++j) {
          ++nodes;
          if (is_known(through[i]) && is_known(through[j])) {
            out.push_back({StepKind::IntersectLines, {through[i], through[j]}, 0, 0, {obj}, {}});
          }
        }
      }
      if (is_vertex(obj)) {
        for (const auto& side : through) {
          ++nodes;
          auto ends = side_vertices(side);
          if (!ends || !is_known(side)) continue;
          for (const auto& circle : circles_through(ends->first, ends->second)) {
            if (!is_known(circle) || is_known(ends->first) || is_known(ends->second)) continue;
            out.push_back({StepKind::IntersectLineCircle, {side, circle}, 0, 0, {ends->first, ends->second}, {}});
          }
        }
      }
    }
    return out;
  }

 private:
  template <class Map>
  static const std::vector<std::string>& list(const Map& m, const std::string& key) {
    static const std::vector<std::string> empty;
    auto it = m.find(key);
    return it == m.end() ? empty : it->second;
  }

  // The two vertices of a side line, in fact order.
  std::optional<std::pair<std::string, std::string>> side_vertices(const std::string& line) const {
    std::vector<std::string> v;
    for (const auto& p : list(points_on_, line)) {
      if (is_vertex(p)) v.push_back(p);
    }
    if (v.size() != 2) return std::nullopt;
    return std::pair{v[0], v[1]};
  }

  std::vector<std::string> circles_through(const std::string& p, const std::string& q) const {
    std::vector<std::string> out;
    for (const auto& [c, on] : on_circle_) {
      if (std::count(on.begin(), on.end(), p) && std::count(on.begin(), on.end(), q)) out.push_back(c);
    }
    return out;
  }

  // ratio R(X, Y, X, Z): vec(X,Y) = (n/m) vec(X,Z).
  template <class Known>
  std::optional<Determination> ratio_determination(const Atom& f, const std::string& obj, Known is_known) const {
    const std::string &x = f.args[0].name, &y = f.args[1].name, &z = f.args[3].name;
    auto [n, m] = *ratio_of(f.pred);
    auto make = [&](const std::string& from, const std::string& to, int p, int q) -> std::optional<Determination> {
      auto r = small_ratio(p, q);
      if (!r) return std::nullopt;
      return Determination{StepKind::RatioPoint, {from, to}, r->first, r->second, {obj}, f};
    };
    if (obj == z && is_known(x) && is_known(y)) return make(x, y, m, n);
    if (obj == y && is_known(x) && is_known(z)) return make(x, z, n, m);
    if (obj == x && is_known(y) && is_known(z)) {
      // X = Z + m/(m-n) (Y - Z) = Y - n/(m-n) (Z - Y)
      if (auto d = make(z, y, m, m - n)) return d;
      return make(y, z, -n, m - n);
    }
    return std::nullopt;
  }

  const KnowledgeBase& kb_;
  std::map<std::string, std::vector<std::string>> points_on_, lines_through_, on_circle_, centers_;
  std::vector<std::pair<std::string, std::string>> perps_;
  std::vector<Atom> ratios_;
};

inline int sort_rank(Sort s) { return static_cast<int>(s); }

}  // namespace detail

/// Finds a construction of A, B, C from the three given points. Objects are
/// determined in rounds (fewest rounds first); within a round every object
/// takes its best determination from the objects known at the round's start.
/// The plan is the post-order of the determinations A, B, C depend on.
inline SolveResult solve(const ProblemSpec& problem, const KnowledgeBase& kb, const SearchLimits& limits = {}) {
  detail::DeterminationTable table(kb);
  std::set<std::string> known(problem.points.begin(), problem.points.end());
  std::map<std::string, std::size_t> step_of;
  std::vector<detail::Determination> dets;
  std::vector<std::string> objects;
  for (const auto& o : kb.objects()) objects.push_back(o.name);
  std::size_t nodes = 0;
  auto done = [&] { return known.count("pA") && known.count("pB") && known.count("pC"); };
  for (std::size_t round = 0; !done(); ++round) {
    if (round >= limits.max_steps) {
      return Unsolved{UnsolvedReason::BudgetExhausted, "more than " + std::to_string(limits.max_steps) + " rounds"};
    }
    std::map<std::string, std::size_t> fresh;
    std::map<std::string, std::vector<detail::Determination>> cache;
    auto cands = [&](const std::string& o) -> const std::vector<detail::Determination>& {
      auto it = cache.find(o);
      if (it == cache.end()) it = cache.emplace(o, table.candidates(o, known, nodes)).first;
      return it->second;
    };
    for (const auto& obj : objects) {
      if (known.count(obj) || fresh.count(obj)) continue;
      for (const auto& d : cands(obj)) {
        if (d.kind == StepKind::IntersectLineCircle) {
          // Both intersection points must take this step as their best choice.
          const std::string& partner = d.outputs[0] == obj ? d.outputs[1] : d.outputs[0];
          if (fresh.count(partner)) continue;
          const auto& pc = cands(partner);
          if (pc.empty() || !(pc.front() == d)) continue;
        }
        dets.push_back(d);
        for (const auto& o : d.outputs) fresh[o] = dets.size() - 1;
        break;
      }
      if (nodes > limits.max_nodes) return Unsolved{UnsolvedReason::BudgetExhausted, "node limit reached"};
    }
    if (fresh.empty()) {
      std::string missing;
      for (const auto* v : {"pA", "pB", "pC"}) {
        if (!known.count(v)) missing += std::string(missing.empty() ? "" : ",") + v;
      }
      return Unsolved{UnsolvedReason::NoDetermination, "cannot determine " + missing};
    }
    for (const auto& [o, i] : fresh) {
      known.insert(o);
      step_of[o] = i;
    }
  }

  // Backward extraction.
  std::vector<std::size_t> order;
  std::set<std::size_t> emitted;
  std::set<std::string> given(problem.points.begin(), problem.points.end());
  auto visit = [&](auto&& self, const std::string& obj) -> void {
    if (given.count(obj)) return;
    std::size_t i = step_of.at(obj);
    if (emitted.count(i)) return;
    auto inputs = dets[i].inputs;
    std::stable_sort(inputs.begin(), inputs.end(), [&](const auto& a, const auto& b) {
      return detail::sort_rank(*kb.sort_of(a)) < detail::sort_rank(*kb.sort_of(b));
    });
    for (const auto& in : inputs) self(self, in);
    emitted.insert(i);
    order.push_back(i);
  };
  for (const auto* v : {"pA", "pB", "pC"}) visit(visit, v);
  if (order.size() > limits.max_steps) {
    return Unsolved{UnsolvedReason::BudgetExhausted, "plan needs " + std::to_string(order.size()) + " steps"};
  }

  // Naming.
  ConstructionPlan plan;
  std::map<std::string, std::string> name;
  for (const auto& p : problem.points) {
    name[p] = short_name(p);
    plan.given.emplace_back(short_name(p), p);
  }
  std::size_t circles = 0;
  for (auto i : order) circles += dets[i].kind == StepKind::CircleCentered ? 1 : 0;
  std::size_t np = 0, nl = 0, nc = 0;
  for (auto i : order) {
    const auto& d = dets[i];
    ConstructionStep s;
    s.kind = d.kind;
    s.num = d.num;
    s.den = d.den;
    s.provenance = d.provenance;
    for (const auto& in : d.inputs) s.inputs.push_back(name.at(in));
    for (const auto& o : d.outputs) {
      std::string n;
      switch (*kb.sort_of(o)) {
        case Sort::Point: n = is_vertex(o) ? short_name(o) : "P" + std::to_string(++np); break;
        case Sort::Line: n = "l" + std::to_string(++nl); break;
        case Sort::Circle: n = circles == 1 ? "c" : "c" + std::to_string(++nc); break;
      }
      name[o] = n;
      s.outputs.push_back(n);
      s.intent.push_back(o);
    }
    plan.steps.push_back(std::move(s));
  }
  for (const auto* v : {"pA", "pB", "pC"}) plan.outputs[v] = name.at(v);
  check_plan(plan);
  return plan;
}

}  // namespace trics
