#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trics {

enum class Sort : std::uint8_t { Point, Line, Circle };

inline std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Point: return "point";
    case Sort::Line: return "line";
    case Sort::Circle: return "circle";
  }
  return "?";
}

inline std::optional<Sort> sort_from_name(std::string_view s) {
  if (s == "point") return Sort::Point;
  if (s == "line") return Sort::Line;
  if (s == "circle") return Sort::Circle;
  return std::nullopt;
}

enum class Predicate : std::uint8_t {
  Inc,
  IncC,
  Center,
  Perp,
  Para,
  Line,
  Ratio12,
  Ratio13,
  Ratio21,
  Ratio23,
  Eq,
  Neq,
};

inline constexpr std::size_t kPredicateCount = 12;

struct PredicateInfo {
  std::string_view name;
  std::uint8_t arity;
  // Sorts per argument position. Equality and disequality are sort-generic:
  // both sides must share a sort, whichever it is.
  std::array<Sort, 4> sorts;
  bool generic;
};

inline constexpr std::array<PredicateInfo, kPredicateCount> kPredicates{{
    {"inc", 2, {Sort::Point, Sort::Line}, false},
    {"inc_c", 2, {Sort::Point, Sort::Circle}, false},
    {"center", 2, {Sort::Point, Sort::Circle}, false},
    {"perp", 2, {Sort::Line, Sort::Line}, false},
    {"para", 2, {Sort::Line, Sort::Line}, false},
    {"line", 3, {Sort::Point, Sort::Point, Sort::Line}, false},
    {"ratio12", 4, {Sort::Point, Sort::Point, Sort::Point, Sort::Point}, false},
    {"ratio13", 4, {Sort::Point, Sort::Point, Sort::Point, Sort::Point}, false},
    {"ratio21", 4, {Sort::Point, Sort::Point, Sort::Point, Sort::Point}, false},
    {"ratio23", 4, {Sort::Point, Sort::Point, Sort::Point, Sort::Point}, false},
    {"=", 2, {}, true},
    {"!=", 2, {}, true},
}};

inline const PredicateInfo& info(Predicate p) { return kPredicates[static_cast<std::size_t>(p)]; }
inline std::string_view predicate_name(Predicate p) { return info(p).name; }
inline std::size_t arity(Predicate p) { return info(p).arity; }
inline bool is_equality(Predicate p) { return p == Predicate::Eq || p == Predicate::Neq; }

inline std::optional<Predicate> predicate_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kPredicateCount; ++i) {
    if (kPredicates[i].name == name) return static_cast<Predicate>(i);
  }
  return std::nullopt;
}

/// Fixed sort of an argument position; nullopt for the sort-generic equality
/// predicates.
inline std::optional<Sort> argument_sort(Predicate p, std::size_t pos) {
  const auto& pi = info(p);
  if (pi.generic || pos >= pi.arity) return std::nullopt;
  return pi.sorts[pos];
}

/// Ratio predicates: ratioNM(A, B, C, D) holds when vec(A,B) = (N/M) vec(C,D).
inline std::optional<std::pair<int, int>> ratio_of(Predicate p) {
  switch (p) {
    case Predicate::Ratio12: return std::pair{1, 2};
    case Predicate::Ratio13: return std::pair{1, 3};
    case Predicate::Ratio21: return std::pair{2, 1};
    case Predicate::Ratio23: return std::pair{2, 3};
    default: return std::nullopt;
  }
}

inline std::optional<Predicate> ratio_predicate(int num, int den) {
  if (num == 1 && den == 2) return Predicate::Ratio12;
  if (num == 1 && den == 3) return Predicate::Ratio13;
  if (num == 2 && den == 1) return Predicate::Ratio21;
  if (num == 2 && den == 3) return Predicate::Ratio23;
  return std::nullopt;
}

/// Variables start with an uppercase letter, constants with a lowercase one.
struct Term {
  std::string name;
  bool variable = false;

  static Term constant(std::string n) { return Term{std::move(n), false}; }
  static Term var(std::string n) { return Term{std::move(n), true}; }

  auto operator<=>(const Term&) const = default;
};

inline bool looks_like_variable(std::string_view name) {
  return !name.empty() && name.front() >= 'A' && name.front() <= 'Z';
}

struct Atom {
  Predicate pred = Predicate::Eq;
  std::vector<Term> args;

  auto operator<=>(const Atom&) const = default;

  bool ground() const {
    for (const auto& t : args) {
      if (t.variable) return false;
    }
    return true;
  }
};

class SortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds an atom from bare names; uppercase-initial names become variables.
/// Throws SortError when the arity does not match the predicate.
inline Atom make_atom(Predicate p, std::initializer_list<std::string_view> names) {
  if (names.size() != arity(p)) {
    throw SortError("arity mismatch for " + std::string(predicate_name(p)));
  }
  Atom a{p, {}};
  for (auto n : names) a.args.push_back(Term{std::string(n), looks_like_variable(n)});
  return a;
}

inline Atom eq(std::string_view a, std::string_view b) { return make_atom(Predicate::Eq, {a, b}); }
inline Atom neq(std::string_view a, std::string_view b) { return make_atom(Predicate::Neq, {a, b}); }

enum class AtomStyle {
  Tptp,  // inc(pA,ha1)
  Text,  // inc(pA, ha1)
};

inline std::string to_string(const Atom& a, AtomStyle style = AtomStyle::Text) {
  std::string out;
  if (is_equality(a.pred)) {
    out = a.args.at(0).name;
    out += a.pred == Predicate::Eq ? " = " : " != ";
    out += a.args.at(1).name;
    return out;
  }
  out = std::string(predicate_name(a.pred));
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += style == AtomStyle::Tptp ? "," : ", ";
    out += a.args[i].name;
  }
  out += ')';
  return out;
}

using SortTable = std::map<std::string, Sort, std::less<>>;

/// Checks a ground or open atom against the predicate signature. Constants are
/// looked up in `constants`; variables in `variables` when present. Returns an
/// error message, or nullopt when well sorted.
inline std::optional<std::string> sort_error(const Atom& a, const SortTable& constants,
                                             const SortTable* variables = nullptr) {
  if (a.args.size() != arity(a.pred)) {
    return "arity mismatch in " + to_string(a);
  }
  auto sort_of = [&](const Term& t) -> std::optional<Sort> {
    const SortTable* table = t.variable ? variables : &constants;
    if (!table) return std::nullopt;
    auto it = table->find(t.name);
    if (it == table->end()) return std::nullopt;
    return it->second;
  };
  if (is_equality(a.pred)) {
    auto l = sort_of(a.args[0]);
    auto r = sort_of(a.args[1]);
    if (!a.args[0].variable && !l) return "undeclared constant " + a.args[0].name;
    if (!a.args[1].variable && !r) return "undeclared constant " + a.args[1].name;
    if (l && r && *l != *r) return "sort mismatch in " + to_string(a);
    return std::nullopt;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    auto s = sort_of(a.args[i]);
    if (!a.args[i].variable && !s) return "undeclared constant " + a.args[i].name;
    if (s && *s != *argument_sort(a.pred, i)) {
      return "argument " + std::to_string(i) + " of " + to_string(a) + " must be a " +
             std::string(sort_name(*argument_sort(a.pred, i)));
    }
  }
  return std::nullopt;
}

}  // namespace trics
