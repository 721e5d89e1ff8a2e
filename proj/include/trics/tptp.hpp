#pragma once

#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trics/atom.hpp"
#include "trics/kb.hpp"

namespace trics::tptp {

class UnsupportedConstruct : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t col, std::string expected)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": expected " + expected),
        line_(line),
        col_(col),
        expected_(std::move(expected)) {}

  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_, col_;
  std::string expected_;
};

struct Formula {
  enum class Kind : std::uint8_t { True, False, Atomic, Not, And, Or, Implies, Iff, Forall, Exists };

  Kind kind = Kind::True;
  Atom atom;                  // Atomic
  std::vector<Formula> args;  // Not: 1, Implies/Iff: 2, And/Or: >= 2, quantifiers: 1
  std::vector<std::string> vars;

  bool operator==(const Formula&) const = default;

  static Formula truth(bool v) { return Formula{v ? Kind::True : Kind::False, {}, {}, {}}; }
  static Formula atomic(Atom a) { return Formula{Kind::Atomic, std::move(a), {}, {}}; }
  static Formula negation(Formula f) { return Formula{Kind::Not, {}, {std::move(f)}, {}}; }
  static Formula binary(Kind k, Formula l, Formula r) { return Formula{k, {}, {std::move(l), std::move(r)}, {}}; }
  static Formula nary(Kind k, std::vector<Formula> fs) { return Formula{k, {}, std::move(fs), {}}; }
  static Formula quantified(Kind k, std::vector<std::string> vs, Formula body) {
    return Formula{k, {}, {std::move(body)}, std::move(vs)};
  }
};

/// Conjunction that collapses to its only member and to $true when empty.
inline Formula conjunction(std::vector<Formula> fs) {
  if (fs.empty()) return Formula{};
  if (fs.size() == 1) return std::move(fs.front());
  return Formula::nary(Formula::Kind::And, std::move(fs));
}

inline Formula disjunction(std::vector<Formula> fs) {
  if (fs.empty()) return Formula::truth(false);
  if (fs.size() == 1) return std::move(fs.front());
  return Formula::nary(Formula::Kind::Or, std::move(fs));
}

enum class Role : std::uint8_t { Axiom, Conjecture };

struct FofUnit {
  std::string name;
  Role role = Role::Axiom;
  Formula formula;

  bool operator==(const FofUnit&) const = default;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline bool is_name(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

inline void check_atom(const Atom& a) {
  if (a.args.size() != arity(a.pred)) throw UnsupportedConstruct("arity mismatch in " + to_string(a));
  for (const auto& t : a.args) {
    if (!is_name(t.name) || looks_like_variable(t.name) != t.variable) {
      throw UnsupportedConstruct("term '" + t.name + "' is not a TPTP name");
    }
  }
}

inline void print(const Formula& f, std::string& out);

// Unitary position: quantifier bodies and negation operands.
inline void print_unitary(const Formula& f, std::string& out, bool bare_equality) {
  if (f.kind == Formula::Kind::Atomic && is_equality(f.atom.pred) && !bare_equality) {
    out += '(';
    print(f, out);
    out += ')';
    return;
  }
  print(f, out);
}

inline void print(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True: out += "$true"; return;
    case K::False: out += "$false"; return;
    case K::Atomic:
      check_atom(f.atom);
      out += to_string(f.atom, AtomStyle::Tptp);
      return;
    case K::Not:
      if (f.args.size() != 1) throw UnsupportedConstruct("negation takes one operand");
      out += "~ ";
      print_unitary(f.args[0], out, false);
      return;
    case K::And:
    case K::Or: {
      if (f.args.size() < 2) throw UnsupportedConstruct("n-ary connective with fewer than two operands");
      out += '(';
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i) out += f.kind == K::And ? " & " : " | ";
        print(f.args[i], out);
      }
      out += ')';
      return;
    }
    case K::Implies:
    case K::Iff:
      if (f.args.size() != 2) throw UnsupportedConstruct("binary connective needs two operands");
      out += '(';
      print(f.args[0], out);
      out += f.kind == K::Implies ? " => " : " <=> ";
      print(f.args[1], out);
      out += ')';
      return;
    case K::Forall:
    case K::Exists: {
      if (f.args.size() != 1 || f.vars.empty()) throw UnsupportedConstruct("malformed quantifier");
      out += f.kind == K::Forall ? "! [" : "? [";
      for (std::size_t i = 0; i < f.vars.size(); ++i) {
        if (!looks_like_variable(f.vars[i]) || !is_name(f.vars[i])) {
          throw UnsupportedConstruct("bad variable name " + f.vars[i]);
        }
        if (i) out += ',';
        out += f.vars[i];
      }
      out += "] : ";
      print_unitary(f.args[0], out, true);
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print(f, out);
  return out;
}

inline std::string serialize(const FofUnit& u) {
  if (!detail::is_name(u.name) || looks_like_variable(u.name)) {
    throw UnsupportedConstruct("unit name '" + u.name + "' must be a lowercase TPTP name");
  }
  return "fof(" + u.name + ", " + (u.role == Role::Axiom ? "axiom" : "conjecture") + ", " +
         to_string(u.formula) + ").";
}

inline std::string serialize(const std::vector<FofUnit>& units) {
  std::string out;
  for (const auto& u : units) {
    out += serialize(u);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<FofUnit> units() {
    std::vector<FofUnit> out;
    skip();
    while (!eof()) {
      out.push_back(unit());
      skip();
    }
    return out;
  }

  Formula formula_only() {
    skip();
    Formula f = formula();
    skip();
    if (!eof()) fail("end of input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, col, expected);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek(std::size_t k = 0) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

  void skip() {
    while (!eof()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '%') {
        while (!eof() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(std::string_view tok) {
    skip();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("'" + std::string(tok) + "'");
  }

  std::string name(const char* what) {
    skip();
    std::size_t start = pos_;
    if (!std::isalpha(static_cast<unsigned char>(peek()))) fail(what);
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  FofUnit unit() {
    skip();
    if (text_.substr(pos_, 4) != "fof(") fail("'fof('");
    pos_ += 4;
    FofUnit u;
    u.name = name("unit name");
    expect(",");
    auto role = name("formula role");
    if (role == "axiom" || role == "hypothesis") {
      u.role = Role::Axiom;
    } else if (role == "conjecture") {
      u.role = Role::Conjecture;
    } else {
      fail("role axiom or conjecture");
    }
    expect(",");
    u.formula = formula();
    expect(")");
    expect(".");
    return u;
  }

  Formula formula() {
    Formula lhs = unitary();
    skip();
    if (accept("<=>")) return Formula::binary(Formula::Kind::Iff, std::move(lhs), unitary());
    if (accept("=>")) return Formula::binary(Formula::Kind::Implies, std::move(lhs), unitary());
    for (auto [tok, kind] : {std::pair{"&", Formula::Kind::And}, std::pair{"|", Formula::Kind::Or}}) {
      if (!accept(tok)) continue;
      std::vector<Formula> fs{std::move(lhs), unitary()};
      while (accept(tok)) fs.push_back(unitary());
      skip();
      if (peek() == '&' || peek() == '|' || peek() == '=' || (peek() == '<' && peek(1) == '=')) {
        fail("')' before mixing connectives");
      }
      return Formula::nary(kind, std::move(fs));
    }
    return lhs;
  }

  Formula unitary() {
    skip();
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (peek() == '~') {
      ++pos_;
      return Formula::negation(unitary());
    }
    if (peek() == '!' && peek(1) != '=') {
      ++pos_;
      return quantified(Formula::Kind::Forall);
    }
    if (peek() == '?') {
      ++pos_;
      return quantified(Formula::Kind::Exists);
    }
    if (accept("$true")) return Formula::truth(true);
    if (accept("$false")) return Formula::truth(false);
    return atomic();
  }

  Formula quantified(Formula::Kind k) {
    expect("[");
    std::vector<std::string> vars;
    do {
      skip();
      if (!std::isupper(static_cast<unsigned char>(peek()))) fail("variable");
      vars.push_back(name("variable"));
    } while (accept(","));
    expect("]");
    expect(":");
    return Formula::quantified(k, std::move(vars), unitary());
  }

  Term term() {
    auto n = name("term");
    return Term{n, looks_like_variable(n)};
  }

  Formula atomic() {
    skip();
    std::size_t start = pos_;
    Term lhs = term();
    skip();
    if (peek() == '(' && !lhs.variable) {
      auto pred = predicate_from_name(lhs.name);
      if (!pred || is_equality(*pred)) {
        pos_ = start;
        fail("known predicate");
      }
      ++pos_;
      Atom a{*pred, {}};
      do {
        a.args.push_back(term());
      } while (accept(","));
      expect(")");
      if (a.args.size() != arity(*pred)) {
        pos_ = start;
        fail(std::to_string(arity(*pred)) + " arguments for " + std::string(predicate_name(*pred)));
      }
      return Formula::atomic(std::move(a));
    }
    if (accept("!=")) return Formula::atomic(Atom{Predicate::Neq, {lhs, term()}});
    if (peek() == '=' && peek(1) != '>') {
      ++pos_;
      return Formula::atomic(Atom{Predicate::Eq, {lhs, term()}});
    }
    fail("'(', '=' or '!='");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::vector<FofUnit> parse(std::string_view text) { return Parser(text).units(); }

inline Formula parse_formula(std::string_view text) { return Parser(text).formula_only(); }

/// Parses a single atom in either TPTP or text style, e.g. "pOc1 = pOc" or
/// "line(pOc1, pMa1, bisa)".
inline Atom parse_atom(std::string_view text) {
  Formula f = parse_formula(text);
  if (f.kind != Formula::Kind::Atomic) throw ParseError(1, 1, "a single atom");
  return f.atom;
}

// ---------------------------------------------------------------------------
// Rules and facts as formulas

inline Formula rule_to_formula(const CoherentRule& r) {
  std::vector<Formula> branches;
  for (const auto& b : r.conclusions) {
    std::vector<Formula> atoms;
    for (const auto& a : b.atoms) atoms.push_back(Formula::atomic(a));
    Formula body = conjunction(std::move(atoms));
    if (!b.existentials.empty()) body = Formula::quantified(Formula::Kind::Exists, b.existentials, std::move(body));
    branches.push_back(std::move(body));
  }
  Formula concl = disjunction(std::move(branches));
  Formula body = std::move(concl);
  if (!r.premises.empty()) {
    std::vector<Formula> prem;
    for (const auto& a : r.premises) prem.push_back(Formula::atomic(a));
    body = Formula::binary(Formula::Kind::Implies, conjunction(std::move(prem)), std::move(body));
  }
  if (r.universals.empty()) return body;
  return Formula::quantified(Formula::Kind::Forall, r.universals, std::move(body));
}

namespace detail {

inline std::vector<Atom> atom_conjunction(const Formula& f) {
  if (f.kind == Formula::Kind::Atomic) return {f.atom};
  if (f.kind == Formula::Kind::True) return {};
  if (f.kind != Formula::Kind::And) throw UnsupportedConstruct("expected a conjunction of atoms");
  std::vector<Atom> out;
  for (const auto& g : f.args) {
    if (g.kind != Formula::Kind::Atomic) throw UnsupportedConstruct("expected a conjunction of atoms");
    out.push_back(g.atom);
  }
  return out;
}

inline Branch branch_of(const Formula& f) {
  if (f.kind == Formula::Kind::Exists) return Branch{f.vars, atom_conjunction(f.args[0])};
  return Branch{{}, atom_conjunction(f)};
}

}  // namespace detail

/// Inverse of rule_to_formula for the coherent fragment. Throws
/// UnsupportedConstruct for anything else (negation, iff, nested implication).
inline CoherentRule formula_to_rule(const std::string& name, const Formula& f) {
  CoherentRule r{name, {}, {}, {}};
  const Formula* body = &f;
  while (body->kind == Formula::Kind::Forall) {
    r.universals.insert(r.universals.end(), body->vars.begin(), body->vars.end());
    body = &body->args[0];
  }
  const Formula* concl = body;
  if (body->kind == Formula::Kind::Implies) {
    r.premises = detail::atom_conjunction(body->args[0]);
    concl = &body->args[1];
  }
  if (concl->kind == Formula::Kind::Or) {
    for (const auto& g : concl->args) r.conclusions.push_back(detail::branch_of(g));
  } else if (concl->kind == Formula::Kind::False) {
    // empty disjunction: a constraint rule
  } else {
    r.conclusions.push_back(detail::branch_of(*concl));
  }
  if (auto err = rule_error(r)) throw UnsupportedConstruct(*err);
  return r;
}

inline FofUnit rule_unit(const CoherentRule& r) { return FofUnit{r.name, Role::Axiom, rule_to_formula(r)}; }

inline FofUnit fact_unit(const Atom& a) { return FofUnit{fact_name(a), Role::Axiom, Formula::atomic(a)}; }

/// Line-oriented KB text: sort declarations as comments, then one fof unit
/// per fact and per rule.
inline std::string dump_kb(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& o : kb.objects()) {
    out += "% decl: " + o.name + " : " + std::string(sort_name(o.sort)) + "\n";
  }
  for (const auto& f : kb.facts()) out += serialize(fact_unit(f)) + "\n";
  for (const auto& r : kb.rules()) out += serialize(rule_unit(r)) + "\n";
  return out;
}

inline KnowledgeBase load_kb(std::string_view text) {
  KnowledgeBase kb;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    static constexpr std::string_view tag = "% decl:";
    if (line.rfind(tag, 0) != 0) continue;
    auto rest = line.substr(tag.size());
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw ParseError(1, 1, "name : sort declaration");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto sort = sort_from_name(trim(rest.substr(colon + 1)));
    if (!sort) throw ParseError(1, 1, "sort point, line or circle");
    kb.add_object({trim(rest.substr(0, colon)), *sort, ObjectKind::SignificantConstant});
  }
  for (auto& u : parse(text)) {
    if (u.role != Role::Axiom) throw UnsupportedConstruct("knowledge base may not contain conjectures");
    if (u.formula.kind == Formula::Kind::Atomic && u.formula.atom.ground()) {
      kb.add_fact(u.formula.atom);
    } else {
      kb.add_rule(formula_to_rule(u.name, u.formula));
    }
  }
  return kb;
}

}  // namespace trics::tptp
