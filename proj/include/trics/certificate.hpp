#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "trics/checker.hpp"
#include "trics/plan.hpp"
#include "trics/proof.hpp"
#include "trics/tptp.hpp"

namespace trics {

class CertificateError : public std::runtime_error {
 public:
  CertificateError(std::size_t line, const std::string& what)
      : std::runtime_error("certificate line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace detail

inline std::string axioms_digest(const ProofTask& t) {
  std::string text;
  for (const auto& r : t.axioms) text += tptp::serialize(tptp::rule_unit(r)) + "\n";
  return detail::hex64(detail::fnv1a64(text));
}

inline std::string facts_digest(const ProofTask& t) {
  std::string text;
  for (const auto& a : t.hypotheses) text += to_string(a) + "\n";
  text += "--\n";
  for (const auto& a : t.kb_facts) text += to_string(a) + "\n";
  return detail::hex64(detail::fnv1a64(text));
}

/// One line per step, e.g.
///   4. ha = ha1 (by MP, from perp(ha1, bc), inc(pA, ha1) using axiom haA; instantiation: H -> ha1)
inline std::string render_step(const Proof& p, std::size_t i) {
  const ProofStep& s = p.steps[i];
  std::string out = std::to_string(i + 1) + ". ";
  if (s.kind == ProofStepKind::Qed) return out + "Proved by assumption! (by QEDas)";
  if (s.kind == ProofStepKind::Fact) return out + to_string(s.atom) + " (by axiom " + s.rule + ")";
  if (s.kind == ProofStepKind::Witness) {
    out += "Let ";
    for (std::size_t w = 0; w < s.witnesses.size(); ++w) out += (w ? ", " : "") + s.witnesses[w];
    out += " be such that ";
  }
  out += to_string(s.atom) + " (by MP, ";
  if (!s.premises.empty()) {
    out += "from ";
    for (std::size_t k = 0; k < s.premises.size(); ++k) {
      const StepRef& r = s.premises[k];
      const Atom& a = r.kind == StepRef::Kind::Hyp ? p.task.hypotheses.at(r.index) : p.steps.at(r.index).atom;
      out += (k ? ", " : "") + to_string(a);
    }
    out += " ";
  }
  out += "using axiom " + s.rule;
  if (!s.instantiation.empty()) {
    out += "; instantiation: ";
    for (std::size_t k = 0; k < s.instantiation.size(); ++k) {
      out += (k ? ", " : "") + s.instantiation[k].first + " -> " + s.instantiation[k].second;
    }
  }
  return out + ")";
}

inline std::string render(const Proof& p) {
  std::string out;
  for (std::size_t i = 0; i < p.steps.size(); ++i) out += render_step(p, i) + "\n";
  return out;
}

inline std::string write_certificate(const Proof& p) {
  std::string out = "% task: " + p.task.name + "\n";
  out += "% goal: " + to_string(p.task.goal) + "\n";
  out += "% axioms: " + axioms_digest(p.task) + "\n";
  out += "% facts: " + facts_digest(p.task) + "\n";
  return out + render(p);
}

namespace detail {

// Splits at commas outside parentheses.
inline std::vector<std::string> split_top(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

inline bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

}  // namespace detail

/// Parses a certificate written for `task` back into a proof. Premises are
/// resolved to the latest earlier step with the same atom, else to a
/// hypothesis. Throws CertificateError when the header does not describe the
/// task or a line cannot be read.
inline Proof read_certificate(std::string_view text, const ProofTask& task) {
  Proof p;
  p.task = task;
  p.status = ProofStatus::Proved;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  bool has_task = false, has_goal = false, has_axioms = false, has_facts = false;
  auto resolve = [&](const Atom& a, std::size_t ln) -> StepRef {
    for (std::size_t i = p.steps.size(); i-- > 0;) {
      if (p.steps[i].kind != ProofStepKind::Qed && p.steps[i].atom == a) return StepRef::step(i);
    }
    for (std::size_t i = 0; i < task.hypotheses.size(); ++i) {
      if (task.hypotheses[i] == a) return StepRef::hyp(i);
    }
    throw CertificateError(ln, "premise " + to_string(a) + " is neither a hypothesis nor an earlier step");
  };
  auto atom_of = [](const std::string& s, std::size_t ln) {
    try {
      return tptp::parse_atom(s);
    } catch (const std::exception& e) {
      throw CertificateError(ln, "cannot read atom '" + s + "': " + e.what());
    }
  };
  while (std::getline(in, raw)) {
    ++line;
    std::string l = detail::trim(raw);
    if (l.empty()) continue;
    if (l[0] == '%') {
      std::string body = detail::trim(std::string_view(l).substr(1));
      auto colon = body.find(':');
      if (colon == std::string::npos) continue;
      std::string key = detail::trim(std::string_view(body).substr(0, colon));
      std::string val = detail::trim(std::string_view(body).substr(colon + 1));
      if (key == "task") {
        if (val != task.name) throw CertificateError(line, "certificate is for task " + val);
        has_task = true;
      } else if (key == "goal") {
        if (atom_of(val, line) != task.goal) throw CertificateError(line, "goal differs from the task goal");
        has_goal = true;
      } else if (key == "axioms") {
        if (val != axioms_digest(task)) throw CertificateError(line, "axiom digest mismatch");
        has_axioms = true;
      } else if (key == "facts") {
        if (val != facts_digest(task)) throw CertificateError(line, "fact digest mismatch");
        has_facts = true;
      }
      continue;
    }
    auto dot = l.find(". ");
    if (dot == std::string::npos) throw CertificateError(line, "expected a numbered step");
    if (l.substr(0, dot) != std::to_string(p.steps.size() + 1)) throw CertificateError(line, "steps out of sequence");
    std::string rest = l.substr(dot + 2);
    ProofStep s;
    if (rest == "Proved by assumption! (by QEDas)") {
      s.kind = ProofStepKind::Qed;
      s.atom = task.goal;
      s.premises.push_back(resolve(task.goal, line));
      p.steps.push_back(std::move(s));
      continue;
    }
    if (detail::starts_with(rest, "Let ")) {
      auto such = rest.find(" be such that ");
      if (such == std::string::npos) throw CertificateError(line, "malformed witness step");
      for (const auto& w : detail::split_top(std::string_view(rest).substr(4, such - 4))) s.witnesses.push_back(w);
      rest = rest.substr(such + 14);
      s.kind = ProofStepKind::Witness;
    }
    auto by = rest.find(" (by ");
    if (by == std::string::npos || rest.back() != ')') throw CertificateError(line, "missing justification");
    s.atom = atom_of(rest.substr(0, by), line);
    std::string just = rest.substr(by + 5, rest.size() - by - 6);
    if (detail::starts_with(just, "axiom ")) {
      if (s.kind == ProofStepKind::Witness) throw CertificateError(line, "witness step cites a fact");
      s.kind = ProofStepKind::Fact;
      s.rule = detail::trim(std::string_view(just).substr(6));
      p.steps.push_back(std::move(s));
      continue;
    }
    if (!detail::starts_with(just, "MP, ")) throw CertificateError(line, "unknown justification");
    if (s.kind != ProofStepKind::Witness) s.kind = ProofStepKind::Derive;
    just = just.substr(4);
    auto semi = just.find("; instantiation: ");
    std::string inst = semi == std::string::npos ? "" : just.substr(semi + 17);
    std::string head = semi == std::string::npos ? just : just.substr(0, semi);
    auto using_at = head.rfind("using axiom ");
    if (using_at == std::string::npos) throw CertificateError(line, "missing axiom name");
    s.rule = detail::trim(std::string_view(head).substr(using_at + 12));
    std::string from = detail::trim(std::string_view(head).substr(0, using_at));
    if (!from.empty()) {
      if (!detail::starts_with(from, "from ")) throw CertificateError(line, "malformed premise list");
      for (const auto& a : detail::split_top(std::string_view(from).substr(5))) {
        s.premises.push_back(resolve(atom_of(a, line), line));
      }
    }
    if (!inst.empty()) {
      for (const auto& pair : detail::split_top(inst)) {
        auto arrow = pair.find(" -> ");
        if (arrow == std::string::npos) throw CertificateError(line, "malformed instantiation " + pair);
        s.instantiation.emplace_back(detail::trim(std::string_view(pair).substr(0, arrow)),
                                     detail::trim(std::string_view(pair).substr(arrow + 4)));
      }
    }
    p.steps.push_back(std::move(s));
  }
  if (!has_task || !has_goal || !has_axioms || !has_facts) throw CertificateError(line, "incomplete header");
  return p;
}

/// Reads and checks a certificate; header and parse problems become an
/// invalid result rather than an exception.
inline CheckResult check_certificate(std::string_view text, const ProofTask& task) {
  try {
    return check_proof(read_certificate(text, task));
  } catch (const CertificateError& e) {
    return CheckResult{false, 0, e.what()};
  }
}

}  // namespace trics
