#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trics/atom.hpp"
#include "trics/conjecture.hpp"

namespace trics {

enum class ProofStatus : std::uint8_t { Proved, Failed };

enum class FailureReason : std::uint8_t { None, Fixpoint, RoundLimit, WitnessLimit, Timeout, Unsupported };

inline std::string_view failure_reason_name(FailureReason r) {
  switch (r) {
    case FailureReason::None: return "None";
    case FailureReason::Fixpoint: return "Fixpoint";
    case FailureReason::RoundLimit: return "RoundLimit";
    case FailureReason::WitnessLimit: return "WitnessLimit";
    case FailureReason::Timeout: return "Timeout";
    case FailureReason::Unsupported: return "Unsupported";
  }
  return "?";
}

/// Where a premise comes from: a task hypothesis or an earlier step.
struct StepRef {
  enum class Kind : std::uint8_t { Hyp, Step } kind = Kind::Step;
  std::size_t index = 0;  // 0-based

  static StepRef hyp(std::size_t i) { return {Kind::Hyp, i}; }
  static StepRef step(std::size_t i) { return {Kind::Step, i}; }
  bool operator==(const StepRef&) const = default;
};

enum class ProofStepKind : std::uint8_t {
  Fact,     // a knowledge-base fact, named by its fact name
  Derive,   // modus ponens with a Horn instance of an axiom
  Witness,  // a fresh constant from an existential axiom
  Qed,      // the goal, found among hypotheses or earlier steps
};

struct ProofStep {
  ProofStepKind kind = ProofStepKind::Derive;
  Atom atom;
  std::string rule;
  std::vector<std::pair<std::string, std::string>> instantiation;  // in universal order
  std::vector<StepRef> premises;
  std::vector<std::string> witnesses;
};

struct ProofStats {
  std::size_t rounds = 0;
  std::size_t facts = 0;
  std::size_t witnesses = 0;
  double seconds = 0;
};

struct Proof {
  ProofTask task;
  ProofStatus status = ProofStatus::Failed;
  FailureReason reason = FailureReason::None;
  std::string detail;
  std::vector<ProofStep> steps;
  ProofStats stats;

  bool proved() const { return status == ProofStatus::Proved; }
};

/// Both a = b and a != b became derivable from the hypotheses.
class InconsistencyDetected : public std::runtime_error {
 public:
  InconsistencyDetected(Atom equal, Atom distinct)
      : std::runtime_error("inconsistent hypotheses: " + to_string(equal) + " and " + to_string(distinct)),
        equal(std::move(equal)),
        distinct(std::move(distinct)) {}
  Atom equal, distinct;
};

}  // namespace trics
