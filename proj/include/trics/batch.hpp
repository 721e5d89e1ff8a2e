#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "trics/checker.hpp"
#include "trics/conjecture.hpp"
#include "trics/corpus.hpp"
#include "trics/oracle.hpp"
#include "trics/prover.hpp"
#include "trics/solver.hpp"

namespace trics {

struct CorpusResult {
  std::string problem;
  bool solved = false;
  std::size_t plan_steps = 0;
  bool verified = false;
  std::size_t goals_proved = 0;
  std::size_t goals_total = 0;
  double prover_ms = 0;
  std::string reason = "-";  // machine-readable, e.g. unsolved:NoDetermination

  bool fully_proved() const { return solved && verified && goals_proved == goals_total; }
};

struct CorpusOptions {
  double timeout_seconds = 10;
  std::size_t verify_trials = 100;
  double verify_tol = 1e-9;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

/// Solve, verify, prove and check one problem. A goal counts as proved only
/// when its proof also passes check_proof.
inline CorpusResult run_problem(const ProblemSpec& p, const KnowledgeBase& kb, const CorpusOptions& opt) {
  CorpusResult r;
  r.problem = p.name();
  auto solved = solve(p, kb);
  if (auto* u = std::get_if<Unsolved>(&solved)) {
    r.reason = "unsolved:" + std::string(unsolved_reason_name(u->reason));
    return r;
  }
  const auto& plan = std::get<ConstructionPlan>(solved);
  r.solved = true;
  r.plan_steps = plan.steps.size();
  r.verified = verify_plan(plan, opt.verify_trials, opt.verify_tol, opt.seed).ok();
  if (!r.verified) {
    r.reason = "unverified";
    return r;
  }
  auto c = conjecture_from_plan(plan, kb);
  auto tasks = split_goals(c, kb);
  r.goals_total = tasks.size();
  ProverLimits limits;
  limits.timeout_seconds = opt.timeout_seconds;
  auto start = std::chrono::steady_clock::now();
  for (const auto& t : tasks) {
    try {
      Proof proof = prove(t, limits);
      if (!proof.proved()) {
        if (r.reason == "-") r.reason = "unproved:" + t.name + ":" + std::string(failure_reason_name(proof.reason));
      } else if (!check_proof(proof)) {
        if (r.reason == "-") r.reason = "invalid:" + t.name;
      } else {
        ++r.goals_proved;
      }
    } catch (const InconsistencyDetected&) {
      if (r.reason == "-") r.reason = "inconsistent:" + t.name;
    }
  }
  r.prover_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Runs every corpus problem, concurrently when threads allow; results come
/// back in canonical corpus order.
inline std::vector<CorpusResult> run_corpus(const KnowledgeBase& kb, const CorpusOptions& opt) {
  auto problems = enumerate_corpus();
  std::vector<CorpusResult> out(problems.size());
  std::size_t threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < problems.size(); i = next++) out[i] = run_problem(problems[i], kb, opt);
  };
  std::vector<std::future<void>> pool;
  for (std::size_t t = 1; t < std::min(threads, problems.size()); ++t) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();
  return out;
}

inline std::string corpus_table(const std::vector<CorpusResult>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %-6s %-5s %-8s %-7s %9s  %s\n", "problem", "solved", "steps", "verified", "proved",
                "prover_ms", "reason");
  out += buf;
  std::size_t solved = 0, full = 0, goals = 0, goals_proved = 0;
  for (const auto& r : rows) {
    std::string proved = std::to_string(r.goals_proved) + "/" + std::to_string(r.goals_total);
    std::snprintf(buf, sizeof buf, "%-16s %-6s %-5zu %-8s %-7s %9.1f  %s\n", r.problem.c_str(), r.solved ? "yes" : "no",
                  r.plan_steps, r.verified ? "yes" : "no", proved.c_str(), r.prover_ms, r.reason.c_str());
    out += buf;
    solved += r.solved;
    full += r.fully_proved();
    goals += r.goals_total;
    goals_proved += r.goals_proved;
  }
  out += std::to_string(rows.size()) + " problems, " + std::to_string(solved) + " solved, " + std::to_string(full) +
         " fully proved, " + std::to_string(goals_proved) + "/" + std::to_string(goals) + " goals proved\n";
  return out;
}

/// Tab-separated rows with a header line.
inline std::string corpus_rows(const std::vector<CorpusResult>& rows) {
  std::string out = "problem\tsolved\tplan_steps\tverified\tgoals_proved\tgoals_total\tprover_ms\treason\n";
  char ms[32];
  for (const auto& r : rows) {
    std::snprintf(ms, sizeof ms, "%.1f", r.prover_ms);
    out += r.problem + "\t" + (r.solved ? "1" : "0") + "\t" + std::to_string(r.plan_steps) + "\t" +
           (r.verified ? "1" : "0") + "\t" + std::to_string(r.goals_proved) + "\t" + std::to_string(r.goals_total) +
           "\t" + ms + "\t" + r.reason + "\n";
  }
  return out;
}

}  // namespace trics
