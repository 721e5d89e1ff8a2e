// trics: triangle construction solver and prover.
//
// Exit codes: 0 success, 1 failure (unproved, invalid, failed trials),
// 2 unsolved construction problem, 64 usage error or malformed input.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trics/trics.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUnsolved = 2;
constexpr int kUsage = 64;

constexpr std::uint64_t kDefaultSeed = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TRICS_SEED")) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("TRICS_SEED is not an unsigned integer: ") + env);
  }
  return kDefaultSeed;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

trics::ConstructionPlan load_plan(const std::string& path) {
  try {
    return trics::parse_plan(read_file(path));
  } catch (const trics::PlanError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

trics::ProblemSpec problem_of(const std::vector<std::string>& pts) {
  try {
    return trics::make_problem(pts);
  } catch (const trics::ProblemError& e) {
    throw UsageError(e.what());
  }
}

// Solves, printing the reason to stderr when there is no plan.
std::optional<trics::ConstructionPlan> solve_or_report(const trics::ProblemSpec& p, const trics::KnowledgeBase& kb) {
  auto r = trics::solve(p, kb);
  if (auto* u = std::get_if<trics::Unsolved>(&r)) {
    std::cerr << p.name() << ": unsolved (" << trics::unsolved_reason_name(u->reason) << ")";
    if (!u->detail.empty()) std::cerr << ": " << u->detail;
    std::cerr << "\n";
    return std::nullopt;
  }
  return std::get<trics::ConstructionPlan>(std::move(r));
}

std::vector<trics::StageSpec> load_stages(const std::string& path) {
  try {
    return trics::parse_stages(read_file(path));
  } catch (const trics::PlanError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// The tasks a proof run works on; staged tasks see earlier stage goals as hypotheses.
std::vector<trics::ProofTask> tasks_for(const trics::Conjecture& c, const trics::KnowledgeBase& kb,
                                        const std::vector<trics::StageSpec>* stages) {
  if (!stages) return trics::split_goals(c, kb);
  std::vector<trics::ProofTask> out;
  std::vector<trics::Atom> before;
  for (const auto& s : *stages) {
    out.push_back(trics::stage_task(s.name, c, kb, s.goal, before));
    before.push_back(s.goal);
  }
  return out;
}

int cmd_solve(const std::vector<std::string>& pts, const std::string& plan_out) {
  auto kb = trics::standard_kb();
  auto plan = solve_or_report(problem_of(pts), kb);
  if (!plan) return kUnsolved;
  std::cout << trics::explain_plan(*plan);
  if (!plan_out.empty()) write_file(plan_out, trics::plan_to_string(*plan));
  return kOk;
}

int cmd_prove(const std::vector<std::string>& pts, const std::string& stages_path, double timeout,
              const std::string& cert_out) {
  auto kb = trics::standard_kb();
  auto plan = solve_or_report(problem_of(pts), kb);
  if (!plan) return kUnsolved;
  auto c = trics::conjecture_from_plan(*plan, kb);
  trics::ProverLimits limits;
  limits.timeout_seconds = timeout;

  std::vector<trics::Proof> proofs;
  bool ok = true;
  if (!stages_path.empty()) {
    auto stages = load_stages(stages_path);
    try {
      for (auto& s : trics::prove_staged(c, kb, stages, limits)) proofs.push_back(std::move(s.proof));
    } catch (const trics::StageFailed& e) {
      std::cerr << e.what() << " (" << trics::failure_reason_name(e.reason) << ")\n";
      return kFail;
    }
  } else {
    for (const auto& t : trics::split_goals(c, kb)) {
      proofs.push_back(trics::prove(t, limits));
    }
  }

  std::string certs;
  for (const auto& p : proofs) {
    std::cout << "% " << p.task.name << ": " << trics::to_string(p.task.goal) << "\n";
    if (!p.proved()) {
      std::cout << "not proved: " << trics::failure_reason_name(p.reason);
      if (!p.detail.empty()) std::cout << " (" << p.detail << ")";
      std::cout << "\n\n";
      ok = false;
      continue;
    }
    std::cout << trics::render(p);
    auto check = trics::check_proof(p);
    if (!check) {
      std::cout << "INVALID at step " << check.step << ": " << check.reason << "\n";
      ok = false;
    }
    std::cout << "\n";
    certs += trics::write_certificate(p) + "\n";
  }
  if (!cert_out.empty()) write_file(cert_out, certs);
  return ok ? kOk : kFail;
}

// Certificates are concatenated; each begins at a "% task:" header.
std::vector<std::string> split_certificates(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("% task:", 0) == 0 || out.empty()) out.emplace_back();
    out.back() += line + "\n";
  }
  return out;
}

int cmd_check(const std::vector<std::string>& pts, const std::string& stages_path, const std::string& cert_path) {
  auto kb = trics::standard_kb();
  auto plan = solve_or_report(problem_of(pts), kb);
  if (!plan) return kUnsolved;
  auto c = trics::conjecture_from_plan(*plan, kb);
  std::vector<trics::StageSpec> stages;
  if (!stages_path.empty()) stages = load_stages(stages_path);
  auto tasks = tasks_for(c, kb, stages_path.empty() ? nullptr : &stages);
  auto certs = split_certificates(read_file(cert_path));
  bool ok = !certs.empty();
  for (const auto& cert : certs) {
    std::string name;
    if (auto at = cert.find("% task:"); at != std::string::npos) {
      name = trics::detail::trim(std::string_view(cert).substr(at + 7, cert.find('\n', at) - at - 7));
    }
    const trics::ProofTask* task = nullptr;
    for (const auto& t : tasks) {
      if (t.name == name) task = &t;
    }
    if (!task) {
      std::cout << (name.empty() ? "?" : name) << ": Invalid (no such task)\n";
      ok = false;
      continue;
    }
    auto r = trics::check_certificate(cert, *task);
    std::cout << name << ": " << (r ? "Valid" : "Invalid");
    if (!r) std::cout << " at step " << r.step << ": " << r.reason;
    std::cout << "\n";
    ok = ok && r.valid;
  }
  return ok ? kOk : kFail;
}

int cmd_verify(const std::string& plan_path, std::size_t trials, double tol, std::uint64_t seed,
               std::optional<std::uint64_t> replay) {
  auto plan = load_plan(plan_path);
  if (replay) {
    auto why = trics::verify_trial(plan, *replay, tol);
    std::cout << "triangle seed " << *replay << ": " << (why ? "FAIL " + *why : std::string("pass")) << "\n";
    return why ? kFail : kOk;
  }
  auto rep = trics::verify_plan(plan, trials, tol, seed);
  std::cout << rep.table();
  if (!rep.failures.empty()) std::cout << "replay a failure with --replay <seed>\n";
  return rep.ok() ? kOk : kFail;
}

int cmd_export(const std::vector<std::string>& pts, const std::string& out) {
  auto kb = trics::standard_kb();
  auto plan = solve_or_report(problem_of(pts), kb);
  if (!plan) return kUnsolved;
  auto c = trics::conjecture_from_plan(*plan, kb);
  write_file(out, trics::tptp::serialize(trics::tptp_problem(c, kb)));
  std::cout << "wrote " << out << "\n";
  return kOk;
}

int cmd_corpus(double timeout, const std::string& out, std::uint64_t seed, std::size_t threads) {
  auto kb = trics::standard_kb();
  trics::CorpusOptions opt;
  opt.timeout_seconds = timeout;
  opt.seed = seed;
  opt.threads = threads;
  auto rows = trics::run_corpus(kb, opt);
  std::cout << trics::corpus_table(rows);
  if (!out.empty()) write_file(out, trics::corpus_rows(rows));
  for (const auto& r : rows) {
    if (r.solved && !r.verified) return kFail;
  }
  return kOk;
}

int cmd_svg(const std::string& plan_path, std::uint64_t seed, const std::string& out) {
  auto plan = load_plan(plan_path);
  try {
    write_file(out, trics::render_svg(plan, seed));
  } catch (const trics::ExecutionFailure& e) {
    std::cerr << "construction fails on this triangle: " << e.what() << "\n";
    return kFail;
  }
  std::cout << "wrote " << out << "\n";
  return kOk;
}

int cmd_kb_validate(std::size_t trials, std::uint64_t seed) {
  auto rep = trics::validate_kb(trics::standard_kb(), trials, seed);
  std::cout << rep.table();
  return rep.failures() == 0 ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangle construction solver, prover and checker"};
  app.require_subcommand(1);

  std::vector<std::string> pts;
  std::string plan_out, stages, cert, plan_path, out;
  double timeout = 10, tol = 1e-9;
  std::size_t trials = 100, threads = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> replay;

  auto points = [&](CLI::App* sub) {
    sub->add_option("points", pts, "three given points, e.g. A Ha O")->required()->expected(3);
  };

  auto* solve = app.add_subcommand("solve", "find a construction plan");
  points(solve);
  solve->add_option("--plan-out", plan_out, "write the plan file here");

  auto* prove = app.add_subcommand("prove", "prove the construction correct");
  points(prove);
  prove->add_option("--stages", stages, "stage file with intermediate goals");
  prove->add_option("--timeout", timeout, "prover timeout per goal, seconds")->check(CLI::PositiveNumber);
  prove->add_option("--certificate", cert, "write proof certificates here");

  auto* check = app.add_subcommand("check", "check proof certificates");
  points(check);
  check->add_option("--stages", stages, "stage file the certificates were produced with");
  check->add_option("--certificate", cert, "certificate file")->required();

  auto* verify = app.add_subcommand("verify", "test a plan on random triangles");
  verify->add_option("--plan", plan_path, "plan file")->required();
  verify->add_option("--trials", trials, "number of triangles")->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol, "coordinate tolerance")->check(CLI::PositiveNumber);
  auto* seed_opt = verify->add_option("--seed", seed, "base seed");
  verify->add_option("--replay", replay, "rerun the single triangle with this seed");

  auto* exp = app.add_subcommand("export-tptp", "write axioms and conjecture in TPTP");
  points(exp);
  exp->add_option("--out", out, "output .p file")->required();

  auto* corpus = app.add_subcommand("corpus", "run every problem end to end");
  corpus->add_option("--timeout", timeout, "prover timeout per goal, seconds")->check(CLI::PositiveNumber);
  corpus->add_option("--out", out, "write tab-separated rows here");
  corpus->add_option("--threads", threads, "worker threads (0 = all cores)");
  auto* corpus_seed = corpus->add_option("--seed", seed, "verification seed");

  auto* svg = app.add_subcommand("render-svg", "draw a construction");
  svg->add_option("--plan", plan_path, "plan file")->required();
  auto* svg_seed = svg->add_option("--seed", seed, "triangle seed");
  svg->add_option("--out", out, "output .svg file")->required();

  auto* kbv = app.add_subcommand("kb-validate", "model-check the knowledge base");
  kbv->add_option("--trials", trials, "number of triangles")->check(CLI::PositiveNumber);
  auto* kbv_seed = kbv->add_option("--seed", seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto seed_or_default = [&](CLI::Option* o) { return o->count() ? seed : default_seed(); };
    if (*solve) return cmd_solve(pts, plan_out);
    if (*prove) return cmd_prove(pts, stages, timeout, cert);
    if (*check) return cmd_check(pts, stages, cert);
    if (*verify) return cmd_verify(plan_path, trials, tol, seed_or_default(seed_opt), replay);
    if (*exp) return cmd_export(pts, out);
    if (*corpus) return cmd_corpus(timeout, out, seed_or_default(corpus_seed), threads);
    if (*svg) return cmd_svg(plan_path, seed_or_default(svg_seed), out);
    if (*kbv) return cmd_kb_validate(trials, seed_or_default(kbv_seed));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
