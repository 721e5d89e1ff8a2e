#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "trics/atom.hpp"
#include "trics/kb.hpp"
#include "trics/plan.hpp"

namespace trics {

struct Vec2 {
  double x = 0, y = 0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

/// a x + b y + c = 0 with a^2 + b^2 = 1 and the first nonzero of (a, b) positive.
struct LineCoef {
  double a = 1, b = 0, c = 0;

  static LineCoef normalized(double a, double b, double c) {
    double n = std::hypot(a, b);
    if (n == 0) throw std::domain_error("degenerate line coefficients");
    a /= n;
    b /= n;
    c /= n;
    if (a < 0 || (a == 0 && b < 0)) {
      a = -a;
      b = -b;
      c = -c;
    }
    return {a, b, c};
  }

  double eval(Vec2 p) const { return a * p.x + b * p.y + c; }
  Vec2 normal() const { return {a, b}; }
  Vec2 direction() const { return {-b, a}; }
};

struct CircleVal {
  Vec2 center;
  double r = 0;
};

struct Diagram {
  std::map<std::string, Vec2, std::less<>> points;
  std::map<std::string, LineCoef, std::less<>> lines;
  std::map<std::string, CircleVal, std::less<>> circles;

  std::optional<Sort> sort_of(std::string_view n) const {
    if (points.count(n)) return Sort::Point;
    if (lines.count(n)) return Sort::Line;
    if (circles.count(n)) return Sort::Circle;
    return std::nullopt;
  }
};

class UnboundConstant : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SamplingFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FailureKind : std::uint8_t { NoIntersection, Tangent, CoincidentInputs };

inline std::string_view failure_kind_name(FailureKind k) {
  switch (k) {
    case FailureKind::NoIntersection: return "NoIntersection";
    case FailureKind::Tangent: return "Tangent";
    case FailureKind::CoincidentInputs: return "CoincidentInputs";
  }
  return "?";
}

class ExecutionFailure : public std::runtime_error {
 public:
  ExecutionFailure(std::size_t step, FailureKind kind)
      : std::runtime_error("step " + std::to_string(step + 1) + ": " + std::string(failure_kind_name(kind))),
        step_(step),
        kind_(kind) {}
  std::size_t step() const { return step_; }
  FailureKind kind() const { return kind_; }

 private:
  std::size_t step_;
  FailureKind kind_;
};

namespace geom {

inline LineCoef through(Vec2 p, Vec2 q) {
  Vec2 d = q - p;
  return LineCoef::normalized(-d.y, d.x, d.y * p.x - d.x * p.y);
}

inline LineCoef perpendicular(const LineCoef& l, Vec2 p) {
  Vec2 n = l.direction();
  return LineCoef::normalized(n.x, n.y, -(n.x * p.x + n.y * p.y));
}

inline Vec2 foot(const LineCoef& l, Vec2 p) { return p - l.normal() * l.eval(p); }

inline std::optional<Vec2> meet(const LineCoef& l, const LineCoef& m, double tol) {
  double det = l.a * m.b - m.a * l.b;
  if (std::abs(det) <= tol) return std::nullopt;
  return Vec2{(l.b * m.c - m.b * l.c) / det, (l.c * m.a - m.c * l.a) / det};
}

inline Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c) {
  double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  double a2 = a.dot(a), b2 = b.dot(b), c2 = c.dot(c);
  return {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
          (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
}

inline double angle_at(Vec2 p, Vec2 q, Vec2 r) {
  Vec2 u = q - p, v = r - p;
  return std::atan2(std::abs(u.cross(v)), u.dot(v));
}

}  // namespace geom

/// All significant objects of triangle ABC, by closed-form geometry.
inline Diagram triangle_diagram(Vec2 a, Vec2 b, Vec2 c) {
  Diagram d;
  const std::array<Vec2, 3> v{a, b, c};
  const auto& idx = detail::triangle_indices();
  auto& P = d.points;
  P["pA"] = a;
  P["pB"] = b;
  P["pC"] = c;
  Vec2 o = geom::circumcenter(a, b, c);
  Vec2 g = (a + b + c) * (1.0 / 3.0);
  P["pOc"] = o;
  P["pG"] = g;
  P["pH"] = a + b + c - o * 2.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& t = idx[i];
    Vec2 u = v[(i + 1) % 3], w = v[(i + 2) % 3];
    Vec2 m = (u + w) * 0.5;
    LineCoef side = geom::through(u, w);
    P[t.mid] = m;
    P[t.foot] = geom::foot(side, v[i]);
    d.lines[t.side] = side;
    d.lines[t.alt] = geom::perpendicular(side, v[i]);
    d.lines[t.bis] = geom::perpendicular(side, m);
    d.lines[t.med] = geom::through(v[i], m);
  }
  d.circles["cc"] = CircleVal{o, (a - o).norm()};
  return d;
}

inline bool well_shaped(Vec2 a, Vec2 b, Vec2 c, double min_angle_deg = 10.0, double min_side = 1.0) {
  const double min_angle = min_angle_deg * std::numbers::pi / 180.0;
  if ((a - b).norm() < min_side || (b - c).norm() < min_side || (c - a).norm() < min_side) return false;
  return geom::angle_at(a, b, c) >= min_angle && geom::angle_at(b, c, a) >= min_angle &&
         geom::angle_at(c, a, b) >= min_angle;
}

/// Random non-degenerate triangle, deterministic per seed.
inline Diagram sample_triangle(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int tries = 0; tries < 10000; ++tries) {
    Vec2 a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)}, c{coord(rng), coord(rng)};
    if (well_shaped(a, b, c)) return triangle_diagram(a, b, c);
  }
  throw SamplingFailed("no acceptable triangle after 10000 tries for seed " + std::to_string(seed));
}

// ---------------------------------------------------------------------------
// Plans

/// Executes a plan on coordinates of its given points. Returned diagram is
/// keyed by plan names.
inline Diagram execute_plan(const ConstructionPlan& plan, const std::map<std::string, Vec2>& given,
                            double tol = 1e-9) {
  Diagram d;
  for (const auto& [name, sig] : plan.given) {
    auto it = given.find(name);
    if (it == given.end()) throw UnboundConstant("given point " + name + " has no coordinates");
    d.points[name] = it->second;
  }
  auto point = [&](const std::string& n) {
    auto it = d.points.find(n);
    if (it == d.points.end()) throw UnboundConstant("point " + n + " is unbound");
    return it->second;
  };
  auto line = [&](const std::string& n) {
    auto it = d.lines.find(n);
    if (it == d.lines.end()) throw UnboundConstant("line " + n + " is unbound");
    return it->second;
  };
  auto circle = [&](const std::string& n) {
    auto it = d.circles.find(n);
    if (it == d.circles.end()) throw UnboundConstant("circle " + n + " is unbound");
    return it->second;
  };
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& s = plan.steps[i];
    const auto& in = s.inputs;
    switch (s.kind) {
      case StepKind::LineThrough: {
        Vec2 p = point(in[0]), q = point(in[1]);
        if ((p - q).norm() <= tol) throw ExecutionFailure(i, FailureKind::CoincidentInputs);
        d.lines[s.outputs[0]] = geom::through(p, q);
        break;
      }
      case StepKind::PerpThrough:
        d.lines[s.outputs[0]] = geom::perpendicular(line(in[0]), point(in[1]));
        break;
      case StepKind::CircleCentered: {
        Vec2 o = point(in[0]);
        double r = (point(in[1]) - o).norm();
        if (r <= tol) throw ExecutionFailure(i, FailureKind::CoincidentInputs);
        d.circles[s.outputs[0]] = CircleVal{o, r};
        break;
      }
      case StepKind::RatioPoint: {
        Vec2 a = point(in[0]), b = point(in[1]);
        if ((b - a).norm() <= tol) throw ExecutionFailure(i, FailureKind::CoincidentInputs);
        d.points[s.outputs[0]] = a + (b - a) * (double(s.den) / double(s.num));
        break;
      }
      case StepKind::IntersectLines: {
        auto p = geom::meet(line(in[0]), line(in[1]), tol);
        if (!p) throw ExecutionFailure(i, FailureKind::NoIntersection);
        d.points[s.outputs[0]] = *p;
        break;
      }
      case StepKind::IntersectLineCircle: {
        LineCoef l = line(in[0]);
        CircleVal c = circle(in[1]);
        double dist = l.eval(c.center);
        double disc = c.r * c.r - dist * dist;
        if (disc < -tol) throw ExecutionFailure(i, FailureKind::NoIntersection);
        if (disc <= tol) throw ExecutionFailure(i, FailureKind::Tangent);
        Vec2 f = c.center - l.normal() * dist;
        Vec2 off = l.direction() * std::sqrt(disc);
        d.points[s.outputs[0]] = f + off;
        d.points[s.outputs[1]] = f - off;
        break;
      }
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Atoms

namespace detail {

inline bool same_line(const LineCoef& l, const LineCoef& m, double tol) {
  auto close = [&](double s) {
    return std::abs(l.a - s * m.a) <= tol && std::abs(l.b - s * m.b) <= tol && std::abs(l.c - s * m.c) <= tol;
  };
  return close(1.0) || close(-1.0);
}

inline bool same_point(Vec2 p, Vec2 q, double tol) { return std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol; }

}  // namespace detail

inline bool eval_atom(const Atom& atom, const Diagram& d, double tol = 1e-7) {
  auto point = [&](std::size_t i) {
    auto it = d.points.find(atom.args.at(i).name);
    if (it == d.points.end()) throw UnboundConstant("point " + atom.args[i].name + " is unbound");
    return it->second;
  };
  auto line = [&](std::size_t i) {
    auto it = d.lines.find(atom.args.at(i).name);
    if (it == d.lines.end()) throw UnboundConstant("line " + atom.args[i].name + " is unbound");
    return it->second;
  };
  auto circle = [&](std::size_t i) {
    auto it = d.circles.find(atom.args.at(i).name);
    if (it == d.circles.end()) throw UnboundConstant("circle " + atom.args[i].name + " is unbound");
    return it->second;
  };
  switch (atom.pred) {
    case Predicate::Inc: return std::abs(line(1).eval(point(0))) <= tol;
    case Predicate::IncC: {
      auto c = circle(1);
      return std::abs((point(0) - c.center).norm() - c.r) <= tol;
    }
    case Predicate::Center: return detail::same_point(point(0), circle(1).center, tol);
    case Predicate::Perp: {
      auto l = line(0), m = line(1);
      return std::abs(l.a * m.a + l.b * m.b) <= tol;
    }
    case Predicate::Para: {
      auto l = line(0), m = line(1);
      return std::abs(l.a * m.b - m.a * l.b) <= tol;
    }
    case Predicate::Line: {
      auto l = line(2);
      return std::abs(l.eval(point(0))) <= tol && std::abs(l.eval(point(1))) <= tol;
    }
    case Predicate::Ratio12:
    case Predicate::Ratio13:
    case Predicate::Ratio21:
    case Predicate::Ratio23: {
      auto [n, m] = *ratio_of(atom.pred);
      Vec2 ab = point(1) - point(0);
      Vec2 cd = point(3) - point(2);
      if (cd.norm() <= tol) return false;
      return detail::same_point(ab, cd * (double(n) / double(m)), tol);
    }
    case Predicate::Eq:
    case Predicate::Neq: {
      const auto& l = atom.args.at(0).name;
      const auto& r = atom.args.at(1).name;
      auto ls = d.sort_of(l), rs = d.sort_of(r);
      if (!ls) throw UnboundConstant(l + " is unbound");
      if (!rs) throw UnboundConstant(r + " is unbound");
      bool same = false;
      if (*ls == *rs) {
        switch (*ls) {
          case Sort::Point: same = detail::same_point(d.points.find(l)->second, d.points.find(r)->second, tol); break;
          case Sort::Line: same = detail::same_line(d.lines.find(l)->second, d.lines.find(r)->second, tol); break;
          case Sort::Circle: {
            auto a = d.circles.find(l)->second, b = d.circles.find(r)->second;
            same = detail::same_point(a.center, b.center, tol) && std::abs(a.r - b.r) <= tol;
            break;
          }
        }
      }
      return atom.pred == Predicate::Eq ? same : !same;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Verification

struct TrialFailure {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string reason;
};

struct VerificationReport {
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::vector<TrialFailure> failures;

  bool ok() const { return passed == trials; }

  std::string table() const {
    std::string out = "trials  passed  failed\n";
    out += std::to_string(trials) + "  " + std::to_string(passed) + "  " + std::to_string(failures.size()) + "\n";
    for (const auto& f : failures) {
      out += "  trial " + std::to_string(f.trial) + " seed " + std::to_string(f.seed) + ": " + f.reason + "\n";
    }
    return out;
  }
};

/// Seed of trial i of a verification run; shared with the CLI so failing
/// trials can be replayed.
inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t i) {
  return seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL * (i + 1);
}

/// Checks that the plan's vertex outputs coincide with the true vertices as a
/// set; intersection branches may come out in either order.
inline bool reproduces_vertices(const ConstructionPlan& plan, const Diagram& truth, const Diagram& built, double tol) {
  std::vector<Vec2> want, got;
  for (const auto* v : {"pA", "pB", "pC"}) {
    want.push_back(truth.points.at(v));
    auto name = plan.outputs.find(v);
    if (name == plan.outputs.end()) return false;
    auto p = built.points.find(name->second);
    if (p == built.points.end()) return false;
    got.push_back(p->second);
  }
  std::array<int, 3> perm{0, 1, 2};
  do {
    bool all = true;
    for (int i = 0; i < 3; ++i) all = all && detail::same_point(want[i], got[perm[i]], tol);
    if (all) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// One verification trial on the triangle sampled from `triangle_seed`.
/// Returns the failure reason, or nullopt when the plan rebuilds the triangle.
inline std::optional<std::string> verify_trial(const ConstructionPlan& plan, std::uint64_t triangle_seed, double tol) {
  Diagram truth = sample_triangle(triangle_seed);
  std::map<std::string, Vec2> given;
  for (const auto& [name, sig] : plan.given) {
    auto it = truth.points.find(sig);
    if (it == truth.points.end()) throw UnboundConstant("given " + sig + " is not a significant point");
    given[name] = it->second;
  }
  try {
    Diagram built = execute_plan(plan, given, tol);
    if (reproduces_vertices(plan, truth, built, tol)) return std::nullopt;
    return "vertices not reproduced";
  } catch (const ExecutionFailure& e) {
    return std::string(e.what());
  }
}

inline VerificationReport verify_plan(const ConstructionPlan& plan, std::size_t trials, double tol,
                                      std::uint64_t seed) {
  VerificationReport rep;
  rep.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    std::uint64_t s = trial_seed(seed, i);
    if (auto why = verify_trial(plan, s, tol)) {
      rep.failures.push_back({i, s, *why});
    } else {
      ++rep.passed;
    }
  }
  return rep;
}

}  // namespace trics
