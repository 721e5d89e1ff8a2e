#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "trics/kb.hpp"
#include "trics/oracle.hpp"

namespace trics {

/// Three given significant points, kept in canonical point order.
struct ProblemSpec {
  std::array<std::string, 3> points;

  auto operator<=>(const ProblemSpec&) const = default;

  /// Problem identifier, e.g. th_A_Ha_O.
  std::string name() const {
    std::string n = "th";
    for (const auto& p : points) n += "_" + short_name(p);
    return n;
  }
};

class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::size_t point_index(std::string_view p) {
  const auto& pts = significant_points();
  auto it = std::find(pts.begin(), pts.end(), p);
  if (it == pts.end()) throw ProblemError("not a significant point: " + std::string(p));
  return static_cast<std::size_t>(it - pts.begin());
}

/// Builds a problem from significant ids or short names (A, Ha, O, ...), in
/// any order. Throws ProblemError on unknown or repeated points.
inline ProblemSpec make_problem(const std::vector<std::string>& names) {
  if (names.size() != 3) throw ProblemError("a problem has exactly three given points");
  std::vector<std::string> ids;
  for (const auto& n : names) {
    auto id = significant_from_short(n);
    if (!id) throw ProblemError("unknown point " + n);
    ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end(), [](const auto& a, const auto& b) { return point_index(a) < point_index(b); });
  if (ids[0] == ids[1] || ids[1] == ids[2]) throw ProblemError("given points must be distinct");
  return ProblemSpec{{ids[0], ids[1], ids[2]}};
}

namespace detail {

// Image of a point under the vertex relabeling i -> perm[i]; G, O, H are fixed.
inline std::string relabel(const std::string& p, const std::array<int, 3>& perm) {
  std::size_t i = point_index(p);
  if (i >= 9) return p;
  std::size_t group = i / 3, k = i % 3;
  return significant_points()[group * 3 + perm[k]];
}

inline ProblemSpec sorted_problem(std::array<std::string, 3> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return point_index(a) < point_index(b); });
  return ProblemSpec{pts};
}

inline std::array<std::size_t, 3> indices(const ProblemSpec& p) {
  return {point_index(p.points[0]), point_index(p.points[1]), point_index(p.points[2])};
}

}  // namespace detail

/// Lexicographically least relabeling of the problem under the six
/// permutations of the vertices.
inline ProblemSpec canonical(const ProblemSpec& p) {
  std::array<int, 3> perm{0, 1, 2};
  ProblemSpec best = detail::sorted_problem(p.points);
  do {
    ProblemSpec q = detail::sorted_problem({detail::relabel(p.points[0], perm), detail::relabel(p.points[1], perm),
                                            detail::relabel(p.points[2], perm)});
    if (detail::indices(q) < detail::indices(best)) best = q;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// All orbits of 3-point subsets under vertex relabeling (57 of them).
inline std::vector<ProblemSpec> symmetry_classes() {
  const auto& pts = significant_points();
  std::set<std::array<std::size_t, 3>> seen;
  std::vector<ProblemSpec> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        ProblemSpec c = canonical(ProblemSpec{{pts[i], pts[j], pts[k]}});
        if (seen.insert(detail::indices(c)).second) out.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return detail::indices(a) < detail::indices(b); });
  return out;
}

namespace detail {

inline double determinant(std::array<std::array<double, 6>, 6> m) {
  double det = 1;
  for (int c = 0; c < 6; ++c) {
    int piv = c;
    for (int r = c + 1; r < 6; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    if (m[piv][c] == 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 6; ++r) {
      double f = m[r][c] / m[c][c];
      for (int k = c; k < 6; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

}  // namespace detail

/// Determinant of the map from the triangle's vertex coordinates to the
/// coordinates of the three given points, at a fixed scalene triangle. Zero
/// when the given points are dependent (e.g. {A, B, Mc}) or pinned to a locus
/// (e.g. {Ha, Hb, C}), so the problem has no finite solution set.
inline double locus_determinant(const ProblemSpec& p) {
  const std::array<double, 6> base{0.31, 0.17, 4.13, -0.71, 1.37, 3.93};
  auto eval = [&](const std::array<double, 6>& x) {
    Diagram d = triangle_diagram({x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]});
    std::array<double, 6> y{};
    for (int i = 0; i < 3; ++i) {
      Vec2 q = d.points.at(p.points[i]);
      y[2 * i] = q.x;
      y[2 * i + 1] = q.y;
    }
    return y;
  };
  const double h = 1e-5;
  std::array<std::array<double, 6>, 6> jac{};
  for (int c = 0; c < 6; ++c) {
    auto plus = base, minus = base;
    plus[c] += h;
    minus[c] -= h;
    auto yp = eval(plus), ym = eval(minus);
    for (int r = 0; r < 6; ++r) jac[r][c] = (yp[r] - ym[r]) / (2 * h);
  }
  return detail::determinant(jac);
}

inline bool well_posed(const ProblemSpec& p) { return std::abs(locus_determinant(p)) > 1e-8; }

/// The medial triangle MaMbMc has centroid G and orthocenter O, so a problem
/// over {Ma, Mb, Mc, G, O} is the vertex-side problem of the medial triangle.
/// Returns that vertex-side problem, or nullopt when the problem mentions any
/// other point.
inline std::optional<ProblemSpec> medial_counterpart(const ProblemSpec& p) {
  std::array<std::string, 3> q;
  for (int i = 0; i < 3; ++i) {
    const auto& x = p.points[i];
    if (x == "pMa") q[i] = "pA";
    else if (x == "pMb") q[i] = "pB";
    else if (x == "pMc") q[i] = "pC";
    else if (x == "pOc") q[i] = "pH";
    else if (x == "pG") q[i] = "pG";
    else return std::nullopt;
  }
  return canonical(ProblemSpec{q});
}

/// The non-isomorphic location problems: symmetry classes that determine the
/// triangle up to finitely many solutions, with medial-triangle copies of
/// vertex-side problems merged into the vertex-side representative.
inline std::vector<ProblemSpec> enumerate_corpus() {
  std::vector<ProblemSpec> out;
  for (const auto& p : symmetry_classes()) {
    if (!well_posed(p)) continue;
    if (auto m = medial_counterpart(p); m && well_posed(*m)) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace trics
