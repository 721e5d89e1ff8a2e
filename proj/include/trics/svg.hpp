#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trics/oracle.hpp"
#include "trics/plan.hpp"

namespace trics {

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Clips ax + by + c = 0 to the box [x0, x1] x [y0, y1].
inline std::optional<std::pair<Vec2, Vec2>> clip(const LineCoef& l, double x0, double y0, double x1, double y1) {
  std::vector<Vec2> hits;
  auto add = [&](Vec2 p) {
    const double e = 1e-9;
    if (p.x < x0 - e || p.x > x1 + e || p.y < y0 - e || p.y > y1 + e) return;
    for (const auto& q : hits) {
      if ((q - p).norm() < 1e-9) return;
    }
    hits.push_back(p);
  };
  if (std::abs(l.b) > 1e-12) {
    add({x0, -(l.a * x0 + l.c) / l.b});
    add({x1, -(l.a * x1 + l.c) / l.b});
  }
  if (std::abs(l.a) > 1e-12) {
    add({-(l.b * y0 + l.c) / l.a, y0});
    add({-(l.b * y1 + l.c) / l.a, y1});
  }
  if (hits.size() < 2) return std::nullopt;
  return std::pair{hits[0], hits[1]};
}

}  // namespace detail

/// Draws a construction on the triangle sampled from `seed`: the triangle in
/// grey, constructed lines and circles, and labeled points. Every plan object
/// (given or constructed) gets one <g class="object" id="..."> element.
inline std::string render_svg(const ConstructionPlan& plan, std::uint64_t seed, double size = 600) {
  Diagram truth = sample_triangle(seed);
  std::map<std::string, Vec2> given;
  for (const auto& [name, sig] : plan.given) given[name] = truth.points.at(sig);
  Diagram d = execute_plan(plan, given);

  double lo_x = std::numeric_limits<double>::max(), lo_y = lo_x, hi_x = -lo_x, hi_y = -lo_x;
  auto grow = [&](Vec2 p) {
    lo_x = std::min(lo_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_x = std::max(hi_x, p.x);
    hi_y = std::max(hi_y, p.y);
  };
  for (const auto& [_, p] : d.points) grow(p);
  for (const auto& [_, c] : d.circles) {
    grow(c.center - Vec2{c.r, c.r});
    grow(c.center + Vec2{c.r, c.r});
  }
  for (const auto* v : {"pA", "pB", "pC"}) grow(truth.points.at(v));
  double span = std::max(hi_x - lo_x, hi_y - lo_y);
  double margin = 0.08 * span + 1e-9;
  lo_x -= margin;
  lo_y -= margin;
  hi_x += margin;
  hi_y += margin;
  span = std::max(hi_x - lo_x, hi_y - lo_y);
  double k = size / span;
  auto X = [&](double x) { return detail::fmt((x - lo_x) * k); };
  auto Y = [&](double y) { return detail::fmt((hi_y - y) * k); };  // SVG y grows downwards

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(size) + "\" height=\"" + detail::fmt(size) +
         "\" viewBox=\"0 0 " + detail::fmt(size) + " " + detail::fmt(size) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const Vec2 a = truth.points.at("pA"), b = truth.points.at("pB"), c = truth.points.at("pC");
  out += "<polygon class=\"triangle\" points=\"" + X(a.x) + "," + Y(a.y) + " " + X(b.x) + "," + Y(b.y) + " " + X(c.x) +
         "," + Y(c.y) + "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1.5\"/>\n";

  auto label = [&](const std::string& name, Vec2 p) {
    return "<text x=\"" + X(p.x + 0.15 * span / 20) + "\" y=\"" + Y(p.y + 0.15 * span / 20) +
           "\" font-family=\"sans-serif\" font-size=\"14\">" + detail::xml_escape(name) + "</text>";
  };
  auto point = [&](const std::string& name, Vec2 p, const char* color) {
    return "<g class=\"object\" id=\"" + detail::xml_escape(name) + "\"><circle cx=\"" + X(p.x) + "\" cy=\"" + Y(p.y) +
           "\" r=\"4\" fill=\"" + color + "\"/>" + label(name, p) + "</g>\n";
  };

  std::vector<std::string> order;
  for (const auto& [name, _] : plan.given) order.push_back(name);
  for (const auto& s : plan.steps) {
    for (const auto& o : s.outputs) order.push_back(o);
  }
  std::string shapes, points;
  std::set<std::string> given_names;
  for (const auto& [name, _] : plan.given) given_names.insert(name);
  for (const auto& name : order) {
    if (auto p = d.points.find(name); p != d.points.end()) {
      points += point(name, p->second, given_names.count(name) ? "#c0392b" : "#2c3e50");
    } else if (auto l = d.lines.find(name); l != d.lines.end()) {
      auto seg = detail::clip(l->second, lo_x, lo_y, hi_x, hi_y);
      shapes += "<g class=\"object\" id=\"" + detail::xml_escape(name) + "\">";
      if (seg) {
        shapes += "<line x1=\"" + X(seg->first.x) + "\" y1=\"" + Y(seg->first.y) + "\" x2=\"" + X(seg->second.x) +
                  "\" y2=\"" + Y(seg->second.y) + "\" stroke=\"#2980b9\" stroke-width=\"1\"/>";
        Vec2 mid = (seg->first + seg->second) * 0.5;
        shapes += label(name, mid);
      }
      shapes += "</g>\n";
    } else if (auto ci = d.circles.find(name); ci != d.circles.end()) {
      const auto& cv = ci->second;
      shapes += "<g class=\"object\" id=\"" + detail::xml_escape(name) + "\"><circle cx=\"" + X(cv.center.x) +
                "\" cy=\"" + Y(cv.center.y) + "\" r=\"" + detail::fmt(cv.r * k) +
                "\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1\"/>" +
                label(name, cv.center + Vec2{cv.r * 0.71, cv.r * 0.71}) + "</g>\n";
    }
  }
  out += shapes + points + "</svg>\n";
  return out;
}

}  // namespace trics
