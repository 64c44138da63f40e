#pragma once

#include <qdiff/operator.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace qdiff {

struct PolygonPoint {
  long x = 0;      // n - i
  Rational y{0};   // val a_i
  int index = 0;   // i
};

struct Segment {
  Rational slope{0};
  long x_start = 0;
  long x_end = 0;
  Rational y_start{0};
  std::vector<int> supporting_indices;  // ascending i, endpoints and interior lattice points on the edge

  long length() const { return x_end - x_start; }
  bool horizontal() const { return slope == Rational(0); }
};

struct NewtonPolygon {
  std::vector<PolygonPoint> points;
  std::vector<PolygonPoint> vertices;
  std::vector<Segment> segments;  // increasing slope

  std::vector<Rational> slopes() const {
    std::vector<Rational> s;
    for (const auto& g : segments) s.push_back(g.slope);
    return s;
  }
  std::vector<long> lengths() const {
    std::vector<long> l;
    for (const auto& g : segments) l.push_back(g.length());
    return l;
  }
  const Segment* horizontal() const {
    for (const auto& g : segments)
      if (g.horizontal()) return &g;
    return nullptr;
  }
};

// Lower convex hull by monotone chain in exact arithmetic.
inline NewtonPolygon newton_polygon_from_points(std::vector<PolygonPoint> pts) {
  NewtonPolygon poly;
  std::sort(pts.begin(), pts.end(), [](const PolygonPoint& a, const PolygonPoint& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  poly.points = pts;
  auto cross = [](const PolygonPoint& o, const PolygonPoint& a, const PolygonPoint& b) {
    return Rational(a.x - o.x) * (b.y - o.y) - (a.y - o.y) * Rational(b.x - o.x);
  };
  std::vector<PolygonPoint> hull;
  for (const auto& p : pts) {
    if (!hull.empty() && hull.back().x == p.x) continue;  // keep the lowest point per column
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= Rational(0)) hull.pop_back();
    hull.push_back(p);
  }
  poly.vertices = hull;
  for (std::size_t v = 0; v + 1 < hull.size(); ++v) {
    Segment s;
    s.x_start = hull[v].x;
    s.x_end = hull[v + 1].x;
    s.y_start = hull[v].y;
    s.slope = (hull[v + 1].y - hull[v].y) / Rational(s.x_end - s.x_start);
    for (const auto& p : pts)
      if (p.x >= s.x_start && p.x <= s.x_end && p.y == s.y_start + s.slope * Rational(p.x - s.x_start))
        s.supporting_indices.push_back(p.index);
    std::sort(s.supporting_indices.begin(), s.supporting_indices.end());
    poly.segments.push_back(std::move(s));
  }
  return poly;
}

template <class Real>
NewtonPolygon newton_polygon(const DifferenceOperator<Real>& op) {
  std::vector<PolygonPoint> pts;
  int n = op.order();
  for (int i = 0; i <= n; ++i) {
    auto v = valuation(op.coefficient(i), op.context().tol());
    if (v) pts.push_back({n - i, *v, i});
  }
  return newton_polygon_from_points(std::move(pts));
}

struct RegularityReport {
  bool regular = false;
  Rational reference{0};                             // min(val a_0, val a_n)
  std::vector<std::pair<int, Rational>> offending;  // (i, val a_i) breaking the condition

  std::string describe() const {
    if (regular) return "regular singular";
    std::string s = "irregular:";
    for (const auto& [i, v] : offending)
      s += " val(a_" + std::to_string(i) + ") = " + to_string(v) + " < " + to_string(reference) + ";";
    if (offending.empty()) s += " val(a_0) != val(a_n)";
    return s;
  }
};

// Regular singular iff val a_0 = val a_n <= val a_i for all i; decided from valuations alone.
template <class Real>
RegularityReport is_regular_singular(const DifferenceOperator<Real>& op) {
  RegularityReport r;
  const Real& tol = op.context().tol();
  int n = op.order();
  auto v0 = valuation(op.coefficient(0), tol);
  auto vn = valuation(op.coefficient(n), tol);
  r.reference = std::min(*v0, *vn);
  bool ends_equal = *v0 == *vn;
  for (int i = 1; i < n; ++i) {
    auto v = valuation(op.coefficient(i), tol);
    if (v && *v < r.reference) r.offending.emplace_back(i, *v);
  }
  r.regular = ends_equal && r.offending.empty();
  return r;
}

}  // namespace qdiff
