#pragma once

// JSON documents for polygons, solution bases and residual reports. Needs nlohmann/json
// on the include path as <json.hpp>. Double values are written as numbers; wider
// types as decimal strings so no digits are lost.

#include <qdiff/format.hpp>
#include <qdiff/verify.hpp>

#include <json.hpp>

#include <string>
#include <type_traits>

namespace qdiff {

using Json = nlohmann::json;

template <class Real>
Json real_to_json(const Real& x) {
  if constexpr (std::is_same_v<Real, double>)
    return x;
  else
    return format_real(x);
}

template <class Real>
Real real_from_json(const Json& j) {
  if (j.is_number()) return Real(j.get<double>());
  if (j.is_string()) return real_from_string<Real>(j.get<std::string>());
  throw Error("expected a number or numeric string in JSON");
}

template <class Real>
Json complex_to_json(const complex_t<Real>& c) {
  return Json{{"re", real_to_json<Real>(c.real())}, {"im", real_to_json<Real>(c.imag())}};
}

template <class Real>
complex_t<Real> complex_from_json(const Json& j) {
  if (j.is_number() || j.is_string()) return complex_t<Real>(real_from_json<Real>(j));
  return complex_t<Real>(real_from_json<Real>(j.at("re")), real_from_json<Real>(j.at("im")));
}

template <class Real>
Json series_to_json(const PuiseuxSeries<Real>& f) {
  Json c = Json::array();
  for (const auto& x : f.coefficients()) c.push_back(complex_to_json<Real>(x));
  return Json{{"ramification", f.ramification()},
              {"offset", f.offset()},
              {"truncation", f.is_exact() ? Json(nullptr) : Json(f.truncation())},
              {"coefficients", c}};
}

template <class Real>
PuiseuxSeries<Real> series_from_json(const Json& j) {
  std::vector<complex_t<Real>> c;
  for (const auto& x : j.at("coefficients")) c.push_back(complex_from_json<Real>(x));
  long t = j.at("truncation").is_null() ? PuiseuxSeries<Real>::kExact : j.at("truncation").get<long>();
  return PuiseuxSeries<Real>(std::move(c), j.at("offset").get<long>(), j.at("ramification").get<int>(), t);
}

// Characters of the form +-q^{m/s} are written symbolically and re-read on the principal branch.
template <class Real>
Json character_to_json(const complex_t<Real>& c, const NumericContext<Real>& ctx) {
  if (auto s = character_symbol<Real>(c, ctx)) return to_string(*s);
  return complex_to_json<Real>(c);
}

template <class Real>
complex_t<Real> character_from_json(const Json& j, const NumericContext<Real>& ctx) {
  if (!j.is_string()) return complex_from_json<Real>(j);
  std::string s = j.get<std::string>();
  bool neg = !s.empty() && s[0] == '-';
  if (neg) s.erase(0, 1);
  complex_t<Real> v;
  if (s == "1") {
    v = complex_t<Real>(1);
  } else if (s.size() > 4 && s.rfind("q^{", 0) == 0 && s.back() == '}') {
    v = ctx.q_power(parse_rational(s.substr(3, s.size() - 4)));
  } else {
    return complex_t<Real>(real_from_string<Real>(j.get<std::string>()));
  }
  return neg ? -v : v;
}

template <class Real>
Json solution_to_json(const SolutionForm<Real>& sol, const NumericContext<Real>& ctx) {
  Json tail = Json::array();
  for (const auto& t : sol.tail) tail.push_back(solution_to_json(t, ctx));
  return Json{{"theta_exp", to_string(sol.theta_exp)},
              {"character", character_to_json<Real>(sol.character, ctx)},
              {"log_power", sol.log_power},
              {"series", series_to_json<Real>(sol.series)},
              {"tail", tail}};
}

template <class Real>
SolutionForm<Real> solution_from_json(const Json& j, const NumericContext<Real>& ctx) {
  SolutionForm<Real> s;
  s.theta_exp = parse_rational(j.at("theta_exp").get<std::string>());
  s.character = character_from_json<Real>(j.at("character"), ctx);
  s.log_power = j.at("log_power").get<int>();
  s.series = series_from_json<Real>(j.at("series"));
  if (j.contains("tail"))
    for (const auto& t : j.at("tail")) s.tail.push_back(solution_from_json<Real>(t, ctx));
  return s;
}

inline Json segment_to_json(const Segment& s) {
  return Json{{"slope", to_string(s.slope)},       {"x_start", s.x_start}, {"x_end", s.x_end},
              {"height", to_string(s.y_start)},   {"length", s.length()}, {"supporting_indices", s.supporting_indices}};
}

inline Json polygon_to_json(const NewtonPolygon& poly) {
  Json pts = Json::array(), verts = Json::array(), segs = Json::array();
  for (const auto& p : poly.points) pts.push_back({{"x", p.x}, {"y", to_string(p.y)}, {"index", p.index}});
  for (const auto& p : poly.vertices) verts.push_back({{"x", p.x}, {"y", to_string(p.y)}, {"index", p.index}});
  for (const auto& s : poly.segments) segs.push_back(segment_to_json(s));
  return Json{{"points", pts}, {"vertices", verts}, {"segments", segs}};
}

template <class Real>
Json context_to_json(const NumericContext<Real>& ctx) {
  return Json{{"q", complex_to_json<Real>(ctx.q())},
              {"precision", ctx.precision()},
              {"tol", to_double(ctx.tol())},
              {"truncation", ctx.truncation()},
              {"max_shift", ctx.max_shift()}};
}

template <class Real>
Json basis_to_json(const std::string& op_text, const SolutionBasis<Real>& basis, const NumericContext<Real>& ctx) {
  Json sols = Json::array(), segs = Json::array();
  for (const auto& s : basis.solutions) sols.push_back(solution_to_json(s, ctx));
  for (const auto& r : basis.segments) {
    Json roots = Json::array();
    for (const auto& x : r.roots) roots.push_back({{"value", complex_to_json<Real>(x.value)}, {"multiplicity", x.multiplicity}});
    Json seg = segment_to_json(r.segment);
    seg["ramification"] = r.ramification;
    seg["roots"] = roots;
    seg["zero_roots_skipped"] = r.zero_roots_skipped;
    seg["solutions"] = r.solutions;
    seg["consistency_defect"] = to_double(r.consistency);
    seg["overflow_index"] = r.overflow_index < 0 ? Json(nullptr) : Json(r.overflow_index);
    segs.push_back(seg);
  }
  return Json{{"operator", op_text},
              {"context", context_to_json(ctx)},
              {"order", basis.order},
              {"solutions", sols},
              {"diagnostics",
               {{"segments", segs}, {"zero_roots_skipped", basis.zero_roots_skipped}, {"complete", basis.complete()}}}};
}

template <class Real>
Json residual_to_json(const Residual<Real>& r, double threshold) {
  return Json{{"guaranteed_order", r.guaranteed_order ? Json(to_string(*r.guaranteed_order)) : Json(nullptr)},
              {"residual_max_abs", to_double(r.max_abs)},
              {"scale", to_double(r.scale)},
              {"relative", to_double(r.relative())},
              {"strata", r.strata.size()},
              {"pass", to_double(r.relative()) <= threshold}};
}

}  // namespace qdiff
