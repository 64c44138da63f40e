// qdiff: command line front end for the q-difference solver.
//
// Exit codes: 0 success, 1 verification or oracle failure, 2 parse error,
// 3 invalid configuration (q, precision, tolerance, unknown example).

#include <qdiff/fixtures.hpp>
#include <qdiff/json_io.hpp>
#include <qdiff/newton_polygon.hpp>
#include <qdiff/special.hpp>
#include <qdiff/verify.hpp>

#include <CLI11.hpp>

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;

struct Options {
  std::string q_text = "2";
  std::string q_arg;  // argument of q as a rational multiple of pi
  int precision = 15;
  double tol = 0;
  int truncation = 32;
  int max_shift = 64;
  std::string format = "text";
  bool json = false;
  std::string out;

  std::string op_text;
  std::string solutions_file;
  double threshold = 0;
  std::string eval_kind;
  std::string z_text;
  std::string lambda_text;
  std::string example;
  std::string fixture_file;
  bool all = false;
};

template <class Real>
qdiff::complex_t<Real> scalar_value(const std::string& text, const qdiff::NumericContext<Real>* ctx) {
  auto tree = qdiff::parse_expression(text);
  // Scalars are operators of order 0; evaluate the tree in a throwaway context.
  qdiff::NumericContext<Real> dummy(qdiff::complex_t<Real>(2));
  auto poly = qdiff::detail::evaluate(ctx ? *ctx : dummy, *tree);
  if (!qdiff::detail::ore_is_scalar(poly)) throw qdiff::ConfigError("'" + text + "' is not a constant");
  if (poly.empty() || poly[0].is_zero()) return qdiff::complex_t<Real>(0);
  return poly[0].coefficients()[0];
}

template <class Real>
qdiff::NumericContext<Real> make_context(const Options& o) {
  using C = qdiff::complex_t<Real>;
  C q;
  try {
    q = scalar_value<Real>(o.q_text, nullptr);
  } catch (const qdiff::ParseError& e) {
    throw qdiff::ConfigError(std::string("bad --q: ") + e.what());
  }
  if (!o.q_arg.empty()) {
    qdiff::Rational t = qdiff::parse_rational(o.q_arg);
    Real angle = boost::math::constants::pi<Real>() * Real(t.numerator()) / Real(t.denominator());
    using std::cos;
    using std::sin;
    q = C(qdiff::cabs(q)) * C(cos(angle), sin(angle));
  }
  Real tol = o.tol > 0 ? Real(o.tol) : qdiff::scalar_traits<Real>::default_tol();
  return qdiff::NumericContext<Real>(q, tol, o.truncation, o.max_shift, o.precision);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw qdiff::ConfigError("cannot write " + o.out);
  f << text;
}

std::string format_of(const Options& o) { return o.json ? "json" : o.format; }

template <class Real>
int cmd_classify(const Options& o) {
  auto ctx = make_context<Real>(o);
  auto op = qdiff::parse_operator<Real>(o.op_text, ctx);
  auto rep = qdiff::is_regular_singular(op);
  auto poly = qdiff::newton_polygon(op);
  if (format_of(o) == "json") {
    emit(o, qdiff::Json{{"regular_singular", rep.regular},
                        {"report", rep.describe()},
                        {"order", op.order()},
                        {"polygon", qdiff::polygon_to_json(poly)}}
                .dump(2));
  } else {
    std::string s = rep.describe() + "\nslopes:";
    for (const auto& g : poly.segments) s += " " + qdiff::to_string(g.slope) + " (length " + std::to_string(g.length()) + ")";
    emit(o, s + "\n");
  }
  return 0;
}

template <class Real>
int cmd_polygon(const Options& o) {
  auto ctx = make_context<Real>(o);
  auto op = qdiff::parse_operator<Real>(o.op_text, ctx);
  auto poly = qdiff::newton_polygon(op);
  std::string f = format_of(o);
  if (f == "json")
    emit(o, qdiff::polygon_to_json(poly).dump(2));
  else if (f == "svg")
    emit(o, qdiff::polygon_svg(poly));
  else
    emit(o, qdiff::polygon_ascii(poly));
  return 0;
}

template <class Real>
int cmd_solve(const Options& o) {
  auto ctx = make_context<Real>(o);
  auto op = qdiff::parse_operator<Real>(o.op_text, ctx);
  auto basis = qdiff::solve(op, ctx.truncation());
  std::string f = format_of(o);
  if (f == "json") {
    emit(o, qdiff::basis_to_json(qdiff::to_string(op), basis, ctx).dump(2));
  } else if (f == "csv") {
    std::ostringstream os;
    os << "solution,theta_exp,character,log_power,exponent,re,im\n";
    for (std::size_t i = 0; i < basis.solutions.size(); ++i) {
      const auto& sol = basis.solutions[i];
      for (const auto& t : sol.strata()) {
        const auto& g = t.series;
        for (std::size_t k = 0; k < g.coefficients().size(); ++k) {
          qdiff::Rational e(g.offset() + static_cast<long>(k), g.ramification());
          os << i << "," << qdiff::to_string(sol.theta_exp) << ","
             << qdiff::character_text<Real>(t.character, ctx) << "," << t.log_power << "," << qdiff::to_string(e)
             << "," << qdiff::format_real<Real>(g.coefficients()[k].real()) << ","
             << qdiff::format_real<Real>(g.coefficients()[k].imag()) << "\n";
        }
      }
    }
    emit(o, os.str());
  } else {
    std::ostringstream os;
    os << "operator: " << qdiff::to_string(op) << "\n";
    os << "order " << basis.order << ", " << basis.solutions.size() << " formal solutions";
    if (basis.zero_roots_skipped) os << " (" << basis.zero_roots_skipped << " zero characteristic roots skipped)";
    os << "\n";
    for (std::size_t i = 0; i < basis.solutions.size(); ++i) {
      const auto& sol = basis.solutions[i];
      os << "[" << i << "] " << qdiff::solution_text(sol, ctx) << "\n";
      int k = 0;
      for (const auto& t : sol.strata()) os << "    F" << k++ << " = " << qdiff::series_text(t.series) << "\n";
    }
    for (const auto& r : basis.segments)
      if (r.overflow_index >= 0)
        os << "note: slope " << qdiff::to_string(r.segment.slope) << " series cut at index " << r.overflow_index
           << " (magnitude beyond the number type)\n";
    emit(o, os.str());
  }
  return basis.complete() ? 0 : kExitFailure;
}

template <class Real>
qdiff::Json growth_json(const qdiff::PuiseuxSeries<Real>& f, const qdiff::NumericContext<Real>& ctx) {
  try {
    auto g = qdiff::growth_classify(f, ctx);
    qdiff::Json estimate = g.kind == qdiff::Growth::kQGevrey ? qdiff::Json(g.weight)
                           : std::isfinite(g.radius)        ? qdiff::Json(g.radius)
                                                            : qdiff::Json("inf");
    return {{"class", qdiff::to_string(g.kind)}, {"estimate", estimate}};
  } catch (const qdiff::SolverError&) {
    return {{"class", "undetermined"}, {"estimate", nullptr}};
  }
}

template <class Real>
int cmd_verify(const Options& o) {
  auto ctx = make_context<Real>(o);
  auto op = qdiff::parse_operator<Real>(o.op_text, ctx);
  std::vector<qdiff::SolutionForm<Real>> sols;
  if (!o.solutions_file.empty()) {
    std::ifstream f(o.solutions_file);
    if (!f) throw qdiff::ConfigError("cannot read " + o.solutions_file);
    qdiff::Json doc;
    try {
      doc = qdiff::Json::parse(f);
    } catch (const qdiff::Json::exception& e) {
      throw qdiff::ParseError(std::string("solutions file: ") + e.what(), 0);
    }
    for (const auto& s : doc.at("solutions")) sols.push_back(qdiff::solution_from_json<Real>(s, ctx));
  } else {
    sols = qdiff::solve(op, ctx.truncation()).solutions;
  }
  double threshold = o.threshold > 0 ? o.threshold : (std::is_same_v<Real, double> ? 1e-8 : 1e-25);
  qdiff::Json rows = qdiff::Json::array();
  bool ok = !sols.empty();
  for (std::size_t i = 0; i < sols.size(); ++i) {
    auto r = qdiff::apply_operator(op, sols[i]);
    auto j = qdiff::residual_to_json(r, threshold);
    j["solution_index"] = i;
    j["growth"] = growth_json(sols[i].series, ctx);
    ok = ok && j["pass"].template get<bool>();
    rows.push_back(j);
  }
  if (format_of(o) == "json") {
    emit(o, qdiff::Json{{"operator", qdiff::to_string(op)}, {"threshold", threshold}, {"solutions", rows}, {"pass", ok}}
                .dump(2));
  } else {
    std::ostringstream os;
    for (const auto& j : rows)
      os << "[" << j["solution_index"].template get<std::size_t>() << "] " << (j["pass"].template get<bool>() ? "ok  " : "FAIL")
         << " relative residual " << j["relative"].get<double>() << " below z^"
         << (j["guaranteed_order"].is_null() ? std::string("inf") : j["guaranteed_order"].get<std::string>()) << "\n";
    os << (ok ? "all residuals vanish" : "residual check failed") << "\n";
    emit(o, os.str());
  }
  return ok ? 0 : kExitFailure;
}

template <class Real>
int cmd_eval(const Options& o) {
  auto ctx = make_context<Real>(o);
  qdiff::ThetaEvaluator<Real> th(ctx);
  auto z = scalar_value<Real>(o.z_text, &ctx);
  qdiff::complex_t<Real> v;
  if (o.eval_kind == "theta") {
    v = th.theta(z);
  } else if (o.eval_kind == "lq") {
    v = th.q_log(z);
  } else if (o.eval_kind == "eq") {
    if (o.lambda_text.empty()) throw qdiff::ConfigError("eval eq needs --lambda");
    v = th.q_character(z, scalar_value<Real>(o.lambda_text, &ctx));
  } else {
    throw qdiff::ConfigError("unknown function '" + o.eval_kind + "'");
  }
  if (format_of(o) == "json")
    emit(o, qdiff::Json{{"function", o.eval_kind}, {"value", qdiff::complex_to_json<Real>(v)}}.dump(2));
  else
    emit(o, qdiff::detail::format_complex<Real>(v, true));
  return 0;
}

std::string outcome_text(const qdiff::FixtureOutcome& r) {
  std::ostringstream os;
  os << (r.passed() ? "PASS " : "FAIL ") << r.name << "\n";
  for (const auto& c : r.checks)
    os << "  " << (c.passed ? "ok   " : "FAIL ") << c.what << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
  return os.str();
}

template <class Real>
qdiff::FixtureOutcome run_checked(const qdiff::FixtureSpec& spec, const qdiff::NumericContext<Real>& ctx) {
  try {
    return qdiff::run_fixture(spec, ctx);
  } catch (const std::exception& e) {
    qdiff::FixtureOutcome out;
    out.name = spec.name;
    out.checks.push_back({"run", false, e.what()});
    return out;
  }
}

// User fixture: {"name", "operator", "oracle": {"slopes", "lengths", "regular", "solution_count", "max_relative_residual"}}
template <class Real>
qdiff::FixtureOutcome run_file_fixture(const std::string& path, const qdiff::NumericContext<Real>& ctx) {
  std::ifstream f(path);
  if (!f) throw qdiff::ConfigError("cannot read " + path);
  qdiff::Json doc = qdiff::Json::parse(f);
  qdiff::FixtureOutcome out;
  out.name = doc.value("name", path);
  auto op = qdiff::parse_operator<Real>(doc.at("operator").get<std::string>(), ctx);
  const auto& oracle = doc.at("oracle");
  auto poly = qdiff::newton_polygon(op);
  if (oracle.contains("slopes")) {
    std::vector<std::string> got;
    for (const auto& s : poly.slopes()) got.push_back(qdiff::to_string(s));
    out.checks.push_back({"polygon slopes", got == oracle["slopes"].get<std::vector<std::string>>()});
  }
  if (oracle.contains("lengths"))
    out.checks.push_back({"polygon lengths", poly.lengths() == oracle["lengths"].get<std::vector<long>>()});
  if (oracle.contains("regular"))
    out.checks.push_back({"regular singular", qdiff::is_regular_singular(op).regular == oracle["regular"].get<bool>()});
  auto basis = qdiff::solve(op, ctx.truncation());
  if (oracle.contains("solution_count"))
    out.checks.push_back({"solution count", static_cast<int>(basis.solutions.size()) == oracle["solution_count"].get<int>()});
  double limit = oracle.value("max_relative_residual", std::is_same_v<Real, double> ? 1e-8 : 1e-25);
  Real worst(0);
  for (const auto& s : basis.solutions) worst = std::max(worst, qdiff::apply_operator(op, s).relative());
  out.checks.push_back({"residuals vanish", qdiff::to_double(worst) <= limit, qdiff::format_real(worst)});
  return out;
}

template <class Real>
int cmd_examples(const Options& o, bool list) {
  if (list) {
    std::ostringstream os;
    for (const auto& s : qdiff::fixture_specs()) os << s.name << "\t" << s.operator_text << "\t" << s.description << "\n";
    emit(o, os.str());
    return 0;
  }
  auto ctx = make_context<Real>(o);
  std::vector<qdiff::FixtureOutcome> results;
  if (!o.fixture_file.empty()) {
    results.push_back(run_file_fixture<Real>(o.fixture_file, ctx));
  } else if (o.all) {
    std::vector<std::future<qdiff::FixtureOutcome>> jobs;
    for (const auto& s : qdiff::fixture_specs())
      jobs.push_back(std::async(std::launch::async, [&ctx, &s] { return run_checked<Real>(s, ctx); }));
    for (auto& j : jobs) results.push_back(j.get());
    std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  } else if (!o.example.empty()) {
    results.push_back(run_checked<Real>(qdiff::fixture_spec(o.example), ctx));
  } else {
    throw qdiff::ConfigError("examples run needs a name, --all or --file");
  }
  bool ok = true;
  std::string text;
  qdiff::Json rows = qdiff::Json::array();
  for (const auto& r : results) {
    ok = ok && r.passed();
    text += outcome_text(r);
    qdiff::Json checks = qdiff::Json::array();
    for (const auto& c : r.checks) checks.push_back({{"check", c.what}, {"pass", c.passed}, {"detail", c.detail}});
    rows.push_back({{"name", r.name}, {"pass", r.passed()}, {"checks", checks}});
  }
  emit(o, format_of(o) == "json" ? qdiff::Json{{"examples", rows}, {"pass", ok}}.dump(2) : text);
  return ok ? 0 : kExitFailure;
}

template <class Real>
int dispatch(const std::string& cmd, const Options& o) {
  if (cmd == "classify") return cmd_classify<Real>(o);
  if (cmd == "polygon") return cmd_polygon<Real>(o);
  if (cmd == "solve") return cmd_solve<Real>(o);
  if (cmd == "verify") return cmd_verify<Real>(o);
  if (cmd == "eval") return cmd_eval<Real>(o);
  if (cmd == "examples-list") return cmd_examples<Real>(o, true);
  if (cmd == "examples-run") return cmd_examples<Real>(o, false);
  throw qdiff::ConfigError("no command given");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Formal solutions of linear q-difference equations"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* c) {
    c->add_option("--q", o.q_text, "q as a number, e.g. 2, 3/2, 1.5+0.5i (|q| > 1)");
    c->add_option("--q-arg", o.q_arg, "argument of q as a rational multiple of pi; |q| is kept");
    c->add_option("--precision", o.precision, "decimal digits: <= 15 uses double, <= 50 a 50-digit float");
    c->add_option("--tol", o.tol, "tolerance (default 1e-10 in double, 1e-30 otherwise)");
    c->add_option("--truncation", o.truncation, "series coefficients to compute");
    c->add_option("--max-shift", o.max_shift, "largest q-shift searched between characteristic roots");
    c->add_option("--format", o.format, "output format");
    c->add_flag("--json", o.json, "shorthand for --format json");
    c->add_option("--out", o.out, "write output to a file");
  };

  auto* classify = app.add_subcommand("classify", "regular singular or irregular");
  classify->add_option("operator", o.op_text)->required();
  common(classify);
  auto* polygon = app.add_subcommand("polygon", "Newton polygon (ascii, svg, json)");
  polygon->add_option("operator", o.op_text)->required();
  common(polygon);
  auto* solve = app.add_subcommand("solve", "formal solution basis (text, json, csv)");
  solve->add_option("operator", o.op_text)->required();
  common(solve);
  auto* verify = app.add_subcommand("verify", "apply the operator to computed or supplied solutions");
  verify->add_option("operator", o.op_text)->required();
  verify->add_option("--solutions", o.solutions_file, "solutions JSON from `solve --json`");
  verify->add_option("--threshold", o.threshold, "largest accepted relative residual");
  common(verify);
  auto* eval = app.add_subcommand("eval", "theta, l_q or e_{q,lambda} at a point");
  eval->add_option("function", o.eval_kind, "theta | lq | eq")->required();
  eval->add_option("--z", o.z_text)->required();
  eval->add_option("--lambda", o.lambda_text);
  common(eval);
  auto* examples = app.add_subcommand("examples", "built-in worked examples");
  examples->require_subcommand(1);
  auto* ex_list = examples->add_subcommand("list", "list examples");
  common(ex_list);
  auto* ex_run = examples->add_subcommand("run", "run examples against their oracles");
  ex_run->add_option("name", o.example);
  ex_run->add_flag("--all", o.all);
  ex_run->add_option("--file", o.fixture_file, "fixture JSON");
  common(ex_run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  std::string cmd;
  for (auto* s : {classify, polygon, solve, verify, eval})
    if (s->parsed()) cmd = s->get_name();
  if (ex_list->parsed()) cmd = "examples-list";
  if (ex_run->parsed()) cmd = "examples-run";

  try {
    if (o.precision < 1 || o.precision > 50)
      throw qdiff::ConfigError("precision " + std::to_string(o.precision) + " is outside 1..50");
    if (o.precision <= 15) return dispatch<double>(cmd, o);
    return dispatch<qdiff::HighPrecision>(cmd, o);
  } catch (const qdiff::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const qdiff::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
