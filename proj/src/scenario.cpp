#include "svilab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "svilab/concavity.hpp"
#include "svilab/derivatives.hpp"
#include "svilab/errorbounds.hpp"
#include "svilab/problems.hpp"
#include "svilab/slopes.hpp"

namespace svilab::scenario {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- parsing --

Vector to_vector(const json& j, const std::string& what) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ConfigError(what + ": expected a number or array");
  Vector v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + ": non-numeric entry");
    v[static_cast<long>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& j, long rows, long cols, const std::string& what) {
  if (j.is_number() && rows == 1 && cols == 1) return Matrix::Constant(1, 1, j.get<double>());
  if (!j.is_array() || static_cast<long>(j.size()) != rows) {
    throw ConfigError(what + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    const Vector row = to_vector(j[r], what);
    if (row.size() != cols) {
      throw ConfigError(what + ": expected " + std::to_string(cols) + " columns");
    }
    m.row(r) = row.transpose();
  }
  return m;
}

PolyhedralCone parse_cone(const json& j, int m) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "orthant") return PolyhedralCone::orthant(m);
    if (s == "whole") return PolyhedralCone::whole_space(m);
    throw ConfigError("cone: unknown cone '" + s + "'");
  }
  if (j.is_object() && j.contains("normals")) {
    std::vector<Vector> normals;
    for (const auto& n : j.at("normals")) normals.push_back(to_vector(n, "cone normal"));
    return PolyhedralCone(m, std::move(normals));
  }
  throw ConfigError("cone: expected \"orthant\", \"whole\" or {\"normals\": [...]}");
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("key '") + key + "': " + e.what());
  }
}

// ------------------------------------------------------------- formatting --

json vec_json(const Vector& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

std::string vec_csv(const Vector& v) {
  std::string s;
  for (long i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += format_double(v[i]);
  }
  return s;
}

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string> header) {
    bool first = true;
    for (const auto& h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }
  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const Vector& v) { return vec_csv(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }

  std::ostringstream out_;
};

void write_json(std::ostream& os, const json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
      }
      os << nl << pad_close << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_json(os, v, indent, depth + 1);
      }
      os << nl << pad_close << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        os << format_double(v);
      } else {
        os << "null";
      }
      return;
    }
    default:
      os << j.dump();
  }
}

// --------------------------------------------------------------- analyses --

struct Context {
  const SviProblem& prob;
  Vector p;
  Vector x;
  json regions;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct Outcome {
  json result;
  bool verdict = true;
  std::optional<std::string> csv;
};

double param(const Context& ctx, const json& a, const char* key, double fallback) {
  if (a.contains(key)) return get_or<double>(a, key, fallback);
  return get_or<double>(ctx.regions, key, fallback);
}

std::uint64_t seed_of(const Context& ctx, const json& a) {
  return get_or<std::uint64_t>(a, "seed", ctx.seed);
}

Vector point_or(const json& a, const char* key, const Vector& fallback, long dim) {
  if (!a.contains(key)) return fallback;
  Vector v = to_vector(a.at(key), key);
  if (v.size() != dim) throw ConfigError(std::string(key) + ": wrong dimension");
  return v;
}

SlopeOptions slope_options(const json& a, std::uint64_t seed) {
  SlopeOptions o;
  o.schedule.r0 = get_or<double>(a, "r0", o.schedule.r0);
  o.schedule.levels = get_or<int>(a, "levels", o.schedule.levels);
  o.schedule.tail = get_or<int>(a, "tail", o.schedule.tail);
  o.directions = get_or<int>(a, "K", 0);
  o.seed = seed;
  return o;
}

FanPrederivative resolve_fan(const Context& ctx, const json& a, const std::string& fallback) {
  const json spec = a.contains("fan") ? a.at("fan") : json(fallback);
  const int np = ctx.prob.map.n_p();
  const int nx = ctx.prob.map.n_x();
  const int m = ctx.prob.map.m();
  if (spec.is_string()) {
    const auto s = spec.get<std::string>();
    if (s == "exact-partial") return exact_partial_fan(ctx.prob, ctx.p, ctx.x);
    if (s == "exact-joint") return exact_joint_fan(ctx.prob, ctx.p, ctx.x);
    if (s == "zero-partial") return FanPrederivative({Matrix::Zero(m, nx)});
    if (s == "zero-joint") return FanPrederivative({Matrix::Zero(m, np + nx)});
    throw ConfigError("fan: unknown fan '" + s + "'");
  }
  if (!spec.is_object() || !spec.contains("bundle")) {
    throw ConfigError("fan: expected a name or {\"bundle\": [...]}");
  }
  const bool joint = get_or<std::string>(spec, "domain", "joint") == "joint";
  const long cols = joint ? np + nx : nx;
  std::vector<Matrix> bundle;
  for (const auto& mj : spec.at("bundle")) bundle.push_back(to_matrix(mj, m, cols, "fan bundle"));
  if (bundle.empty()) throw ConfigError("fan: empty bundle");
  const auto mode = get_or<std::string>(spec, "mode", "union");
  if (mode != "union" && mode != "hull") throw ConfigError("fan: mode must be union or hull");
  return FanPrederivative(std::move(bundle), mode == "hull" ? FanMode::ConvexHull : FanMode::Union);
}

json slope_json(const SlopeEstimate& s) {
  return {{"value", s.value},         {"radii", s.radii},
          {"per_radius", s.per_radius}, {"converged", s.converged},
          {"K", s.directions},        {"seed", s.seed}};
}

SigmaNablaResult run_sigma_nabla(const Context& ctx, const json& a) {
  SigmaNablaOptions o;
  o.delta2 = param(ctx, a, "delta2", 0.5);
  o.h = get_or<double>(a, "sigma_h", get_or<double>(a, "h", 0.05));
  o.slope = slope_options(a, seed_of(ctx, a));
  o.threads = ctx.threads;
  return sigma_nabla(ctx.prob, ctx.p, ctx.x, o);
}

double resolve_sigma(const Context& ctx, const json& a, json& note) {
  if (a.contains("sigma") && a.at("sigma").is_number()) return a.at("sigma").get<double>();
  const auto src = get_or<std::string>(a, "sigma", "sigma-nabla");
  if (src != "sigma-nabla") throw ConfigError("sigma: expected a number or \"sigma-nabla\"");
  const auto sn = run_sigma_nabla(ctx, a);
  note["sigma_source"] = "sigma-nabla";
  return sn.value;
}

AubinOptions aubin_options(const Context& ctx, const json& a) {
  AubinOptions o;
  o.delta = param(ctx, a, "delta", o.delta);
  o.r = param(ctx, a, "r", o.r);
  o.steps = get_or<int>(a, "steps", o.steps);
  o.shrink = get_or<double>(a, "shrink", o.shrink);
  o.points_per_radius = get_or<int>(a, "points_per_radius", o.points_per_radius);
  o.solv_h = get_or<double>(a, "solv_h", o.solv_h);
  o.solv_margin = get_or<double>(a, "solv_margin", o.solv_margin);
  o.growth_factor = get_or<double>(a, "growth_factor", o.growth_factor);
  return o;
}

Outcome analysis_slope(const Context& ctx, const json& a) {
  const Vector p = point_or(a, "p", ctx.p, ctx.prob.map.n_p());
  const Vector x = point_or(a, "x", ctx.x, ctx.prob.map.n_x());
  const auto s = partial_strong_slope(ctx.prob, p, x, slope_options(a, seed_of(ctx, a)));
  json r = slope_json(s);
  r["witness"] = {{"p", vec_json(p)}, {"x", vec_json(x)}};
  r["merit"] = merit(ctx.prob, p, x);
  return {r, true, std::nullopt};
}

Outcome analysis_sigma_nabla(const Context& ctx, const json& a) {
  const auto s = run_sigma_nabla(ctx, a);
  const double floor = get_or<double>(a, "positive_threshold", 0.05);
  const auto opts = slope_options(a, seed_of(ctx, a));
  json r = {{"value", s.empty ? json(nullptr) : json(s.value)},
            {"empty", s.empty},
            {"grid_points", s.grid_points},
            {"off_graph_points", s.off_graph_points},
            {"radii", opts.schedule.radii()},
            {"K", opts.directions > 0 ? opts.directions : 64 * ctx.prob.map.n_x()},
            {"seed", opts.seed},
            {"positive_threshold", floor}};
  r["witness"] = s.empty ? json(nullptr)
                         : json{{"p", vec_json(s.witness_p)}, {"x", vec_json(s.witness_x)}};
  return {r, s.empty || s.value > floor, std::nullopt};
}

Outcome analysis_sigma_h(const Context& ctx, const json& a) {
  const auto fan = resolve_fan(ctx, a, "exact-partial");
  const int k = get_or<int>(a, "K", 64 * fan.domain_dim());
  const auto s = sigma_H(fan, ctx.prob.cone, k, seed_of(ctx, a));
  json r = {{"value", s.value}, {"witness", vec_json(s.direction)}, {"K", s.samples},
            {"seed", s.seed}};
  return {r, s.value > 0.0, std::nullopt};
}

Outcome analysis_errorbound(const Context& ctx, const json& a) {
  json r = json::object();
  const double sigma = resolve_sigma(ctx, a, r);
  ErrorBoundOptions o;
  o.zeta = param(ctx, a, "zeta", o.zeta);
  o.eta = param(ctx, a, "eta", o.eta);
  o.h = param(ctx, a, "h", o.h);
  o.solv_margin = get_or<double>(a, "solv_margin", o.solv_margin);
  if (!(sigma > 0.0)) {
    r["sigma"] = sigma;
    r["skipped"] = "sigma is not positive; the error bound has no content";
    return {r, false, std::nullopt};
  }
  const auto rep = verify_error_bound(ctx.prob, ctx.p, ctx.x, sigma, o);
  Csv csv({"p", "x", "merit", "dist", "ratio", "verdict", "sigma", "h", "feas_tol"});
  for (const auto& row : rep.rows) {
    csv.row(row.p, row.x, row.merit, row.dist, row.ratio,
            std::string(row.violation ? "violation" : "ok"), sigma, o.h, kFeasTol);
  }
  r.update({{"sigma", sigma}, {"zeta", o.zeta}, {"eta", o.eta}, {"h", o.h},
            {"points", rep.rows.size()}, {"violations", rep.violations},
            {"empty_slices", rep.empty_slices}, {"worst_ratio", rep.worst_ratio},
            {"passed", rep.passed}});
  return {r, rep.passed, csv.str()};
}

Outcome analysis_aubin(const Context& ctx, const json& a) {
  const auto o = aubin_options(ctx, a);
  const auto rep = estimate_aubin_modulus(ctx.prob, ctx.p, ctx.x, o);
  Csv csv({"delta", "p_step", "kappa", "growth_factor"});
  for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
    csv.row(rep.deltas[i], rep.p_steps[i], rep.kappas[i], o.growth_factor);
  }
  json r = {{"kappa", rep.kappa},   {"deltas", rep.deltas},       {"kappas", rep.kappas},
            {"growth", rep.growth}, {"diverging", rep.diverging}, {"empty_slices", rep.empty_slices},
            {"r", o.r},             {"shrink", o.shrink},         {"growth_factor", o.growth_factor}};
  return {r, !rep.diverging, csv.str()};
}

Outcome analysis_aubin_bound(const Context& ctx, const json& a) {
  json r = json::object();
  const auto o = aubin_options(ctx, a);
  double ell = 0.0;
  if (a.contains("ell") && a.at("ell").is_number()) {
    ell = a.at("ell").get<double>();
  } else {
    const double h = param(ctx, a, "h", 0.01);
    ell = estimate_partial_lipschitz_rate(ctx.prob, ctx.x, o.r, ctx.p, o.delta,
                                          std::max(h, o.delta / 10.0));
    r["ell_source"] = "estimate";
  }
  const double sigma = resolve_sigma(ctx, a, r);
  if (!(sigma > 0.0)) {
    r.update({{"ell", ell}, {"sigma", sigma}, {"skipped", "sigma is not positive"}});
    return {r, false, std::nullopt};
  }
  const double tol = get_or<double>(a, "tol", 0.05);
  const auto rep = aubin_bound_check(ctx.prob, ctx.p, ctx.x, ell, sigma, o, tol);
  r.update({{"kappa", rep.kappa}, {"ell", rep.ell}, {"sigma", rep.sigma}, {"bound", rep.bound},
            {"slack", rep.slack}, {"tol", rep.tol}, {"passed", rep.passed}});
  return {r, rep.passed, std::nullopt};
}

Outcome analysis_lip_lsc(const Context& ctx, const json& a) {
  const double ell = get_or<double>(a, "ell", 1.0);
  const double delta = param(ctx, a, "delta", 0.25);
  const double h = param(ctx, a, "h", 0.01);
  const auto rep = check_lipschitz_lsc(ctx.prob, ctx.p, ctx.x, ell, delta, h,
                                       get_or<double>(a, "solv_margin", 1.0));
  Csv csv({"p", "dist", "bound", "verdict", "ell", "h"});
  for (const auto& row : rep.rows) {
    csv.row(row.p, row.dist, row.bound, std::string(row.violation ? "violation" : "ok"), ell, h);
  }
  json r = {{"ell", ell},           {"delta", delta},          {"h", h},
            {"points", rep.rows.size()}, {"violations", rep.violations}, {"passed", rep.passed}};
  return {r, rep.passed, csv.str()};
}

Outcome analysis_lipschitz_rate(const Context& ctx, const json& a) {
  const double s = get_or<double>(a, "s", param(ctx, a, "r", 0.25));
  const double tau = get_or<double>(a, "tau", param(ctx, a, "delta", 0.25));
  const double h = get_or<double>(a, "rate_h", 0.05);
  const double ell = estimate_partial_lipschitz_rate(ctx.prob, ctx.x, s, ctx.p, tau, h);
  return {{{"value", ell}, {"s", s}, {"tau", tau}, {"h", h}}, true, std::nullopt};
}

Outcome analysis_gder(const Context& ctx, const json& a) {
  const auto fan = resolve_fan(ctx, a, "exact-joint");
  MembershipOptions mo;
  mo.t0 = get_or<double>(a, "t0", mo.t0);
  mo.levels = get_or<int>(a, "levels", mo.levels);
  mo.tail = get_or<int>(a, "tail", mo.tail);
  mo.threshold = get_or<double>(a, "threshold", mo.threshold);
  mo.resolution = get_or<int>(a, "resolution", mo.resolution);
  const int count = get_or<int>(a, "directions", 72);
  const int dim = ctx.prob.map.n_p() + ctx.prob.map.n_x();
  const auto dirs = direction_grid(dim, count, seed_of(ctx, a));
  const auto rep = sandwich_check(ctx.prob, ctx.p, ctx.x, fan, dirs, mo, ctx.threads);
  Csv csv({"p_direction", "v_direction", "inner", "sampled", "outer", "min_ratio", "threshold",
           "feas_tol"});
  for (const auto& row : rep.rows) {
    csv.row(Vector(row.dir.head(ctx.prob.map.n_p())), Vector(row.dir.tail(ctx.prob.map.n_x())),
            row.inner, row.sampled, row.outer, row.min_ratio, mo.threshold, kFeasTol);
  }
  json viol = json::array();
  for (const auto& [i, kind] : rep.violations) {
    viol.push_back({{"index", i}, {"kind", to_string(kind)}, {"direction", vec_json(rep.rows[i].dir)},
                    {"min_ratio", rep.rows[i].min_ratio}});
  }
  std::size_t members = 0;
  for (const auto& row : rep.rows) members += row.sampled ? 1 : 0;
  json r = {{"directions", rep.rows.size()},
            {"members", members},
            {"agreement", rep.agreement},
            {"violations", viol},
            {"threshold", mo.threshold},
            {"t0", mo.t0},
            {"levels", mo.levels},
            {"hypothesis_sigma_h_partial", rep.sigma_h_partial}};
  return {r, rep.violations.empty(), csv.str()};
}

json triple_json(const Triple& t) {
  return {{"p1", vec_json(t.p1)}, {"x1", vec_json(t.x1)}, {"p2", vec_json(t.p2)},
          {"x2", vec_json(t.x2)}, {"t", t.t}};
}

Outcome analysis_concavity(const Context& ctx, const json& a) {
  const auto count = get_or<std::size_t>(a, "triples", 1000);
  const double radius = get_or<double>(a, "radius", 1.0);
  const double tol = get_or<double>(a, "tol", kFeasTol);
  const auto triples = random_triples(ctx.prob, ctx.p, ctx.x, radius, count, seed_of(ctx, a));
  const auto cc = check_C_concavity(ctx.prob, triples, tol);
  const auto mc = check_merit_convexity(ctx.prob, triples, tol);
  json r;
  r["c_concavity"] = {{"passed", cc.passed},
                      {"checked", cc.checked},
                      {"violations", cc.violations.size()},
                      {"set_inclusion_violations", cc.set_inclusion_violations},
                      {"max_defect", cc.max_defect},
                      {"tol", tol}};
  if (!cc.violations.empty()) {
    r["c_concavity"]["witness"] = triple_json(triples[cc.violations.front().triple]);
  }
  r["merit_convexity"] = {{"passed", mc.passed},
                          {"checked", mc.checked},
                          {"violations", mc.violations.size()},
                          {"max_gap", mc.max_gap},
                          {"tol", tol}};
  if (!mc.violations.empty()) {
    r["merit_convexity"]["witness"] = triple_json(triples[mc.violations.front()]);
  }
  bool verdict = cc.passed && mc.passed;
  if (a.contains("p1") || a.contains("p2")) {
    const Vector p1 = point_or(a, "p1", ctx.p, ctx.prob.map.n_p());
    const Vector p2 = point_or(a, "p2", ctx.p, ctx.prob.map.n_p());
    std::vector<double> ts = get_or<std::vector<double>>(
        a, "t", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
    RegionSpec box;
    box.center = ctx.x;
    box.radius = get_or<double>(a, "box_radius", 3.0);
    box.h = param(ctx, a, "h", 0.01);
    const auto sc = check_solv_convexity(ctx.prob, p1, p2, ts, box);
    json s = {{"passed", sc.passed},
              {"empty_slice", sc.empty_slice},
              {"checked", sc.checked},
              {"violations", sc.violations}};
    if (sc.worst) {
      s["witness"] = {{"x1", vec_json(sc.worst->x1)}, {"x2", vec_json(sc.worst->x2)},
                      {"t", sc.worst->t},           {"p", vec_json(sc.worst->p_mid)},
                      {"x", vec_json(sc.worst->x_mid)}, {"merit", sc.worst->merit}};
    }
    r["solv_convexity"] = s;
    verdict = verdict && sc.passed;
  }
  return {r, verdict, std::nullopt};
}

Outcome analysis_descent(const Context& ctx, const json& a) {
  const Vector p = point_or(a, "p", ctx.p, ctx.prob.map.n_p());
  const Vector x0 = point_or(a, "x0", ctx.x, ctx.prob.map.n_x());
  DescentOptions o;
  o.step0 = get_or<double>(a, "step0", o.step0);
  o.shrink = get_or<double>(a, "shrink", o.shrink);
  o.max_iters = get_or<int>(a, "max_iters", o.max_iters);
  o.directions = get_or<int>(a, "directions", o.directions);
  o.seed = seed_of(ctx, a);
  const auto res = solve_descent(ctx.prob, p, x0, o);
  json r = {{"x", vec_json(res.x)},         {"merit", res.merit},
            {"converged", res.converged},   {"iterations", res.iterations},
            {"trace", res.trace},           {"feas_tol", o.feas_tol}};
  return {r, res.converged, std::nullopt};
}

using AnalysisFn = std::function<Outcome(const Context&, const json&)>;

const std::map<std::string, AnalysisFn>& registry() {
  static const std::map<std::string, AnalysisFn> r = {
      {"aubin", analysis_aubin},
      {"aubin-bound", analysis_aubin_bound},
      {"concavity", analysis_concavity},
      {"descent", analysis_descent},
      {"errorbound", analysis_errorbound},
      {"gder", analysis_gder},
      {"lip-lsc", analysis_lip_lsc},
      {"lipschitz-rate", analysis_lipschitz_rate},
      {"sigma-h", analysis_sigma_h},
      {"sigma-nabla", analysis_sigma_nabla},
      {"slope", analysis_slope},
  };
  return r;
}

json problem_json(const SviProblem& prob) {
  return {{"name", prob.name},
          {"kind", prob.map.kind() == MapKind::Affine ? "affine" : "builtin"},
          {"n_p", prob.map.n_p()},
          {"n_x", prob.map.n_x()},
          {"m", prob.map.m()},
          {"scenarios", prob.map.scenario_count()},
          {"cone_normals", prob.cone.normals().size()},
          {"recession", prob.recession}};
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  os << '\n';
  return os.str();
}

bool is_known_analysis(const std::string& name) { return registry().count(name) > 0; }

SviProblem parse_problem(const json& j) {
  if (!j.is_string() && !j.is_object()) {
    throw ConfigError("problem: expected a builtin name or an object");
  }
  try {
    if (j.is_string()) return make_builtin(j.get<std::string>());
    if (j.contains("builtin")) {
      return make_builtin(j.at("builtin").get<std::string>(), get_or<int>(j, "m", 0));
    }
    const auto kind = get_or<std::string>(j, "kind", "");
    if (kind == "builtin") {
      return make_builtin(j.at("name").get<std::string>(), get_or<int>(j, "m", 0));
    }
    if (kind != "affine") throw ConfigError("problem.kind must be \"affine\" or \"builtin\"");
    const int m = j.at("m").get<int>();
    const int np = j.at("n_p").get<int>();
    const int nx = j.at("n_x").get<int>();
    if (m <= 0 || np <= 0 || nx <= 0) throw ConfigError("problem: dimensions must be positive");
    std::vector<AffineScenario> scenarios;
    for (const auto& s : j.at("scenarios")) {
      scenarios.push_back({to_matrix(s.at("A"), m, nx, "scenario A"),
                           to_matrix(s.at("B"), m, np, "scenario B"),
                           s.contains("c") ? to_vector(s.at("c"), "scenario c") : Vector::Zero(m)});
      if (scenarios.back().c.size() != m) throw ConfigError("scenario c: wrong dimension");
    }
    if (scenarios.empty()) throw ConfigError("problem: empty scenario list");
    const auto cone = parse_cone(j.contains("cone") ? j.at("cone") : json("orthant"), m);
    return SviProblem(get_or<std::string>(j, "name", "affine"),
                      UncertainMap::affine(np, nx, m, std::move(scenarios)), cone,
                      get_or<bool>(j, "recession", false));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

RunResult run_config(const json& config, const RunOptions& opts) {
  static const std::set<std::string> top_keys = {"problem", "base_point", "regions", "analyses",
                                                 "seed", "description"};
  if (!config.is_object()) throw ConfigError("config: expected a JSON object");
  for (auto it = config.begin(); it != config.end(); ++it) {
    if (!top_keys.count(it.key())) throw ConfigError("config: unknown key '" + it.key() + "'");
  }
  if (!config.contains("problem")) throw ConfigError("config: missing 'problem'");
  const SviProblem prob = parse_problem(config.at("problem"));

  Vector p = Vector::Zero(prob.map.n_p());
  Vector x = Vector::Zero(prob.map.n_x());
  if (config.contains("base_point")) {
    const auto& bp = config.at("base_point");
    p = point_or(bp, "p", p, prob.map.n_p());
    x = point_or(bp, "x", x, prob.map.n_x());
  }
  const json regions = config.value("regions", json::object());
  if (!regions.is_object()) throw ConfigError("regions: expected an object");
  const std::uint64_t seed = opts.seed ? *opts.seed : get_or<std::uint64_t>(config, "seed", 0);
  const Context ctx{prob, p, x, regions, seed, std::max(opts.threads, 1)};

  json analyses = config.value("analyses", json::array());
  if (!analyses.is_array()) throw ConfigError("analyses: expected an array");
  for (auto& a : analyses) {
    if (a.is_string()) a = json{{"name", a}};
    if (!a.is_object() || !a.contains("name") || !a.at("name").is_string()) {
      throw ConfigError("analyses: every entry needs a string 'name'");
    }
    if (!is_known_analysis(a.at("name").get<std::string>())) {
      throw ConfigError("analyses: unknown analysis '" + a.at("name").get<std::string>() + "'");
    }
    const auto expect = get_or<std::string>(a, "expect", "pass");
    if (expect != "pass" && expect != "fail" && expect != "any") {
      throw ConfigError("analyses: expect must be pass, fail or any");
    }
  }
  if (opts.only) {
    if (!is_known_analysis(*opts.only)) throw ConfigError("unknown analysis '" + *opts.only + "'");
    json selected = json::array();
    for (const auto& a : analyses) {
      if (a.at("name") == *opts.only) selected.push_back(a);
    }
    if (selected.empty()) selected.push_back({{"name", *opts.only}, {"expect", "any"}});
    analyses = selected;
  }

  // Report order: analysis name, then config position.
  std::vector<std::size_t> order(analyses.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return analyses[l].at("name").get<std::string>() < analyses[r].at("name").get<std::string>();
  });

  RunResult out;
  json entries = json::array();
  bool all_ok = true;
  std::map<std::string, int> used_names;
  for (std::size_t idx : order) {
    const json& a = analyses[idx];
    const auto name = a.at("name").get<std::string>();
    const auto expect = get_or<std::string>(a, "expect", "pass");
    Outcome res = registry().at(name)(ctx, a);
    const bool ok = expect == "any" || (expect == "pass") == res.verdict;
    all_ok = all_ok && ok;
    json entry = {{"name", name},
                  {"id", get_or<std::string>(a, "id", name)},
                  {"verdict", res.verdict ? "pass" : "fail"},
                  {"expect", expect},
                  {"ok", ok},
                  {"result", res.result}};
    if (res.csv) {
      std::string base = get_or<std::string>(a, "id", name);
      const int n = ++used_names[base];
      const std::string file = (n == 1 ? base : base + "-" + std::to_string(n)) + ".csv";
      out.csv[file] = std::move(*res.csv);
      entry["csv"] = file;
    } else {
      entry["csv"] = nullptr;
    }
    entries.push_back(std::move(entry));
  }

  out.report = {{"schema", kSchemaVersion},
                {"problem", problem_json(prob)},
                {"base_point", {{"p", vec_json(p)}, {"x", vec_json(x)}}},
                {"seed", seed},
                {"tolerances",
                 {{"feas_tol", kFeasTol},
                  {"tol_proj", kProjectionTol},
                  {"tol_active", kActiveTol},
                  {"proj_max_iters", kProjectionMaxIters}}},
                {"regions", regions},
                {"analyses", entries},
                {"ok", all_ok}};
  out.exit_code = all_ok ? kOk : kVerdictMismatch;
  return out;
}

int run_scenario(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                 const RunOptions& opts, std::ostream& diag) {
  json config;
  {
    std::ifstream in(config_path);
    if (!in) {
      diag << "error: cannot open config " << config_path << '\n';
      return kConfigError;
    }
    try {
      in >> config;
    } catch (const json::exception& e) {
      diag << "error: invalid JSON in " << config_path << ": " << e.what() << '\n';
      return kConfigError;
    }
  }
  RunResult res;
  try {
    res = run_config(config, opts);
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DimensionError& e) {
    diag << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    diag << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    diag << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    diag << "error: cannot create " << out_dir << ": " << ec.message() << '\n';
    return kNumericFailure;
  }
  std::ofstream(out_dir / "report.json") << dump_json(res.report);
  for (const auto& [file, body] : res.csv) std::ofstream(out_dir / file) << body;
  for (const auto& a : res.report.at("analyses")) {
    if (!a.at("ok").get<bool>()) {
      diag << "analysis '" << a.at("id").get<std::string>() << "' verdict "
           << a.at("verdict").get<std::string>() << ", expected "
           << a.at("expect").get<std::string>() << '\n';
    }
  }
  return res.exit_code;
}

}  // namespace svilab::scenario
