#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "svilab/concavity.hpp"
#include "svilab/derivatives.hpp"
#include "svilab/errorbounds.hpp"
#include "svilab/fan.hpp"
#include "svilab/geometry.hpp"
#include "svilab/problems.hpp"
#include "svilab/scenario.hpp"
#include "svilab/slopes.hpp"

namespace py = pybind11;
using namespace svilab;

namespace {

RegionSpec box(const Vector& center, double radius, double h) {
  RegionSpec r;
  r.center = center;
  r.radius = radius;
  r.h = h;
  return r;
}

}  // namespace

PYBIND11_MODULE(_svilab, m) {
  m.doc() = "Numerical diagnostics for parameterized set-valued inclusions";

  py::register_exception<Error>(m, "SvilabError");
  py::register_exception<DimensionError>(m, "DimensionError", m.attr("SvilabError"));
  py::register_exception<UnsupportedRepresentation>(m, "UnsupportedRepresentation",
                                                    m.attr("SvilabError"));
  py::register_exception<InfeasiblePoint>(m, "InfeasiblePoint", m.attr("SvilabError"));
  py::register_exception<NumericError>(m, "NumericError", m.attr("SvilabError"));

  // geometry
  py::class_<PolyhedralCone>(m, "PolyhedralCone")
      .def(py::init<int, std::vector<Vector>>(), py::arg("dim"), py::arg("normals"))
      .def_static("orthant", &PolyhedralCone::orthant)
      .def_static("halfspace", &PolyhedralCone::halfspace)
      .def_static("whole_space", &PolyhedralCone::whole_space)
      .def_property_readonly("dim", &PolyhedralCone::dim)
      .def_property_readonly("normals", &PolyhedralCone::normals)
      .def("contains", &PolyhedralCone::contains, py::arg("y"), py::arg("tol") = kFeasTol)
      .def("interior_witness", &PolyhedralCone::interior_witness)
      .def(py::self == py::self);

  py::class_<GeneratorSet>(m, "GeneratorSet")
      .def(py::init<std::vector<Vector>, std::optional<PolyhedralCone>>(), py::arg("points"),
           py::arg("recession") = std::nullopt)
      .def_property_readonly("dim", &GeneratorSet::dim)
      .def_property_readonly("points", &GeneratorSet::points)
      .def_property_readonly("recession", &GeneratorSet::recession);

  py::class_<HalfspaceSet>(m, "HalfspaceSet")
      .def_readonly("normals", &HalfspaceSet::normals)
      .def_readonly("offsets", &HalfspaceSet::offsets)
      .def("contains", &HalfspaceSet::contains, py::arg("y"), py::arg("tol") = kFeasTol);

  py::enum_<CoreStatus>(m, "CoreStatus")
      .value("Positive", CoreStatus::Positive)
      .value("Boundary", CoreStatus::Boundary)
      .value("Empty", CoreStatus::Empty);

  py::class_<CoreMeasure>(m, "CoreMeasure")
      .def_readonly("value", &CoreMeasure::value)
      .def_readonly("status", &CoreMeasure::status)
      .def_readonly("margin", &CoreMeasure::margin);

  m.def("project_onto_cone", &project_onto_cone);
  m.def("dist_point_to_cone", &dist_point_to_cone);
  m.def("dist_point_to_set", &dist_point_to_set);
  m.def("excess", py::overload_cast<const GeneratorSet&, const PolyhedralCone&>(&excess));
  m.def("excess", py::overload_cast<const GeneratorSet&, const GeneratorSet&>(&excess));
  m.def("hausdorff", &hausdorff);
  m.def("star_difference", &star_difference);
  m.def("core_measure", &core_measure);
  m.def("tangent_cone", &tangent_cone, py::arg("cone"), py::arg("y"),
        py::arg("active_tol") = kActiveTol);

  // problems
  py::class_<SviProblem>(m, "SviProblem")
      .def_readonly("name", &SviProblem::name)
      .def_readonly("cone", &SviProblem::cone)
      .def_readonly("recession", &SviProblem::recession)
      .def_property_readonly("n_p", [](const SviProblem& p) { return p.map.n_p(); })
      .def_property_readonly("n_x", [](const SviProblem& p) { return p.map.n_x(); })
      .def_property_readonly("m", [](const SviProblem& p) { return p.map.m(); })
      .def_property_readonly("has_closed_forms",
                             [](const SviProblem& p) { return p.closed_forms.has_value(); });

  m.def("make_builtin", &make_builtin, py::arg("name"), py::arg("m") = 0);
  m.def("list_builtins", [] {
    py::list out;
    for (const auto& b : list_builtins()) {
      py::dict d;
      d["name"] = b.name;
      d["n_p"] = b.n_p;
      d["n_x"] = b.n_x;
      d["m"] = b.m_default;
      d["m_min"] = b.m_min;
      d["m_max"] = b.m_max;
      d["closed_forms"] = b.closed_forms;
      d["description"] = b.description;
      out.append(d);
    }
    return out;
  });
  m.def("image_set", &image_set);
  m.def("merit", &merit);
  m.def("is_robust_feasible", &is_robust_feasible, py::arg("problem"), py::arg("p"),
        py::arg("x"), py::arg("tol") = kFeasTol);
  m.def(
      "solv_brute",
      [](const SviProblem& prob, const Vector& p, const Vector& center, double radius, double h) {
        return solv_brute(prob, p, box(center, radius, h));
      },
      py::arg("problem"), py::arg("p"), py::arg("center"), py::arg("radius"), py::arg("h"));

  py::class_<DescentResult>(m, "DescentResult")
      .def_readonly("x", &DescentResult::x)
      .def_readonly("merit", &DescentResult::merit)
      .def_readonly("converged", &DescentResult::converged)
      .def_readonly("iterations", &DescentResult::iterations);
  m.def(
      "solve_descent",
      [](const SviProblem& prob, const Vector& p, const Vector& x0, std::uint64_t seed) {
        DescentOptions o;
        o.seed = seed;
        return solve_descent(prob, p, x0, o);
      },
      py::arg("problem"), py::arg("p"), py::arg("x0"), py::arg("seed") = 0);

  // slopes and fans
  py::class_<SlopeEstimate>(m, "SlopeEstimate")
      .def_readonly("value", &SlopeEstimate::value)
      .def_readonly("radii", &SlopeEstimate::radii)
      .def_readonly("per_radius", &SlopeEstimate::per_radius)
      .def_readonly("converged", &SlopeEstimate::converged);
  m.def(
      "partial_strong_slope",
      [](const SviProblem& prob, const Vector& p, const Vector& x, std::uint64_t seed) {
        SlopeOptions o;
        o.seed = seed;
        return partial_strong_slope(prob, p, x, o);
      },
      py::arg("problem"), py::arg("p"), py::arg("x"), py::arg("seed") = 0);

  py::class_<SigmaNablaResult>(m, "SigmaNablaResult")
      .def_readonly("value", &SigmaNablaResult::value)
      .def_readonly("empty", &SigmaNablaResult::empty)
      .def_readonly("witness_p", &SigmaNablaResult::witness_p)
      .def_readonly("witness_x", &SigmaNablaResult::witness_x);
  m.def(
      "sigma_nabla",
      [](const SviProblem& prob, const Vector& p, const Vector& x, double delta2, double h,
         std::uint64_t seed) {
        SigmaNablaOptions o;
        o.delta2 = delta2;
        o.h = h;
        o.slope.seed = seed;
        return sigma_nabla(prob, p, x, o);
      },
      py::arg("problem"), py::arg("p"), py::arg("x"), py::arg("delta2") = 0.5,
      py::arg("h") = 0.05, py::arg("seed") = 0);

  py::enum_<FanMode>(m, "FanMode")
      .value("Union", FanMode::Union)
      .value("ConvexHull", FanMode::ConvexHull);
  py::class_<FanPrederivative>(m, "FanPrederivative")
      .def(py::init<std::vector<Matrix>, FanMode>(), py::arg("bundle"),
           py::arg("mode") = FanMode::Union)
      .def_property_readonly("bundle", &FanPrederivative::bundle)
      .def_property_readonly("mode", &FanPrederivative::mode);
  m.def("fan_apply", &fan_apply);
  m.def("exact_partial_fan", &exact_partial_fan);
  m.def("exact_joint_fan", &exact_joint_fan);

  py::class_<SigmaHResult>(m, "SigmaHResult")
      .def_readonly("value", &SigmaHResult::value)
      .def_readonly("direction", &SigmaHResult::direction)
      .def_readonly("samples", &SigmaHResult::samples);
  m.def("sigma_H", &sigma_H, py::arg("fan"), py::arg("cone"), py::arg("samples") = 4096,
        py::arg("seed") = 0);

  // derivatives
  m.def(
      "contingent_member_graph",
      [](const SviProblem& prob, const Vector& p, const Vector& x, const Vector& dp,
         const Vector& dx) { return contingent_member_graph(prob, p, x, dp, dx).member; },
      py::arg("problem"), py::arg("p"), py::arg("x"), py::arg("dp"), py::arg("dx"));
  m.def(
      "sandwich_check",
      [](const SviProblem& prob, const Vector& p, const Vector& x, int directions) {
        const auto rep = sandwich_check(prob, p, x, exact_joint_fan(prob, p, x),
                                        direction_grid(static_cast<int>(p.size() + x.size()),
                                                       directions));
        py::dict d;
        d["agreement"] = rep.agreement;
        d["violations"] = rep.violations.size();
        d["rows"] = rep.rows.size();
        return d;
      },
      py::arg("problem"), py::arg("p"), py::arg("x"), py::arg("directions") = 72);

  // concavity
  m.def(
      "check_concavity",
      [](const SviProblem& prob, const Vector& p, const Vector& x, double radius,
         std::size_t count, std::uint64_t seed) {
        const auto triples = random_triples(prob, p, x, radius, count, seed);
        py::dict d;
        d["c_concavity"] = check_C_concavity(prob, triples).passed;
        d["merit_convexity"] = check_merit_convexity(prob, triples).passed;
        return d;
      },
      py::arg("problem"), py::arg("p"), py::arg("x"), py::arg("radius") = 1.0,
      py::arg("count") = 1000, py::arg("seed") = 0);

  // error bounds
  py::class_<ErrorBoundReport>(m, "ErrorBoundReport")
      .def_readonly("violations", &ErrorBoundReport::violations)
      .def_readonly("empty_slices", &ErrorBoundReport::empty_slices)
      .def_readonly("worst_ratio", &ErrorBoundReport::worst_ratio)
      .def_readonly("passed", &ErrorBoundReport::passed);
  m.def(
      "verify_error_bound",
      [](const SviProblem& prob, const Vector& p, const Vector& x, double sigma, double zeta,
         double eta, double h) {
        ErrorBoundOptions o;
        o.zeta = zeta;
        o.eta = eta;
        o.h = h;
        return verify_error_bound(prob, p, x, sigma, o);
      },
      py::arg("problem"), py::arg("p"), py::arg("x"), py::arg("sigma"), py::arg("zeta") = 0.5,
      py::arg("eta") = 0.25, py::arg("h") = 0.01);

  py::class_<AubinReport>(m, "AubinReport")
      .def_readonly("kappa", &AubinReport::kappa)
      .def_readonly("deltas", &AubinReport::deltas)
      .def_readonly("kappas", &AubinReport::kappas)
      .def_readonly("growth", &AubinReport::growth)
      .def_readonly("diverging", &AubinReport::diverging);
  m.def(
      "estimate_aubin_modulus",
      [](const SviProblem& prob, const Vector& p, const Vector& x, double delta, double r) {
        AubinOptions o;
        o.delta = delta;
        o.r = r;
        return estimate_aubin_modulus(prob, p, x, o);
      },
      py::arg("problem"), py::arg("p"), py::arg("x"), py::arg("delta") = 0.25,
      py::arg("r") = 0.25);
  m.def("estimate_partial_lipschitz_rate", &estimate_partial_lipschitz_rate, py::arg("problem"),
        py::arg("xbar"), py::arg("s"), py::arg("pbar"), py::arg("tau"), py::arg("h"));

  // runner
  m.def(
      "_run_config",
      [](const std::string& config, std::optional<std::uint64_t> seed, int threads) {
        scenario::RunOptions o;
        o.seed = seed;
        o.threads = threads;
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(config);
        } catch (const nlohmann::json::exception& e) {
          throw scenario::ConfigError(e.what());
        }
        const auto res = scenario::run_config(j, o);
        return py::make_tuple(res.exit_code, scenario::dump_json(res.report), res.csv);
      },
      py::arg("config"), py::arg("seed") = std::nullopt, py::arg("threads") = 1);
}
