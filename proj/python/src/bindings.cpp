#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cflow/corpus.hpp"
#include "cflow/error.hpp"
#include "cflow/family.hpp"
#include "cflow/flow.hpp"
#include "cflow/geometry.hpp"
#include "cflow/intersect.hpp"
#include "cflow/io.hpp"
#include "cflow/levelset.hpp"
#include "cflow/metrics.hpp"
#include "cflow/verify.hpp"

namespace py = pybind11;
using namespace cflow;

namespace {

std::vector<Point2> to_points(const py::iterable& seq) {
  std::vector<Point2> out;
  for (const py::handle& item : seq) {
    const auto xy = item.cast<py::sequence>();
    if (py::len(xy) != 2) throw py::value_error("each vertex must be a pair (x, y)");
    out.push_back({xy[0].cast<double>(), xy[1].cast<double>()});
  }
  return out;
}

py::dict report_dict(const DistanceReport& r) {
  py::dict d;
  d["value"] = r.value;
  d["slack"] = r.slack;
  if (r.witness) {
    d["witness"] = py::make_tuple(py::make_tuple(r.witness->first.x, r.witness->first.y),
                                  py::make_tuple(r.witness->second.x, r.witness->second.y));
  } else {
    d["witness"] = py::none();
  }
  if (r.alignment) {
    d["shift"] = r.alignment->shift;
    d["reversed"] = r.alignment->reversed;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Curve shortening flow, level-set flow and curve distances";

  // Translators run newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<InvalidCurveError>(m, "InvalidCurveError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Point2>(m, "Point2")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def(py::init([](const py::sequence& s) {
        if (py::len(s) != 2) throw py::value_error("expected (x, y)");
        return Point2{s[0].cast<double>(), s[1].cast<double>()};
      }))
      .def_readwrite("x", &Point2::x)
      .def_readwrite("y", &Point2::y)
      .def("__iter__", [](const Point2& p) { return py::iter(py::make_tuple(p.x, p.y)); })
      .def("__eq__", [](const Point2& a, const Point2& b) { return a == b; })
      .def("__repr__", [](const Point2& p) {
        std::ostringstream s;
        s << "Point2(" << p.x << ", " << p.y << ")";
        return s.str();
      });
  py::implicitly_convertible<py::tuple, Point2>();
  py::implicitly_convertible<py::list, Point2>();

  py::enum_<Orientation>(m, "Orientation")
      .value("counterclockwise", Orientation::counterclockwise)
      .value("clockwise", Orientation::clockwise);

  py::class_<ClosedCurve>(m, "ClosedCurve")
      .def(py::init([](const py::iterable& v) { return ClosedCurve(to_points(v)); }), py::arg("vertices"))
      .def("__len__", &ClosedCurve::size)
      .def("__getitem__", [](const ClosedCurve& c, std::ptrdiff_t i) { return c.cyclic(i); })
      .def_property_readonly("vertices", [](const ClosedCurve& c) {
        py::list out;
        for (const Point2& p : c.vertices()) out.append(py::make_tuple(p.x, p.y));
        return out;
      })
      .def_property_readonly("orientation", &ClosedCurve::orientation)
      .def("__eq__", [](const ClosedCurve& a, const ClosedCurve& b) { return a == b; });

  m.def("validate", [](const ClosedCurve& c) {
    const ValidationReport r = validate(c);
    return r.ok() ? std::string() : r.summary();
  }, "Empty string for a valid Jordan polygon, else the violations.");
  m.def("signed_area", &signed_area);
  m.def("length", &length);
  m.def("centroid", &centroid);
  m.def("diameter", &diameter);
  m.def("max_edge_length", &max_edge_length);
  m.def("convexity_defect", &convexity_defect);
  m.def("curvature_vector", &curvature_vector);
  m.def("classify_point", [](const ClosedCurve& c, Point2 p, double tol) {
    return std::string(to_string(classify_point(c, p, tol)));
  }, py::arg("curve"), py::arg("p"), py::arg("tol") = 0.0);
  m.def("project_to_curve", &project_to_curve);
  m.def("resample", &resample);
  m.def("offset_curve", [](const ClosedCurve& c, double delta, const std::string& side) {
    if (side != "inward" && side != "outward") throw py::value_error("side must be 'inward' or 'outward'");
    return offset_curve(c, delta, side == "inward" ? OffsetSide::inward : OffsetSide::outward);
  }, py::arg("curve"), py::arg("delta"), py::arg("side") = "outward");
  m.def("translate", &translate);
  m.def("rotate", &rotate, py::arg("curve"), py::arg("angle"), py::arg("about") = Point2{});
  m.def("reversed", &reversed);
  m.def("shifted", &shifted);

  m.def("hausdorff", [](const ClosedCurve& a, const ClosedCurve& b) { return report_dict(hausdorff(a, b)); });
  m.def("frechet_closed", [](const ClosedCurve& a, const ClosedCurve& b, bool coarse) {
    FrechetOptions o;
    if (coarse) o.search = ShiftSearch::coarse_to_fine;
    return report_dict(frechet_closed(a, b, o));
  }, py::arg("a"), py::arg("b"), py::arg("coarse_to_fine") = false);

  py::class_<FlowConfig>(m, "FlowConfig")
      .def(py::init([](double dt, std::optional<double> cfl, double spacing, bool redistribute) {
        FlowConfig c;
        if (cfl) c.dt_rule = ExplicitCfl{*cfl};
        else c.dt_rule = SemiImplicit{dt};
        c.target_vertex_spacing = spacing;
        c.tangential_redistribution = redistribute;
        c.check();
        return c;
      }), py::arg("dt") = SemiImplicit{}.dt, py::arg("explicit_cfl") = py::none(),
           py::arg("target_vertex_spacing") = 0.0, py::arg("tangential_redistribution") = true)
      .def_readwrite("extinction_area", &FlowConfig::extinction_area)
      .def_readwrite("max_steps", &FlowConfig::max_steps)
      .def_readwrite("min_vertices", &FlowConfig::min_vertices);

  py::class_<FlowState>(m, "FlowState")
      .def_readonly("curve", &FlowState::curve)
      .def_readonly("time", &FlowState::time)
      .def_readonly("step_count", &FlowState::step_count)
      .def_property_readonly("alive", &FlowState::alive)
      .def_property_readonly("extinction_time", [](const FlowState& s) -> std::optional<double> {
        if (s.extinction) return s.extinction->time;
        return std::nullopt;
      })
      .def_property_readonly("extinction_point", [](const FlowState& s) -> std::optional<Point2> {
        if (s.extinction) return s.extinction->point;
        return std::nullopt;
      });

  m.def("evolve", &evolve, py::arg("gamma"), py::arg("t"), py::arg("cfg") = FlowConfig{});
  m.def("extinction_time", &extinction_time, py::arg("gamma"), py::arg("cfg") = FlowConfig{});
  m.def("circle_oracle", &circle_oracle);
  m.def("enclosed_area_series", [](const ClosedCurve& g, const std::vector<double>& grid, const FlowConfig& cfg) {
    const AreaSeries s = enclosed_area_series(g, grid, cfg);
    py::list out;
    for (const AreaSample& a : s.samples) out.append(py::make_tuple(a.time, a.area));
    return py::make_tuple(out, s.extinction_time, area_rate(s));
  }, py::arg("gamma"), py::arg("t_grid"), py::arg("cfg") = FlowConfig{},
     "Returns (samples, extinction_time, fitted slope).");

  m.def("levelset_evolve", [](const ClosedCurve& g, double t, std::size_t K, double delta0, const FlowConfig& cfg) {
    const LevelSetResult r = levelset_evolve(g, t, K, delta0, cfg);
    py::dict d;
    d["representative"] = r.representative;
    d["width"] = r.width;
    d["per_k_widths"] = r.per_k_widths;
    return d;
  }, py::arg("gamma"), py::arg("t"), py::arg("K"), py::arg("delta0"), py::arg("cfg") = FlowConfig{});

  m.def("intersect_curves", [](const ClosedCurve& a, const ClosedCurve& b) {
    const IntersectionRecord r = intersect_curves(a, b);
    py::list kinds;
    for (CrossingKind k : r.kinds) kinds.append(std::string(to_string(k)));
    py::dict d;
    d["points"] = r.points;
    d["kinds"] = kinds;
    d["overlap"] = r.overlap;
    return d;
  });
  m.def("count_over_time", [](const ClosedCurve& a, const ClosedCurve& b, const std::vector<double>& grid,
                              const FlowConfig& cfg) {
    const CountSeries s = count_over_time(a, b, grid, cfg);
    py::list out;
    for (const CountSample& c : s.samples) out.append(py::make_tuple(c.time, c.count));
    return out;
  }, py::arg("a"), py::arg("b"), py::arg("t_grid"), py::arg("cfg") = FlowConfig{});

  py::class_<EtaParams>(m, "EtaParams")
      .def_readwrite("x", &EtaParams::x)
      .def_readwrite("s", &EtaParams::s)
      .def_readonly("r", &EtaParams::r)
      .def_readonly("D_radius", &EtaParams::D_radius)
      .def_readonly("E_radius", &EtaParams::E_radius)
      .def_readonly("T", &EtaParams::T)
      .def_readonly("center", &EtaParams::center);
  m.def("make_eta_params", &make_eta_params);
  m.def("family_horizon", &family_horizon, py::arg("gamma"), py::arg("cfg") = FlowConfig{});
  m.def("build_eta", [](const ClosedCurve& g, const EtaParams& p) { return build_eta(g, p).curve; });
  m.def("find_nus", [](const ClosedCurve& g, const EtaParams& p, double t_inf, double tol_s, const FlowConfig& cfg) {
    const NuTriple n = find_nus(FamilyProbe(g, t_inf, cfg), p, tol_s);
    return py::make_tuple(n.nu1, n.nu0, n.nu2);
  }, py::arg("gamma"), py::arg("params"), py::arg("t_inf"), py::arg("tol_s") = kDefaultTolS,
     py::arg("cfg") = FlowConfig{}, "Returns (nu1, nu0, nu2).");
  m.def("continuity_experiment", [](const ClosedCurve& g, double t_inf, const std::vector<double>& eps,
                                    std::size_t modes, const FlowConfig& cfg) {
    const ContinuityTable t = continuity_experiment(g, t_inf, eps, modes, cfg);
    py::list rows;
    for (const ContinuityRow& r : t.rows) {
      py::dict d;
      d["amplitude"] = r.amplitude;
      d["time"] = r.time;
      d["frechet"] = r.frechet;
      d["hausdorff"] = r.hausdorff;
      d["error"] = r.error;
      rows.append(d);
    }
    return rows;
  }, py::arg("gamma_inf"), py::arg("t_inf"), py::arg("amplitudes"), py::arg("modes") = 3,
     py::arg("cfg") = FlowConfig{});

  m.def("corpus_names", [] {
    std::vector<std::string> out;
    for (std::string_view n : corpus_names()) out.emplace_back(n);
    return out;
  });
  m.def("generate_corpus", [](const std::string& name, std::uint64_t seed) {
    py::dict out;
    for (NamedCurve& c : generate_corpus(name, seed)) out[py::str(c.name)] = std::move(c.curve);
    return out;
  }, py::arg("name"), py::arg("seed") = 0);
  m.def("circle_curve", &circle_curve, py::arg("radius"), py::arg("n"), py::arg("center") = Point2{},
        py::arg("phase") = 0.0);
  m.def("ellipse_curve", &ellipse_curve, py::arg("a"), py::arg("b"), py::arg("n"), py::arg("center") = Point2{},
        py::arg("rotation") = 0.0);
  m.def("star_curve", &star_curve, py::arg("petals"), py::arg("amplitude"), py::arg("n"), py::arg("phase") = 0.0,
        py::arg("radius") = 1.0);

  m.def("read_curve", [](const std::string& path) { return read_curve(path); });
  m.def("write_curve", [](const ClosedCurve& c, const std::string& path) { write_curve(c, path); });
  m.def("run_property_suite", [](std::uint64_t seed) {
    py::list out;
    for (const PropertyResult& r : run_property_suite(seed, FlowConfig{})) {
      out.append(py::make_tuple(r.module, r.name, r.passed, r.detail));
    }
    return out;
  }, py::arg("seed") = 0);
}
