#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "ctlab/render.hpp"
#include "ctlab/report.hpp"
#include "ctlab/twist.hpp"

namespace py = pybind11;
using namespace ctlab;

namespace {

CayleyBall make_ball(int radius, int margin, const std::optional<std::filesystem::path>& cache) {
    BallOptions opt;
    opt.radius = radius;
    opt.margin = margin;
    return cache ? CayleyBall::load_or_build(*cache, opt) : CayleyBall::build(opt);
}

py::dict run(const std::string& config_json, const std::optional<std::filesystem::path>& output,
             const std::optional<std::filesystem::path>& cache) {
    ExperimentConfig cfg = parse_config(config_json);
    if (output) cfg.output = *output;
    if (cache) cfg.cache = *cache;
    std::ostringstream log;
    RunOutcome outcome;
    {
        py::gil_scoped_release nogil;
        outcome = run_experiment(cfg, &log);
    }
    py::list results;
    for (const auto& r : outcome.results) {
        py::dict d;
        d["id"] = r.id;
        d["pass"] = r.pass;
        d["constants"] = r.constants;
        d["witness"] = r.witness;
        d["runtime"] = r.runtime;
        d["artifacts"] = r.artifacts;
        results.append(d);
    }
    py::dict out;
    out["exit_code"] = outcome.exit_code;
    out["error"] = outcome.error;
    out["results"] = results;
    out["log"] = log.str();
    return out;
}

}  // namespace

PYBIND11_MODULE(_ctlab, m) {
    m.doc() = "Cayley graph of the genus-2 surface group: balls, electrocution, twists, experiment runner";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", error.ptr());

    m.def("reduce", [](const std::string& w) { return reduce(std::string_view(w)).str(); },
          "Dehn-reduced normal form of a word over aAbBcCdD");
    m.def("is_trivial", [](const std::string& w) { return reduce(std::string_view(w)).empty(); });

    py::class_<CayleyBall>(m, "Ball")
        .def(py::init(&make_ball), py::arg("radius"), py::arg("margin") = 2, py::arg("cache") = std::nullopt)
        .def_property_readonly("radius", &CayleyBall::radius)
        .def_property_readonly("margin", &CayleyBall::margin)
        .def("__len__", &CayleyBall::size)
        .def("edge_count", &CayleyBall::edge_count)
        .def("depth", &CayleyBall::depth)
        .def("trusted", &CayleyBall::trusted)
        .def("label", &CayleyBall::label)
        .def("at", &CayleyBall::at, py::arg("word"))
        .def("point", [](const CayleyBall& b, VertexId v) {
            const auto p = b.point(v);
            return std::make_pair(static_cast<double>(p.x), static_cast<double>(p.y));
        })
        .def("distance", [](const CayleyBall& b, VertexId u, VertexId v) { return dist(b, u, v); })
        .def("geodesic", [](const CayleyBall& b, VertexId u, VertexId v) { return geodesic(b, u, v).vertices; });

    py::class_<ElectricSpace>(m, "ElectricSpace")
        .def(py::init([](const CayleyBall& b, const std::string& curve) { return ElectricSpace(b, CurveClass::parse(curve)); }),
             py::arg("ball"), py::arg("curve") = "a", py::keep_alive<1, 2>())
        .def("distance", [](const ElectricSpace& es, VertexId u, VertexId v) { return electric_dist(es, u, v); })
        .def("geodesic",
             [](const ElectricSpace& es, VertexId u, VertexId v) { return electric_geodesic(es, u, v).path.vertices; })
        .def("electro_ambient", [](const ElectricSpace& es, VertexId u, VertexId v) {
            return electro_ambient(es, electric_geodesic(es, u, v)).vertices;
        });

    py::class_<TwistMap>(m, "TwistMap")
        .def(py::init([](const std::string& curve, int n) { return TwistMap{CurveClass::parse(curve), n}; }),
             py::arg("curve"), py::arg("n"))
        .def_readonly("n", &TwistMap::n)
        .def("apply", [](const TwistMap& tw, const std::string& w) { return tw.apply(Word::parse(w)).str(); });

    m.def("estimate_delta",
          [](const CayleyBall& b, std::size_t samples, std::uint64_t seed) { return estimate_delta(b, samples, seed).delta; },
          py::arg("ball"), py::arg("samples") = 200, py::arg("seed") = 1);
    m.def("electric_distortion",
          [](const ElectricSpace& es, const TwistMap& tw, std::size_t samples, std::uint64_t seed) {
              const auto r = electric_distortion(es, tw, samples, seed);
              return py::make_tuple(r.max_defect, r.used, r.skipped);
          },
          py::arg("space"), py::arg("twist"), py::arg("samples") = 200, py::arg("seed") = 1,
          "(max_defect, samples_used, samples_skipped)");
    m.def("render_ball",
          [](const CayleyBall& b, const std::string& layers, const std::string& curve, const std::string& from,
             const std::string& to) {
              RenderOptions opt;
              opt.layers = parse_layers(layers);
              opt.curve = CurveClass::parse(curve);
              opt.from = from;
              opt.to = to;
              return render_ball(b, opt);
          },
          py::arg("ball"), py::arg("layers") = "ball_edges", py::arg("curve") = "a", py::arg("start") = "ac",
          py::arg("end") = "CA");
    m.def("run_experiment", &run, py::arg("config_json"), py::arg("output") = std::nullopt,
          py::arg("cache") = std::nullopt);
}
