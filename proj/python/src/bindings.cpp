#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lpcalc/bilinear.hpp"
#include "lpcalc/cli.hpp"
#include "lpcalc/errors.hpp"
#include "lpcalc/experiments.hpp"
#include "lpcalc/lpgf.hpp"
#include "lpcalc/pde.hpp"

namespace py = pybind11;
using namespace lpcalc;

namespace {

using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

std::vector<py::ssize_t> shape_of(const Grid& g) {
    const auto n = static_cast<py::ssize_t>(g.points_per_axis());
    return g.dim() == 1 ? std::vector<py::ssize_t>{n} : std::vector<py::ssize_t>{n, n};
}

ComplexArray to_array(const Grid& g, std::span<const cplx> data) {
    ComplexArray out(shape_of(g));
    std::copy(data.begin(), data.end(), out.mutable_data());
    return out;
}

std::vector<cplx> from_array(const Grid& g, const ComplexArray& a) {
    if (static_cast<std::size_t>(a.size()) != g.size())
        throw InvalidArgument("array has " + std::to_string(a.size()) + " entries, grid needs " +
                              std::to_string(g.size()));
    return {a.data(), a.data() + a.size()};
}

BumpProfile profile_of(const std::string& name) {
    if (name == "exponential") return BumpProfile(BumpProfile::Kind::Exponential);
    if (name == "smoothstep7") return BumpProfile(BumpProfile::Kind::Smoothstep7);
    throw InvalidArgument("unknown profile " + name);
}

py::dict ratio_dict(const RatioReport& r) {
    py::list samples;
    for (const auto& s : r.samples)
        samples.append(py::dict(py::arg("member") = s.member, py::arg("level") = s.level,
                                py::arg("numerator") = s.numerator, py::arg("denominator") = s.denominator,
                                py::arg("ratio") = s.ratio));
    return py::dict(py::arg("name") = r.name, py::arg("min") = r.min, py::arg("max") = r.max,
                    py::arg("spread") = r.spread, py::arg("trend_slope") = r.trend_slope,
                    py::arg("bounded") = r.bounded(), py::arg("no_trend") = r.no_trend(),
                    py::arg("samples") = samples);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Littlewood-Paley norms, bilinear operators and experiments on periodic grids.";

    auto base = py::register_exception<Error>(m, "LpcalcError", PyExc_ValueError);
    py::register_exception<GateViolation>(m, "GateViolation", base.ptr());
    py::register_exception<BandLeakage>(m, "BandLeakage", base.ptr());
    py::register_exception<NyquistViolation>(m, "NyquistViolation", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, std::size_t, double>(), py::arg("dim"), py::arg("points"), py::arg("period"))
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("points", &Grid::points_per_axis)
        .def_property_readonly("period", &Grid::period)
        .def_property_readonly("spacing", &Grid::spacing)
        .def_property_readonly("nyquist", &Grid::nyquist)
        .def("__eq__", [](const Grid& a, const Grid& b) { return a == b; })
        .def("__repr__", [](const Grid& g) {
            return "Grid(dim=" + std::to_string(g.dim()) + ", points=" + std::to_string(g.points_per_axis()) +
                   ", period=" + std::to_string(g.period()) + ")";
        });

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init([](const Grid& g, const ComplexArray& a) { return GridFunction(g, from_array(g, a)); }),
             py::arg("grid"), py::arg("samples"))
        .def_property_readonly("grid", &GridFunction::grid)
        .def("samples", [](const GridFunction& f) { return to_array(f.grid(), f.samples()); })
        .def("spectrum", [](const GridFunction& f) {
            const Spectrum F = forward_transform(f);
            return to_array(f.grid(), F.coefficients());
        })
        .def_static("from_spectrum", [](const Grid& g, const ComplexArray& a) {
            return inverse_transform(Spectrum(g, from_array(g, a)));
        }, py::arg("grid"), py::arg("coefficients"))
        .def("__len__", &GridFunction::size);

    py::class_<ResolutionOfUnity>(m, "ResolutionOfUnity")
        .def_property_readonly("jmax", &ResolutionOfUnity::jmax)
        .def("phi", [](const ResolutionOfUnity& R, int j, double r) { return R.phi(j, r); }, py::arg("j"), py::arg("r"));
    m.def("build_resolution", [](int jmax, const Grid& g, const std::string& profile) {
        return build_resolution(profile_of(profile), jmax, g);
    }, py::arg("jmax"), py::arg("grid"), py::arg("profile") = "exponential");
    m.def("check_partition", [](const ResolutionOfUnity& R, double step) {
        const PartitionReport r = check_partition(R, step);
        return py::dict(py::arg("partition_residual") = r.partition_residual,
                        py::arg("telescoping_residual") = r.telescoping_residual,
                        py::arg("support_violation") = r.support_violation,
                        py::arg("plateau_violation") = r.plateau_violation,
                        py::arg("derivative_bound") = r.derivative_bound);
    }, py::arg("resolution"), py::arg("step"));

    py::class_<AdmissibleWeight>(m, "AdmissibleWeight")
        .def_static("constant", &AdmissibleWeight::constant, py::arg("value") = 1.0)
        .def_static("prototype", &AdmissibleWeight::prototype, py::arg("lam"), py::arg("mu") = 0.0)
        .def_static("table", &AdmissibleWeight::table, py::arg("dyadic_values"))
        .def("__call__", &AdmissibleWeight::operator(), py::arg("t"))
        .def("__repr__", &AdmissibleWeight::describe);

    py::class_<SpaceSpec>(m, "SpaceSpec")
        .def(py::init([](double s, double p, double q, std::optional<AdmissibleWeight> w) {
            return SpaceSpec{s, p, q, std::move(w)};
        }), py::arg("s") = 0.0, py::arg("p") = 2.0, py::arg("q") = 2.0, py::arg("weight") = py::none())
        .def_readwrite("s", &SpaceSpec::s)
        .def_readwrite("p", &SpaceSpec::p)
        .def_readwrite("q", &SpaceSpec::q)
        .def_readwrite("weight", &SpaceSpec::weight);

    py::class_<DyadicCubeSet>(m, "DyadicCubeSet").def(py::init<const Grid&>(), py::arg("grid"));

    m.def("besov_norm", &besov_norm, py::arg("f"), py::arg("spec"), py::arg("resolution"));
    m.def("triebel_lizorkin_norm", &triebel_lizorkin_norm, py::arg("f"), py::arg("spec"), py::arg("resolution"));
    m.def("tl_infinity_norm", [](const GridFunction& f, const SpaceSpec& spec, const ResolutionOfUnity& R,
                                 const DyadicCubeSet& cubes) { return tl_infinity_norm(f, spec, R, cubes); },
          py::arg("f"), py::arg("spec"), py::arg("resolution"), py::arg("cubes"));
    m.def("f_norm", &f_norm, py::arg("f"), py::arg("spec"), py::arg("resolution"));
    m.def("bmo_norm", &bmo_norm, py::arg("f"), py::arg("cubes"));
    m.def("big_bmo_norm", &big_bmo_norm, py::arg("f"), py::arg("cubes"));
    m.def("xw_norm", [](const GridFunction& f, const AdmissibleWeight& w, const DyadicCubeSet& cubes, int levels) {
        XwOptions o;
        o.levels = levels;
        return xw_norm(f, w, cubes, o);
    }, py::arg("f"), py::arg("weight"), py::arg("cubes"), py::arg("levels") = XwOptions{}.levels);

    py::class_<BilinearSymbol>(m, "BilinearSymbol")
        .def_property_readonly("name", &BilinearSymbol::name)
        .def_property_readonly("order", &BilinearSymbol::order);
    m.def("builtin_symbol", &builtin_symbol, py::arg("name"));
    m.def("builtin_symbol_names", &builtin_symbol_names);
    m.def("apply_bilinear", &apply_bilinear, py::arg("sigma"), py::arg("f"), py::arg("g"));

    m.def("random_band_limited", &random_band_limited, py::arg("grid"), py::arg("level"), py::arg("s") = 0.5,
          py::arg("epsilon") = 0.1, py::arg("seed") = 42, py::arg("index") = 0);
    m.def("ensemble_grid", &ensemble_grid, py::arg("max_level"));
    m.def("embedding_ratio", [](std::uint64_t seed, int count, std::vector<int> levels, double p, double q,
                                std::optional<double> exponent) {
        const int top = *std::max_element(levels.begin(), levels.end());
        const Ensemble E(EnsembleSpec{seed, count, std::move(levels)}, ensemble_grid(top));
        return ratio_dict(embedding_ratio(E, p, q, exponent));
    }, py::arg("seed") = 42, py::arg("count") = 50, py::arg("levels") = std::vector<int>{4, 5, 6, 7},
       py::arg("p") = 2.0, py::arg("q") = 2.0, py::arg("w_exponent") = py::none());
    m.def("product_gate", &product_gate, py::arg("p"), py::arg("q"));
    m.def("sharpness_integral", &sharpness_integral, py::arg("exponent"), py::arg("R"));

    m.def("propagator", &propagator, py::arg("s"), py::arg("t"), py::arg("f"));
    m.def("picard_solve", [](const GridFunction& u0, const ResolutionOfUnity& R, double s, double T,
                             const std::string& symbol, double tolerance, int nodes, int max_iterations) {
        EvolutionSpec spec(u0, R);
        spec.s = s;
        spec.T = T;
        spec.sigma = builtin_symbol(symbol);
        spec.tolerance = tolerance;
        spec.nodes = nodes;
        spec.max_iterations = max_iterations;
        const PicardState st = picard_solve(spec);
        return py::dict(py::arg("converged") = st.converged, py::arg("iterations") = st.iterations,
                        py::arg("T") = st.T, py::arg("halvings") = st.halvings, py::arg("times") = st.times,
                        py::arg("trajectory") = st.trajectory, py::arg("update_norms") = st.update_norms,
                        py::arg("contraction_factors") = st.contraction_factors,
                        py::arg("residual") = st.residual);
    }, py::arg("u0"), py::arg("resolution"), py::arg("s") = 2.0, py::arg("T") = 0.1, py::arg("symbol") = "one",
       py::arg("tolerance") = 1e-10, py::arg("nodes") = 32, py::arg("max_iterations") = 50);
    m.def("log_schrodinger_solve", [](const BilinearSymbol& sigma, const GridFunction& f, const GridFunction& g,
                                      const ResolutionOfUnity& R, double p, double q) {
        const auto r = log_schrodinger_solve(sigma, f, g, R, p, q);
        return py::dict(py::arg("u") = r.u, py::arg("residual") = r.residual,
                        py::arg("solution_norm") = r.solution_norm, py::arg("data_norm") = r.data_norm,
                        py::arg("ratio") = r.ratio);
    }, py::arg("sigma"), py::arg("f"), py::arg("g"), py::arg("resolution"), py::arg("p") = 2.0, py::arg("q") = 2.0);

    m.def("read_lpgf", &read_lpgf, py::arg("path"));
    m.def("write_lpgf", &write_lpgf, py::arg("f"), py::arg("path"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        cli::Outcome out;
        {
            py::gil_scoped_release release;
            out = cli::dispatch(args);
        }
        return py::make_tuple(out.exit_code, out.report, out.diagnostics);
    }, py::arg("args"), "Runs one lpcalc subcommand; returns (exit_code, report, diagnostics).");
    m.def("strip_timestamp", &cli::strip_timestamp, py::arg("report"));
    m.attr("__version__") = cli::kVersion;
}
