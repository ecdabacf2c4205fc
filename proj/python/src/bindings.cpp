#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "radsol/cli.hpp"
#include "radsol/config.hpp"
#include "radsol/report_io.hpp"

namespace py = pybind11;
using namespace radsol;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::object to_python(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

Array to_array(std::span<const double> x)
{
    Array out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(x.size())});
    std::copy(x.begin(), x.end(), out.mutable_data());
    return out;
}

Array to_array(const FieldSet& u)
{
    Array out({static_cast<py::ssize_t>(u.components()), static_cast<py::ssize_t>(u.nodes())});
    double* p = out.mutable_data();
    for (std::size_t i = 0; i < u.components(); ++i) {
        p = std::copy(u[i].begin(), u[i].end(), p);
    }
    return out;
}

// accepts shape (k, n), or (n,) for a single component
FieldSet to_fields(const Array& a)
{
    if (a.ndim() == 1) {
        return FieldSet(std::vector<Profile>{Profile(a.data(), a.data() + a.shape(0))});
    }
    if (a.ndim() != 2) {
        throw std::invalid_argument("fields must have shape (k, n) or (n,)");
    }
    const auto k = static_cast<std::size_t>(a.shape(0));
    const auto n = static_cast<std::size_t>(a.shape(1));
    FieldSet u(k, n);
    for (std::size_t i = 0; i < k; ++i) {
        std::copy(a.data() + i * n, a.data() + (i + 1) * n, u[i].begin());
    }
    return u;
}

std::vector<double> to_vector(const Array& a)
{
    return std::vector<double>(a.data(), a.data() + a.size());
}

PotentialSpec make_spec(std::vector<double> masses, const std::vector<std::pair<double, std::vector<double>>>& terms)
{
    std::vector<Monomial> monomials;
    for (const auto& [c, e] : terms) {
        monomials.push_back({c, e});
    }
    return PotentialSpec(std::move(masses), std::move(monomials));
}

py::dict solve_result(const SolveResult& r)
{
    py::dict d = to_python(to_json(r));
    d["fields"] = to_array(r.fields);
    d["energy_history"] = r.energy_history;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "radial standing waves by charge-constrained minimization";
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<RadialGrid>(m, "Grid")
        .def(py::init<int, double, std::size_t>(), py::arg("dimension"), py::arg("r_max"), py::arg("nodes"))
        .def_property_readonly("dimension", &RadialGrid::dimension)
        .def_property_readonly("r_max", &RadialGrid::r_max)
        .def_property_readonly("spacing", &RadialGrid::spacing)
        .def_property_readonly("size", &RadialGrid::size)
        .def_property_readonly("nodes", [](const RadialGrid& g) { return to_array(g.nodes()); })
        .def_property_readonly("weights", [](const RadialGrid& g) { return to_array(g.weights()); })
        .def_property_readonly("floor_norm", &RadialGrid::floor_norm)
        .def("integrate", [](const RadialGrid& g, const Array& f) { return integrate(g, to_vector(f)); })
        .def("norm_squared", [](const RadialGrid& g, const Array& u) { return norm_squared(g, to_vector(u)); })
        .def("dirichlet_energy",
             [](const RadialGrid& g, const Array& u) { return dirichlet_energy(g, to_vector(u)); });

    py::class_<PotentialSpec>(m, "Potential")
        .def(py::init(&make_spec), py::arg("masses"), py::arg("terms") = std::vector<std::pair<double, std::vector<double>>>{},
             "terms: list of (coefficient, exponents)")
        .def_property_readonly("components", &PotentialSpec::components)
        .def("F", [](const PotentialSpec& s, const std::vector<double>& u) { return eval_F(s, u); })
        .def("grad_R", [](const PotentialSpec& s, const std::vector<double>& u) { return eval_gradR(s, u); });

    m.def(
        "check",
        [](const PotentialSpec& spec, int dimension, double h1_box, std::size_t h1_samples, std::uint64_t seed) {
            py::dict d;
            d["h1"] = to_python(to_json(check_H1(spec, h1_box, h1_samples)));
            const H2Result h2 = check_H2(spec, dimension);
            d["h2"] = to_python({{"growth", to_json(h2.growth)}, {"report", to_json(h2.report)}});
            WitnessSearch search;
            search.box_half_width = h1_box;
            search.samples_per_axis = h1_samples;
            search.seed = seed;
            const auto w = find_H3_witness(spec, search);
            if (w) {
                const H3Result h3 = check_H3(spec, w->v, w->omega);
                d["h3_witness"] = to_python(
                    {{"v", w->v}, {"omega", w->omega}, {"values", h3.values}, {"report", to_json(h3.report)}});
            } else {
                d["h3_witness"] = py::none();
            }
            return d;
        },
        py::arg("spec"), py::arg("dimension") = 3, py::arg("h1_box") = 3.0, py::arg("h1_samples") = 61,
        py::arg("seed") = 0);

    m.def(
        "check_h3",
        [](const PotentialSpec& spec, const std::vector<double>& v, const std::vector<double>& omega) {
            const H3Result h3 = check_H3(spec, v, omega);
            py::dict d = to_python(to_json(h3.report));
            d["values"] = h3.values;
            return d;
        },
        py::arg("spec"), py::arg("v"), py::arg("omega"));

    m.def(
        "reduced_energy",
        [](const RadialGrid& g, const PotentialSpec& s, const Array& u, const std::vector<double>& c) {
            return reduced_energy(g, s, to_fields(u), ChargeVector(c));
        },
        py::arg("grid"), py::arg("spec"), py::arg("fields"), py::arg("charge"));

    m.def(
        "reduced_gradient",
        [](const RadialGrid& g, const PotentialSpec& s, const Array& u, const std::vector<double>& c) {
            return to_array(reduced_gradient(g, s, to_fields(u), ChargeVector(c)));
        },
        py::arg("grid"), py::arg("spec"), py::arg("fields"), py::arg("charge"));

    m.def(
        "charge_from_profile",
        [](const RadialGrid& g, const std::vector<double>& v, const std::vector<double>& omega, double r) {
            return charge_from_profile(g, v, Frequencies{omega}, r);
        },
        py::arg("grid"), py::arg("v"), py::arg("omega"), py::arg("r"));

    m.def(
        "solve",
        [](const RadialGrid& g, const PotentialSpec& s, const std::vector<double>& charge,
           const std::vector<double>& init_v, double init_radius, std::optional<Array> init_fields,
           std::size_t max_iterations, double gradient_tolerance, std::uint64_t seed) {
            SolveOptions o;
            o.init_v = init_v;
            o.init_radius = init_radius;
            if (init_fields) {
                o.init = InitMode::FromFields;
                o.init_fields = to_fields(*init_fields);
            }
            o.max_iterations = max_iterations;
            o.gradient_tolerance = gradient_tolerance;
            o.seed = seed;
            SolveResult r;
            {
                py::gil_scoped_release release;
                r = minimize(g, s, ChargeVector(charge), o);
            }
            return solve_result(r);
        },
        py::arg("grid"), py::arg("spec"), py::arg("charge"), py::arg("init_v") = std::vector<double>{},
        py::arg("init_radius") = 8.0, py::arg("init_fields") = py::none(), py::arg("max_iterations") = 20000,
        py::arg("gradient_tolerance") = 1e-7, py::arg("seed") = 0);

    m.def(
        "scan",
        [](const RadialGrid& g, const PotentialSpec& s, const std::vector<std::vector<double>>& charges,
           const std::vector<double>& init_v, double init_radius) {
            std::vector<ChargeVector> ladder;
            for (const auto& c : charges) {
                ladder.emplace_back(c);
            }
            SolveOptions o;
            o.init_v = init_v;
            o.init_radius = init_radius;
            std::vector<ScanEntry> entries;
            {
                py::gil_scoped_release release;
                entries = scan_charge(g, s, ladder, o);
            }
            py::list out;
            for (const auto& e : entries) {
                py::dict d;
                d["charge"] = std::vector<double>(e.charge.values().begin(), e.charge.values().end());
                if (e.result) {
                    d["result"] = solve_result(*e.result);
                } else {
                    d["error"] = e.error;
                }
                out.append(d);
            }
            return out;
        },
        py::arg("grid"), py::arg("spec"), py::arg("charges"), py::arg("init_v") = std::vector<double>{},
        py::arg("init_radius") = 8.0);

    m.def(
        "hylomorphy_scan",
        [](const RadialGrid& g, const PotentialSpec& s, const std::vector<double>& v, const std::vector<double>& omega,
           std::optional<std::vector<double>> radii) {
            const HylomorphyScan scan = hylomorphy_scan(g, s, v, Frequencies{omega}, radii ? *radii : default_radii(g));
            py::dict d = to_python(to_json(scan));
            const auto t = scan.threshold_radius();
            d["threshold_radius"] = t ? py::cast(*t) : py::none();
            return d;
        },
        py::arg("grid"), py::arg("spec"), py::arg("v"), py::arg("omega"), py::arg("radii") = py::none());

    m.def(
        "symmetric_decreasing",
        [](const RadialGrid& g, const Array& u) { return to_array(symmetric_decreasing(g, to_vector(u))); },
        py::arg("grid"), py::arg("profile"));

    m.def(
        "rearrange",
        [](const RadialGrid& g, const PotentialSpec& s, const Array& u) {
            const RearrangeReport r = rearrangement_report(g, s, to_fields(u));
            py::dict d = to_python(to_json(r));
            d["rearranged"] = to_array(r.rearranged);
            return d;
        },
        py::arg("grid"), py::arg("spec"), py::arg("fields"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{"radsol"};
            for (const auto& a : args) {
                argv.push_back(a.c_str());
            }
            std::ostringstream out, err;
            const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");

    m.attr("__version__") = RADSOL_VERSION;
}
