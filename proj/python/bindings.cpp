// Python bindings. Structured results cross the boundary as the same JSON
// documents the CLI writes, decoded into plain dicts.

#include "momsum/borel_laplace.hpp"
#include "momsum/errors.hpp"
#include "momsum/growth.hpp"
#include "momsum/io.hpp"
#include "momsum/kernel.hpp"
#include "momsum/mde.hpp"
#include "momsum/moment_sequence.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace momsum;
using io::Json;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object& o) {
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Series<Complex> series(const std::vector<Complex>& coeffs) { return Series<Complex>(Var::z, coeffs); }

Level level(const MomentSequence& M, double s) { return {M, make_gevrey_kernel(s)}; }

template <class T>
py::object solve_impl(const Json& j) {
    const auto prob = io::main_problem_from_json<T>(j);
    const auto sol = solve_main(prob);
    Json out = io::to_json(sol);
    out["transformed_residual"] = transformed_residual(sol, prob);
    return to_py(out);
}

template <class T>
py::object solve_cauchy_impl(const Json& j, std::optional<int> Q) {
    const auto prob = io::cauchy_problem_from_json<T>(j);
    const auto sol = solve_cauchy(prob);
    Json out = io::to_json(sol);
    if (Q) {
        const auto fp = fixed_point_solution(prob, *Q, sol.traces_normalized);
        const auto ref = z_derivative(sol, prob.m2, prob.p);
        out["fixed_point_max_difference"] = compare_solutions(ref, fp).max_difference;
    }
    return to_py(out);
}

}  // namespace

PYBIND11_MODULE(_momsum, m) {
    m.doc() = "Moment summability of formal power series";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());
    py::register_exception<SingularDirectionError>(m, "SingularDirectionError", base.ptr());
    py::register_exception<SummabilityError>(m, "SummabilityError", base.ptr());
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<MomentSequence>(m, "MomentSequence")
        .def_static(
            "make",
            [](const std::string& kind, const SequenceParams& params, int N) {
                return MomentSequence::make(sequence_kind_from_string(kind), params, N);
            },
            py::arg("kind"), py::arg("params"), py::arg("N"))
        .def_static(
            "from_values", [](std::vector<double> v) { return MomentSequence::from_values(std::move(v)); },
            py::arg("values"))
        .def_static(
            "from_json", [](const py::object& o) { return io::sequence_from_json(from_py(o)); }, py::arg("doc"))
        .def_property_readonly("N", &MomentSequence::N)
        .def_property_readonly("description", &MomentSequence::description)
        .def_property_readonly("kind", [](const MomentSequence& s) { return to_string(s.kind()); })
        .def("__getitem__", [](const MomentSequence& s, std::size_t p) { return s[p]; })
        .def("__len__", [](const MomentSequence& s) { return s.N() + 1; })
        .def("log_value", &MomentSequence::log_value, py::arg("p"))
        .def("values",
             [](const MomentSequence& s) {
                 std::vector<double> v;
                 for (int p = 0; p <= s.N(); ++p) v.push_back(s[p]);
                 return v;
             })
        .def("log_values",
             [](const MomentSequence& s) {
                 std::vector<double> v;
                 for (int p = 0; p <= s.N(); ++p) v.push_back(s.log_value(p));
                 return v;
             })
        .def("to_json", [](const MomentSequence& s) { return to_py(io::to_json(s)); })
        .def("__repr__", [](const MomentSequence& s) { return "<MomentSequence " + s.description() + ">"; });

    m.def(
        "combine_power", [](const MomentSequence& a, double s) { return combine_power(a, s); }, py::arg("seq"),
        py::arg("s"));
    m.def(
        "check_strongly_regular",
        [](const MomentSequence& s) { return to_py(io::to_json(check_strongly_regular(s))); }, py::arg("seq"));
    m.def(
        "estimate_omega",
        [](const MomentSequence& s) {
            const auto r = estimate_omega(s);
            py::dict d;
            d["omega"] = r.omega;
            d["uncertainty"] = r.uncertainty;
            d["used_extension"] = r.used_extension;
            return d;
        },
        py::arg("seq"));

    py::class_<Kernel>(m, "Kernel")
        .def_property_readonly("s", &Kernel::s)
        .def("E", &Kernel::E, py::arg("z"))
        .def("e", &Kernel::e, py::arg("z"))
        .def("moment", py::overload_cast<Complex>(&Kernel::moment, py::const_), py::arg("x"))
        .def("moments", &Kernel::moments, py::arg("N"));
    m.def("make_gevrey_kernel", &make_gevrey_kernel, py::arg("s"));

    m.def(
        "borel_sum",
        [](const std::vector<Complex>& coeffs, const MomentSequence& M, double s, double direction,
           const std::vector<Complex>& grid) {
            return to_py(io::to_json(borel_sum(series(coeffs), M, make_gevrey_kernel(s), direction, grid)));
        },
        py::arg("coeffs"), py::arg("M"), py::arg("s"), py::arg("direction"), py::arg("grid"));
    m.def(
        "multisum",
        [](const std::vector<Complex>& coeffs, const MomentSequence& M1, double s1, const MomentSequence& M2,
           double s2, double d1, double d2, const std::vector<Complex>& grid) {
            const Level l1 = level(M1, s1), l2 = level(M2, s2);
            const auto md = make_multidirection(d1, d2, l1, l2);
            return to_py(io::to_json(multisum(series(coeffs), l1, l2, md, grid)));
        },
        py::arg("coeffs"), py::arg("M1"), py::arg("s1"), py::arg("M2"), py::arg("s2"), py::arg("d1"),
        py::arg("d2"), py::arg("grid"));

    m.def(
        "solve",
        [](const py::object& problem, const std::string& mode) {
            const Json j = from_py(problem);
            if (mode == "rational") return solve_impl<Rational>(j);
            if (mode == "float") return solve_impl<Complex>(j);
            throw ConfigError("mode must be 'float' or 'rational'");
        },
        py::arg("problem"), py::arg("mode") = "float");
    m.def(
        "solve_cauchy",
        [](const py::object& problem, std::optional<int> Q, const std::string& mode) {
            const Json j = from_py(problem);
            if (mode == "rational") return solve_cauchy_impl<Rational>(j, Q);
            if (mode == "float") return solve_cauchy_impl<Complex>(j, Q);
            throw ConfigError("mode must be 'float' or 'rational'");
        },
        py::arg("problem"), py::arg("Q") = py::none(), py::arg("mode") = "float");

    m.def(
        "fit_growth",
        [](const std::vector<double>& mags, const MomentSequence& base, int first, int last) {
            return to_py(io::to_json(fit_growth(mags, base, {first, last})));
        },
        py::arg("mags"), py::arg("base"), py::arg("first") = 20, py::arg("last") = -1);
}
