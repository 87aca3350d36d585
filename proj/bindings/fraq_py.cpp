// Python bindings for the main operations: quadrature rules, CQ weight
// tables, compressed kernels with history states, and the two-state solver.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fraq/bench.hpp"
#include "fraq/fpfp.hpp"
#include "fraq/gauss_jacobi.hpp"

namespace py = pybind11;
using namespace fraq;

namespace {

InitialData initial_from_name(const std::string& name) {
    if (name == "poly_sin") return InitialData::poly_sin;
    if (name == "indicator") return InitialData::indicator;
    if (name == "custom") return InitialData::custom;
    throw std::invalid_argument("unknown initial data tag: " + name);
}

}  // namespace

PYBIND11_MODULE(_fraq, m) {
    m.doc() = "fast convolution quadrature for Riemann-Liouville derivatives";

    py::class_<JacobiRule>(m, "JacobiRule")
        .def_readonly("exponent_a", &JacobiRule::exponent_a)
        .def_readonly("exponent_b", &JacobiRule::exponent_b)
        .def_readonly("nodes", &JacobiRule::nodes)
        .def_readonly("weights", &JacobiRule::weights);
    m.def("gauss_jacobi", &gauss_jacobi, py::arg("exponent_a"), py::arg("exponent_b"),
          py::arg("n_points"));
    m.def("jacobi_moment", &jacobi_moment, py::arg("exponent_a"), py::arg("exponent_b"),
          py::arg("k"));

    py::class_<WeightTable>(m, "WeightTable")
        .def_readonly("alpha", &WeightTable::alpha)
        .def_readonly("tau", &WeightTable::tau)
        .def_readonly("weights", &WeightTable::weights);
    m.def("be_weights", &be_weights, py::arg("alpha"), py::arg("tau"), py::arg("n_max"));
    m.def("sbd_weights", &sbd_weights, py::arg("alpha"), py::arg("tau"), py::arg("n_max"));
    m.def("coupling_from_transition", &coupling_from_transition, py::arg("m"));

    py::class_<FastKernelBE>(m, "FastKernelBE")
        .def_readonly("alpha", &FastKernelBE::alpha)
        .def_readonly("tau", &FastKernelBE::tau)
        .def_readonly("node_weights", &FastKernelBE::node_weights)
        .def_readonly("ratios", &FastKernelBE::ratios)
        .def_property_readonly("head",
                               [](const FastKernelBE& k) {
                                   return std::vector<double>{k.head[0], k.head[1]};
                               })
        .def("reconstruct", &FastKernelBE::reconstruct, py::arg("i"));
    py::class_<FastKernelSBD>(m, "FastKernelSBD")
        .def_readonly("alpha", &FastKernelSBD::alpha)
        .def_readonly("tau", &FastKernelSBD::tau)
        .def_readonly("n_head", &FastKernelSBD::n_head)
        .def_readonly("head", &FastKernelSBD::head)
        .def_readonly("mult1", &FastKernelSBD::mult1)
        .def_readonly("ratio1", &FastKernelSBD::ratio1)
        .def_readonly("mult2", &FastKernelSBD::mult2)
        .def_readonly("ratio2", &FastKernelSBD::ratio2)
        .def("reconstruct", &FastKernelSBD::reconstruct, py::arg("i"));
    m.def("build_be_kernel", &build_be_kernel, py::arg("alpha"), py::arg("tau"),
          py::arg("n_points"));
    m.def("build_sbd_kernel", &build_sbd_kernel, py::arg("alpha"), py::arg("tau"),
          py::arg("n_points_1"), py::arg("n_points_2"), py::arg("n_head"));
    m.def("default_sbd_head", &default_sbd_head, py::arg("alpha"));

    py::class_<KernelErrorReport>(m, "KernelErrorReport")
        .def_readonly("alpha", &KernelErrorReport::alpha)
        .def_readonly("head_len", &KernelErrorReport::head_len)
        .def_readonly("eps", &KernelErrorReport::eps)
        .def_readonly("max_eps", &KernelErrorReport::max_eps)
        .def_readonly("argmax", &KernelErrorReport::argmax);
    m.def("kernel_error_report",
          py::overload_cast<const FastKernelBE&, long>(&kernel_error_report), py::arg("kernel"),
          py::arg("n_max"));
    m.def("kernel_error_report",
          py::overload_cast<const FastKernelSBD&, long>(&kernel_error_report), py::arg("kernel"),
          py::arg("n_max"));

    py::enum_<HistoryVariant>(m, "HistoryVariant")
        .value("standalone", HistoryVariant::standalone)
        .value("scheme", HistoryVariant::scheme);

    py::class_<BeHistory>(m, "BeHistory")
        .def(py::init<const FastKernelBE&, HistoryVariant, std::size_t>(), py::arg("kernel"),
             py::arg("variant") = HistoryVariant::standalone, py::arg("dim") = 1,
             py::keep_alive<1, 2>())
        .def("push",
             [](BeHistory& h, const std::vector<double>& v) {
                 h.push(std::span<const double>(v.data(), v.size()));
             },
             py::arg("value"))
        .def("derivative",
             [](const BeHistory& h) {
                 std::vector<double> out(h.dim());
                 h.derivative(std::span<double>(out.data(), out.size()));
                 return out;
             })
        .def("history_sum",
             [](const BeHistory& h) {
                 std::vector<double> out(h.dim());
                 h.history_sum(std::span<double>(out.data(), out.size()));
                 return out;
             })
        .def_property_readonly("level", &BeHistory::level)
        .def_property_readonly("appended", &BeHistory::appended);
    py::class_<SbdHistory>(m, "SbdHistory")
        .def(py::init<const FastKernelSBD&, HistoryVariant, std::size_t>(), py::arg("kernel"),
             py::arg("variant") = HistoryVariant::standalone, py::arg("dim") = 1,
             py::keep_alive<1, 2>())
        .def("push",
             [](SbdHistory& h, const std::vector<double>& v) {
                 h.push(std::span<const double>(v.data(), v.size()));
             },
             py::arg("value"))
        .def("derivative",
             [](const SbdHistory& h) {
                 std::vector<double> out(h.dim());
                 h.derivative(std::span<double>(out.data(), out.size()));
                 return out;
             })
        .def("history_sum",
             [](const SbdHistory& h) {
                 std::vector<double> out(h.dim());
                 h.history_sum(std::span<double>(out.data(), out.size()));
                 return out;
             })
        .def_property_readonly("level", &SbdHistory::level)
        .def_property_readonly("appended", &SbdHistory::appended);

    py::enum_<Scheme>(m, "Scheme")
        .value("BE", Scheme::BE)
        .value("FastBE", Scheme::FastBE)
        .value("SBD", Scheme::SBD)
        .value("FastSBD", Scheme::FastSBD);

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init([](double alpha1, double alpha2, double a, int grid_m, double t_final,
                         long n_steps, const std::string& initial,
                         std::vector<double> custom_g1, std::vector<double> custom_g2) {
                 ProblemSpec s;
                 s.alpha1 = alpha1;
                 s.alpha2 = alpha2;
                 s.coupling_a = a;
                 s.grid_m = grid_m;
                 s.t_final = t_final;
                 s.n_steps = n_steps;
                 s.initial = initial_from_name(initial);
                 s.custom_g1 = std::move(custom_g1);
                 s.custom_g2 = std::move(custom_g2);
                 return s;
             }),
             py::arg("alpha1"), py::arg("alpha2"), py::arg("coupling_a") = 0.0,
             py::arg("grid_m") = 255, py::arg("t_final") = 1.0, py::arg("n_steps") = 100,
             py::arg("initial") = "poly_sin", py::arg("custom_g1") = std::vector<double>{},
             py::arg("custom_g2") = std::vector<double>{})
        .def_readwrite("alpha1", &ProblemSpec::alpha1)
        .def_readwrite("alpha2", &ProblemSpec::alpha2)
        .def_readwrite("coupling_a", &ProblemSpec::coupling_a)
        .def_readwrite("grid_m", &ProblemSpec::grid_m)
        .def_readwrite("t_final", &ProblemSpec::t_final)
        .def_readwrite("n_steps", &ProblemSpec::n_steps)
        .def_property_readonly("tau", &ProblemSpec::tau)
        .def_property_readonly("h", &ProblemSpec::h);

    py::class_<StateField>(m, "StateField")
        .def_readonly("g1", &StateField::g1)
        .def_readonly("g2", &StateField::g2)
        .def_readonly("step", &StateField::step);

    py::class_<KernelConfig>(m, "KernelConfig")
        .def(py::init<>())
        .def_readwrite("be_points", &KernelConfig::be_points)
        .def_readwrite("sbd_points_1", &KernelConfig::sbd_points_1)
        .def_readwrite("sbd_points_2", &KernelConfig::sbd_points_2)
        .def_readwrite("sbd_head", &KernelConfig::sbd_head)
        .def_readwrite("eps_tol", &KernelConfig::eps_tol)
        .def_readwrite("auto_size", &KernelConfig::auto_size);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("final_state", &RunResult::final_state)
        .def_readonly("loop_seconds", &RunResult::loop_seconds)
        .def_readonly("setup_seconds", &RunResult::setup_seconds)
        .def_readonly("kernel_eps1", &RunResult::kernel_eps1)
        .def_readonly("kernel_eps2", &RunResult::kernel_eps2);

    m.def("initial_field", &initial_field, py::arg("spec"));
    m.def(
        "run",
        [](const ProblemSpec& spec, Scheme scheme, const KernelConfig& kconf) {
            return run(spec, scheme, kconf);
        },
        py::arg("spec"), py::arg("scheme"), py::arg("kernel") = KernelConfig{},
        py::call_guard<py::gil_scoped_release>());
    m.def("l2_norm",
          [](const std::vector<double>& v, double h) {
              return l2_norm(std::span<const double>(v.data(), v.size()), h);
          },
          py::arg("values"), py::arg("h"));
    m.def("compute_rates", &compute_rates, py::arg("tau_and_error"));
    m.def("parse_fraction", &parse_fraction, py::arg("text"));
}
