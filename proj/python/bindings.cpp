// bindings.cpp — Python module exposing the two-mode engine

#include "twomode/analytic.hpp"
#include "twomode/cli.hpp"
#include "twomode/effective.hpp"
#include "twomode/oracle.hpp"
#include "twomode/propagator.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace twomode;

namespace {

DensityMatrix as_density(const FockSpace& space, const CMatrix& m) { return {space, m}; }

}  // namespace

PYBIND11_MODULE(_twomode, m) {
    m.doc() = "Exact Markovian evolution of two coupled lossy bosonic modes";

    py::register_exception<ExceptionalPointError>(m, "ExceptionalPointError", PyExc_ValueError);

    py::class_<FockSpace>(m, "FockSpace")
        .def(py::init<int>(), py::arg("n_max"))
        .def_property_readonly("n_max", &FockSpace::n_max)
        .def_property_readonly("dim", &FockSpace::dim)
        .def("index", [](const FockSpace& s, int n_a, int n_b) { return basis_index(n_a, n_b, s); })
        .def("occupation", [](const FockSpace& s, int i) {
            const Occupation o = occupation(i, s);
            return py::make_tuple(o.n_a, o.n_b);
        });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<double, double, double>(), py::arg("g"), py::arg("gamma_a"), py::arg("gamma_b"))
        .def_property_readonly("g", &ModelParams::g)
        .def_property_readonly("gamma_a", &ModelParams::gamma_a)
        .def_property_readonly("gamma_b", &ModelParams::gamma_b)
        .def_property_readonly("gamma", &ModelParams::gamma)
        .def_property_readonly("delta", &ModelParams::delta)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(g=" + std::to_string(p.g()) + ", gamma_a=" + std::to_string(p.gamma_a()) +
                   ", gamma_b=" + std::to_string(p.gamma_b()) + ")";
        });

    m.def("regime", [](const ModelParams& p) {
        const Regime r = classify(p);
        return py::make_tuple(to_string(r.tag), r.omega);
    });
    m.def("eta", [](const ModelParams& p) { return eta(p).value; });
    m.def("eigenvalue", &eigenvalue, py::arg("j"), py::arg("k"), py::arg("params"));

    m.def("annihilation", [](char mode, const FockSpace& s) {
        return annihilation(mode == 'a' ? Mode::a : Mode::b, s).matrix();
    });
    m.def("h_eff", [](const ModelParams& p, const FockSpace& s) { return h_eff(p, s).matrix(); });
    m.def("h_diag", [](const ModelParams& p, const FockSpace& s) { return h_diag(p, s).matrix(); });
    m.def("u_z", [](const ModelParams& p, const FockSpace& s, double z) { return u_z(p, s, z).matrix(); });
    m.def("expm", [](const CMatrix& a) { return expm(a); });

    m.def("lindblad_rhs", [](const ModelParams& p, const FockSpace& s, const CMatrix& rho) {
        return lindblad_rhs(p, as_density(s, rho)).matrix();
    });
    m.def(
        "exp_jump",
        [](int sign, const FockSpace& s, const CMatrix& rho) {
            return exp_jump(sign >= 0 ? JumpSign::plus : JumpSign::minus, as_density(s, rho)).matrix();
        },
        py::arg("sign"), py::arg("space"), py::arg("rho"));

    m.def(
        "evolve_exact",
        [](const CMatrix& rho0, const ModelParams& p, const FockSpace& s, double z) {
            return evolve_exact(as_density(s, rho0), p, z).matrix();
        },
        py::arg("rho0"), py::arg("params"), py::arg("space"), py::arg("z"));
    m.def(
        "integrate_lindblad",
        [](const CMatrix& rho0, const ModelParams& p, const FockSpace& s, double z, bool refine) {
            return integrate_lindblad(as_density(s, rho0), p, z, IntegratorConfig::for_params(p, refine)).matrix();
        },
        py::arg("rho0"), py::arg("params"), py::arg("space"), py::arg("z"), py::arg("refine") = false);
    m.def("trace_distance", [](const FockSpace& s, const CMatrix& r1, const CMatrix& r2) {
        return trace_distance(as_density(s, r1), as_density(s, r2));
    });

    m.def("coincidence_closed_form", &coincidence_closed_form, py::arg("params"), py::arg("z"));
    m.def("coincidence_from_density",
          [](const FockSpace& s, const CMatrix& rho) { return coincidence_from_density(as_density(s, rho)); });
    m.def(
        "hom_minimum",
        [](const ModelParams& p, double z_max) {
            const HomMinimum h = hom_minimum(p, z_max);
            return py::make_tuple(h.z, h.value);
        },
        py::arg("params"), py::arg("z_max"));

    py::class_<TrajectoryStats>(m, "TrajectoryStats")
        .def_readonly("n_traj", &TrajectoryStats::n_traj)
        .def_readonly("mean", &TrajectoryStats::mean)
        .def_readonly("std_error", &TrajectoryStats::std_error)
        .def_readonly("seed", &TrajectoryStats::seed)
        .def_readonly("rng", &TrajectoryStats::rng);
    m.def(
        "mc_trajectories",
        [](const CVector& psi0, const ModelParams& p, const FockSpace& s, double z, const CMatrix& observable,
           std::size_t n_traj, std::uint64_t seed) {
            TrajectoryConfig tc;
            tc.n_traj = n_traj;
            tc.seed = seed;
            py::gil_scoped_release release;
            return mc_trajectories(StateVector(s, psi0), p, z, Operator(s, observable), tc);
        },
        py::arg("psi0"), py::arg("params"), py::arg("space"), py::arg("z"), py::arg("observable"),
        py::arg("n_traj") = 20000, py::arg("seed") = 42);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
