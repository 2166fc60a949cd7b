#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmc/chain.hpp"
#include "qmc/evolution.hpp"
#include "qmc/families.hpp"
#include "qmc/specfun.hpp"

namespace py = pybind11;
using namespace qmc;

namespace {

py::array_t<double> matrix_to_numpy(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    auto buf = out.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) buf(i, j) = m(i, j);
    return out;
}

Matrix numpy_to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::domain_error("expected a 2-d array");
    Matrix m(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    auto buf = a.unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = buf(i, j);
    return m;
}

// System handle exposed to Python: chain + spectral data (+ closed forms for
// family-built systems).
struct PySystem {
    SpectralSystem sys;
    std::optional<families::AnalyticEigenSystem> analytic;

    const SpectralSystem& ref() const { return sys; }
};

PySystem from_family(const families::FamilySpec& spec) {
    PySystem p;
    p.analytic = families::build(spec);
    p.sys = static_cast<const SpectralSystem&>(*p.analytic);
    return p;
}

py::dict report_to_dict(const ValidationReport& r) {
    py::dict d;
    d["max_negativity"] = r.max_negativity;
    d["max_column_defect"] = r.max_column_defect;
    d["max_reversibility_defect"] = r.max_reversibility_defect;
    d["pi_sum_defect"] = r.pi_sum_defect;
    d["connected"] = r.connected;
    d["tolerance"] = r.tolerance;
    d["passed"] = r.passed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_qmc, m) {
    m.doc() = "Reversible Markov chains, coinless quantum walks, and the five solvable "
              "Askey-scheme families";

    // ---- special functions ----
    m.def("poch", &specfun::poch, py::arg("a"), py::arg("n"));
    m.def("qpoch", &specfun::qpoch, py::arg("a"), py::arg("q"), py::arg("n"));
    m.def("binom", &specfun::binom, py::arg("N"), py::arg("x"));
    m.def("qbinom", &specfun::qbinom, py::arg("N"), py::arg("x"), py::arg("q"));
    m.def(
        "hyp_terminating",
        [](std::vector<double> num, std::vector<double> den, double z) {
            return specfun::hyp_terminating({std::move(num), std::move(den), z, 0.0});
        },
        py::arg("numerator"), py::arg("denominator"), py::arg("z"));
    m.def(
        "qhyp_terminating",
        [](std::vector<double> num, std::vector<double> den, double q, double z) {
            return specfun::qhyp_terminating({std::move(num), std::move(den), z, q});
        },
        py::arg("numerator"), py::arg("denominator"), py::arg("q"), py::arg("z"));

    // ---- family specs ----
    py::class_<families::QHahnSpec>(m, "QHahnSpec")
        .def(py::init([](int N, double a, double b, double c, double q) {
                 return families::QHahnSpec{N, a, b, c, q};
             }),
             py::arg("N"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("q"))
        .def_readonly("N", &families::QHahnSpec::N)
        .def_readonly("a", &families::QHahnSpec::a)
        .def_readonly("b", &families::QHahnSpec::b)
        .def_readonly("c", &families::QHahnSpec::c)
        .def_readonly("q", &families::QHahnSpec::q);
    py::class_<families::HahnSpec>(m, "HahnSpec")
        .def(py::init([](int N, double a, double b, double c) {
                 return families::HahnSpec{N, a, b, c};
             }),
             py::arg("N"), py::arg("a"), py::arg("b"), py::arg("c"))
        .def_readonly("N", &families::HahnSpec::N)
        .def_readonly("a", &families::HahnSpec::a)
        .def_readonly("b", &families::HahnSpec::b)
        .def_readonly("c", &families::HahnSpec::c);
    py::class_<families::KrawtchoukSpec>(m, "KrawtchoukSpec")
        .def(py::init([](int N, double a, double b) {
                 return families::KrawtchoukSpec{N, a, b};
             }),
             py::arg("N"), py::arg("a"), py::arg("b"))
        .def_readonly("N", &families::KrawtchoukSpec::N)
        .def_readonly("a", &families::KrawtchoukSpec::a)
        .def_readonly("b", &families::KrawtchoukSpec::b);
    py::class_<families::CharlierSpec>(m, "CharlierSpec")
        .def(py::init([](double a, double b, double eps_tail) {
                 return families::CharlierSpec{a, b, eps_tail};
             }),
             py::arg("a"), py::arg("b"), py::arg("eps_tail") = 1e-12)
        .def_readonly("a", &families::CharlierSpec::a)
        .def_readonly("b", &families::CharlierSpec::b)
        .def_readonly("eps_tail", &families::CharlierSpec::eps_tail);
    py::class_<families::MeixnerSpec>(m, "MeixnerSpec")
        .def(py::init([](double a, double b, double c, double eps_tail) {
                 return families::MeixnerSpec{a, b, c, eps_tail};
             }),
             py::arg("a"), py::arg("b"), py::arg("c"), py::arg("eps_tail") = 1e-12)
        .def_readonly("a", &families::MeixnerSpec::a)
        .def_readonly("b", &families::MeixnerSpec::b)
        .def_readonly("c", &families::MeixnerSpec::c)
        .def_readonly("eps_tail", &families::MeixnerSpec::eps_tail);

    // spec-level closed forms
    m.def("measure", [](const families::FamilySpec& s, int x) { return families::measure(s, x); });
    m.def("reversible_measure",
          [](const families::FamilySpec& s, int x) { return families::reversible_measure(s, x); });
    m.def("kernel_entry",
          [](const families::FamilySpec& s, int x, int y) { return families::kernel(s, x, y); });
    m.def("eigenvalue",
          [](const families::FamilySpec& s, int n) { return families::eigenvalue(s, n); });
    m.def("polynomial", [](const families::FamilySpec& s, int n, int x) {
        return families::polynomial(s, n, x);
    });
    m.def("norm_const_sq",
          [](const families::FamilySpec& s, int n) { return families::norm_const_sq(s, n); });

    // ---- systems ----
    py::class_<PySystem>(m, "System")
        .def_property_readonly("size", [](const PySystem& p) { return p.sys.chain.size(); })
        .def_property_readonly("kernel",
                               [](const PySystem& p) { return matrix_to_numpy(p.sys.chain.kernel); })
        .def_property_readonly("pi", [](const PySystem& p) { return p.sys.chain.pi; })
        .def_property_readonly("kappa", [](const PySystem& p) { return p.sys.spectral.kappa; })
        .def_property_readonly("energies",
                               [](const PySystem& p) { return p.sys.spectral.energies; })
        .def_property_readonly(
            "eigenvectors",
            [](const PySystem& p) { return matrix_to_numpy(p.sys.spectral.eigenvectors); })
        .def_property_readonly("norm_consts",
                               [](const PySystem& p) { return p.sys.spectral.norm_consts; })
        .def_property_readonly("source",
                               [](const PySystem& p) {
                                   return p.sys.spectral.source == SpectralSource::Analytic
                                              ? "analytic"
                                              : "numerical";
                               })
        .def_property_readonly("column_defect",
                               [](const PySystem& p) { return p.sys.chain.column_defect; })
        .def_property_readonly("n_valid",
                               [](const PySystem& p) {
                                   return p.analytic ? p.analytic->n_valid : p.sys.chain.size();
                               })
        .def_property_readonly("kappa_closed",
                               [](const PySystem& p) {
                                   if (!p.analytic)
                                       throw std::domain_error("not a family-built system");
                                   return p.analytic->kappa_closed;
                               })
        .def("hamiltonian", [](const PySystem& p) { return matrix_to_numpy(hamiltonian(p.sys.chain)); })
        .def("symmetrize", [](const PySystem& p) { return matrix_to_numpy(symmetrize(p.sys.chain)); })
        .def(
            "validate",
            [](const PySystem& p, double tol) {
                return report_to_dict(validate_chain(p.sys.chain, tol));
            },
            py::arg("tol") = 1e-12)
        .def(
            "classical_step",
            [](const PySystem& p, const Vector& dist) {
                return evolution::classical_step(p.sys.chain, dist);
            },
            py::arg("p"))
        .def(
            "classical_evolve",
            [](const PySystem& p, const Vector& p0, long steps) {
                return evolution::classical_evolve_spectral(p.ref(), p0, steps);
            },
            py::arg("p0"), py::arg("steps"))
        .def(
            "transition_power",
            [](const PySystem& p, int x, int y, long steps) {
                return evolution::transition_matrix_power(p.ref(), x, y, steps);
            },
            py::arg("x"), py::arg("y"), py::arg("steps"))
        .def(
            "quantum_amplitude",
            [](const PySystem& p, int x, int y, long steps) {
                return evolution::quantum_amplitude(p.ref(), x, y, steps);
            },
            py::arg("x"), py::arg("y"), py::arg("steps"))
        .def(
            "quantum_evolve",
            [](const PySystem& p, const std::vector<std::complex<double>>& psi0, long steps) {
                const auto state = evolution::QuantumState::checked(psi0);
                return evolution::quantum_evolve(p.ref(), state, steps).amplitudes;
            },
            py::arg("psi0"), py::arg("steps"))
        .def(
            "measurement_distribution",
            [](const PySystem& p, int y, long steps) {
                return evolution::measurement_distribution(p.ref(), y, steps);
            },
            py::arg("y"), py::arg("steps"))
        .def(
            "long_time_average",
            [](const PySystem& p, int x, int y) {
                return evolution::long_time_average(p.ref(), x, y);
            },
            py::arg("x"), py::arg("y"))
        .def(
            "empirical_average",
            [](const PySystem& p, int x, int y, long horizon) {
                return evolution::empirical_average(p.ref(), x, y, horizon);
            },
            py::arg("x"), py::arg("y"), py::arg("horizon"))
        .def("reconstruct_kernel", [](const PySystem& p) {
            return matrix_to_numpy(spectral_reconstruct_K(p.sys.spectral, p.sys.chain.pi));
        });

    m.def("build", &from_family, py::arg("spec"), "Build a solvable chain from a family spec");

    m.def(
        "simple_random_walk",
        [](const std::vector<std::pair<int, int>>& edges) {
            Graph g;
            int max_vertex = -1;
            for (const auto& [u, v] : edges) max_vertex = std::max({max_vertex, u, v});
            g.vertex_count = max_vertex + 1;
            g.edges = edges;
            PySystem p;
            p.sys.chain = simple_random_walk(g);
            p.sys.spectral = eigendecompose(hamiltonian(p.sys.chain));
            return p;
        },
        py::arg("edges"), "Simple random walk on an undirected graph given as an edge list");

    m.def(
        "eigendecompose",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& h) {
            const SpectralData data = eigendecompose(numpy_to_matrix(h));
            return py::make_tuple(data.energies, matrix_to_numpy(data.eigenvectors));
        },
        py::arg("H"), "Energies (ascending) and orthonormal eigenvector columns of a symmetric matrix");

    m.def(
        "validate_kernel",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& k,
           const Vector& pi, double tol) {
            return report_to_dict(validate_chain(numpy_to_matrix(k), pi, tol));
        },
        py::arg("K"), py::arg("pi"), py::arg("tol") = 1e-12);

#ifdef QMC_VERSION
    m.attr("__version__") = QMC_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
