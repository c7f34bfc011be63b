#include "opcalc/acceptance.hpp"
#include "opcalc/angular.hpp"
#include "opcalc/bip.hpp"
#include "opcalc/config.hpp"
#include "opcalc/corpus.hpp"
#include "opcalc/discrete.hpp"
#include "opcalc/dpg.hpp"
#include "opcalc/oracle.hpp"
#include "opcalc/perturbation.hpp"
#include "opcalc/roots.hpp"
#include "opcalc/temporal.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

namespace py = pybind11;
using namespace opcalc;

namespace {

StateVector state(const CVector& psi1, const CVector& psi2, DomainTag tag = DomainTag::X) {
    if (psi1.size() != psi2.size()) throw DomainError("psi1 and psi2 differ in length");
    return {psi1, psi2, tag};
}

py::tuple pair(const StateVector& s) { return py::make_tuple(s.psi1, s.psi2); }

py::dict regularity_dict(const RegularityReport& r) {
    py::dict d;
    d["norm_F"] = r.norm_F;
    d["norm_Vtt"] = r.norm_Vtt;
    d["norm_AV"] = r.norm_AV;
    d["c_tt"] = r.c_tt;
    d["c_A"] = r.c_A;
    d["origin"] = r.origin;
    d["trace_value"] = r.trace_value;
    d["trace_slope"] = r.trace_slope;
    d["tail"] = r.tail;
    d["finite"] = r.finite();
    d["passed"] = r.passed();
    return d;
}

/// Either contour inverter or sparse direct solve, behind one apply().
class Inverter {
public:
    Inverter(const TemporalGrid& tg, const AngularGrid& ag, const ProblemParams& P, const std::string& method,
             int n_nodes, double s_max) {
        if (method == "dpg") {
            auto inv = std::make_shared<DpgInverter>(tg, ag, P.nu(),
                                                     build_contour(P, angular_eigenvalues(P.omega), n_nodes, s_max));
            fn_ = [inv](const SpaceTimeField& F) { return inv->apply(F); };
        } else if (method == "direct") {
            auto d = std::make_shared<DirectSumSolver>(tg, ag, P.nu());
            fn_ = [d](const SpaceTimeField& F) { return d->solve(F); };
        } else {
            throw DomainError("method must be 'dpg' or 'direct'");
        }
    }
    [[nodiscard]] SpaceTimeField apply(const SpaceTimeField& F) const { return fn_(F); }
    [[nodiscard]] const SumInverse& fn() const { return fn_; }

private:
    SumInverse fn_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Operator calculus for the clamped-sector problem: spectra, resolvents, contour inversion.";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<NearSpectrumError>(m, "NearSpectrumError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    py::class_<ProblemParams>(m, "ProblemParams")
        .def(py::init([](double p, double omega, double k, double rho) {
                 ProblemParams P{p, omega, k, rho};
                 P.validate();
                 return P;
             }),
             py::arg("p") = 2.0, py::arg("omega") = pi / 2, py::arg("k") = 1.0, py::arg("rho") = 1.0)
        .def_readwrite("p", &ProblemParams::p)
        .def_readwrite("omega", &ProblemParams::omega)
        .def_readwrite("k", &ProblemParams::k)
        .def_readwrite("rho", &ProblemParams::rho)
        .def_property_readonly("nu", &ProblemParams::nu)
        .def("validate", &ProblemParams::validate)
        .def("__repr__", [](const ProblemParams& P) {
            return "ProblemParams(p=" + format_double(P.p) + ", omega=" + format_double(P.omega) +
                   ", k=" + format_double(P.k) + ", rho=" + format_double(P.rho) + ")";
        });

    py::class_<SpaceTimeField>(m, "Field")
        .def(py::init([](double T, int n_t, double omega, int n_theta) {
                 return SpaceTimeField(TemporalGrid(T, n_t), AngularGrid(omega, n_theta));
             }),
             py::arg("T"), py::arg("n_t"), py::arg("omega"), py::arg("n_theta"))
        .def_readwrite("v1", &SpaceTimeField::v1)
        .def_readwrite("v2", &SpaceTimeField::v2)
        .def_property_readonly("t", [](const SpaceTimeField& V) { return V.tgrid.nodes(); })
        .def_property_readonly("theta", [](const SpaceTimeField& V) { return V.agrid.nodes(); })
        .def("e_norm", [](const SpaceTimeField& V, double p) { return e_norm(V, p); }, py::arg("p") = 2.0)
        .def("__sub__", [](const SpaceTimeField& a, const SpaceTimeField& b) { return a - b; })
        .def("__add__", [](const SpaceTimeField& a, const SpaceTimeField& b) { return a + b; });

    // Spectral roots.
    py::class_<TranscendentalRoot>(m, "Root")
        .def_readonly("value", &TranscendentalRoot::value)
        .def_readonly("index", &TranscendentalRoot::index)
        .def_readonly("residual", &TranscendentalRoot::residual)
        .def_readonly("eigenvalue", &TranscendentalRoot::eigenvalue)
        .def_property_readonly("family", [](const TranscendentalRoot& r) { return std::string(to_string(r.family)); });
    m.def(
        "find_roots",
        [](const std::string& family, double omega, std::array<double, 4> box, double tol) {
            return find_roots(Determinant{family_from_string(family), omega}, Box{box[0], box[1], box[2], box[3]}, tol)
                .roots;
        },
        py::arg("family"), py::arg("omega") = pi / 2,
        py::arg("box") = std::array<double, 4>{default_box.re_min, default_box.re_max, default_box.im_min,
                                               default_box.im_max},
        py::arg("tol") = 1e-12);
    m.def(
        "count_roots",
        [](const std::string& family, double omega, std::array<double, 4> box) {
            return count_roots(Determinant{family_from_string(family), omega}, Box{box[0], box[1], box[2], box[3]})
                .count;
        },
        py::arg("family"), py::arg("omega"), py::arg("box"));
    m.def("reference_tau", &reference_tau);
    m.def(
        "check_separation",
        [](double omega, double nu) {
            const Separation s = check_separation(omega, nu);
            return py::make_tuple(s.holds, s.margin);
        },
        py::arg("omega"), py::arg("nu"));
    m.def(
        "angular_eigenvalues", [](double omega) { return angular_eigenvalues(omega); }, py::arg("omega"));
    m.def("estimate_epsilon0", &estimate_epsilon0, py::arg("omega"));

    // Angular resolvent.
    m.def(
        "resolve_A",
        [](cplx lambda, const CVector& f1, const CVector& f2, double omega, const std::string& variant) {
            AngularResolventOptions o;
            if (variant == "paper") o.variant = UVariant::paper_eq;
            else if (variant != "proof") throw DomainError("variant must be 'proof' or 'paper'");
            return pair(resolve_A(lambda, state(f1, f2), AngularGrid(omega, static_cast<int>(f1.size())), o));
        },
        py::arg("lam"), py::arg("f1"), py::arg("f2"), py::arg("omega"), py::arg("variant") = "proof");
    m.def(
        "dense_oracle",
        [](cplx lambda, const CVector& f1, const CVector& f2, double omega) {
            return pair(dense_clamped_oracle(lambda, state(f1, f2), AngularGrid(omega, static_cast<int>(f1.size()))));
        },
        py::arg("lam"), py::arg("f1"), py::arg("f2"), py::arg("omega"));
    m.def(
        "solve_A_at_zero",
        [](const CVector& f1, const CVector& f2, double omega) {
            return pair(solve_A_at_zero(state(f1, f2), AngularGrid(omega, static_cast<int>(f1.size()))));
        },
        py::arg("f1"), py::arg("f2"), py::arg("omega"));
    m.def(
        "x_norm",
        [](const CVector& f1, const CVector& f2, double omega, double p) {
            return x_norm(state(f1, f2), AngularGrid(omega, static_cast<int>(f1.size())), p);
        },
        py::arg("f1"), py::arg("f2"), py::arg("omega"), py::arg("p") = 2.0);

    // Temporal resolvent.
    m.def(
        "resolve_L1",
        [](cplx lambda, const CVector& R, double T, double nu, bool check_decay) {
            TemporalResolventOptions o;
            o.check_decay = check_decay;
            return resolve_L1(lambda, R, TemporalGrid(T, static_cast<int>(R.size())), nu, o);
        },
        py::arg("lam"), py::arg("R"), py::arg("T"), py::arg("nu"), py::arg("check_decay") = true);
    m.def(
        "in_sigma_nu", [](cplx z, double nu) { return in_region(z, {SpectralRegion::Kind::sigma_nu, nu, 0.1}); },
        py::arg("z"), py::arg("nu"));
    m.def(
        "in_sigma_L1",
        [](cplx z, double nu, double eps) { return in_region(z, {SpectralRegion::Kind::sigma_L1, nu, eps}); },
        py::arg("z"), py::arg("nu"), py::arg("eps") = 0.1);

    // Operator sum and the full problem.
    py::class_<Inverter>(m, "Inverter")
        .def(py::init([](const SpaceTimeField& like, const ProblemParams& P, const std::string& method, int n_nodes,
                         double s_max) { return Inverter(like.tgrid, like.agrid, P, method, n_nodes, s_max); }),
             py::arg("like"), py::arg("params"), py::arg("method") = "dpg", py::arg("n_nodes") = 200,
             py::arg("s_max") = 2000.0)
        .def("apply", &Inverter::apply);
    m.def("apply_sum", [](const SpaceTimeField& V, double nu) { return discrete::apply_sum(V, nu); });
    m.def("apply_full", &apply_full, py::arg("V"), py::arg("params"));
    m.def(
        "manufactured", [](const SpaceTimeField& like) { return corpus::manufactured(like.tgrid, like.agrid); },
        py::arg("like"));
    m.def(
        "field_corpus",
        [](int n, const SpaceTimeField& like, std::uint64_t seed) {
            return corpus::field_corpus(n, like.tgrid, like.agrid, seed);
        },
        py::arg("n"), py::arg("like"), py::arg("seed"));
    m.def(
        "estimate_rho0",
        [](double k, const std::vector<SpaceTimeField>& probes, const ProblemParams& P, const Inverter& inv) {
            return estimate_rho0(k, probes, P.nu(), inv.fn(), P.p);
        },
        py::arg("k"), py::arg("probes"), py::arg("params"), py::arg("inverter"));
    m.def(
        "solve_full",
        [](const SpaceTimeField& F, const ProblemParams& P, const Inverter& inv, double fp_tol) {
            FixedPointOptions o;
            o.fp_tol = fp_tol;
            const FullSolution s = solve_full(F, P, inv.fn(), o, P.p);
            py::dict trace;
            trace["increments"] = s.trace.increments;
            trace["ratios"] = s.trace.ratios;
            trace["converged"] = s.trace.converged;
            return py::make_tuple(s.V, trace, s.residual);
        },
        py::arg("F"), py::arg("params"), py::arg("inverter"), py::arg("fp_tol") = 1e-8);
    m.def(
        "regularity",
        [](const SpaceTimeField& V, const SpaceTimeField& F, double p) {
            return regularity_dict(classical_regularity_check(V, F, p));
        },
        py::arg("V"), py::arg("F"), py::arg("p") = 2.0);
    m.def(
        "reconstruct_u",
        [](const SpaceTimeField& V, const ProblemParams& P, const std::vector<double>& radii) {
            return reconstruct_u(V, P, PolarGrid{radii}).u;
        },
        py::arg("V"), py::arg("params"), py::arg("radii"));

    // Multiplier.
    m.def("multiplier", py::vectorize(&multiplier), py::arg("xi"), py::arg("r"));
    m.def("xi_times_mprime", py::vectorize(&xi_times_mprime), py::arg("xi"), py::arg("r"));
    m.def("xi_dm_dxi", py::vectorize(&xi_dm_dxi), py::arg("xi"), py::arg("r"));
    m.def(
        "sup_bounds",
        [](double r, double lo, double hi, int per_decade) {
            const SupBounds b = sup_bounds(r, symmetric_log_grid(lo, hi, per_decade));
            py::dict d;
            d["sup_m"] = b.sup_m;
            d["sup_xm"] = b.sup_xm;
            d["mikhlin_sum"] = b.mikhlin_sum;
            d["limit_m"] = b.limit_m;
            d["limit_xm"] = b.limit_xm;
            d["sup_true_derivative"] = b.sup_true_derivative;
            return d;
        },
        py::arg("r"), py::arg("lo") = 1e-8, py::arg("hi") = 1e4, py::arg("per_decade") = 2000);
    m.def(
        "gamma_reflection",
        [](cplx z) {
            const GammaSample s = gamma_reflection_check({z}).samples.front();
            return py::make_tuple(s.integral, s.reflection, s.error);
        },
        py::arg("z"));

    // Config and acceptance.
    m.def(
        "parse_config",
        [](const std::string& text) {
            py::dict d;
            for (const auto& [k, v] : parse_config(text).entries()) d[py::str(k)] = v;
            return d;
        },
        py::arg("text"));
    m.def(
        "acceptance",
        [](std::uint64_t seed, const std::vector<int>& only) {
            acceptance::Options o;
            o.seed = seed;
            o.only = only;
            py::list out;
            for (const auto& r : acceptance::run(o)) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["measured"] = r.measured;
                d["threshold"] = r.threshold;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 20240601, py::arg("only") = std::vector<int>{});
}
