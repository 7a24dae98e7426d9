#include "interplay/analysis.hpp"
#include "interplay/dynamics.hpp"
#include "interplay/montecarlo.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace interplay;

namespace {

py::dict balance_dict(const BalanceVerdict& v) {
    py::dict d;
    d["balanced"] = v.balanced;
    d["partition"] = v.partition ? py::cast(v.partition->labels().entries()) : py::none();
    d["witness"] = v.witness ? py::cast(describe(*v.witness)) : py::none();
    return d;
}

py::dict consensus_dict(const ConsensusVerdict& v) {
    py::dict d;
    d["kind"] = to_string(v.kind);
    d["partition"] = v.partition ? py::cast(v.partition->labels().entries()) : py::none();
    return d;
}

py::list snapshots_list(const Trajectory& traj) {
    py::list out;
    for (const Snapshot& s : traj.snapshots) {
        py::dict d;
        d["t"] = s.t;
        d["Y"] = s.Y;
        d["X"] = s.X ? py::cast(*s.X) : py::none();
        d["W"] = s.W ? py::cast(*s.W) : py::none();
        out.append(std::move(d));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "C++ core of the coupled appraisal/opinion dynamics";

    py::register_exception<DomainViolation>(m, "DomainViolation", PyExc_ValueError);

    m.def("sign_of", &sign_of, py::arg("value"), py::arg("tolerance") = kDefaultSignTolerance);

    m.def(
        "validate_opinion_matrix",
        [](const Matrix& y, double row_tolerance) { return validate_opinion_matrix(y, row_tolerance).values(); },
        py::arg("Y"), py::arg("row_tolerance") = kDefaultRowTolerance);

    m.def(
        "appraisal_update", [](const Matrix& y) { return appraisal_update(OpinionMatrix(y)).values(); }, py::arg("Y"));
    m.def(
        "influence_from_appraisal",
        [](const Matrix& x) { return influence_from_appraisal(AppraisalMatrix(x)).values(); }, py::arg("X"));
    m.def(
        "opinion_update",
        [](const Matrix& w, const Matrix& y) { return opinion_update(InfluenceMatrix(w), OpinionMatrix(y)).values(); },
        py::arg("W"), py::arg("Y"));
    m.def(
        "step",
        [](const Matrix& y) {
            StepResult r = step(OpinionMatrix(y));
            return py::make_tuple(r.X_next.values(), r.W_next.values(), r.Y_next.values());
        },
        py::arg("Y"), "Returns (X_next, W_next, Y_next).");

    m.def(
        "simulate",
        [](const Matrix& y0, std::size_t max_steps, double tol, std::size_t record_every) {
            SimulationConfig config;
            config.max_steps = max_steps;
            config.convergence_tolerance = tol;
            config.record_every = record_every;
            const Trajectory traj = simulate(OpinionMatrix(y0), config);
            py::dict out;
            out["status"] = to_string(traj.termination.status);
            out["termination_step"] = traj.termination.step;
            out["snapshots"] = snapshots_list(traj);
            return out;
        },
        py::arg("Y0"), py::arg("max_steps") = 1000, py::arg("tol") = 1e-9, py::arg("record_every") = 1);

    m.def("single_issue_closed_form", &single_issue_closed_form, py::arg("y0"));
    m.def(
        "predicted_limit_appraisal",
        [](const Vector& a, const std::vector<int>& rho) { return predicted_limit_appraisal(a, SignVector(rho)).values(); },
        py::arg("coefficients"), py::arg("rho"));

    m.def(
        "is_socially_balanced_triads",
        [](const Matrix& x, double tol) { return balance_dict(is_socially_balanced_triads(AppraisalMatrix(x), tol)); },
        py::arg("X"), py::arg("sign_tolerance") = kDefaultSignTolerance);
    m.def(
        "is_socially_balanced_rows",
        [](const Matrix& x, double tol) { return balance_dict(is_socially_balanced_rows(AppraisalMatrix(x), tol)); },
        py::arg("X"), py::arg("sign_tolerance") = kDefaultSignTolerance);
    m.def(
        "modulus_sign_consensus",
        [](const Matrix& y, double tol) { return consensus_dict(modulus_sign_consensus(OpinionMatrix(y), tol)); },
        py::arg("Y"), py::arg("sign_tolerance") = kDefaultSignTolerance);
    m.def(
        "modulus_consensus",
        [](const Matrix& y, double tol) { return consensus_dict(modulus_consensus(OpinionMatrix(y), tol)); },
        py::arg("Y"), py::arg("value_tolerance") = 1e-9);
    m.def(
        "classify_equilibrium",
        [](const Matrix& y, double tol) -> py::object {
            const auto result = classify_equilibrium(OpinionMatrix(y), tol);
            if (const auto* eq = std::get_if<EquilibriumDescription>(&result)) {
                py::dict d;
                d["rho"] = eq->rho.labels().entries();
                d["coefficients"] = eq->coefficients;
                d["residual"] = eq->residual;
                return d;
            }
            return py::none();
        },
        py::arg("Y"), py::arg("value_tolerance") = 1e-9, "Returns a dict for an equilibrium, else None.");
    m.def(
        "local_stability_probe",
        [](const Vector& coefficients, const std::vector<int>& rho, double scale, std::size_t trials,
           std::uint64_t seed) {
            const EquilibriumDescription eq{FactionPartition(SignVector(rho)), coefficients, 0.0};
            const StabilityReport r = local_stability_probe(eq, scale, trials, seed);
            return py::make_tuple(r.fraction_returning, r.max_final_distance);
        },
        py::arg("coefficients"), py::arg("rho"), py::arg("perturbation_scale"), py::arg("trials"), py::arg("seed"));

    m.def(
        "generic_initial",
        [](std::size_t n, std::size_t mm, double a, std::uint64_t seed) { return generic_initial(n, mm, a, seed).values(); },
        py::arg("n"), py::arg("m"), py::arg("a"), py::arg("seed"));
    m.def("chernoff_sample_size", &chernoff_sample_size, py::arg("epsilon"), py::arg("xi"));
    m.def(
        "run_experiment",
        [](std::size_t n, std::size_t mm, std::size_t runs, std::uint64_t seed, std::size_t window_start,
           std::size_t window_end, double threshold, double a, double epsilon, double xi) {
            ExperimentParams p;
            p.agents = n;
            p.issues = mm;
            p.runs = runs;
            p.master_seed = seed;
            p.window_start = window_start;
            p.window_end = window_end;
            p.threshold = threshold;
            p.support_half_width = a;
            p.epsilon = epsilon;
            p.xi = xi;
            MonteCarloReport r;
            {
                py::gil_scoped_release release;
                r = run_experiment(p);
            }
            py::list z;
            for (const RunRecord& rec : r.records) z.append(rec.nonvanishing ? 1 : 0);
            py::dict out;
            out["runs"] = r.runs_completed;
            out["successes"] = r.successes;
            out["p_hat"] = r.p_hat;
            out["chernoff_minimum_runs"] = r.chernoff_minimum_runs;
            out["Z"] = z;
            return out;
        },
        py::arg("n") = 9, py::arg("m") = 4, py::arg("runs") = 100, py::arg("seed") = 0, py::arg("window_start") = 100,
        py::arg("window_end") = 1000, py::arg("threshold") = 1e-3, py::arg("a") = 1.0, py::arg("epsilon") = 0.01,
        py::arg("xi") = 0.01);
}
