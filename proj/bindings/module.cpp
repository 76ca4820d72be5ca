#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "penlevel/csv.hpp"
#include "penlevel/cv.hpp"
#include "penlevel/dataset.hpp"
#include "penlevel/errors.hpp"
#include "penlevel/normal.hpp"
#include "penlevel/penalty.hpp"
#include "penlevel/problem.hpp"
#include "penlevel/rng.hpp"
#include "penlevel/sim.hpp"
#include "penlevel/solvers.hpp"

namespace py = pybind11;
using namespace penlevel;

namespace {

ProblemSpec spec_of(const std::string& family, double alpha, double c, double theta) {
    return make_spec(family_from_name(family), alpha, c, theta);
}

py::dict estimate_dict(const PenaltyEstimate& est) {
    py::dict d;
    d["lambda"] = est.lambda;
    d["method"] = method_name(est.method);
    d["quantile"] = est.quantile;
    d["draws"] = est.draws;
    d["seed"] = est.seed;
    return d;
}

py::dict fit_dict(const FitResult& fitted) {
    py::dict d;
    d["beta"] = fitted.beta;
    d["lambda"] = fitted.lambda;
    d["iterations"] = fitted.iterations;
    d["kkt_residual"] = fitted.kkt_residual;
    d["objective"] = fitted.objective;
    d["converged"] = fitted.converged;
    return d;
}

SolverConfig solver_of(double tol, int max_sweeps) {
    SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_sweeps = max_sweeps;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(penlevel, m) {
    m.doc() = "Penalty-level estimation for l1-regularized regression";
    m.attr("RNG_NAME") = kRngName;

    py::register_exception<Error>(m, "PenlevelError");

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<RowMatrixXd, Eigen::VectorXd, bool>(), py::arg("X"), py::arg("Y"),
             py::arg("standardized") = false)
        .def_property_readonly("n", &Dataset::n)
        .def_property_readonly("p", &Dataset::p)
        .def_property_readonly("X", &Dataset::X, py::return_value_policy::copy)
        .def_property_readonly("Y", &Dataset::Y, py::return_value_policy::copy)
        .def_property_readonly("standardized", &Dataset::standardized)
        .def_property_readonly("centers", &Dataset::centers, py::return_value_policy::copy)
        .def_property_readonly("scales", &Dataset::scales, py::return_value_policy::copy)
        .def("validate_standardization", &Dataset::validate_standardization);

    m.def("standardize", [](const Dataset& d) { return standardize(d); }, py::arg("dataset"));

    m.def("phi_cdf", py::vectorize(&phi_cdf), py::arg("x"));
    m.def("phi_inv", py::vectorize(&phi_inv), py::arg("q"));

    m.def(
        "loss",
        [](const std::string& family, const Dataset& d, const Eigen::VectorXd& beta, double alpha,
           double c, double theta) { return loss(spec_of(family, alpha, c, theta), d, beta); },
        py::arg("family"), py::arg("dataset"), py::arg("beta"), py::arg("alpha") = 0.1,
        py::arg("c") = 1.01, py::arg("theta") = 1.0);
    m.def(
        "gradient",
        [](const std::string& family, const Dataset& d, const Eigen::VectorXd& beta, double alpha,
           double c, double theta) { return gradient(spec_of(family, alpha, c, theta), d, beta); },
        py::arg("family"), py::arg("dataset"), py::arg("beta"), py::arg("alpha") = 0.1,
        py::arg("c") = 1.01, py::arg("theta") = 1.0);
    m.def(
        "score_vectors",
        [](const std::string& family, const Dataset& d, const Eigen::VectorXd& beta, double alpha,
           double c, double theta) {
            return score_vectors(spec_of(family, alpha, c, theta), d, beta);
        },
        py::arg("family"), py::arg("dataset"), py::arg("beta"), py::arg("alpha") = 0.1,
        py::arg("c") = 1.01, py::arg("theta") = 1.0);

    m.def(
        "lambda_mdt",
        [](const std::string& family, Eigen::Index n, Eigen::Index p, double alpha, double c,
           double theta) { return estimate_dict(lambda_mdt(spec_of(family, alpha, c, theta), n, p)); },
        py::arg("family"), py::arg("n"), py::arg("p"), py::arg("alpha") = 0.1, py::arg("c") = 1.01,
        py::arg("theta") = 1.0);
    m.def(
        "lambda_stein",
        [](const std::string& family, const Dataset& d, int draws, std::uint64_t seed, double alpha,
           double c, double theta, int threads) {
            return estimate_dict(
                lambda_stein(spec_of(family, alpha, c, theta), d, draws, seed, threads));
        },
        py::arg("family"), py::arg("dataset"), py::arg("draws") = 1000, py::arg("seed") = 0,
        py::arg("alpha") = 0.1, py::arg("c") = 1.01, py::arg("theta") = 1.0, py::arg("threads") = 1);
    m.def(
        "coverage_check",
        [](const std::string& family, const Dataset& d, const Eigen::VectorXd& beta_star,
           double lam, double alpha, double c, double theta) {
            return coverage_check(spec_of(family, alpha, c, theta), d, beta_star, lam);
        },
        py::arg("family"), py::arg("dataset"), py::arg("beta_star"), py::arg("lambda"),
        py::arg("alpha") = 0.1, py::arg("c") = 1.01, py::arg("theta") = 1.0);

    m.def(
        "fit",
        [](const std::string& family, const Dataset& d, double lam, double tol, int max_sweeps) {
            return fit_dict(fit(spec_of(family, 0.1, 1.01, 1.0), d, lam, solver_of(tol, max_sweeps)));
        },
        py::arg("family"), py::arg("dataset"), py::arg("lambda"), py::arg("tol") = 1e-7,
        py::arg("max_sweeps") = 10000);
    m.def(
        "kkt_residual",
        [](const std::string& family, const Dataset& d, const Eigen::VectorXd& beta, double lam) {
            return kkt_residual(spec_of(family, 0.1, 1.01, 1.0), d, beta, lam);
        },
        py::arg("family"), py::arg("dataset"), py::arg("beta"), py::arg("lambda"));

    m.def(
        "cv_select",
        [](const std::string& family, const Dataset& d, int folds, int grid_size,
           double grid_min_ratio, std::uint64_t seed, double tol, int max_sweeps) {
            CvConfig cfg;
            cfg.folds = folds;
            cfg.grid_size = grid_size;
            cfg.grid_min_ratio = grid_min_ratio;
            cfg.seed = seed;
            CvResult r = cv_select(spec_of(family, 0.1, 1.01, 1.0), d, cfg,
                                   solver_of(tol, max_sweeps));
            py::dict out = estimate_dict(r.estimate);
            out["grid"] = r.grid;
            out["mean_loss"] = r.mean_loss;
            return out;
        },
        py::arg("family"), py::arg("dataset"), py::arg("folds") = 10, py::arg("grid_size") = 50,
        py::arg("grid_min_ratio") = 0.01, py::arg("seed") = 0, py::arg("tol") = 1e-7,
        py::arg("max_sweeps") = 10000);

    m.def("gen_design", &gen_design, py::arg("n"), py::arg("p"), py::arg("rho"), py::arg("seed"));
    m.def("gen_beta", &gen_beta, py::arg("p"), py::arg("sparsity"), py::arg("seed"));
    m.def(
        "gen_response",
        [](const RowMatrixXd& X, const Eigen::VectorXd& beta, const std::string& family,
           double sigma, std::uint64_t seed) {
            return gen_response(X, beta, family_from_name(family), sigma, seed);
        },
        py::arg("X"), py::arg("beta"), py::arg("family"), py::arg("sigma"), py::arg("seed"));
    m.def("prediction_error", &prediction_error, py::arg("X"), py::arg("beta_hat"),
          py::arg("beta_star"));

    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            auto [design, config] = parse_experiment_json(config_json);
            ExperimentReport report = run_experiment(design, config);
            py::dict out;
            out["summary_json"] = report.summary_json();
            py::list rows;
            for (const RepRecord& rec : report.records) {
                py::dict r;
                r["rep"] = rec.rep;
                r["method"] = method_name(rec.method);
                r["lambda"] = rec.lambda;
                r["prediction_error"] = rec.prediction_error;
                r["coverage"] = rec.coverage;
                r["select_seconds"] = rec.select_seconds;
                r["fit_seconds"] = rec.fit_seconds;
                r["failed"] = rec.failed;
                rows.append(r);
            }
            out["records"] = rows;
            return out;
        },
        py::arg("config_json"));

    m.def("read_csv_matrix", &read_csv_matrix, py::arg("path"), py::arg("has_header") = -1);
    m.def("read_csv_vector", &read_csv_vector, py::arg("path"), py::arg("has_header") = -1);
}
