#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "penlevel/csv.hpp"
#include "penlevel/cv.hpp"
#include "penlevel/errors.hpp"
#include "penlevel/penalty.hpp"
#include "penlevel/problem.hpp"
#include "penlevel/sim.hpp"
#include "penlevel/solvers.hpp"

using namespace penlevel;

namespace {

// Flag-combination problems discovered after CLI11 parsing; exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataArgs {
    std::string x_path;
    std::string y_path;
    std::string data_path;  // combined file, response in the last column
    int header = -1;        // -1 auto, 0 none, 1 skip first row
    bool assume_standardized = false;
};

void add_data_flags(CLI::App* cmd, DataArgs& args, bool need_y = true) {
    cmd->add_option("--x", args.x_path, "design matrix CSV (rows = observations)");
    if (need_y) cmd->add_option("--y", args.y_path, "response CSV (single column)");
    cmd->add_option("--data", args.data_path, "combined CSV, response in the last column");
    cmd->add_flag(
        "--header,!--no-header",
        [&args](std::int64_t count) { args.header = count > 0 ? 1 : 0; },
        "treat the first row as a header (auto-detected by default)");
    cmd->add_flag("--assume-standardized", args.assume_standardized,
                  "columns already centered with unit mean square; verified, not re-scaled");
}

Dataset finish_dataset(RowMatrixXd X, Eigen::VectorXd Y, bool assume_standardized) {
    Dataset raw(std::move(X), std::move(Y), assume_standardized);
    if (assume_standardized) {
        raw.validate_standardization();
        return raw;
    }
    return standardize(raw);
}

Dataset load_dataset(const DataArgs& args) {
    if (!args.data_path.empty()) {
        if (!args.x_path.empty() || !args.y_path.empty())
            throw UsageError("--data excludes --x/--y");
        RowMatrixXd m = read_csv_matrix(args.data_path, args.header);
        if (m.cols() < 2) throw DomainError("combined file needs at least 2 columns");
        RowMatrixXd X = m.leftCols(m.cols() - 1);
        Eigen::VectorXd Y = m.col(m.cols() - 1);
        return finish_dataset(std::move(X), std::move(Y), args.assume_standardized);
    }
    if (args.x_path.empty() || args.y_path.empty())
        throw UsageError("provide --x and --y, or --data");
    RowMatrixXd X = read_csv_matrix(args.x_path, args.header);
    Eigen::VectorXd Y = read_csv_vector(args.y_path, args.header);
    if (Y.size() != X.rows()) throw DomainError("response length does not match design rows");
    return finish_dataset(std::move(X), std::move(Y), args.assume_standardized);
}

// The multiplier schemes need only X; a zero response stands in when the
// caller has no --y.
Dataset load_design_only(const DataArgs& args) {
    if (!args.data_path.empty()) return load_dataset(args);
    if (args.x_path.empty()) throw UsageError("--method stein needs --x or --data");
    RowMatrixXd X = read_csv_matrix(args.x_path, args.header);
    Eigen::VectorXd Y = Eigen::VectorXd::Zero(X.rows());
    return finish_dataset(std::move(X), std::move(Y), args.assume_standardized);
}

std::uint64_t random_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    const std::uint64_t s = random_seed();
    std::cerr << "seed: " << s << "\n";
    return s;
}

struct SpecArgs {
    std::string family = "lasso";
    double alpha = 0.1;
    double c = 1.01;
    double sigma = 1.0;  // maps to ProblemSpec.theta; lasso only
};

CLI::Option* add_spec_flags(CLI::App* cmd, SpecArgs& args, bool require_alpha = false) {
    cmd->add_option("--family", args.family, "lasso | sqrt-lasso | poisson-wsf")
        ->check(CLI::IsMember({"lasso", "sqrt-lasso", "poisson-wsf"}));
    auto* alpha = cmd->add_option("--alpha", args.alpha, "miscoverage level in (0,1)");
    if (require_alpha) alpha->required();
    cmd->add_option("--c", args.c, "slack multiplier, > 1");
    cmd->add_option("--sigma", args.sigma, "known noise scale (lasso only)");
    return alpha;
}

ProblemSpec build_spec(const SpecArgs& args) {
    return make_spec(family_from_name(args.family), args.alpha, args.c, args.sigma);
}

struct SolverArgs {
    double tol = 1e-7;
    int max_sweeps = 10000;
};

void add_solver_flags(CLI::App* cmd, SolverArgs& args) {
    cmd->add_option("--tol", args.tol, "KKT tolerance");
    cmd->add_option("--max-sweeps", args.max_sweeps, "iteration cap");
}

SolverConfig build_solver(const SolverArgs& args) {
    SolverConfig cfg;
    cfg.tol = args.tol;
    cfg.max_sweeps = args.max_sweeps;
    return cfg;
}

void print_summary_table(const ExperimentReport& report, std::ostream& os) {
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %14s %9s %10s %6s", "method", "median_pred_err",
                  "coverage", "select_s", "fail");
    os << line << "\n";
    for (const MethodSummary& s : report.summaries) {
        std::snprintf(line, sizeof line, "%-10s %14.6g %9.3f %10.3f %6d",
                      method_name(s.method).c_str(), s.median_prediction_error, s.coverage_rate,
                      s.total_select_seconds, s.failures);
        os << line << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"penalty level estimation for l1-regularized regression"};
    app.require_subcommand(1);

    // estimate
    auto* est = app.add_subcommand("estimate", "compute a penalty level");
    SpecArgs est_spec;
    DataArgs est_data;
    std::string est_method = "mdt";
    Eigen::Index est_n = 0, est_p = 0;
    int est_draws = 1000, est_threads = 1;
    std::uint64_t est_seed = 0;
    add_spec_flags(est, est_spec, /*require_alpha=*/true);
    add_data_flags(est, est_data, /*need_y=*/false);
    est->add_option("--method", est_method, "mdt | stein")
        ->check(CLI::IsMember({"mdt", "stein_mc", "stein"}));
    est->add_option("--n", est_n, "observations (mdt without data)");
    est->add_option("--p", est_p, "regressors (mdt without data)");
    est->add_option("--draws", est_draws, "Monte Carlo draws");
    auto* est_seed_opt = est->add_option("--seed", est_seed, "Monte Carlo seed");
    est->add_option("--threads", est_threads, "worker threads (0 = hardware)");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit at a chosen or estimated penalty");
    SpecArgs fit_spec;
    DataArgs fit_data;
    SolverArgs fit_solver;
    double fit_lambda = -1.0;
    std::string fit_method;
    int fit_draws = 1000, fit_threads = 1;
    std::uint64_t fit_seed = 0;
    std::string fit_out_beta;
    bool fit_verify = false;
    add_spec_flags(fit_cmd, fit_spec);
    add_data_flags(fit_cmd, fit_data);
    add_solver_flags(fit_cmd, fit_solver);
    auto* fit_lambda_opt = fit_cmd->add_option("--lambda", fit_lambda, "penalty level");
    fit_cmd->add_option("--method", fit_method, "select the penalty first: mdt | stein | cv")
        ->check(CLI::IsMember({"mdt", "stein_mc", "stein", "cv"}));
    fit_cmd->add_option("--draws", fit_draws, "Monte Carlo draws for --method stein");
    auto* fit_seed_opt = fit_cmd->add_option("--seed", fit_seed, "selection seed");
    fit_cmd->add_option("--threads", fit_threads, "worker threads");
    fit_cmd->add_option("--out-beta", fit_out_beta, "write coefficients to CSV");
    fit_cmd->add_flag("--verify", fit_verify, "replay an independent KKT check on the result");

    // cv
    auto* cv_cmd = app.add_subcommand("cv", "cross-validation baseline");
    SpecArgs cv_spec;
    DataArgs cv_data;
    SolverArgs cv_solver;
    CvConfig cv_cfg;
    std::string cv_out_losses;
    add_spec_flags(cv_cmd, cv_spec);
    add_data_flags(cv_cmd, cv_data);
    add_solver_flags(cv_cmd, cv_solver);
    cv_cmd->add_option("--folds", cv_cfg.folds, "number of folds");
    cv_cmd->add_option("--grid-size", cv_cfg.grid_size, "penalty grid points");
    cv_cmd->add_option("--min-ratio", cv_cfg.grid_min_ratio, "smallest grid point / lambda_max");
    auto* cv_seed_opt = cv_cmd->add_option("--seed", cv_cfg.seed, "fold shuffle seed");
    cv_cmd->add_option("--out-losses", cv_out_losses, "write per-(lambda, fold) losses to CSV");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "replicated synthetic comparison");
    SimDesign design;
    ExperimentConfig config;
    std::string sim_config_path, sim_out_dir;
    std::vector<std::string> sim_methods;
    std::string sim_family = "lasso";
    sim_cmd->add_option("--config", sim_config_path, "experiment JSON");
    auto* sf = sim_cmd->add_option("--family", sim_family, "lasso | sqrt-lasso | poisson-wsf")
                   ->check(CLI::IsMember({"lasso", "sqrt-lasso", "poisson-wsf"}));
    auto* sn = sim_cmd->add_option("--n", design.n, "observations");
    auto* sp = sim_cmd->add_option("--p", design.p, "regressors");
    auto* srho = sim_cmd->add_option("--rho", design.rho, "AR(1) correlation");
    auto* ss = sim_cmd->add_option("--sparsity", design.sparsity, "nonzero coefficients");
    auto* ssig = sim_cmd->add_option("--sigma", design.sigma, "Gaussian noise scale");
    auto* sr = sim_cmd->add_option("--reps,--replications", design.replications, "replications");
    auto* sseed = sim_cmd->add_option("--base-seed", design.base_seed, "experiment seed");
    auto* sfreeze = sim_cmd->add_flag("--freeze-beta", "reuse one coefficient draw for all reps");
    auto* salpha = sim_cmd->add_option("--alpha", config.alpha, "miscoverage level");
    auto* sc = sim_cmd->add_option("--c", config.c, "slack multiplier");
    auto* sm = sim_cmd->add_option("--methods", sim_methods, "subset of mdt,stein_mc,cv")
                   ->delimiter(',');
    auto* sd = sim_cmd->add_option("--draws", config.stein_draws, "Monte Carlo draws");
    auto* sfolds = sim_cmd->add_option("--folds", config.cv.folds, "CV folds");
    auto* sgrid = sim_cmd->add_option("--grid-size", config.cv.grid_size, "CV grid points");
    auto* sminr = sim_cmd->add_option("--min-ratio", config.cv.grid_min_ratio, "CV grid floor");
    auto* sthreads = sim_cmd->add_option("--threads", config.threads, "worker threads");
    sim_cmd->add_option("--out-dir", sim_out_dir, "write summary.json and records.csv here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (est->parsed()) {
            const ProblemSpec spec = build_spec(est_spec);
            PenaltyEstimate result;
            if (method_from_name(est_method) == Method::SteinMc) {
                Dataset dataset = load_design_only(est_data);
                result = lambda_stein(spec, dataset, est_draws,
                                      resolve_seed(est_seed_opt, est_seed), est_threads);
            } else {
                Eigen::Index n = est_n, p = est_p;
                if (!est_data.data_path.empty() || !est_data.x_path.empty()) {
                    Dataset dataset = load_design_only(est_data);
                    n = dataset.n();
                    p = dataset.p();
                }
                if (n < 1 || p < 1) throw UsageError("mdt needs --n and --p, or data files");
                result = lambda_mdt(spec, n, p);
            }
            std::cout << result.to_json() << "\n";
            return 0;
        }

        if (fit_cmd->parsed()) {
            const ProblemSpec spec = build_spec(fit_spec);
            const SolverConfig solver = build_solver(fit_solver);
            if (fit_lambda_opt->count() > 0 && !fit_method.empty())
                throw UsageError("--lambda and --method are mutually exclusive");
            if (fit_lambda_opt->count() == 0 && fit_method.empty())
                throw UsageError("give --lambda or --method to pick the penalty");
            Dataset dataset = load_dataset(fit_data);
            double lam = fit_lambda;
            if (fit_lambda_opt->count() == 0) {
                switch (method_from_name(fit_method)) {
                    case Method::Mdt:
                        lam = lambda_mdt(spec, dataset.n(), dataset.p()).lambda;
                        break;
                    case Method::SteinMc:
                        lam = lambda_stein(spec, dataset, fit_draws,
                                           resolve_seed(fit_seed_opt, fit_seed), fit_threads)
                                  .lambda;
                        break;
                    case Method::Cv: {
                        CvConfig cfg;
                        cfg.seed = resolve_seed(fit_seed_opt, fit_seed);
                        lam = cv_select(spec, dataset, cfg, solver).estimate.lambda;
                        break;
                    }
                }
                std::cerr << "selected lambda: " << lam << "\n";
            }
            FitResult result = fit(spec, dataset, lam, solver);
            std::cout << result.to_json() << "\n";
            if (!result.converged)
                std::cerr << "warning: not converged after " << result.iterations
                          << " iterations (kkt residual " << result.kkt_residual << ")\n";
            if (!fit_out_beta.empty()) write_csv_vector(fit_out_beta, result.beta);
            if (fit_verify) {
                const double residual = kkt_residual(spec, dataset, result.beta, lam);
                std::cerr << "verify: kkt_residual " << residual
                          << (residual <= solver.tol ? " <= " : " > ") << "tol " << solver.tol
                          << "\n";
            }
            return 0;
        }

        if (cv_cmd->parsed()) {
            const ProblemSpec spec = build_spec(cv_spec);
            Dataset dataset = load_dataset(cv_data);
            cv_cfg.seed = resolve_seed(cv_seed_opt, cv_cfg.seed);
            CvResult result = cv_select(spec, dataset, cv_cfg, build_solver(cv_solver));
            std::cout << result.estimate.to_json() << "\n";
            if (!cv_out_losses.empty()) {
                std::ofstream out(cv_out_losses);
                if (!out) throw DomainError("cannot open " + cv_out_losses + " for writing");
                out << "lambda_index,lambda,fold,heldout_loss\n";
                char num[40];
                for (size_t g = 0; g < result.grid.size(); ++g) {
                    for (size_t f = 0; f < result.fold_loss[g].size(); ++f) {
                        std::snprintf(num, sizeof num, "%.17g", result.grid[g]);
                        out << g << ',' << num << ',' << f << ',';
                        std::snprintf(num, sizeof num, "%.17g", result.fold_loss[g][f]);
                        out << num << '\n';
                    }
                }
            }
            return 0;
        }

        if (sim_cmd->parsed()) {
            if (!sim_config_path.empty()) {
                std::ifstream in(sim_config_path);
                if (!in) throw DomainError("cannot open " + sim_config_path);
                std::stringstream buf;
                buf << in.rdbuf();
                SimDesign base_d = design;
                ExperimentConfig base_c = config;
                auto [d, c] = parse_experiment_json(buf.str());
                design = d;
                config = c;
                // Explicit flags override the file.
                if (sf->count()) design.family = family_from_name(sim_family);
                if (sn->count()) design.n = base_d.n;
                if (sp->count()) design.p = base_d.p;
                if (srho->count()) design.rho = base_d.rho;
                if (ss->count()) design.sparsity = base_d.sparsity;
                if (ssig->count()) design.sigma = base_d.sigma;
                if (sr->count()) design.replications = base_d.replications;
                if (sseed->count()) design.base_seed = base_d.base_seed;
                if (salpha->count()) config.alpha = base_c.alpha;
                if (sc->count()) config.c = base_c.c;
                if (sd->count()) config.stein_draws = base_c.stein_draws;
                if (sfolds->count()) config.cv.folds = base_c.cv.folds;
                if (sgrid->count()) config.cv.grid_size = base_c.cv.grid_size;
                if (sminr->count()) config.cv.grid_min_ratio = base_c.cv.grid_min_ratio;
                if (sthreads->count()) config.threads = base_c.threads;
            } else {
                design.family = family_from_name(sim_family);
            }
            if (sfreeze->count()) design.redraw_beta = false;
            if (sseed->count() == 0 && sim_config_path.empty()) {
                design.base_seed = random_seed();
                std::cerr << "base seed: " << design.base_seed << "\n";
            }
            if (sm->count()) {
                config.methods.clear();
                for (const std::string& name : sim_methods)
                    config.methods.push_back(method_from_name(name));
            }

            ExperimentReport report = run_experiment(design, config);
            print_summary_table(report, std::cout);
            if (!sim_out_dir.empty()) {
                std::filesystem::create_directories(sim_out_dir);
                std::ofstream sj(sim_out_dir + "/summary.json");
                sj << report.summary_json() << "\n";
                report.write_records_csv(sim_out_dir + "/records.csv");
                std::cerr << "wrote " << sim_out_dir << "/summary.json and records.csv\n";
            }
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
