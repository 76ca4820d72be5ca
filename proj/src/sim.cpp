#include "penlevel/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "penlevel/errors.hpp"
#include "penlevel/rng.hpp"

namespace penlevel {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

RowMatrixXd standardize_design(const RowMatrixXd& X) {
    Dataset raw(X, Eigen::VectorXd::Zero(X.rows()));
    return standardize(raw).X();
}

}  // namespace

RowMatrixXd gen_design(Eigen::Index n, Eigen::Index p, double rho, std::uint64_t seed) {
    if (n < 2 || p < 1) throw DomainError("design needs n >= 2 and p >= 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("rho must lie in [0, 1)");
    const double carry = std::sqrt(1.0 - rho * rho);
    RowMatrixXd X(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        // Row i owns counters [i*p, (i+1)*p): one normal per entry.
        CounterRng rng(seed, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(p));
        double prev = rng.next_normal();
        X(i, 0) = prev;
        for (Eigen::Index j = 1; j < p; ++j) {
            prev = rho * prev + carry * rng.next_normal();
            X(i, j) = prev;
        }
    }
    return X;
}

Eigen::VectorXd gen_beta(Eigen::Index p, int sparsity, std::uint64_t seed) {
    if (sparsity < 0 || static_cast<Eigen::Index>(sparsity) > p)
        throw DomainError("sparsity must lie in [0, p]");
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    CounterRng rng(seed);
    for (int j = 0; j < sparsity; ++j) {
        double v = 0.0;
        do {
            v = 2.0 * rng.next_uniform() - 1.0;
        } while (std::abs(v) < 1e-6);
        beta[j] = v;
    }
    return beta;
}

Eigen::VectorXd gen_response(const RowMatrixXd& X, const Eigen::VectorXd& beta, Family family,
                             double sigma, std::uint64_t seed) {
    if (beta.size() != X.cols()) throw DomainError("beta length does not match design");
    const Eigen::Index n = X.rows();
    Eigen::VectorXd mu = X * beta;
    Eigen::VectorXd y(n);
    if (family == Family::PoissonWsf) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(mu[i]) > kExponentGuard) throw OverflowError(mu[i]);
            // Own substream per observation: the draw count varies with the mean.
            CounterRng rng(substream(seed, static_cast<std::uint64_t>(i)));
            y[i] = static_cast<double>(rng.next_poisson(std::exp(mu[i])));
        }
    } else {
        if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be >= 0");
        CounterRng rng(seed);
        for (Eigen::Index i = 0; i < n; ++i) y[i] = mu[i] + sigma * rng.next_normal();
    }
    return y;
}

double prediction_error(const RowMatrixXd& X, const Eigen::VectorXd& beta_hat,
                        const Eigen::VectorXd& beta_star) {
    if (beta_hat.size() != X.cols() || beta_star.size() != X.cols())
        throw DomainError("coefficient length does not match design");
    return (X * (beta_hat - beta_star)).norm() / std::sqrt(static_cast<double>(X.rows()));
}

ExperimentReport run_experiment(const SimDesign& design, const ExperimentConfig& config) {
    if (design.replications < 1) throw DomainError("replications must be >= 1");
    const double theta = design.family == Family::Lasso ? design.sigma : 1.0;
    const ProblemSpec spec = make_spec(design.family, config.alpha, config.c, theta);
    const int threads = config.threads > 0
                            ? config.threads
                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    ExperimentReport report;
    report.design = design;
    report.config = config;
    report.records.reserve(static_cast<size_t>(design.replications) * config.methods.size());

    for (int rep = 0; rep < design.replications; ++rep) {
        const std::uint64_t rep_seed = design.base_seed ^ mix64(static_cast<std::uint64_t>(rep));
        const std::uint64_t beta_seed =
            substream(design.redraw_beta ? rep_seed : design.base_seed, kSeedTagBeta);

        RowMatrixXd X = standardize_design(
            gen_design(design.n, design.p, design.rho, substream(rep_seed, kSeedTagDesign)));
        Eigen::VectorXd beta_star = gen_beta(design.p, design.sparsity, beta_seed);
        Eigen::VectorXd Y =
            gen_response(X, beta_star, design.family, design.sigma, substream(rep_seed, kSeedTagNoise));
        Dataset dataset(std::move(X), std::move(Y), true);

        for (Method method : config.methods) {
            RepRecord rec;
            rec.rep = rep;
            rec.method = method;
            try {
                const double t0 = now_seconds();
                PenaltyEstimate est;
                switch (method) {
                    case Method::Mdt:
                        est = lambda_mdt(spec, dataset.n(), dataset.p());
                        break;
                    case Method::SteinMc:
                        est = lambda_stein(spec, dataset, config.stein_draws,
                                           substream(rep_seed, kSeedTagStein), threads);
                        break;
                    case Method::Cv: {
                        CvConfig cv = config.cv;
                        cv.seed = substream(rep_seed, kSeedTagFolds);
                        est = cv_select(spec, dataset, cv, config.solver).estimate;
                        break;
                    }
                }
                const double t1 = now_seconds();
                FitResult fitted = fit(spec, dataset, est.lambda, config.solver);
                const double t2 = now_seconds();

                rec.lambda = est.lambda;
                rec.prediction_error = prediction_error(dataset.X(), fitted.beta, beta_star);
                rec.coverage = coverage_check(spec, dataset, beta_star, est.lambda);
                rec.select_seconds = t1 - t0;
                rec.fit_seconds = t2 - t1;
            } catch (const Error&) {
                rec.failed = true;
                rec.lambda = std::numeric_limits<double>::quiet_NaN();
                rec.prediction_error = std::numeric_limits<double>::quiet_NaN();
                rec.coverage = false;
            }
            report.records.push_back(rec);
        }
    }

    for (Method method : config.methods) {
        MethodSummary s;
        s.method = method;
        int ok = 0;
        std::vector<double> errors;
        for (const RepRecord& rec : report.records) {
            if (rec.method != method) continue;
            if (rec.failed) {
                ++s.failures;
                continue;
            }
            ++ok;
            s.mean_lambda += rec.lambda;
            s.mean_prediction_error += rec.prediction_error;
            errors.push_back(rec.prediction_error);
            s.coverage_rate += rec.coverage ? 1.0 : 0.0;
            s.total_select_seconds += rec.select_seconds;
            s.total_fit_seconds += rec.fit_seconds;
        }
        if (ok > 0) {
            s.mean_lambda /= ok;
            s.mean_prediction_error /= ok;
            s.coverage_rate /= ok;
            std::sort(errors.begin(), errors.end());
            const size_t m = errors.size();
            s.median_prediction_error =
                (m % 2 == 1) ? errors[m / 2] : 0.5 * (errors[m / 2 - 1] + errors[m / 2]);
        }
        report.summaries.push_back(s);
    }
    return report;
}

std::string ExperimentReport::summary_json() const {
    nlohmann::ordered_json j;
    j["design"] = {
        {"n", design.n},
        {"p", design.p},
        {"rho", design.rho},
        {"sparsity", design.sparsity},
        {"family", family_name(design.family)},
        {"sigma", design.sigma},
        {"replications", design.replications},
        {"base_seed", design.base_seed},
        {"redraw_beta", design.redraw_beta},
    };
    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (Method m : config.methods) methods.push_back(method_name(m));
    j["config"] = {
        {"alpha", config.alpha},
        {"c", config.c},
        {"methods", methods},
        {"stein_draws", config.stein_draws},
        {"cv_folds", config.cv.folds},
        {"cv_grid_size", config.cv.grid_size},
        {"cv_grid_min_ratio", config.cv.grid_min_ratio},
        {"threads", config.threads},
    };
    j["rng"] = kRngName;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const MethodSummary& s : summaries) {
        rows.push_back({
            {"method", method_name(s.method)},
            {"mean_lambda", s.mean_lambda},
            {"mean_prediction_error", s.mean_prediction_error},
            {"median_prediction_error", s.median_prediction_error},
            {"coverage_rate", s.coverage_rate},
            {"total_select_seconds", s.total_select_seconds},
            {"total_fit_seconds", s.total_fit_seconds},
            {"failures", s.failures},
        });
    }
    j["summaries"] = rows;
    return j.dump(2);
}

void ExperimentReport::write_records_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw CsvParseError(0, "cannot open " + path + " for writing");
    out << "rep,method,lambda,prediction_error,coverage,select_seconds,fit_seconds\n";
    char num[40];
    for (const RepRecord& rec : records) {
        out << rec.rep << ',' << method_name(rec.method) << ',';
        std::snprintf(num, sizeof num, "%.17g", rec.lambda);
        out << num << ',';
        std::snprintf(num, sizeof num, "%.17g", rec.prediction_error);
        out << num << ',' << (rec.coverage ? 1 : 0) << ',';
        std::snprintf(num, sizeof num, "%.6f", rec.select_seconds);
        out << num << ',';
        std::snprintf(num, sizeof num, "%.6f", rec.fit_seconds);
        out << num << '\n';
    }
}

std::pair<SimDesign, ExperimentConfig> parse_experiment_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SimDesign d;
    ExperimentConfig c;
    const std::set<std::string> design_keys = {"n",     "p",            "rho",       "sparsity",
                                               "family", "sigma",        "replications",
                                               "base_seed", "redraw_beta"};
    const std::set<std::string> config_keys = {"alpha",       "c",        "methods",
                                               "stein_draws", "cv_folds", "cv_grid_size",
                                               "cv_grid_min_ratio", "threads",
                                               "solver_tol",  "solver_max_sweeps"};
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        if (!design_keys.count(k) && !config_keys.count(k))
            throw DomainError("unknown config key: " + k);
    }
    if (j.contains("n")) d.n = j["n"].get<Eigen::Index>();
    if (j.contains("p")) d.p = j["p"].get<Eigen::Index>();
    if (j.contains("rho")) d.rho = j["rho"].get<double>();
    if (j.contains("sparsity")) d.sparsity = j["sparsity"].get<int>();
    if (j.contains("family")) d.family = family_from_name(j["family"].get<std::string>());
    if (j.contains("sigma")) d.sigma = j["sigma"].get<double>();
    if (j.contains("replications")) d.replications = j["replications"].get<int>();
    if (j.contains("base_seed")) d.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("redraw_beta")) d.redraw_beta = j["redraw_beta"].get<bool>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("c")) c.c = j["c"].get<double>();
    if (j.contains("methods")) {
        c.methods.clear();
        for (const auto& m : j["methods"]) c.methods.push_back(method_from_name(m.get<std::string>()));
        if (c.methods.empty()) throw DomainError("methods must be non-empty");
    }
    if (j.contains("stein_draws")) c.stein_draws = j["stein_draws"].get<int>();
    if (j.contains("cv_folds")) c.cv.folds = j["cv_folds"].get<int>();
    if (j.contains("cv_grid_size")) c.cv.grid_size = j["cv_grid_size"].get<int>();
    if (j.contains("cv_grid_min_ratio")) c.cv.grid_min_ratio = j["cv_grid_min_ratio"].get<double>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("solver_tol")) c.solver.tol = j["solver_tol"].get<double>();
    if (j.contains("solver_max_sweeps")) c.solver.max_sweeps = j["solver_max_sweeps"].get<int>();
    return {d, c};
}

std::string experiment_json(const SimDesign& design, const ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["n"] = design.n;
    j["p"] = design.p;
    j["rho"] = design.rho;
    j["sparsity"] = design.sparsity;
    j["family"] = family_name(design.family);
    j["sigma"] = design.sigma;
    j["replications"] = design.replications;
    j["base_seed"] = design.base_seed;
    j["redraw_beta"] = design.redraw_beta;
    j["alpha"] = config.alpha;
    j["c"] = config.c;
    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (Method m : config.methods) methods.push_back(method_name(m));
    j["methods"] = methods;
    j["stein_draws"] = config.stein_draws;
    j["cv_folds"] = config.cv.folds;
    j["cv_grid_size"] = config.cv.grid_size;
    j["cv_grid_min_ratio"] = config.cv.grid_min_ratio;
    j["threads"] = config.threads;
    return j.dump(2);
}

}  // namespace penlevel
