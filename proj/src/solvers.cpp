#include "penlevel/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "penlevel/errors.hpp"

namespace penlevel {

namespace {

void check_fit_inputs(const Dataset& dataset, double lambda) {
    if (!dataset.standardized()) throw NotStandardizedError();
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw DomainError("penalty level must be finite and nonnegative");
}

Eigen::VectorXd initial_beta(Eigen::Index p, const Eigen::VectorXd* warm_start) {
    if (warm_start == nullptr) return Eigen::VectorXd::Zero(p);
    if (warm_start->size() != p) throw DomainError("warm start length does not match p");
    if (!warm_start->allFinite()) throw NonFiniteError("warm start");
    return *warm_start;
}

void snap_zeros(Eigen::VectorXd& beta) {
    for (Eigen::Index j = 0; j < beta.size(); ++j)
        if (std::abs(beta[j]) < 1e-12) beta[j] = 0.0;
}

double l1_norm(const Eigen::VectorXd& beta) { return beta.lpNorm<1>(); }

// KKT violation from a precomputed (unpenalized) loss gradient.
double kkt_from_gradient(const Eigen::VectorXd& grad, const Eigen::VectorXd& beta, double lambda) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        double v;
        if (beta[j] != 0.0) {
            v = std::abs(grad[j] + (beta[j] > 0.0 ? lambda : -lambda));
        } else {
            v = std::max(std::abs(grad[j]) - lambda, 0.0);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace

double kkt_residual(const ProblemSpec& spec, const Dataset& dataset, const Eigen::VectorXd& beta,
                    double lambda) {
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw DomainError("penalty level must be finite and nonnegative");
    Eigen::VectorXd grad = gradient(spec, dataset, beta);
    return kkt_from_gradient(grad, beta, lambda);
}

FitResult fit_lasso(const Dataset& dataset, double lambda, const SolverConfig& config,
                    const Eigen::VectorXd* warm_start) {
    check_fit_inputs(dataset, lambda);
    const Eigen::Index n = dataset.n();
    const Eigen::Index p = dataset.p();
    const double inv_n = 1.0 / static_cast<double>(n);

    // Column-major working copy keeps the per-coordinate dot products contiguous.
    const Eigen::MatrixXd X = dataset.X();
    const Eigen::VectorXd& Y = dataset.Y();

    // Per-column mean squares; exactly 1 after standardize(), but row subsets
    // (cross-validation folds) deviate slightly, so keep the general update.
    Eigen::VectorXd colsq = X.colwise().squaredNorm() * inv_n;

    Eigen::VectorXd beta = initial_beta(p, warm_start);
    for (Eigen::Index j = 0; j < p; ++j)
        if (colsq[j] <= 1e-300) beta[j] = 0.0;  // degenerate column carries no signal
    Eigen::VectorXd r = Y - X * beta;

    FitResult out;
    out.lambda = lambda;

    auto objective_at = [&](const Eigen::VectorXd& res, const Eigen::VectorXd& b) {
        return 0.5 * inv_n * res.squaredNorm() + lambda * l1_norm(b);
    };

    std::vector<Eigen::Index> active;
    active.reserve(static_cast<size_t>(p));

    auto sweep = [&](const std::vector<Eigen::Index>* subset) {
        double max_delta = 0.0;
        const Eigen::Index count = subset ? static_cast<Eigen::Index>(subset->size()) : p;
        for (Eigen::Index k = 0; k < count; ++k) {
            const Eigen::Index j = subset ? (*subset)[static_cast<size_t>(k)] : k;
            const double aj = colsq[j];
            if (aj <= 1e-300) continue;
            const double old = beta[j];
            const double z = aj * old + inv_n * X.col(j).dot(r);
            const double next = soft_threshold(z, lambda) / aj;
            if (next != old) {
                r.noalias() -= (next - old) * X.col(j);
                beta[j] = next;
                max_delta = std::max(max_delta, std::abs(next - old));
            }
        }
        ++out.iterations;
        if (config.track_objective) out.objective_trace.push_back(objective_at(r, beta));
        return max_delta;
    };

    while (out.iterations < config.max_sweeps) {
        sweep(nullptr);

        // Refresh the residual before certifying: the incremental updates
        // accumulate rounding over many sweeps.
        r.noalias() = Y - X * beta;
        Eigen::VectorXd grad = -inv_n * (X.transpose() * r);
        out.kkt_residual = kkt_from_gradient(grad, beta, lambda);
        if (out.kkt_residual <= config.tol) {
            out.converged = true;
            break;
        }

        active.clear();
        for (Eigen::Index j = 0; j < p; ++j)
            if (beta[j] != 0.0) active.push_back(j);
        while (!active.empty() && out.iterations < config.max_sweeps) {
            if (sweep(&active) <= config.tol) break;
        }
    }

    snap_zeros(beta);
    r.noalias() = Y - X * beta;
    Eigen::VectorXd grad = -inv_n * (X.transpose() * r);
    out.kkt_residual = kkt_from_gradient(grad, beta, lambda);
    out.converged = out.kkt_residual <= config.tol;
    out.objective = objective_at(r, beta);
    out.beta = std::move(beta);
    return out;
}

FitResult fit_sqrt_lasso(const Dataset& dataset, double lambda, const SolverConfig& config,
                         const Eigen::VectorXd* warm_start) {
    check_fit_inputs(dataset, lambda);
    const Eigen::Index n = dataset.n();
    const Eigen::Index p = dataset.p();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

    Eigen::VectorXd beta = initial_beta(p, warm_start);
    double sigma = (dataset.Y() - dataset.X() * beta).norm() * inv_sqrt_n;
    if (sigma < 1e-12) throw ZeroResidualError();

    const ProblemSpec spec = make_spec(Family::SqrtLasso);
    FitResult out;
    out.lambda = lambda;
    int total_inner = 0;

    for (int outer = 0; outer < config.sqrt_lasso_outer_iters; ++outer) {
        SolverConfig inner_cfg = config;
        // The sqrt-lasso gradient is the lasso gradient divided by sigma, so an
        // inner solve at tolerance tol*sigma certifies the outer tolerance.
        inner_cfg.tol = std::max(config.tol * sigma * 0.5, 1e-15);
        inner_cfg.max_sweeps = std::max(config.max_sweeps - total_inner, 1);
        inner_cfg.track_objective = false;
        FitResult inner = fit_lasso(dataset, lambda * sigma, inner_cfg, &beta);
        beta = inner.beta;
        total_inner += inner.iterations;

        double sigma_next = (dataset.Y() - dataset.X() * beta).norm() * inv_sqrt_n;
        if (sigma_next < 1e-12) throw ZeroResidualError();
        const double sigma_step = std::abs(sigma_next - sigma);
        sigma = sigma_next;

        out.kkt_residual = kkt_residual(spec, dataset, beta, lambda);
        out.iterations = total_inner;
        if (config.track_objective)
            out.objective_trace.push_back(loss(spec, dataset, beta) + lambda * l1_norm(beta));
        if (out.kkt_residual <= config.tol && sigma_step <= config.tol * std::max(1.0, sigma)) {
            out.converged = true;
            break;
        }
        if (total_inner >= config.max_sweeps) break;
    }

    snap_zeros(beta);
    out.kkt_residual = kkt_residual(spec, dataset, beta, lambda);
    out.converged = out.kkt_residual <= config.tol;
    out.objective = loss(spec, dataset, beta) + lambda * l1_norm(beta);
    out.beta = std::move(beta);
    return out;
}

FitResult fit_poisson_wsf(const Dataset& dataset, double lambda, const SolverConfig& config,
                          const Eigen::VectorXd* warm_start) {
    check_fit_inputs(dataset, lambda);
    const Eigen::Index p = dataset.p();
    const ProblemSpec spec = make_spec(Family::PoissonWsf);

    Eigen::VectorXd beta = initial_beta(p, warm_start);
    double f_beta = loss(spec, dataset, beta);
    Eigen::VectorXd grad = gradient(spec, dataset, beta);

    FitResult out;
    out.lambda = lambda;
    out.kkt_residual = kkt_from_gradient(grad, beta, lambda);
    if (config.track_objective) out.objective_trace.push_back(f_beta + lambda * l1_norm(beta));
    if (out.kkt_residual <= config.tol) {
        snap_zeros(beta);
        out.converged = true;
        out.objective = f_beta + lambda * l1_norm(beta);
        out.beta = std::move(beta);
        return out;
    }

    double step = 1.0;
    constexpr double kArmijo = 1e-4;
    constexpr double kMinStep = 1e-18;

    // Sufficient decrease must be measured on the penalized objective: a prox
    // step can raise the smooth loss while the penalty drops by more.
    double obj_beta = f_beta + lambda * l1_norm(beta);

    while (out.iterations < config.max_sweeps) {
        // Allow the step to recover after a conservative stretch; cap at the
        // initial step so the search stays in the guarded exponent range.
        step = std::min(step * 2.0, 1.0);

        Eigen::VectorXd candidate(p);
        double f_candidate = 0.0;
        double obj_candidate = 0.0;
        double decrement = 0.0;
        bool accepted = false;
        while (step >= kMinStep) {
            for (Eigen::Index j = 0; j < p; ++j)
                candidate[j] = soft_threshold(beta[j] - step * grad[j], step * lambda);
            decrement = (candidate - beta).squaredNorm();
            if (decrement == 0.0) break;  // prox fixed point
            bool overflowed = false;
            try {
                f_candidate = loss(spec, dataset, candidate);
            } catch (const OverflowError&) {
                overflowed = true;
            }
            obj_candidate = f_candidate + lambda * l1_norm(candidate);
            if (!overflowed && obj_candidate <= obj_beta - kArmijo * decrement / step) {
                accepted = true;
                break;
            }
            step *= config.line_search_shrink;
        }
        if (!accepted) break;

        beta = candidate;
        f_beta = f_candidate;
        obj_beta = obj_candidate;
        grad = gradient(spec, dataset, beta);
        ++out.iterations;
        out.kkt_residual = kkt_from_gradient(grad, beta, lambda);
        if (config.track_objective) out.objective_trace.push_back(f_beta + lambda * l1_norm(beta));
        if (out.kkt_residual <= config.tol) {
            out.converged = true;
            break;
        }
    }

    snap_zeros(beta);
    out.kkt_residual = kkt_residual(spec, dataset, beta, lambda);
    out.converged = out.kkt_residual <= config.tol;
    out.objective = loss(spec, dataset, beta) + lambda * l1_norm(beta);
    out.beta = std::move(beta);
    return out;
}

FitResult fit(const ProblemSpec& spec, const Dataset& dataset, double lambda,
              const SolverConfig& config, const Eigen::VectorXd* warm_start) {
    switch (spec.family) {
        case Family::Lasso:
            return fit_lasso(dataset, lambda, config, warm_start);
        case Family::SqrtLasso:
            return fit_sqrt_lasso(dataset, lambda, config, warm_start);
        case Family::PoissonWsf:
            return fit_poisson_wsf(dataset, lambda, config, warm_start);
    }
    throw DomainError("unknown family");
}

std::string FitResult::to_json() const {
    nlohmann::ordered_json j;
    j["beta"] = std::vector<double>(beta.data(), beta.data() + beta.size());
    j["lambda"] = lambda;
    j["iterations"] = iterations;
    j["kkt_residual"] = kkt_residual;
    j["objective"] = objective;
    j["converged"] = converged;
    if (!objective_trace.empty()) j["objective_trace"] = objective_trace;
    return j.dump();
}

}  // namespace penlevel
