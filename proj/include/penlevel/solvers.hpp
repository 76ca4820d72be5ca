#pragma once

#include <string>
#include <vector>

#include "penlevel/dataset.hpp"
#include "penlevel/problem.hpp"

namespace penlevel {

struct SolverConfig {
    double tol = 1e-7;                 // KKT residual tolerance
    int max_sweeps = 10000;            // coordinate sweeps / proximal steps
    int sqrt_lasso_outer_iters = 50;   // scale-alternation cap
    double line_search_shrink = 0.5;
    bool track_objective = false;      // record objective after each sweep/step
};

struct FitResult {
    Eigen::VectorXd beta;
    double lambda = 0.0;
    int iterations = 0;
    double kkt_residual = 0.0;
    double objective = 0.0;  // L(beta) + lambda*||beta||_1
    bool converged = false;
    std::vector<double> objective_trace;  // filled when track_objective is set

    std::string to_json() const;
};

// Cyclic coordinate descent with exact soft-threshold updates. Columns with
// unit mean square get the textbook update beta_j <- S(beta_j + x_j'r/n, lambda).
FitResult fit_lasso(const Dataset& dataset, double lambda, const SolverConfig& config = {},
                    const Eigen::VectorXd* warm_start = nullptr);

// Scaled iteration: alternate sigma <- ||Y-X beta||/sqrt(n) with a lasso fit
// at penalty lambda*sigma, warm-starting each inner solve. Exploits the
// variational form min_{sigma>0} ||Y-X beta||^2/(2 n sigma) + sigma/2.
FitResult fit_sqrt_lasso(const Dataset& dataset, double lambda, const SolverConfig& config = {},
                         const Eigen::VectorXd* warm_start = nullptr);

// Proximal gradient with backtracking line search on the weighted-score
// Poisson loss. The loss is convex, so the KKT certificate is global.
FitResult fit_poisson_wsf(const Dataset& dataset, double lambda, const SolverConfig& config = {},
                          const Eigen::VectorXd* warm_start = nullptr);

// Dispatch on spec.family.
FitResult fit(const ProblemSpec& spec, const Dataset& dataset, double lambda,
              const SolverConfig& config = {}, const Eigen::VectorXd* warm_start = nullptr);

// Subgradient optimality violation:
//   max_j  |g_j + lambda*sign(beta_j)|        if beta_j != 0
//          max(|g_j| - lambda, 0)             if beta_j == 0
double kkt_residual(const ProblemSpec& spec, const Dataset& dataset, const Eigen::VectorXd& beta,
                    double lambda);

inline double soft_threshold(double z, double threshold) {
    if (z > threshold) return z - threshold;
    if (z < -threshold) return z + threshold;
    return 0.0;
}

}  // namespace penlevel
