#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "penlevel/dataset.hpp"
#include "penlevel/penalty.hpp"
#include "penlevel/problem.hpp"
#include "penlevel/solvers.hpp"

namespace penlevel {

struct CvConfig {
    int folds = 10;
    int grid_size = 50;
    double grid_min_ratio = 0.01;
    std::uint64_t seed = 0;  // fold assignment shuffle
};

struct CvResult {
    PenaltyEstimate estimate;                  // method = Method::Cv
    std::vector<double> grid;                  // descending
    std::vector<double> mean_loss;             // aligned with grid
    std::vector<std::vector<double>> fold_loss;  // [grid index][fold]
};

// Largest penalty with an all-zero solution; grid anchor.
double lambda_max(const ProblemSpec& spec, const Dataset& dataset);

// Log-spaced grid of grid_size points from lambda_max down to
// lambda_min_ratio * lambda_max.
std::vector<double> lambda_grid(double lambda_max_value, const CvConfig& config);

// K-fold cross-validation over the grid. Held-out loss is mean squared error
// for the Gaussian families and the weighted-score deviance for Poisson.
// Ties resolve to the largest penalty among minimizers. Grid points whose
// fold fit degenerates (zero sqrt-lasso residual, Poisson overflow) score an
// infinite held-out loss for that fold; throws only if no grid point is
// usable at all.
CvResult cv_select(const ProblemSpec& spec, const Dataset& dataset, const CvConfig& config = {},
                   const SolverConfig& solver = {});

// Deterministic shuffled fold labels in [0, folds) for n observations.
std::vector<int> fold_assignments(Eigen::Index n, int folds, std::uint64_t seed);

}  // namespace penlevel
