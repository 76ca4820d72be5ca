#include "penlevel/cv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "penlevel/errors.hpp"
#include "penlevel/rng.hpp"

namespace penlevel {

double lambda_max(const ProblemSpec& spec, const Dataset& dataset) {
    Eigen::VectorXd beta0 = Eigen::VectorXd::Zero(dataset.p());
    return gradient(spec, dataset, beta0).cwiseAbs().maxCoeff();
}

std::vector<double> lambda_grid(double lambda_max_value, const CvConfig& config) {
    if (!(lambda_max_value > 0.0) || !std::isfinite(lambda_max_value))
        throw DomainError("lambda_max must be positive and finite");
    if (config.grid_size < 1) throw DomainError("grid_size must be at least 1");
    if (!(config.grid_min_ratio > 0.0) || config.grid_min_ratio > 1.0)
        throw DomainError("grid_min_ratio must lie in (0, 1]");
    std::vector<double> grid(static_cast<size_t>(config.grid_size));
    if (config.grid_size == 1) {
        grid[0] = lambda_max_value;
        return grid;
    }
    const double log_max = std::log(lambda_max_value);
    const double log_min = std::log(lambda_max_value * config.grid_min_ratio);
    for (int g = 0; g < config.grid_size; ++g) {
        const double t = static_cast<double>(g) / static_cast<double>(config.grid_size - 1);
        grid[static_cast<size_t>(g)] = std::exp(log_max + t * (log_min - log_max));
    }
    grid.front() = lambda_max_value;  // exact endpoints despite exp/log round trip
    grid.back() = lambda_max_value * config.grid_min_ratio;
    return grid;
}

std::vector<int> fold_assignments(Eigen::Index n, int folds, std::uint64_t seed) {
    if (folds < 2) throw DomainError("need at least 2 folds");
    if (static_cast<Eigen::Index>(folds) > n) throw FoldTooSmallError(folds);
    std::vector<Eigen::Index> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    CounterRng rng(substream(seed, 0x666f6c6473ULL));  // "folds"
    for (Eigen::Index i = n - 1; i > 0; --i) {
        const Eigen::Index k = static_cast<Eigen::Index>(rng.next_u64() % (static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(k)]);
    }
    std::vector<int> label(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        label[static_cast<size_t>(perm[static_cast<size_t>(i)])] = static_cast<int>(i % folds);
    return label;
}

namespace {

double held_out_loss(const ProblemSpec& spec, const Dataset& test, const Eigen::VectorXd& beta) {
    if (spec.family == Family::PoissonWsf) {
        try {
            return loss(spec, test, beta);
        } catch (const OverflowError&) {
            return std::numeric_limits<double>::infinity();
        }
    }
    const Eigen::VectorXd r = test.Y() - test.X() * beta;
    return r.squaredNorm() / static_cast<double>(test.n());
}

}  // namespace

CvResult cv_select(const ProblemSpec& spec, const Dataset& dataset, const CvConfig& config,
                   const SolverConfig& solver) {
    const Eigen::Index n = dataset.n();
    const auto labels = fold_assignments(n, config.folds, config.seed);

    CvResult out;
    out.grid = lambda_grid(lambda_max(spec, dataset), config);
    const size_t G = out.grid.size();
    out.fold_loss.assign(G, std::vector<double>(static_cast<size_t>(config.folds), 0.0));

    for (int f = 0; f < config.folds; ++f) {
        std::vector<Eigen::Index> train_rows, test_rows;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (labels[static_cast<size_t>(i)] == f)
                test_rows.push_back(i);
            else
                train_rows.push_back(i);
        }
        if (test_rows.size() < 2 || train_rows.size() < 2) throw FoldTooSmallError(f);
        Dataset train = dataset.row_subset(train_rows);
        Dataset test = dataset.row_subset(test_rows);

        Eigen::VectorXd warm = Eigen::VectorXd::Zero(dataset.p());
        for (size_t g = 0; g < G; ++g) {
            // A penalty small enough to reach the interpolation/overflow regime is
            // unusable on this fold, not a caller error: charge it an infinite
            // held-out loss and keep the warm start from the last usable fit.
            try {
                FitResult fitted = fit(spec, train, out.grid[g], solver, &warm);
                warm = fitted.beta;
                out.fold_loss[g][static_cast<size_t>(f)] = held_out_loss(spec, test, fitted.beta);
            } catch (const ZeroResidualError&) {
                out.fold_loss[g][static_cast<size_t>(f)] = std::numeric_limits<double>::infinity();
            } catch (const OverflowError&) {
                out.fold_loss[g][static_cast<size_t>(f)] = std::numeric_limits<double>::infinity();
            }
        }
    }

    out.mean_loss.resize(G);
    size_t best = 0;
    for (size_t g = 0; g < G; ++g) {
        const auto& row = out.fold_loss[g];
        out.mean_loss[g] = std::accumulate(row.begin(), row.end(), 0.0) /
                           static_cast<double>(config.folds);
        if (out.mean_loss[g] < out.mean_loss[best]) best = g;  // ties keep the larger penalty
    }
    if (!std::isfinite(out.mean_loss[best]))
        throw DomainError("cross-validation found no usable penalty on the grid");

    out.estimate.lambda = out.grid[best];
    out.estimate.method = Method::Cv;
    out.estimate.quantile = 0.0;
    out.estimate.draws = 0;
    out.estimate.seed = config.seed;
    return out;
}

}  // namespace penlevel
