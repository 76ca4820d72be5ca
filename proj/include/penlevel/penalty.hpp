#pragma once

#include <cstdint>
#include <string>

#include "penlevel/dataset.hpp"
#include "penlevel/problem.hpp"

namespace penlevel {

enum class Method { Mdt, SteinMc, Cv };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

struct PenaltyEstimate {
    double lambda = 0.0;
    Method method = Method::Mdt;
    double quantile = 0.0;     // Phi^{-1}(1-alpha/2p) or the MC z_{1-alpha}; 0 for CV
    int draws = 0;             // 0 unless Monte Carlo
    std::uint64_t seed = 0;    // Monte Carlo / fold-shuffle seed

    std::string to_json() const;
};

// Normal-quantile estimate c * theta * Phi^{-1}(1 - alpha/2p) / sqrt(n).
// Deterministic.
PenaltyEstimate lambda_mdt(const ProblemSpec& spec, Eigen::Index n, Eigen::Index p);

// Gaussian-multiplier Monte Carlo estimate c * z_{1-alpha} / sqrt(n), where
// z_{1-alpha} is the ceil((1-alpha)*draws)-th order statistic of
// T_b = max_j |(1/sqrt n) sum_i m_ij(e)| over seeded multiplier draws, with
//   Lasso       m_ij = theta * x_ij * e_i
//   SqrtLasso   m_ij = x_ij * e_i / sqrt(sum_k e_k^2 / n)
//   PoissonWsf  m_ij = x_ij * e_i
// Bit-reproducible for fixed (seed, draws, dataset), independent of threads.
PenaltyEstimate lambda_stein(const ProblemSpec& spec, const Dataset& dataset, int draws,
                             std::uint64_t seed, int threads = 1);

// True iff c * ||gradient(spec, dataset, beta_star)||_inf <= lambda.
bool coverage_check(const ProblemSpec& spec, const Dataset& dataset,
                    const Eigen::VectorXd& beta_star, double lambda);

}  // namespace penlevel
