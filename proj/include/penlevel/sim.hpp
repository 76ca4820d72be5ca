#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "penlevel/cv.hpp"
#include "penlevel/dataset.hpp"
#include "penlevel/penalty.hpp"
#include "penlevel/problem.hpp"
#include "penlevel/solvers.hpp"

namespace penlevel {

struct SimDesign {
    Eigen::Index n = 200;
    Eigen::Index p = 1000;
    double rho = 0.5;        // AR(1) correlation of the latent design
    int sparsity = 10;       // leading nonzero coefficients
    Family family = Family::Lasso;
    double sigma = 1.0;      // Gaussian noise scale; unused for Poisson
    int replications = 100;
    std::uint64_t base_seed = 20240801;
    bool redraw_beta = true;  // fresh coefficients each replication
};

struct ExperimentConfig {
    double alpha = 0.1;
    double c = 1.01;
    std::vector<Method> methods = {Method::Mdt, Method::SteinMc, Method::Cv};
    int stein_draws = 1000;
    CvConfig cv;
    SolverConfig solver;
    int threads = 1;  // 0 resolves to hardware concurrency
};

struct RepRecord {
    int rep = 0;
    Method method = Method::Mdt;
    double lambda = 0.0;
    double prediction_error = 0.0;
    bool coverage = false;
    double select_seconds = 0.0;
    double fit_seconds = 0.0;
    bool failed = false;
};

struct MethodSummary {
    Method method = Method::Mdt;
    double mean_lambda = 0.0;
    double mean_prediction_error = 0.0;
    double median_prediction_error = 0.0;
    double coverage_rate = 0.0;
    double total_select_seconds = 0.0;
    double total_fit_seconds = 0.0;
    int failures = 0;
};

struct ExperimentReport {
    SimDesign design;
    ExperimentConfig config;
    std::vector<RepRecord> records;
    std::vector<MethodSummary> summaries;

    std::string summary_json() const;
    void write_records_csv(const std::string& path) const;
};

// Seed-splitting rule: replication r uses rep_seed = base_seed ^ mix64(r),
// and each consumer below draws from substream(rep_seed, tag). The tags are
// part of the reproducibility contract.
inline constexpr std::uint64_t kSeedTagDesign = 0x586d6174ULL;
inline constexpr std::uint64_t kSeedTagBeta = 0x62657461ULL;
inline constexpr std::uint64_t kSeedTagNoise = 0x6e6f6973ULL;
inline constexpr std::uint64_t kSeedTagStein = 0x7374656eULL;
inline constexpr std::uint64_t kSeedTagFolds = 0x6b666c64ULL;

// Raw AR(1) rows: x_1 = z_1, x_j = rho*x_{j-1} + sqrt(1-rho^2)*z_j with
// iid standard normal z, so cor(x_j, x_k) = rho^{|j-k|}. Not standardized.
// Requires 0 <= rho < 1.
RowMatrixXd gen_design(Eigen::Index n, Eigen::Index p, double rho, std::uint64_t seed);

// First `sparsity` coordinates uniform on [-1, 1], redrawn while any
// magnitude falls below 1e-6; the rest are zero.
Eigen::VectorXd gen_beta(Eigen::Index p, int sparsity, std::uint64_t seed);

// Gaussian: y = X beta + sigma*eps. Poisson: y_i ~ Poisson(exp(x_i' beta)).
Eigen::VectorXd gen_response(const RowMatrixXd& X, const Eigen::VectorXd& beta, Family family,
                             double sigma, std::uint64_t seed);

// Root mean squared in-sample regression error ||X (b - b*)|| / sqrt(n).
double prediction_error(const RowMatrixXd& X, const Eigen::VectorXd& beta_hat,
                        const Eigen::VectorXd& beta_star);

ExperimentReport run_experiment(const SimDesign& design, const ExperimentConfig& config);

// JSON round trip for config files; unknown keys are rejected.
std::pair<SimDesign, ExperimentConfig> parse_experiment_json(const std::string& text);
std::string experiment_json(const SimDesign& design, const ExperimentConfig& config);

}  // namespace penlevel
