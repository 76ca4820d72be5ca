#pragma once

#include <Eigen/Core>
#include <string>

#include "penlevel/dataset.hpp"

namespace penlevel {

enum class Family { Lasso, SqrtLasso, PoissonWsf };

std::string family_name(Family family);
Family family_from_name(const std::string& name);

// |x_i'beta| above this raises OverflowError for the Poisson weighted-score
// family instead of returning inf; keeps line searches well-defined.
inline constexpr double kExponentGuard = 500.0;

// Problem family plus the knobs of the penalty estimators. theta is the
// known noise scale: sigma for Lasso, pinned to 1 for the other families.
struct ProblemSpec {
    Family family = Family::Lasso;
    double alpha = 0.1;
    double c = 1.01;
    double theta = 1.0;
};

// Throws DomainError unless 0<alpha<1, c>1, theta>0, and theta==1 for the
// families whose score is scale-free.
ProblemSpec make_spec(Family family, double alpha = 0.1, double c = 1.01, double theta = 1.0);

// L(beta) for the family:
//   Lasso       (1/2n) sum (y_i - x_i'beta)^2
//   SqrtLasso   sqrt((1/n) sum (y_i - x_i'beta)^2)
//   PoissonWsf  (2/n) sum (y_i e^{-x_i'beta/2} + e^{x_i'beta/2})
double loss(const ProblemSpec& spec, const Dataset& dataset, const Eigen::VectorXd& beta);

// Gradient of the loss at beta. SqrtLasso throws ZeroResidualError on an
// exact fit; PoissonWsf throws OverflowError past the exponent guard.
Eigen::VectorXd gradient(const ProblemSpec& spec, const Dataset& dataset,
                         const Eigen::VectorXd& beta);

// Per-observation score rows W_i with (1/n) sum_i W_i == gradient:
//   Lasso       x_i (x_i'b - y_i)
//   SqrtLasso   x_i (x_i'b - y_i) / sqrt(sum_k (y_k - x_k'b)^2 / n)
//   PoissonWsf  -x_i (y_i - e^{x_i'b}) / sqrt(e^{x_i'b})
RowMatrixXd score_vectors(const ProblemSpec& spec, const Dataset& dataset,
                          const Eigen::VectorXd& beta_star);

}  // namespace penlevel
