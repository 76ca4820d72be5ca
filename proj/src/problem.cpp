#include "penlevel/problem.hpp"

#include <cmath>

#include "penlevel/errors.hpp"

namespace penlevel {

std::string family_name(Family family) {
    switch (family) {
        case Family::Lasso: return "lasso";
        case Family::SqrtLasso: return "sqrt-lasso";
        case Family::PoissonWsf: return "poisson-wsf";
    }
    throw DomainError("unknown family");
}

Family family_from_name(const std::string& name) {
    if (name == "lasso") return Family::Lasso;
    if (name == "sqrt-lasso") return Family::SqrtLasso;
    if (name == "poisson-wsf") return Family::PoissonWsf;
    throw DomainError("unknown family '" + name + "'");
}

ProblemSpec make_spec(Family family, double alpha, double c, double theta) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    if (!(c > 1.0)) throw DomainError("c must exceed 1");
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    if (family != Family::Lasso && theta != 1.0) {
        throw DomainError("theta is fixed at 1 for " + family_name(family));
    }
    return ProblemSpec{family, alpha, c, theta};
}

namespace {

void check_common(const ProblemSpec& spec, const Dataset& dataset, const Eigen::VectorXd& beta) {
    if (beta.size() != dataset.p()) throw DomainError("beta length does not match p");
    if (!beta.allFinite()) throw NonFiniteError("beta has non-finite entries");
    if (spec.family == Family::PoissonWsf && (dataset.Y().array() < 0.0).any()) {
        throw DomainError("poisson-wsf requires nonnegative responses");
    }
}

// Linear predictor with the Poisson exponent guard applied.
Eigen::VectorXd guarded_linpred(const Dataset& dataset, const Eigen::VectorXd& beta) {
    Eigen::VectorXd u = dataset.X() * beta;
    const double worst = u.cwiseAbs().maxCoeff();
    if (worst > kExponentGuard) throw OverflowError(worst);
    return u;
}

double sqrt_lasso_scale(const Dataset& dataset, const Eigen::VectorXd& residual) {
    const double s = residual.norm() / std::sqrt(static_cast<double>(dataset.n()));
    if (s < 1e-12) throw ZeroResidualError();
    return s;
}

}  // namespace

double loss(const ProblemSpec& spec, const Dataset& dataset, const Eigen::VectorXd& beta) {
    check_common(spec, dataset, beta);
    const double dn = static_cast<double>(dataset.n());
    switch (spec.family) {
        case Family::Lasso: {
            return (dataset.Y() - dataset.X() * beta).squaredNorm() / (2.0 * dn);
        }
        case Family::SqrtLasso: {
            return std::sqrt((dataset.Y() - dataset.X() * beta).squaredNorm() / dn);
        }
        case Family::PoissonWsf: {
            const Eigen::VectorXd u = guarded_linpred(dataset, beta);
            const Eigen::ArrayXd half = 0.5 * u.array();
            return 2.0 * (dataset.Y().array() * (-half).exp() + half.exp()).sum() / dn;
        }
    }
    throw DomainError("unknown family");
}

Eigen::VectorXd gradient(const ProblemSpec& spec, const Dataset& dataset,
                         const Eigen::VectorXd& beta) {
    check_common(spec, dataset, beta);
    const double dn = static_cast<double>(dataset.n());
    switch (spec.family) {
        case Family::Lasso: {
            const Eigen::VectorXd r = dataset.Y() - dataset.X() * beta;
            return dataset.X().transpose() * (-r / dn);
        }
        case Family::SqrtLasso: {
            const Eigen::VectorXd r = dataset.Y() - dataset.X() * beta;
            const double scale = sqrt_lasso_scale(dataset, r);
            return dataset.X().transpose() * (-r / (dn * scale));
        }
        case Family::PoissonWsf: {
            const Eigen::VectorXd u = guarded_linpred(dataset, beta);
            const Eigen::ArrayXd half = 0.5 * u.array();
            const Eigen::ArrayXd w = half.exp() - dataset.Y().array() * (-half).exp();
            return dataset.X().transpose() * (w / dn).matrix();
        }
    }
    throw DomainError("unknown family");
}

RowMatrixXd score_vectors(const ProblemSpec& spec, const Dataset& dataset,
                          const Eigen::VectorXd& beta_star) {
    check_common(spec, dataset, beta_star);
    switch (spec.family) {
        case Family::Lasso: {
            const Eigen::VectorXd r = dataset.X() * beta_star - dataset.Y();
            return dataset.X().array().colwise() * r.array();
        }
        case Family::SqrtLasso: {
            Eigen::VectorXd r = dataset.X() * beta_star - dataset.Y();
            const double scale = sqrt_lasso_scale(dataset, r);
            r /= scale;
            return dataset.X().array().colwise() * r.array();
        }
        case Family::PoissonWsf: {
            const Eigen::VectorXd u = guarded_linpred(dataset, beta_star);
            const Eigen::ArrayXd half = 0.5 * u.array();
            const Eigen::ArrayXd w = half.exp() - dataset.Y().array() * (-half).exp();
            return dataset.X().array().colwise() * w;
        }
    }
    throw DomainError("unknown family");
}

}  // namespace penlevel
