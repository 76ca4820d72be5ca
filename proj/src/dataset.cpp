#include "penlevel/dataset.hpp"

#include <cmath>
#include <utility>

#include "penlevel/errors.hpp"

namespace penlevel {

Dataset::Dataset(RowMatrixXd X, Eigen::VectorXd Y, bool standardized)
    : X_(std::move(X)), Y_(std::move(Y)), standardized_(standardized) {
    if (X_.rows() < 2 || X_.cols() < 1) {
        throw DomainError("dataset needs n >= 2 and p >= 1");
    }
    if (Y_.size() != X_.rows()) {
        throw DomainError("response length does not match row count");
    }
    if (!X_.allFinite() || !Y_.allFinite()) throw NonFiniteError();
}

void Dataset::validate_standardization() const {
    const double n = static_cast<double>(X_.rows());
    for (Eigen::Index j = 0; j < X_.cols(); ++j) {
        const double mean = X_.col(j).sum() / n;
        const double msq = X_.col(j).squaredNorm() / n;
        if (std::fabs(mean) > 1e-10 || std::fabs(msq - 1.0) > 1e-8) {
            throw NotStandardizedError();
        }
    }
}

Dataset Dataset::row_subset(const std::vector<Eigen::Index>& rows) const {
    RowMatrixXd Xs(static_cast<Eigen::Index>(rows.size()), X_.cols());
    Eigen::VectorXd Ys(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        Xs.row(static_cast<Eigen::Index>(k)) = X_.row(rows[k]);
        Ys(static_cast<Eigen::Index>(k)) = Y_(rows[k]);
    }
    Dataset out(std::move(Xs), std::move(Ys), standardized_);
    out.centers_ = centers_;
    out.scales_ = scales_;
    return out;
}

Dataset standardize(const Dataset& dataset) {
    const Eigen::Index n = dataset.n();
    const Eigen::Index p = dataset.p();
    const double dn = static_cast<double>(n);

    RowMatrixXd X = dataset.X();
    Eigen::VectorXd centers(p), scales(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double mean = X.col(j).sum() / dn;
        X.col(j).array() -= mean;
        const double msq = X.col(j).squaredNorm() / dn;
        if (msq <= 0.0 || !std::isfinite(msq)) throw ConstantColumnError(static_cast<int>(j));
        const double scale = std::sqrt(msq);
        X.col(j) /= scale;
        centers(j) = mean;
        scales(j) = scale;
    }
    Dataset out(std::move(X), dataset.Y(), true);
    out.centers_ = std::move(centers);
    out.scales_ = std::move(scales);
    return out;
}

}  // namespace penlevel
