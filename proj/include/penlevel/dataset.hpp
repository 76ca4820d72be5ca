#pragma once

#include <Eigen/Core>
#include <vector>

namespace penlevel {

// Observations are rows; score and gradient sweeps iterate rows, so the
// design matrix is stored row-major.
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Design matrix X (n x p) plus response Y. Immutable after construction;
// safe to share across threads.
class Dataset {
  public:
    // Validates shapes and finiteness only. The column-moment checks live in
    // validate_standardization(); CV training folds and synthetic test
    // fixtures set `standardized` without re-deriving it.
    Dataset(RowMatrixXd X, Eigen::VectorXd Y, bool standardized = false);

    Eigen::Index n() const { return X_.rows(); }
    Eigen::Index p() const { return X_.cols(); }
    const RowMatrixXd& X() const { return X_; }
    const Eigen::VectorXd& Y() const { return Y_; }
    bool standardized() const { return standardized_; }

    // Per-column centers/scales recorded by standardize(); empty otherwise.
    const Eigen::VectorXd& centers() const { return centers_; }
    const Eigen::VectorXd& scales() const { return scales_; }

    // Throws NotStandardizedError unless every column has |mean| <= 1e-10
    // and |mean square - 1| <= 1e-8.
    void validate_standardization() const;

    // New dataset from the given observation rows (same columns, flag and
    // centers/scales carried over).
    Dataset row_subset(const std::vector<Eigen::Index>& rows) const;

  private:
    friend Dataset standardize(const Dataset&);
    RowMatrixXd X_;
    Eigen::VectorXd Y_;
    bool standardized_ = false;
    Eigen::VectorXd centers_;
    Eigen::VectorXd scales_;
};

// Centers each column and scales it to unit mean square (biased 1/n
// convention). Y passes through. Throws ConstantColumnError on a
// zero-variance column, NonFiniteError on bad input.
Dataset standardize(const Dataset& dataset);

}  // namespace penlevel
