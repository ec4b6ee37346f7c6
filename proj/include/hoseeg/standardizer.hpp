#pragma once

#include <Eigen/Dense>

namespace hoseeg {

/// Per-feature centering and scaling with statistics from training rows only.
struct Standardizer {
  Eigen::RowVectorXd means;
  Eigen::RowVectorXd stds;  // population std; columns with std <= 1e-12 use 1

  Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& rows) const;
};

/// Throws DataError with fewer than 2 rows.
Standardizer fit_standardizer(const Eigen::Ref<const Eigen::MatrixXd>& train);

}  // namespace hoseeg
