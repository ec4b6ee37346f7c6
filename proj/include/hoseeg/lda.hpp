#pragma once

#include <Eigen/Dense>
#include <vector>

namespace hoseeg {

/// Gaussian discriminant with a shared, ridge-regularized covariance.
struct LdaModel {
  std::vector<int> classes;           // sorted class ids
  Eigen::MatrixXd class_means;        // classes x d
  Eigen::LLT<Eigen::MatrixXd> covariance;  // factor of pooled covariance + ridge
  Eigen::VectorXd log_priors;

  /// classes x n discriminant scores.
  Eigen::MatrixXd scores(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  /// Sigma^-1 (mu_b - mu_a) for the class ids a, b.
  Eigen::VectorXd direction(int a, int b) const;
};

/// Ridge added to the pooled covariance is `ridge * trace / d` times identity.
LdaModel lda_fit(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXi>& y,
                 double ridge = 1e-4);
Eigen::VectorXi lda_predict(const LdaModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x);

}  // namespace hoseeg
