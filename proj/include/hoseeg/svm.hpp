#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace hoseeg {

struct SvmOptions {
  double c = 1.0;
  /// RBF width; defaults to 1 / (d * var(X)) over all entries of X.
  std::optional<double> gamma;
  double tol = 1e-3;
  long max_iter = 200000;
};

/// One soft-margin RBF machine, f(x) = sum_i coef_i K(sv_i, x) + bias with coef_i = alpha_i y_i.
struct BinaryMachine {
  int positive = 0;  // class id voted for when f > 0
  int negative = 0;
  Eigen::MatrixXd support_vectors;
  Eigen::VectorXd alpha;          // per support vector, in (0, C]
  Eigen::VectorXd coef;           // alpha_i * y_i
  std::vector<Eigen::Index> support_indices;  // rows of the training subset
  double bias = 0.0;
  long iterations = 0;

  Eigen::VectorXd decision(const Eigen::Ref<const Eigen::MatrixXd>& x, double gamma) const;
};

struct SvmModel {
  std::vector<int> classes;
  double gamma = 1.0;
  double c = 1.0;
  std::vector<BinaryMachine> machines;  // one per class pair (a < b), a positive
};

Eigen::MatrixXd rbf_kernel(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b,
                           double gamma);

/// SMO on the dual with maximal-violating-pair, second-order working-set
/// selection. `y` holds +1 / -1. Stops once every KKT violation is within
/// `tol`; throws ConvergenceError (carrying the worst violation) after
/// max_iter updates, DataError if the solution has zero margin.
BinaryMachine svm_fit_binary(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXi>& y,
                             double gamma, double c, double tol, long max_iter);

/// Largest KKT violation of `m` on its training data (y in {+1, -1}).
double max_kkt_violation(const BinaryMachine& m, const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::VectorXi>& y, double gamma, double c);

/// One-vs-one over the sorted class ids.
SvmModel svm_fit(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXi>& y,
                 const SvmOptions& options = {});

/// Majority vote over machines; ties go to the largest summed decision value.
Eigen::VectorXi svm_predict(const SvmModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x);

}  // namespace hoseeg
