#include "hoseeg/lda.hpp"

#include <algorithm>
#include <cmath>

#include "hoseeg/error.hpp"

namespace hoseeg {

LdaModel lda_fit(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXi>& y,
                 double ridge) {
  if (x.rows() != y.size()) throw DataError("LDA: row count does not match label count");
  LdaModel m;
  m.classes.assign(y.data(), y.data() + y.size());
  std::sort(m.classes.begin(), m.classes.end());
  m.classes.erase(std::unique(m.classes.begin(), m.classes.end()), m.classes.end());
  const auto c = static_cast<Eigen::Index>(m.classes.size());
  if (c < 2) throw DataError("LDA needs at least 2 classes");
  const Eigen::Index n = x.rows(), d = x.cols();
  if (n <= c) throw DataError("LDA needs more samples than classes");

  m.class_means = Eigen::MatrixXd::Zero(c, d);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(c);
  auto index_of = [&](int label) {
    return static_cast<Eigen::Index>(std::lower_bound(m.classes.begin(), m.classes.end(), label) - m.classes.begin());
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index k = index_of(y(i));
    m.class_means.row(k) += x.row(i);
    counts(k) += 1.0;
  }
  m.class_means.array().colwise() /= counts.array();

  Eigen::MatrixXd centered(n, d);
  for (Eigen::Index i = 0; i < n; ++i) centered.row(i) = x.row(i) - m.class_means.row(index_of(y(i)));
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - c);
  const double trace = cov.trace();
  const double scale = trace > 0.0 ? trace / static_cast<double>(d) : 1.0;
  cov.diagonal().array() += ridge * scale;
  m.covariance.compute(cov);
  if (m.covariance.info() != Eigen::Success) throw DataError("LDA: regularized covariance is not positive definite");
  m.log_priors = (counts / static_cast<double>(n)).array().log();
  return m;
}

Eigen::MatrixXd LdaModel::scores(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  const Eigen::MatrixXd inv_mu = covariance.solve(class_means.transpose());  // d x classes
  Eigen::MatrixXd s = inv_mu.transpose() * x.transpose();                   // classes x n
  for (Eigen::Index k = 0; k < s.rows(); ++k)
    s.row(k).array() += -0.5 * class_means.row(k).dot(inv_mu.col(k)) + log_priors(k);
  return s;
}

Eigen::VectorXd LdaModel::direction(int a, int b) const {
  auto find = [&](int label) {
    auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label) throw DataError("LDA: unknown class id");
    return static_cast<Eigen::Index>(it - classes.begin());
  };
  return covariance.solve((class_means.row(find(b)) - class_means.row(find(a))).transpose());
}

Eigen::VectorXi lda_predict(const LdaModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const Eigen::MatrixXd s = model.scores(x);
  Eigen::VectorXi out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best = 0;
    s.col(i).maxCoeff(&best);
    out(i) = model.classes[static_cast<std::size_t>(best)];
  }
  return out;
}

}  // namespace hoseeg
