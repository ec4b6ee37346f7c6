#include "hoseeg/standardizer.hpp"

#include "hoseeg/error.hpp"

namespace hoseeg {

Standardizer fit_standardizer(const Eigen::Ref<const Eigen::MatrixXd>& train) {
  if (train.rows() < 2) throw DataError("standardizer needs at least 2 training rows");
  Standardizer s;
  s.means = train.colwise().mean();
  const Eigen::MatrixXd centered = train.rowwise() - s.means;
  s.stds = (centered.colwise().squaredNorm() / static_cast<double>(train.rows())).cwiseSqrt();
  for (Eigen::Index j = 0; j < s.stds.size(); ++j)
    if (!(s.stds(j) > 1e-12)) s.stds(j) = 1.0;
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::Ref<const Eigen::MatrixXd>& rows) const {
  if (rows.cols() != means.size()) throw DataError("standardizer width does not match rows");
  return (rows.rowwise() - means).array().rowwise() / stds.array();
}

}  // namespace hoseeg
