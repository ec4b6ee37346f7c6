#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "hoseeg/error.hpp"
#include "hoseeg/preprocess.hpp"
#include "hoseeg/random.hpp"

namespace hoseeg {

namespace {

// W <- (W W^T)^{-1/2} W
Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w * w.transpose());
  const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose() * w;
}

double excess_kurtosis(const Eigen::Ref<const Eigen::RowVectorXd>& s) {
  const Eigen::ArrayXd c = s.transpose().array() - s.mean();
  const double m2 = c.square().mean();
  if (m2 <= 0.0) return 0.0;
  return c.square().square().mean() / (m2 * m2) - 3.0;
}

Eigen::MatrixXd concatenate(const EpochSet& set) {
  validate(set);
  const Eigen::Index len = set.length();
  Eigen::MatrixXd data(set.channels(), len * static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i)
    data.middleCols(static_cast<Eigen::Index>(i) * len, len) = set.epochs[i].data;
  return data;
}

}  // namespace

IcaModel fit_ica(const Eigen::Ref<const Eigen::MatrixXd>& data, const IcaOptions& options) {
  const Eigen::Index channels = data.rows();
  const Eigen::Index samples = data.cols();
  if (channels < 1) throw DataError("ICA needs at least one channel");
  if (samples < 10 * channels * channels)
    throw DataError("ICA needs at least 10 x channels^2 samples (have " + std::to_string(samples) + ")");
  if (options.max_iter < 1 || !(options.tol > 0.0)) throw ConfigError("ICA max_iter and tol must be positive");

  const Eigen::VectorXd mean = data.rowwise().mean();
  const Eigen::MatrixXd centered = data.colwise() - mean;
  const Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(samples);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd d = eig.eigenvalues();
  if (!(d.minCoeff() > 1e-10 * d.maxCoeff()))
    throw DataError("channel covariance is rank deficient; ICA cannot whiten");
  const Eigen::MatrixXd& e = eig.eigenvectors();

  IcaModel model;
  model.whitener = d.cwiseSqrt().cwiseInverse().asDiagonal() * e.transpose();
  const Eigen::MatrixXd z = model.whitener * centered;

  Rng rng = substream(options.seed, "ica");
  std::normal_distribution<double> normal;
  Eigen::MatrixXd w(channels, channels);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = normal(rng);
  w = symmetric_decorrelation(w);

  const double inv_n = 1.0 / static_cast<double>(samples);
  double delta = 0.0;
  bool converged = false;
  int it = 0;
  while (it < options.max_iter) {
    ++it;
    // tanh through the vectorized exp: 1 - 2 / (e^{2u} + 1)
    const Eigen::ArrayXXd g = 1.0 - 2.0 / ((2.0 * (w * z).array()).exp() + 1.0);
    const Eigen::VectorXd g_prime = (1.0 - g.square()).rowwise().mean();
    Eigen::MatrixXd w_next = g.matrix() * z.transpose() * inv_n - g_prime.asDiagonal() * w;
    w_next = symmetric_decorrelation(w_next);
    // rows are unit vectors defined up to sign; measure how far each one turned
    delta = (1.0 - (w_next * w.transpose()).diagonal().cwiseAbs().array()).abs().maxCoeff();
    w = std::move(w_next);
    if (delta < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("FastICA did not converge in " + std::to_string(options.max_iter) +
                                             " iterations", delta);

  model.unmixing = w;
  model.mixing = e * d.cwiseSqrt().asDiagonal() * w.transpose();
  model.iterations = it;
  model.final_delta = delta;
  const Eigen::MatrixXd sources = model.sources(data);
  model.component_kurtosis.resize(channels);
  for (Eigen::Index i = 0; i < channels; ++i) model.component_kurtosis(i) = excess_kurtosis(sources.row(i));
  return model;
}

IcaModel fit_ica(const EpochSet& set, const IcaOptions& options) { return fit_ica(concatenate(set), options); }

Eigen::MatrixXd remove_components(const Eigen::Ref<const Eigen::MatrixXd>& data, const IcaModel& model,
                                  std::span<const int> reject) {
  if (data.rows() != model.whitener.cols()) throw DataError("data channel count does not match the ICA model");
  Eigen::MatrixXd sources = model.sources(data);
  for (int idx : reject) {
    if (idx < 0 || idx >= model.components())
      throw ConfigError("ICA component index " + std::to_string(idx) + " out of range [0, " +
                        std::to_string(model.components()) + ")");
    sources.row(idx).setZero();
  }
  return model.mixing * sources;
}

EpochSet remove_components(const EpochSet& set, const IcaModel& model, std::span<const int> reject) {
  EpochSet out = set;
  for (Epoch& e : out.epochs) e.data = remove_components(e.data, model, reject);
  return out;
}

}  // namespace hoseeg
