#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hoseeg/filter.hpp"
#include "hoseeg/ingest.hpp"

namespace hoseeg {

/// Removes the least-squares line (intercept and slope) from every row.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> detrend_rows(
    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using Row = Eigen::Array<Scalar, 1, Eigen::Dynamic>;
  const Eigen::Index n = x.cols();
  const Row t = Row::LinSpaced(n, Scalar(0), Scalar(n - 1)) - Scalar(n - 1) / Scalar(2);
  const Scalar tt = (t * t).sum();
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(x.rows(), n);
  for (Eigen::Index c = 0; c < x.rows(); ++c) {
    const Row row = x.row(c).array();
    const Scalar mean = row.mean();
    const Scalar slope = tt > Scalar(0) ? (t * (row - mean)).sum() / tt : Scalar(0);
    out.row(c) = (row - mean - slope * t).matrix();
  }
  return out;
}

/// Throws DataError when L < 2.
Epoch detrend(const Epoch& epoch);

Epoch apply_filter(const Epoch& epoch, const SosFilter& filter, bool zero_phase);

/// Subtracts each channel's baseline mean.
Epoch baseline_correct(const Epoch& epoch, const Eigen::Ref<const Eigen::MatrixXd>& baseline);

/// Per-channel (x - mean) / std with the population (1/L) standard deviation.
/// Throws DataError naming the channel index when std <= 1e-12.
Epoch zscore(const Epoch& epoch);

struct IcaOptions {
  int max_iter = 200;
  double tol = 1e-4;
  std::uint64_t seed = 0;
};

/// Sources are `unmixing * whitener * data`; `mixing` maps sources back to channels.
struct IcaModel {
  Eigen::MatrixXd mixing;     // channels x components
  Eigen::MatrixXd unmixing;   // components x channels
  Eigen::MatrixXd whitener;   // channels x channels
  Eigen::VectorXd component_kurtosis;  // excess kurtosis of each recovered source
  int iterations = 0;
  double final_delta = 0.0;

  Eigen::Index components() const { return unmixing.rows(); }
  Eigen::MatrixXd sources(const Eigen::Ref<const Eigen::MatrixXd>& data) const {
    return unmixing * (whitener * data);
  }
};

/// Symmetric FastICA with the tanh (logcosh) contrast on channels x samples data.
IcaModel fit_ica(const Eigen::Ref<const Eigen::MatrixXd>& data, const IcaOptions& options = {});

/// Fits on all epochs concatenated in time.
IcaModel fit_ica(const EpochSet& set, const IcaOptions& options = {});

/// Zeroes the listed source rows and maps back through `mixing`.
Eigen::MatrixXd remove_components(const Eigen::Ref<const Eigen::MatrixXd>& data, const IcaModel& model,
                                  std::span<const int> reject);
EpochSet remove_components(const EpochSet& set, const IcaModel& model, std::span<const int> reject);

struct PreprocessOptions {
  FilterSpec filter;
  bool run_ica = true;
  IcaOptions ica;
  std::vector<int> ica_reject;
};

struct PreprocessResult {
  EpochSet epochs;
  std::optional<IcaModel> ica;
  /// Set when ICA failed to converge but nothing was to be rejected, so the
  /// epochs were passed through unchanged.
  std::string ica_warning;
};

/// detrend -> band-pass -> baseline correction -> z-score -> ICA. `baselines`
/// holds one raw channels x M segment per epoch; each is band-passed with the
/// same filter before its mean is subtracted. An empty span skips the step.
PreprocessResult preprocess(const EpochSet& set, const PreprocessOptions& options,
                            std::span<const Eigen::MatrixXd> baselines = {});

}  // namespace hoseeg
