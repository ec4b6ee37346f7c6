#include "hoseeg/preprocess.hpp"

#include <cmath>
#include <string>

#include "hoseeg/error.hpp"

namespace hoseeg {

Epoch detrend(const Epoch& epoch) {
  if (epoch.data.cols() < 2) throw DataError("detrend needs at least 2 samples");
  return Epoch{epoch.label, detrend_rows(epoch.data), epoch.fs_hz};
}

Epoch apply_filter(const Epoch& epoch, const SosFilter& filter, bool zero_phase) {
  if (epoch.data.cols() <= filtfilt_padding(filter))
    throw DataError("epoch of " + std::to_string(epoch.data.cols()) + " samples is too short for a filter of order " +
                    std::to_string(filter.order()));
  Epoch out{epoch.label, Eigen::MatrixXd(epoch.data.rows(), epoch.data.cols()), epoch.fs_hz};
  for (Eigen::Index c = 0; c < epoch.data.rows(); ++c) {
    const Eigen::VectorXd x = epoch.data.row(c).transpose();
    out.data.row(c) = (zero_phase ? filtfilt(filter, x) : sosfilt(filter, x)).transpose();
  }
  return out;
}

Epoch baseline_correct(const Epoch& epoch, const Eigen::Ref<const Eigen::MatrixXd>& baseline) {
  if (baseline.cols() == 0) throw DataError("empty baseline segment");
  if (baseline.rows() != epoch.data.rows()) throw DataError("baseline channel count does not match epoch");
  const Eigen::VectorXd mean = baseline.rowwise().mean();
  return Epoch{epoch.label, epoch.data.colwise() - mean, epoch.fs_hz};
}

Epoch zscore(const Epoch& epoch) {
  const Eigen::Index n = epoch.data.cols();
  if (n == 0) throw DataError("cannot z-score an empty epoch");
  Epoch out{epoch.label, Eigen::MatrixXd(epoch.data.rows(), n), epoch.fs_hz};
  for (Eigen::Index c = 0; c < epoch.data.rows(); ++c) {
    const Eigen::ArrayXd row = epoch.data.row(c).transpose().array();
    const double mean = row.mean();
    const Eigen::ArrayXd centered = row - mean;
    const double sd = std::sqrt(centered.square().sum() / static_cast<double>(n));
    if (!(sd > 1e-12)) throw DataError("degenerate channel " + std::to_string(c) + ": standard deviation ~ 0");
    out.data.row(c) = (centered / sd).matrix().transpose();
  }
  return out;
}

PreprocessResult preprocess(const EpochSet& set, const PreprocessOptions& options,
                            std::span<const Eigen::MatrixXd> baselines) {
  validate(set);
  if (!baselines.empty() && baselines.size() != set.size())
    throw DataError("need one baseline segment per epoch");
  const SosFilter filter = design_bandpass(options.filter, set.fs_hz);

  PreprocessResult result;
  result.epochs.channel_names = set.channel_names;
  result.epochs.fs_hz = set.fs_hz;
  result.epochs.epochs.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    Epoch e = apply_filter(detrend(set.epochs[i]), filter, options.filter.zero_phase);
    if (!baselines.empty()) {
      const Epoch base = apply_filter(Epoch{e.label, baselines[i], set.fs_hz}, filter, options.filter.zero_phase);
      e = baseline_correct(e, base.data);
    }
    try {
      e = zscore(e);
    } catch (const DataError&) {
      // re-raise naming the channel rather than its index
      for (Eigen::Index c = 0; c < e.data.rows(); ++c) {
        const Eigen::ArrayXd row = e.data.row(c).transpose().array();
        if (std::sqrt((row - row.mean()).square().mean()) <= 1e-12)
          throw DataError("degenerate channel '" + set.channel_names[static_cast<std::size_t>(c)] + "' in trial " +
                          std::to_string(i));
      }
      throw;
    }
    result.epochs.epochs.push_back(std::move(e));
  }

  if (options.run_ica) {
    try {
      result.ica = fit_ica(result.epochs, options.ica);
    } catch (const ConvergenceError& e) {
      if (!options.ica_reject.empty()) throw;
      result.ica_warning = std::string("ICA skipped: ") + e.what();
    }
    if (result.ica && !options.ica_reject.empty())
      result.epochs = remove_components(result.epochs, *result.ica, options.ica_reject);
  } else if (!options.ica_reject.empty()) {
    throw ConfigError("component rejection requires ICA");
  }
  return result;
}

}  // namespace hoseeg
