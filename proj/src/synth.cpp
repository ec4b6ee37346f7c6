#include "hoseeg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hoseeg/error.hpp"
#include "hoseeg/random.hpp"
#include <json.hpp>

namespace hoseeg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

void validate(const QpcSpec& spec) {
  if (!(spec.f1_hz > 0.0) || !(spec.f2_hz > 0.0)) throw ConfigError("triad frequencies must be positive");
  if (!(spec.f1_hz + spec.f2_hz < spec.fs_hz / 2.0)) throw ConfigError("f1 + f2 must lie below fs/2");
  if (!(spec.amp >= 0.0)) throw ConfigError("triad amplitude must be non-negative");
  if (!(spec.duration_s > 0.0) || !(spec.fs_hz > 0.0)) throw ConfigError("duration and fs must be positive");
  if (spec.block_samples < 1) throw ConfigError("phase block must hold at least one sample");
}

double qpc_noise_sigma(const QpcSpec& spec) {
  if (std::isinf(spec.snr_db) && spec.snr_db > 0) return 0.0;
  const double ref = spec.amp > 0.0 ? spec.amp : 1.0;
  const double signal_power = 1.5 * ref * ref;
  return std::sqrt(signal_power / std::pow(10.0, spec.snr_db / 10.0));
}

Eigen::VectorXd qpc_signal(const QpcSpec& spec, std::uint64_t seed) {
  validate(spec);
  const auto n = static_cast<Eigen::Index>(std::llround(spec.duration_s * spec.fs_hz));
  Rng rng = substream(seed, "qpc");
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double p1 = phase(rng), p2 = phase(rng);
  const double f3 = spec.f1_hz + spec.f2_hz;

  Eigen::VectorXd x(n);
  double p3 = p1 + p2;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!spec.coupled && i % spec.block_samples == 0) p3 = phase(rng);
    const double t = static_cast<double>(i) / spec.fs_hz;
    x(i) = spec.amp * (std::cos(kTwoPi * spec.f1_hz * t + p1) + std::cos(kTwoPi * spec.f2_hz * t + p2) +
                       std::cos(kTwoPi * f3 * t + p3));
  }
  const double sigma = qpc_noise_sigma(spec);
  if (sigma > 0.0) {
    Rng noise_rng = substream(seed, "qpc-noise");
    std::normal_distribution<double> noise(0.0, sigma);
    for (Eigen::Index i = 0; i < n; ++i) x(i) += noise(noise_rng);
  }
  return x;
}

std::vector<SynthClassSpec> default_class_specs() {
  return {
      SynthClassSpec{Label::power, {Triad{10.0, 10.0}}, 2.0, 0.2},
      SynthClassSpec{Label::precision, {Triad{14.0, 6.0}}, 1.0, 0.2},
      SynthClassSpec{Label::none, {}, 0.0, 0.2},
  };
}

std::vector<double> default_channel_gains(const std::vector<std::string>& channels) {
  std::vector<double> gains;
  for (const auto& ch : channels) {
    double g = 0.3;
    if (ch == "C3" || ch == "C4") g = 1.0;
    else if (ch == "Cz") g = 0.7;
    else if (ch == "Fz" || ch == "Pz") g = 0.5;
    else if (ch == "PO7" || ch == "PO8") g = 0.35;
    else if (ch == "Oz") g = 0.3;
    gains.push_back(g);
  }
  return gains;
}

namespace {

void check(const SynthDatasetSpec& spec) {
  if (spec.classes.empty()) throw ConfigError("synthetic dataset needs at least one class");
  if (spec.trials_per_class < 1) throw ConfigError("trials_per_class must be >= 1");
  if (spec.channel_names.empty()) throw ConfigError("synthetic dataset needs at least one channel");
  if (!spec.channel_gains.empty() && spec.channel_gains.size() != spec.channel_names.size())
    throw ConfigError("channel_gains must match channel_names");
  if (!(spec.fs_hz > 0.0) || !(spec.epoch_seconds > 0.0)) throw ConfigError("fs and epoch length must be positive");
  for (const auto& c : spec.classes)
    for (const auto& t : c.triads)
      if (!(t.f1_hz > 0.0 && t.f2_hz > 0.0 && t.f1_hz + t.f2_hz < spec.fs_hz / 2.0))
        throw ConfigError("triad frequencies must be positive with f1 + f2 < fs/2");
}

Eigen::MatrixXd synth_trial(const SynthClassSpec& cls, const std::vector<double>& gains, Eigen::Index length,
                            double fs, Rng& rng) {
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::normal_distribution<double> noise(0.0, 1.0);
  Eigen::RowVectorXd source = Eigen::RowVectorXd::Zero(length);
  for (const Triad& t : cls.triads) {
    const double p1 = phase(rng), p2 = phase(rng);
    for (Eigen::Index i = 0; i < length; ++i) {
      const double s = static_cast<double>(i) / fs;
      source(i) += cls.base_amp * (std::cos(kTwoPi * t.f1_hz * s + p1) + std::cos(kTwoPi * t.f2_hz * s + p2) +
                                   std::cos(kTwoPi * (t.f1_hz + t.f2_hz) * s + p1 + p2));
    }
  }
  const auto channels = static_cast<Eigen::Index>(gains.size());
  Eigen::MatrixXd data(channels, length);
  for (Eigen::Index c = 0; c < channels; ++c) {
    data.row(c) = gains[static_cast<std::size_t>(c)] * source;
    for (Eigen::Index i = 0; i < length; ++i) data(c, i) += cls.noise_sigma * noise(rng);
  }
  return data;
}

}  // namespace

EpochSet synth_dataset(const SynthDatasetSpec& spec, std::uint64_t seed) {
  check(spec);
  const auto gains = spec.channel_gains.empty() ? default_channel_gains(spec.channel_names) : spec.channel_gains;
  const auto length = static_cast<Eigen::Index>(epoch_length(spec.epoch_seconds, spec.fs_hz));
  EpochSet set;
  set.channel_names = spec.channel_names;
  set.fs_hz = spec.fs_hz;
  std::uint64_t trial = 0;
  for (const SynthClassSpec& cls : spec.classes)
    for (int i = 0; i < spec.trials_per_class; ++i, ++trial) {
      Rng rng = substream(seed, "trial", trial);
      set.epochs.push_back(Epoch{cls.label, synth_trial(cls, gains, length, spec.fs_hz, rng), spec.fs_hz});
    }
  return set;
}

std::string synth_manifest(const SynthDatasetSpec& spec, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["generator"] = "hoseeg synth_dataset";
  j["seed"] = seed;
  j["fs_hz"] = spec.fs_hz;
  j["epoch_seconds"] = spec.epoch_seconds;
  j["trials_per_class"] = spec.trials_per_class;
  j["channels"] = spec.channel_names;
  j["channel_gains"] = spec.channel_gains.empty() ? default_channel_gains(spec.channel_names) : spec.channel_gains;
  nlohmann::ordered_json classes = nlohmann::ordered_json::array();
  for (const auto& c : spec.classes) {
    nlohmann::ordered_json cj;
    cj["label"] = std::string(to_string(c.label));
    cj["base_amp"] = c.base_amp;
    cj["noise_sigma"] = c.noise_sigma;
    cj["triads"] = nlohmann::ordered_json::array();
    for (const auto& t : c.triads) cj["triads"].push_back({{"f1_hz", t.f1_hz}, {"f2_hz", t.f2_hz}, {"coupled", true}});
    classes.push_back(cj);
  }
  j["classes"] = classes;
  return j.dump(2) + "\n";
}

SynthSession synth_session(const SynthDatasetSpec& spec, std::uint64_t seed, double baseline_seconds) {
  const EpochSet set = synth_dataset(spec, seed);
  const auto base_len = static_cast<Eigen::Index>(epoch_length(baseline_seconds, spec.fs_hz));
  const Eigen::Index len = set.length();
  const auto cue_offset = static_cast<std::size_t>(std::llround(3.0 * spec.fs_hz));

  std::vector<std::size_t> order(set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = substream(seed, "session-order");
  std::shuffle(order.begin(), order.end(), rng);

  SynthSession s;
  s.recording.channel_names = set.channel_names;
  s.recording.fs_hz = spec.fs_hz;
  s.recording.samples.resize(set.channels(), static_cast<Eigen::Index>(order.size()) * (base_len + len));
  Rng noise_rng = substream(seed, "session-baseline");
  std::normal_distribution<double> noise(0.0, 1.0);
  double sigma = spec.classes.front().noise_sigma;
  Eigen::Index at = 0;
  for (std::size_t idx : order) {
    const Epoch& e = set.epochs[idx];
    for (Eigen::Index c = 0; c < set.channels(); ++c)
      for (Eigen::Index i = 0; i < base_len; ++i) s.recording.samples(c, at + i) = sigma * noise(noise_rng);
    const auto b0 = static_cast<std::size_t>(at);
    s.events.push_back(Event{b0, e.label, EventKind::baseline_start});
    at += base_len;
    const auto onset = static_cast<std::size_t>(at);
    s.events.push_back(Event{onset, e.label, EventKind::baseline_end});
    s.events.push_back(Event{onset, e.label, EventKind::observe_start});
    if (cue_offset < static_cast<std::size_t>(len)) s.events.push_back(Event{onset + cue_offset, e.label, EventKind::cue});
    s.recording.samples.middleCols(at, len) = e.data;
    at += len;
  }
  return s;
}

}  // namespace hoseeg
