#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hoseeg/ingest.hpp"

namespace hoseeg {

/// Three-cosine triad at f1, f2 and f1 + f2.
struct QpcSpec {
  double f1_hz = 10.0;
  double f2_hz = 15.0;
  double amp = 1.0;
  bool coupled = true;
  /// Noise power relative to the triad power 1.5 * amp^2 (unit amplitude when
  /// amp == 0). +inf disables the noise.
  double snr_db = std::numeric_limits<double>::infinity();
  double duration_s = 1.0;
  double fs_hz = 250.0;
  /// Uncoupled triads draw a fresh third phase every block of this many samples.
  Eigen::Index block_samples = 256;
};

void validate(const QpcSpec& spec);

/// amp * [cos(2 pi f1 t + p1) + cos(2 pi f2 t + p2) + cos(2 pi (f1 + f2) t + p3)] + noise,
/// with p1, p2 uniform per realization and p3 = p1 + p2 when coupled.
Eigen::VectorXd qpc_signal(const QpcSpec& spec, std::uint64_t seed);

/// Standard deviation of the white noise qpc_signal adds.
double qpc_noise_sigma(const QpcSpec& spec);

struct Triad {
  double f1_hz = 10.0;
  double f2_hz = 10.0;
};

struct SynthClassSpec {
  Label label = Label::none;
  std::vector<Triad> triads;  // always phase coupled
  double base_amp = 1.0;      // triad amplitude at unit channel gain
  double noise_sigma = 0.2;   // white noise on every channel
};

/// power: (10, 10) Hz at 2.0; precision: (14, 6) Hz at 1.0; none: noise only.
std::vector<SynthClassSpec> default_class_specs();

/// Per-channel triad gains peaking over the central electrodes (C3 and C4).
std::vector<double> default_channel_gains(const std::vector<std::string>& channels);

struct SynthDatasetSpec {
  std::vector<SynthClassSpec> classes = default_class_specs();
  int trials_per_class = 50;
  std::vector<std::string> channel_names{"Fz", "C3", "Cz", "C4", "Pz", "PO7", "Oz", "PO8"};
  std::vector<double> channel_gains;  // empty: default_channel_gains
  double epoch_seconds = 6.0;
  double fs_hz = 250.0;
};

/// Trials are emitted class by class in the order of `spec.classes`; each trial
/// draws its own phases and noise from a per-trial substream.
EpochSet synth_dataset(const SynthDatasetSpec& spec, std::uint64_t seed);

/// JSON description of the generating spec.
std::string synth_manifest(const SynthDatasetSpec& spec, std::uint64_t seed);

struct SynthSession {
  Recording recording;
  EventLog events;
};

/// Lays the dataset's trials (in shuffled order) into one continuous
/// recording: a noise-only baseline interval, then the epoch, per trial, with
/// observe_start, cue (+3 s) and baseline events logged.
SynthSession synth_session(const SynthDatasetSpec& spec, std::uint64_t seed, double baseline_seconds = 2.0);

}  // namespace hoseeg
