#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "hoseeg/label.hpp"

namespace hoseeg {

/// Continuous multichannel recording, channels x time.
struct Recording {
  std::vector<std::string> channel_names;
  double fs_hz = 0.0;
  Eigen::MatrixXd samples;

  Eigen::Index channels() const { return samples.rows(); }
  Eigen::Index length() const { return samples.cols(); }
};

/// Throws DataError when fs <= 0, the name count disagrees with the rows,
/// there are no channels, or a sample is not finite.
void validate(const Recording& rec);

enum class EventKind { observe_start, cue, baseline_start, baseline_end };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

struct Event {
  std::size_t onset_sample = 0;
  Label label = Label::none;
  EventKind kind = EventKind::observe_start;
};

/// Events in nondecreasing onset order.
using EventLog = std::vector<Event>;

struct Epoch {
  Label label = Label::none;
  Eigen::MatrixXd data;  // channels x L
  double fs_hz = 0.0;
};

struct EpochSet {
  std::vector<Epoch> epochs;
  std::vector<std::string> channel_names;
  double fs_hz = 0.0;

  std::size_t size() const { return epochs.size(); }
  Eigen::Index channels() const { return static_cast<Eigen::Index>(channel_names.size()); }
  Eigen::Index length() const { return epochs.empty() ? 0 : epochs.front().data.cols(); }
  /// Position of `name` in channel_names; throws DataError if absent.
  Eigen::Index channel_index(const std::string& name) const;
};

/// Shape/label/finiteness checks shared by every producer of an EpochSet.
void validate(const EpochSet& set);

inline constexpr double kDefaultEpochSeconds = 6.0;

std::size_t epoch_length(double epoch_seconds, double fs_hz);

/// CSV: `# fs=<Hz>` comment, header `time,<ch1>,...`, one row per sample.
Recording read_recording(const std::filesystem::path& path);
void write_recording(const Recording& rec, const std::filesystem::path& path);

/// CSV with header `onset_sample,label,kind`.
EventLog read_events(const std::filesystem::path& path);
void write_events(const EventLog& log, const std::filesystem::path& path);

/// One epoch per observe_start event: samples [onset, onset + L).
EpochSet epoch_recording(const Recording& rec, const EventLog& log,
                         double epoch_seconds = kDefaultEpochSeconds);

/// Sample range [begin, end) of a logged baseline interval.
struct BaselineWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// For each observe_start event (in order), the latest baseline_start/baseline_end
/// pair that closes at or before the trial onset. Empty when the log holds no
/// baseline intervals; DataError when some trial has none before it.
std::vector<BaselineWindow> trial_baselines(const EventLog& log);

/// CSV with columns trial_id,label,channel,sample_index,value and a `# fs=` line.
/// Values use shortest round-trip formatting so a read back is bit-exact.
void write_epochs(const EpochSet& set, const std::filesystem::path& path);
std::string format_epochs(const EpochSet& set);
EpochSet read_epochs(const std::filesystem::path& path);
EpochSet parse_epochs(std::string_view content);

}  // namespace hoseeg
