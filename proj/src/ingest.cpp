#include "hoseeg/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hoseeg/error.hpp"
#include "hoseeg/text_io.hpp"

namespace hoseeg {

namespace {

double parse_fs(const std::string& value, std::size_t line) {
  auto fs = text::parse_double(value);
  if (!fs || !std::isfinite(*fs) || *fs <= 0.0) throw ParseError("invalid sampling rate '" + value + "'", line);
  return *fs;
}

double parse_finite(std::string_view field, std::size_t line, std::size_t column) {
  auto v = text::parse_double(field);
  if (!v) throw ParseError("non-numeric cell '" + std::string(field) + "'", line, column);
  if (!std::isfinite(*v)) throw ParseError("non-finite cell '" + std::string(field) + "'", line, column);
  return *v;
}

}  // namespace

Eigen::Index EpochSet::channel_index(const std::string& name) const {
  auto it = std::find(channel_names.begin(), channel_names.end(), name);
  if (it == channel_names.end()) throw DataError("unknown channel '" + name + "'");
  return static_cast<Eigen::Index>(it - channel_names.begin());
}

void validate(const Recording& rec) {
  if (!(rec.fs_hz > 0.0) || !std::isfinite(rec.fs_hz)) throw DataError("sampling rate must be positive");
  if (rec.samples.rows() < 1) throw DataError("recording has no channels");
  if (static_cast<std::size_t>(rec.samples.rows()) != rec.channel_names.size())
    throw DataError("channel name count does not match sample rows");
  if (!rec.samples.allFinite()) throw DataError("recording contains non-finite samples");
}

void validate(const EpochSet& set) {
  if (set.epochs.empty()) throw DataError("no trials");
  if (!(set.fs_hz > 0.0)) throw DataError("sampling rate must be positive");
  if (set.channel_names.empty()) throw DataError("epoch set has no channels");
  std::set<std::string> unique(set.channel_names.begin(), set.channel_names.end());
  if (unique.size() != set.channel_names.size()) throw DataError("duplicate channel names");
  const Eigen::Index length = set.epochs.front().data.cols();
  for (std::size_t i = 0; i < set.epochs.size(); ++i) {
    const Epoch& e = set.epochs[i];
    if (e.data.rows() != set.channels() || e.data.cols() != length || e.fs_hz != set.fs_hz)
      throw DataError("epoch " + std::to_string(i) + " does not match the set's shape");
    if (!e.data.allFinite()) throw DataError("epoch " + std::to_string(i) + " contains non-finite samples");
  }
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::observe_start: return "observe_start";
    case EventKind::cue: return "cue";
    case EventKind::baseline_start: return "baseline_start";
    case EventKind::baseline_end: return "baseline_end";
  }
  return "?";
}

EventKind parse_event_kind(std::string_view text) {
  for (EventKind k : {EventKind::observe_start, EventKind::cue, EventKind::baseline_start, EventKind::baseline_end})
    if (text == to_string(k)) return k;
  throw ParseError("unknown event kind '" + std::string(text) + "'");
}

std::size_t epoch_length(double epoch_seconds, double fs_hz) {
  if (!(epoch_seconds > 0.0) || !(fs_hz > 0.0)) throw DataError("epoch length and sampling rate must be positive");
  return static_cast<std::size_t>(std::llround(epoch_seconds * fs_hz));
}

Recording read_recording(const std::filesystem::path& path) {
  const std::string content = text::read_file(path);
  text::LineReader reader(content);
  std::string_view line;
  Recording rec;
  std::optional<double> fs;
  bool have_header = false;
  std::vector<double> values;
  double last_time = 0.0;
  std::size_t rows = 0;

  while (reader.next(line)) {
    const std::size_t ln = reader.line_number();
    if (text::trim(line).empty()) continue;
    if (text::trim(line).front() == '#') {
      if (auto meta = text::parse_meta(line); meta && meta->first == "fs") fs = parse_fs(meta->second, ln);
      continue;
    }
    auto fields = text::split(line);
    if (!have_header) {
      if (text::trim(fields.front()) != "time" || fields.size() < 2)
        throw ParseError("header must be 'time,<ch1>,...'", ln);
      for (std::size_t i = 1; i < fields.size(); ++i) rec.channel_names.emplace_back(text::trim(fields[i]));
      have_header = true;
      continue;
    }
    if (fields.size() != rec.channel_names.size() + 1)
      throw ParseError("expected " + std::to_string(rec.channel_names.size() + 1) + " fields, found " +
                           std::to_string(fields.size()),
                       ln);
    const double t = parse_finite(fields[0], ln, 1);
    if (rows > 0 && !(t > last_time)) throw ParseError("time column is not strictly increasing", ln, 1);
    last_time = t;
    for (std::size_t i = 1; i < fields.size(); ++i) values.push_back(parse_finite(fields[i], ln, i + 1));
    ++rows;
  }
  if (!fs) throw ParseError("missing '# fs=<Hz>' metadata line");
  if (!have_header) throw ParseError("missing header row");
  if (rows == 0) throw ParseError("recording has no samples");

  rec.fs_hz = *fs;
  const auto channels = static_cast<Eigen::Index>(rec.channel_names.size());
  rec.samples = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                    values.data(), static_cast<Eigen::Index>(rows), channels)
                    .transpose();
  validate(rec);
  return rec;
}

void write_recording(const Recording& rec, const std::filesystem::path& path) {
  validate(rec);
  std::string out = "# fs=";
  text::append_number(out, rec.fs_hz);
  out += "\ntime";
  for (const auto& name : rec.channel_names) out += "," + name;
  out += '\n';
  for (Eigen::Index t = 0; t < rec.length(); ++t) {
    text::append_number(out, static_cast<double>(t) / rec.fs_hz);
    for (Eigen::Index c = 0; c < rec.channels(); ++c) {
      out += ',';
      text::append_number(out, rec.samples(c, t));
    }
    out += '\n';
  }
  text::write_file_atomic(path, out);
}

EventLog read_events(const std::filesystem::path& path) {
  const std::string content = text::read_file(path);
  text::LineReader reader(content);
  std::string_view line;
  EventLog log;
  bool have_header = false;
  while (reader.next(line)) {
    const std::size_t ln = reader.line_number();
    if (text::trim(line).empty() || text::trim(line).front() == '#') continue;
    auto fields = text::split(line);
    if (!have_header) {
      if (fields.size() != 3 || text::trim(fields[0]) != "onset_sample" || text::trim(fields[1]) != "label" ||
          text::trim(fields[2]) != "kind")
        throw ParseError("header must be 'onset_sample,label,kind'", ln);
      have_header = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError("expected 3 fields", ln);
    auto onset = text::parse_integer(fields[0]);
    if (!onset || *onset < 0) throw ParseError("invalid onset '" + std::string(fields[0]) + "'", ln, 1);
    Event ev;
    ev.onset_sample = static_cast<std::size_t>(*onset);
    try {
      ev.label = parse_label(text::trim(fields[1]));
      ev.kind = parse_event_kind(text::trim(fields[2]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), ln);
    }
    if (!log.empty() && ev.onset_sample < log.back().onset_sample)
      throw ParseError("event onsets must be nondecreasing", ln, 1);
    log.push_back(ev);
  }
  if (!have_header) throw ParseError("missing header row");
  return log;
}

void write_events(const EventLog& log, const std::filesystem::path& path) {
  std::string out = "onset_sample,label,kind\n";
  for (const Event& ev : log) {
    out += std::to_string(ev.onset_sample);
    out += ',';
    out += to_string(ev.label);
    out += ',';
    out += to_string(ev.kind);
    out += '\n';
  }
  text::write_file_atomic(path, out);
}

EpochSet epoch_recording(const Recording& rec, const EventLog& log, double epoch_seconds) {
  validate(rec);
  const std::size_t length = epoch_length(epoch_seconds, rec.fs_hz);
  EpochSet set;
  set.channel_names = rec.channel_names;
  set.fs_hz = rec.fs_hz;
  std::vector<std::size_t> overruns;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const Event& ev = log[i];
    if (ev.onset_sample >= static_cast<std::size_t>(rec.length()))
      throw DataError("event " + std::to_string(i) + " onset lies beyond the recording");
    if (ev.kind != EventKind::observe_start) continue;
    if (ev.onset_sample + length > static_cast<std::size_t>(rec.length())) {
      overruns.push_back(i);
      continue;
    }
    set.epochs.push_back(Epoch{ev.label,
                               rec.samples.middleCols(static_cast<Eigen::Index>(ev.onset_sample),
                                                      static_cast<Eigen::Index>(length)),
                               rec.fs_hz});
  }
  if (!overruns.empty()) {
    std::string msg = "epoch overruns recording end at event index";
    for (std::size_t i : overruns) msg += " " + std::to_string(i);
    throw DataError(msg);
  }
  if (set.epochs.empty()) throw DataError("no trials");
  return set;
}

std::vector<BaselineWindow> trial_baselines(const EventLog& log) {
  std::vector<BaselineWindow> out;
  std::optional<std::size_t> open;
  std::optional<BaselineWindow> latest;
  bool any_baseline = false;
  for (const Event& ev : log) {
    switch (ev.kind) {
      case EventKind::baseline_start: open = ev.onset_sample; break;
      case EventKind::baseline_end:
        if (open && ev.onset_sample > *open) {
          latest = BaselineWindow{*open, ev.onset_sample};
          any_baseline = true;
        }
        open.reset();
        break;
      case EventKind::observe_start:
        out.push_back(latest.value_or(BaselineWindow{}));
        break;
      case EventKind::cue: break;
    }
  }
  if (!any_baseline) return {};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].end == 0) throw DataError("trial " + std::to_string(i) + " has no preceding baseline interval");
  return out;
}

std::string format_epochs(const EpochSet& set) {
  validate(set);
  std::string out = "# fs=";
  text::append_number(out, set.fs_hz);
  out += "\ntrial_id,label,channel,sample_index,value\n";
  out.reserve(out.size() + set.size() * static_cast<std::size_t>(set.channels() * set.length()) * 36);
  for (std::size_t t = 0; t < set.size(); ++t) {
    const Epoch& e = set.epochs[t];
    std::string prefix = std::to_string(t) + "," + std::string(to_string(e.label)) + ",";
    for (Eigen::Index c = 0; c < e.data.rows(); ++c) {
      const std::string row_prefix = prefix + set.channel_names[static_cast<std::size_t>(c)] + ",";
      for (Eigen::Index i = 0; i < e.data.cols(); ++i) {
        out += row_prefix;
        out += std::to_string(i);
        out += ',';
        text::append_number(out, e.data(c, i));
        out += '\n';
      }
    }
  }
  return out;
}

void write_epochs(const EpochSet& set, const std::filesystem::path& path) {
  text::write_file_atomic(path, format_epochs(set));
}

EpochSet parse_epochs(std::string_view content) {
  text::LineReader reader(content);
  std::string_view line;
  EpochSet set;
  std::optional<double> fs;
  bool have_header = false;

  long long current_trial = -1;
  Label current_label = Label::none;
  std::vector<std::vector<double>> channels;  // per channel samples of the current trial
  std::size_t channel_pos = 0;
  std::optional<std::size_t> length;

  auto finish_trial = [&](std::size_t ln) {
    if (current_trial < 0) return;
    if (current_trial == 0) {
      if (channels.empty()) throw ParseError("trial 0 has no rows", ln);
    } else if (channels.size() != set.channel_names.size()) {
      throw ParseError("trial " + std::to_string(current_trial) + " is missing channels", ln);
    }
    for (const auto& ch : channels) {
      if (!length) length = ch.size();
      if (ch.size() != *length)
        throw ParseError("trial " + std::to_string(current_trial) + " has inconsistent sample counts", ln);
    }
    Epoch e;
    e.label = current_label;
    e.fs_hz = *fs;
    e.data.resize(static_cast<Eigen::Index>(channels.size()), static_cast<Eigen::Index>(*length));
    for (std::size_t c = 0; c < channels.size(); ++c)
      e.data.row(static_cast<Eigen::Index>(c)) =
          Eigen::Map<const Eigen::RowVectorXd>(channels[c].data(), static_cast<Eigen::Index>(channels[c].size()));
    set.epochs.push_back(std::move(e));
  };

  while (reader.next(line)) {
    const std::size_t ln = reader.line_number();
    if (text::trim(line).empty()) continue;
    if (text::trim(line).front() == '#') {
      if (auto meta = text::parse_meta(line); meta && meta->first == "fs") fs = parse_fs(meta->second, ln);
      continue;
    }
    if (!have_header) {
      if (text::trim(line) != "trial_id,label,channel,sample_index,value")
        throw ParseError("header must be 'trial_id,label,channel,sample_index,value'", ln);
      if (!fs) throw ParseError("missing '# fs=<Hz>' metadata line before the header", ln);
      have_header = true;
      continue;
    }
    auto fields = text::split(line);
    if (fields.size() != 5) throw ParseError("expected 5 fields, found " + std::to_string(fields.size()), ln);
    auto trial = text::parse_integer(fields[0]);
    if (!trial) throw ParseError("invalid trial_id '" + std::string(fields[0]) + "'", ln, 1);
    Label label;
    try {
      label = parse_label(text::trim(fields[1]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), ln, 2);
    }
    const std::string_view channel = text::trim(fields[2]);
    auto index = text::parse_integer(fields[3]);
    if (!index) throw ParseError("invalid sample_index '" + std::string(fields[3]) + "'", ln, 4);
    const double value = parse_finite(fields[4], ln, 5);

    if (*trial != current_trial) {
      if (*trial != current_trial + 1) throw ParseError("trial ids must be consecutive from 0", ln, 1);
      finish_trial(ln);
      current_trial = *trial;
      current_label = label;
      channels.clear();
      channel_pos = 0;
    } else if (label != current_label) {
      throw ParseError("label changes within trial " + std::to_string(*trial), ln, 2);
    }

    const bool new_channel = channels.empty() || *index == 0;
    if (new_channel) {
      if (*index != 0) throw ParseError("channel block must start at sample_index 0", ln, 4);
      channel_pos = channels.size();
      if (current_trial == 0) {
        if (std::find(set.channel_names.begin(), set.channel_names.end(), channel) != set.channel_names.end())
          throw ParseError("channel '" + std::string(channel) + "' repeated within trial", ln, 3);
        set.channel_names.emplace_back(channel);
      } else if (channel_pos >= set.channel_names.size() || set.channel_names[channel_pos] != channel) {
        throw ParseError("channel order differs from trial 0", ln, 3);
      }
      channels.emplace_back();
      if (length) channels.back().reserve(*length);
    } else if (set.channel_names[channel_pos] != channel) {
      throw ParseError("channel block for '" + set.channel_names[channel_pos] + "' is incomplete", ln, 3);
    }
    auto& samples = channels[channel_pos];
    if (static_cast<std::size_t>(*index) != samples.size())
      throw ParseError("sample_index out of sequence", ln, 4);
    samples.push_back(value);
  }
  if (!have_header) throw ParseError("missing header row");
  finish_trial(reader.line_number());
  if (set.epochs.empty()) throw ParseError("no trials");
  set.fs_hz = *fs;
  validate(set);
  return set;
}

EpochSet read_epochs(const std::filesystem::path& path) { return parse_epochs(text::read_file(path)); }

}  // namespace hoseeg
