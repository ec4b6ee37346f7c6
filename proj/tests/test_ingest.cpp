#include <doctest.h>

#include <random>

#include "hoseeg/error.hpp"
#include "hoseeg/ingest.hpp"
#include "hoseeg/text_io.hpp"
#include "support.hpp"

using namespace hoseeg;

namespace {

Recording ramp_recording(Eigen::Index n) {
  Recording rec;
  rec.channel_names = {"C3", "C4"};
  rec.fs_hz = 250.0;
  rec.samples.resize(2, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rec.samples(0, i) = static_cast<double>(i);
    rec.samples(1, i) = -0.1 * static_cast<double>(i);
  }
  return rec;
}

EpochSet random_set(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EpochSet set;
  set.channel_names = {"Fz", "C3", "C4"};
  set.fs_hz = 250.0;
  for (Label l : {Label::power, Label::none, Label::precision}) {
    Eigen::MatrixXd d(3, 20);
    for (Eigen::Index c = 0; c < 3; ++c) d.row(c) = testing::gaussian(20, rng, 1e-3).transpose();
    set.epochs.push_back(Epoch{l, d, 250.0});
  }
  return set;
}

template <typename F>
std::string parse_error_of(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("labels round trip") {
  for (Label l : kAllLabels) CHECK(parse_label(to_string(l)) == l);
  CHECK_THROWS_AS(parse_label("grasp"), ParseError);
}

TEST_CASE("recording round trip is bit-exact") {
  const auto dir = testing::scratch_dir("ingest_rec");
  std::mt19937_64 rng(61);
  Recording rec;
  rec.channel_names = {"Fz", "Cz"};
  rec.fs_hz = 250.0;
  rec.samples.resize(2, 300);
  rec.samples.row(0) = testing::gaussian(300, rng).transpose();
  rec.samples.row(1) = testing::gaussian(300, rng, 1e-7).transpose();
  write_recording(rec, dir / "r.csv");
  const Recording back = read_recording(dir / "r.csv");
  CHECK(back.channel_names == rec.channel_names);
  CHECK(back.fs_hz == rec.fs_hz);
  CHECK(back.samples == rec.samples);
}

TEST_CASE("recording reader errors carry line numbers") {
  const auto dir = testing::scratch_dir("ingest_rec_err");
  text::write_file_atomic(dir / "a.csv", "# fs=250\ntime,C3\n0,1\n0.004,x\n");
  CHECK(parse_error_of([&] { read_recording(dir / "a.csv"); }).starts_with("line 4, column 2"));
  text::write_file_atomic(dir / "b.csv", "# fs=250\ntime,C3\n0,1\n0,2\n");
  CHECK(parse_error_of([&] { read_recording(dir / "b.csv"); }).find("strictly increasing") != std::string::npos);
  text::write_file_atomic(dir / "c.csv", "time,C3\n0,1\n");
  CHECK_THROWS_AS(read_recording(dir / "c.csv"), ParseError);
  text::write_file_atomic(dir / "d.csv", "# fs=250\ntime,C3\n0,nan\n");
  CHECK_THROWS_AS(read_recording(dir / "d.csv"), ParseError);
  CHECK_THROWS_AS(read_recording(dir / "missing.csv"), IoError);
}

TEST_CASE("events round trip and reject decreasing onsets") {
  const auto dir = testing::scratch_dir("ingest_events");
  const EventLog log{{0, Label::none, EventKind::baseline_start},
                     {500, Label::none, EventKind::baseline_end},
                     {500, Label::power, EventKind::observe_start},
                     {1250, Label::power, EventKind::cue}};
  write_events(log, dir / "e.csv");
  const EventLog back = read_events(dir / "e.csv");
  REQUIRE(back.size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    CHECK(back[i].onset_sample == log[i].onset_sample);
    CHECK(back[i].label == log[i].label);
    CHECK(back[i].kind == log[i].kind);
  }
  text::write_file_atomic(dir / "bad.csv", "onset_sample,label,kind\n10,power,cue\n5,power,cue\n");
  CHECK(parse_error_of([&] { read_events(dir / "bad.csv"); }).starts_with("line 3"));
  text::write_file_atomic(dir / "kind.csv", "onset_sample,label,kind\n10,power,grasp\n");
  CHECK_THROWS_AS(read_events(dir / "kind.csv"), ParseError);
}

TEST_CASE("epoching slices one epoch per observe_start") {
  const Recording rec = ramp_recording(4000);
  const EventLog log{{100, Label::power, EventKind::observe_start},
                     {400, Label::power, EventKind::cue},
                     {2000, Label::none, EventKind::observe_start}};
  const EpochSet set = epoch_recording(rec, log, 6.0);
  REQUIRE(set.size() == 2);
  CHECK(set.length() == 1500);
  CHECK(set.epochs[0].label == Label::power);
  CHECK(set.epochs[1].label == Label::none);
  CHECK(set.epochs[0].data(0, 0) == 100.0);
  CHECK(set.epochs[1].data(1, 1499) == doctest::Approx(-0.1 * 3499));
}

TEST_CASE("epoching errors") {
  const Recording rec = ramp_recording(2000);
  try {
    epoch_recording(rec, {{100, Label::power, EventKind::observe_start}, {600, Label::none, EventKind::observe_start}});
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("event index 1") != std::string::npos);
  }
  CHECK_THROWS_AS(epoch_recording(rec, {{10, Label::power, EventKind::cue}}), DataError);
  CHECK_THROWS_AS(epoch_recording(rec, {{5000, Label::power, EventKind::observe_start}}), DataError);
}

TEST_CASE("trial baselines use the latest closed interval") {
  const EventLog log{{0, Label::none, EventKind::baseline_start},     {100, Label::none, EventKind::baseline_end},
                     {200, Label::none, EventKind::baseline_start},   {300, Label::none, EventKind::baseline_end},
                     {300, Label::power, EventKind::observe_start},   {2000, Label::none, EventKind::observe_start}};
  const auto b = trial_baselines(log);
  REQUIRE(b.size() == 2);
  CHECK(b[0].begin == 200);
  CHECK(b[0].end == 300);
  CHECK(b[1].begin == 200);
  CHECK(trial_baselines({{0, Label::power, EventKind::observe_start}}).empty());
  CHECK_THROWS_AS(trial_baselines({{0, Label::power, EventKind::observe_start},
                                   {10, Label::none, EventKind::baseline_start},
                                   {20, Label::none, EventKind::baseline_end}}),
                  DataError);
}

TEST_CASE("epoch CSV round trip is bit-exact") {
  const auto dir = testing::scratch_dir("ingest_epochs");
  const EpochSet set = random_set(62);
  write_epochs(set, dir / "epochs.csv");
  const EpochSet back = read_epochs(dir / "epochs.csv");
  CHECK(back.channel_names == set.channel_names);
  CHECK(back.fs_hz == 250.0);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.epochs[i].label == set.epochs[i].label);
    CHECK(back.epochs[i].data == set.epochs[i].data);
  }
  CHECK(format_epochs(back) == format_epochs(set));
}

TEST_CASE("epoch CSV structure is enforced") {
  const std::string head = "# fs=250\ntrial_id,label,channel,sample_index,value\n";
  CHECK(parse_error_of([&] { parse_epochs(head + "1,power,C3,0,1\n"); }).find("consecutive") != std::string::npos);
  CHECK(parse_error_of([&] { parse_epochs(head + "0,power,C3,1,1\n"); }).starts_with("line 3"));
  CHECK(parse_error_of([&] {
          parse_epochs(head + "0,power,C3,0,1\n0,power,C4,0,1\n1,none,C4,0,1\n1,none,C3,0,1\n");
        }).find("channel order") != std::string::npos);
  CHECK(parse_error_of([&] { parse_epochs(head + "0,power,C3,0,1\n0,none,C3,1,1\n"); }).find("label changes") !=
        std::string::npos);
  CHECK(parse_error_of([&] { parse_epochs(head + "0,power,C3,0,1\n0,power,C3,1\n"); }).find("expected 5 fields") !=
        std::string::npos);
  CHECK_THROWS_AS(parse_epochs("trial_id,label,channel,sample_index,value\n0,power,C3,0,1\n"), ParseError);
  const EpochSet ok = parse_epochs(head + "0,power,C3,0,1\n0,power,C3,1,2\n0,power,C4,0,3\n0,power,C4,1,4\n");
  CHECK(ok.channel_names == std::vector<std::string>{"C3", "C4"});
  CHECK(ok.epochs[0].data(1, 1) == 4.0);
}

TEST_CASE("epoch set validation") {
  EpochSet set = random_set(63);
  CHECK_NOTHROW(validate(set));
  CHECK(set.channel_index("C4") == 2);
  CHECK_THROWS_AS(set.channel_index("Oz"), DataError);
  set.epochs[1].data(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate(set), DataError);
  CHECK_THROWS_AS(validate(EpochSet{}), DataError);
}
