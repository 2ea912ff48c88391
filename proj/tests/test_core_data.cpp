#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "eegbci/groups.hpp"
#include "eegbci/io.hpp"
#include "eegbci/markers.hpp"
#include "eegbci/random.hpp"
#include "eegbci/synth.hpp"
#include "support.hpp"

using namespace eegbci;
using testing::error_code_of;

namespace {

std::vector<GroupInfo> balanced_groups(int n_yes, int n_no) {
  std::vector<GroupInfo> g;
  for (int i = 0; i < n_yes + n_no; ++i) g.push_back({i, i < n_yes ? Label::Yes : Label::No});
  return g;
}

Recording small_recording() {
  Matrix m(3, 8);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 8; ++c) m(r, c) = (r * 8 + c) / 8.0 - 1.5;  // exact in float32
  return Recording(m, 250.0, ChannelLayout({"O1", "O2", "Cz"}), {{"subject", "s01"}});
}

}  // namespace

TEST_SUITE("core_data") {

TEST_CASE("enum spellings round trip") {
  for (Task t : kAllTasks) {
    CHECK(parse_task(to_string(t)) == t);
    CHECK(parse_task(short_name(t)) == t);
  }
  CHECK(parse_task("laryngeal-imagery") == Task::LaryngealImagery);
  CHECK(parse_label("No") == Label::No);
  CHECK(parse_phase("SessionAbort") == Phase::SessionAbort);
  CHECK(error_code_of([] { parse_task("juggling"); }) == ErrorCode::InvalidArgument);
  CHECK(error_code_of([] { parse_phase("Blink"); }) == ErrorCode::Format);
  CHECK(to_string(ErrorCode::ChannelMismatch) == "channel_mismatch");
  CHECK(to_string(ErrorCode::NotPositiveDefinite) == "not_positive_definite");
}

TEST_CASE("standard layout has sixteen unique electrodes") {
  const auto l = ChannelLayout::standard16();
  CHECK(l.count() == 16);
  CHECK(l.index_of("O1") == 6);
  CHECK_FALSE(l.find("C3").has_value());
  CHECK(error_code_of([&] { l.index_of("C3"); }) == ErrorCode::InvalidArgument);
  CHECK(error_code_of([] { ChannelLayout({"O1", "O1"}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("recording invariants") {
  const ChannelLayout l({"a", "b"});
  CHECK(error_code_of([&] { Recording(Matrix::Zero(3, 4), 100.0, l); }) == ErrorCode::ChannelMismatch);
  CHECK(error_code_of([&] { Recording(Matrix::Zero(2, 4), 0.0, l); }) == ErrorCode::InvalidArgument);
  Matrix bad = Matrix::Zero(2, 4);
  bad(1, 2) = std::nan("");
  CHECK(error_code_of([&] { Recording(bad, 100.0, l); }) == ErrorCode::NonFinite);
  const Recording r(Matrix::Zero(2, 400), 100.0, l);
  CHECK(r.duration_s() == doctest::Approx(4.0));
}

TEST_CASE("binary recording round trip is exact for float32 values") {
  const Recording rec = small_recording();
  std::stringstream buf;
  write_recording(rec, buf);
  CHECK(buf.str().rfind("BCIREC1 ", 0) == 0);
  const Recording back = read_recording(buf);
  CHECK(back.data() == rec.data());
  CHECK(back.rate_hz() == rec.rate_hz());
  CHECK(back.layout() == rec.layout());
  CHECK(back.meta() == rec.meta());
}

TEST_CASE("truncated or foreign recordings are format errors") {
  std::stringstream buf;
  write_recording(small_recording(), buf);
  std::string s = buf.str();
  std::istringstream cut(s.substr(0, s.size() - 3));
  CHECK(error_code_of([&] { read_recording(cut); }) == ErrorCode::Format);
  std::istringstream foreign("GDF 2.10\n");
  CHECK(error_code_of([&] { read_recording(foreign); }) == ErrorCode::Format);
}

TEST_CASE("CSV import checks the channel count per row") {
  testing::TempDir dir("csv");
  {
    std::ofstream f(dir.path / "ok.csv");
    f << "O1,O2\n1,2\n3,4\n5,6\n";
    std::ofstream g(dir.path / "bad.csv");
    g << "O1,O2\n1,2\n3\n";
  }
  const Recording r = import_csv(dir.path / "ok.csv", 500.0);
  CHECK(r.n_channels() == 2);
  CHECK(r.n_samples() == 3);
  CHECK(r.data()(1, 2) == 6.0);
  CHECK(error_code_of([&] { import_csv(dir.path / "bad.csv", 500.0); }) == ErrorCode::ChannelMismatch);
  CHECK(error_code_of([&] { import_csv(dir.path / "missing.csv", 500.0); }) == ErrorCode::Io);
}

TEST_CASE("marker lines round trip and reject garbage") {
  const EventMarker m{12345, Task::MotorImagery, 7, Label::No, Phase::StimulusEnd};
  const std::string line = format_marker_line(m);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(parse_marker_line(line) == m);
  CHECK(parse_marker_line(R"({"t_sample":5,"task":"Ssvep","trial":0,"truth":"Yes","phase":"PromptShown"})").t_sample == 5);
  CHECK(error_code_of([] { parse_marker_line("{not json"); }) == ErrorCode::Protocol);
  CHECK(error_code_of([] { parse_marker_line(R"({"t_sample":5})"); }) == ErrorCode::Protocol);
  CHECK(error_code_of([] { parse_marker_line("[1,2]"); }) == ErrorCode::Protocol);
}

TEST_CASE("marker log validation") {
  MarkerLog log;
  log.markers = {{10, Task::Ssvep, 0, Label::Yes, Phase::StimulusStart},
                 {20, Task::Ssvep, 0, Label::Yes, Phase::StimulusEnd}};
  CHECK_NOTHROW(validate_marker_log(log, 20));
  CHECK(error_code_of([&] { validate_marker_log(log, 19); }) == ErrorCode::OutOfRange);
  std::swap(log.markers[0], log.markers[1]);
  CHECK(error_code_of([&] { validate_marker_log(log, 100); }) == ErrorCode::Protocol);
  log.markers = {{10, Task::Ssvep, 0, Label::Yes, Phase::StimulusStart}};
  CHECK(error_code_of([&] { validate_marker_log(log, 100); }) == ErrorCode::Protocol);
}

TEST_CASE("shift_markers drops markers before zero") {
  MarkerLog log;
  log.markers = {{100, Task::Ssvep, 0, Label::Yes, Phase::PromptShown},
                 {2500, Task::Ssvep, 0, Label::Yes, Phase::StimulusStart}};
  const auto s = shift_markers(log, 2000);
  REQUIRE(s.markers.size() == 1);
  CHECK(s.markers[0].t_sample == 500);
}

TEST_CASE("slice_epochs cuts one epoch per stimulus") {
  SynthConfig c;
  const SessionData s = gen_session(c, Task::Ssvep, 0);
  const EpochSet set = slice_epochs(s.recording, s.markers, Task::Ssvep, 5.0, 100);
  REQUIRE(set.size() == 10);
  CHECK_NOTHROW(set.validate());
  std::size_t k = 0;
  for (const auto& m : s.markers.markers) {
    if (m.phase != Phase::StimulusStart) continue;
    const Epoch& e = set.epochs[k];
    CHECK(e.group_id == 100 + static_cast<int>(k));
    CHECK(e.label == m.truth);
    CHECK(e.data.cols() == 5000);
    CHECK(e.data == s.recording.data().middleCols(m.t_sample, 5000));
    ++k;
  }
  CHECK(error_code_of([&] { slice_epochs(s.recording, s.markers, Task::MotorActivity); }) == ErrorCode::TaskAbsent);
  CHECK(error_code_of([&] { slice_epochs(s.recording, s.markers, Task::Ssvep, 7.5); }) == ErrorCode::Protocol);
}

TEST_CASE("slice_epochs reports stimuli past the end") {
  const Recording rec(Matrix::Zero(2, 1000), 100.0, ChannelLayout({"a", "b"}));
  MarkerLog log;
  log.markers = {{600, Task::Ssvep, 0, Label::Yes, Phase::StimulusStart}};
  CHECK(error_code_of([&] { slice_epochs(rec, log, Task::Ssvep, 5.0); }) == ErrorCode::OutOfRange);
}

TEST_CASE("laryngeal imagery has 53 epochs over six sessions") {
  SynthConfig c;
  int total = 0;
  for (int s = 0; s < c.sessions; ++s) total += trials_in_session(c, Task::LaryngealImagery, s);
  CHECK(total == 53);
  CHECK(trials_in_session(c, Task::LaryngealImagery, 5) == 3);
  CHECK(trials_in_session(c, Task::Ssvep, 5) == 10);
}

TEST_CASE("epoch set validation") {
  EpochSet set;
  set.rate_hz = 100.0;
  set.layout = ChannelLayout({"a", "b"});
  set.epochs.push_back({Matrix::Zero(2, 10), Label::Yes, 1, Task::Ssvep});
  set.epochs.push_back({Matrix::Zero(2, 10), Label::No, 1, Task::Ssvep});
  CHECK(error_code_of([&] { set.validate(); }) == ErrorCode::InvalidArgument);
  set.epochs[1].group_id = 2;
  CHECK_NOTHROW(set.validate());
  set.epochs[1].data = Matrix::Zero(3, 10);
  CHECK(error_code_of([&] { set.validate(); }) == ErrorCode::ChannelMismatch);
}

TEST_CASE("group_split sizes, stratification and determinism") {
  const auto groups = balanced_groups(30, 30);
  const auto split = group_split(groups, 0.8, 11);
  CHECK(split.train_groups.size() == 48);
  CHECK(split.test_groups.size() == 12);
  std::set<int> all(split.train_groups.begin(), split.train_groups.end());
  for (int g : split.test_groups) CHECK(all.insert(g).second);
  CHECK(all.size() == 60);
  int train_yes = 0;
  for (int g : split.train_groups) train_yes += g < 30;
  CHECK(train_yes == 24);

  const auto again = group_split(groups, 0.8, 11);
  CHECK(again.train_groups == split.train_groups);
  const auto other = group_split(groups, 0.8, 12);
  CHECK(other.train_groups != split.train_groups);

  const auto odd = group_split(balanced_groups(27, 26), 0.8, 3);
  CHECK(odd.train_groups.size() == 42);
  CHECK(odd.test_groups.size() == 11);
}

TEST_CASE("group_split needs two groups per class") {
  CHECK(error_code_of([] { group_split(balanced_groups(1, 5)); }) == ErrorCode::TooFewGroups);
  CHECK(error_code_of([] { group_split(balanced_groups(3, 3), 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cv folds partition the groups evenly per class") {
  const auto groups = balanced_groups(24, 24);
  const auto folds = group_cv_folds(groups, 3, 5);
  REQUIRE(folds.size() == 3);
  std::set<int> seen;
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(folds.folds[k].size() == 16);
    int yes = 0;
    for (int g : folds.folds[k]) {
      CHECK(seen.insert(g).second);
      yes += g < 24;
    }
    CHECK(yes == 8);
    const auto comp = folds.complement(k);
    CHECK(comp.size() == 32);
    for (int g : comp) CHECK(std::find(folds.folds[k].begin(), folds.folds[k].end(), g) == folds.folds[k].end());
  }
  CHECK(seen.size() == 48);
  CHECK(error_code_of([&] { group_cv_folds(groups, 1); }) == ErrorCode::InvalidArgument);
  CHECK(error_code_of([] { group_cv_folds(balanced_groups(1, 1), 3); }) == ErrorCode::TooFewGroups);
}

TEST_CASE("majority vote ties go to Yes") {
  const std::vector<Label> pred{Label::No, Label::Yes, Label::No, Label::No, Label::Yes};
  const std::vector<int> groups{1, 1, 2, 2, 2};
  const auto votes = majority_vote(pred, groups);
  CHECK(votes.at(1) == Label::Yes);
  CHECK(votes.at(2) == Label::No);
}

TEST_CASE("require_disjoint flags overlap") {
  const std::set<int> fit{1, 2, 3};
  const std::vector<int> ok{4, 5}, bad{5, 3};
  CHECK_NOTHROW(require_disjoint(fit, ok, "test"));
  CHECK(error_code_of([&] { require_disjoint(fit, bad, "test"); }) == ErrorCode::Leakage);
}

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(7);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = c.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.01));
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(c.below(7) < 7);
  }
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7};
  c.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(derive_seed(1, "split") != derive_seed(1, "folds"));
  CHECK(derive_seed(1, "split", 0) != derive_seed(1, "split", 1));
  CHECK(derive_seed(1, "split") == derive_seed(1, "split"));
}

}
