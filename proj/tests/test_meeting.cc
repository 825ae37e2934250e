// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "css/meeting.h"
#include "css/stft.h"
#include "test_util.h"

using namespace css;

namespace {

// Independent grouping oracle: naive pairwise linkage plus BFS over the
// resulting adjacency, written without reference to the grouping module.
int NaiveGroupCount(const std::vector<UtteranceRecord>& records,
                    int64_t link_gap = 8000) {
  const size_t n = records.size();
  std::vector<int> comp(n, -1);
  int groups = 0;
  for (size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<size_t> stack = {s};
    comp[s] = groups;
    while (!stack.empty()) {
      const size_t i = stack.back();
      stack.pop_back();
      for (size_t j = 0; j < n; ++j) {
        if (comp[j] >= 0) continue;
        const auto& a = records[i];
        const auto& b = records[j];
        const bool overlap = a.start < b.end && b.start < a.end;
        const int64_t gap =
            a.start < b.start ? b.start - a.end : a.start - b.end;
        if (overlap || gap < link_gap) {
          comp[j] = groups;
          stack.push_back(j);
        }
      }
    }
    ++groups;
  }
  return groups;
}

// Per-sample counting oracle for the overlap ratio.
double NaiveOverlapRatio(const std::vector<UtteranceRecord>& records) {
  int64_t max_end = 0;
  for (const auto& r : records) max_end = std::max(max_end, r.end);
  int64_t both = 0, any = 0;
  for (int64_t s = 0; s < max_end; ++s) {
    bool active[2] = {false, false};
    for (const auto& r : records) {
      if (s >= r.start && s < r.end) active[r.channel - 1] = true;
    }
    if (active[0] || active[1]) ++any;
    if (active[0] && active[1]) ++both;
  }
  return static_cast<double>(both) / static_cast<double>(any);
}

void CheckScriptValid(const MeetingScript& script, const SimConfig& cfg) {
  // Per-channel disjointness.
  for (int ch = 1; ch <= 2; ++ch) {
    int64_t last_end = -1;
    for (const auto& r : script.records) {
      if (r.channel != ch) continue;
      CHECK(r.start >= last_end);
      last_end = r.end;
    }
  }
  // Exact additivity.
  for (size_t i = 0; i < script.mixture.samples.size(); ++i) {
    CHECK(script.mixture.samples[i] ==
          script.references[0].samples[i] + script.references[1].samples[i]);
  }
  CHECK(NaiveGroupCount(script.records) == 1);
  if (script.mode == MeetingMode::kPartial) {
    CHECK(script.overlap_ratio >= cfg.overlap_lo);
    CHECK(script.overlap_ratio <= cfg.overlap_hi);
  } else {
    CHECK(script.overlap_ratio == 0.0);
  }
}

}  // namespace

TEST_CASE("synth source determinism and duration") {
  Rng rng1(77), rng2(77);
  const SourceUtterance a = SynthSource(2, 2.0, &rng1);
  const SourceUtterance b = SynthSource(2, 2.0, &rng2);
  CHECK(a.audio.NumSamples() == 32000);
  REQUIRE(a.audio.samples.size() == b.audio.samples.size());
  for (size_t i = 0; i < a.audio.samples.size(); ++i) {
    CHECK(a.audio.samples[i] == b.audio.samples[i]);
  }
}

TEST_CASE("distinct speakers have distinct dominant bins") {
  Rng rng(5);
  const StftConfig cfg;
  std::vector<int> argmax_bins;
  for (int spk = 0; spk < 4; ++spk) {
    const SourceUtterance u = SynthSource(spk, 2.0, &rng);
    const Spectrogram spec = Stft(u.audio, cfg);
    std::vector<double> band(spec.NumBins(), 0.0);
    for (int t = 0; t < spec.num_frames; ++t) {
      for (int f = 0; f < spec.NumBins(); ++f) band[f] += std::abs(spec.At(t, f));
    }
    argmax_bins.push_back(static_cast<int>(
        std::max_element(band.begin(), band.end()) - band.begin()));
  }
  std::sort(argmax_bins.begin(), argmax_bins.end());
  CHECK(std::adjacent_find(argmax_bins.begin(), argmax_bins.end()) ==
        argmax_bins.end());
}

TEST_CASE("simulation determinism") {
  SimConfig cfg;
  cfg.meeting_len = 30.0;
  cfg.rng_seed = 99;
  const MeetingScript a = SimulateMeeting(cfg);
  const MeetingScript b = SimulateMeeting(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].start == b.records[i].start);
    CHECK(a.records[i].channel == b.records[i].channel);
  }
  for (size_t i = 0; i < a.mixture.samples.size(); ++i) {
    CHECK(a.mixture.samples[i] == b.mixture.samples[i]);
  }
}

TEST_CASE("partial meetings are valid and respect rule (ii)") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    SimConfig cfg;
    cfg.meeting_len = 40.0;
    cfg.rng_seed = seed;
    const MeetingScript script = SimulateMeeting(cfg);
    CheckScriptValid(script, cfg);

    // Rule replay: utterance 0 on channel 1 at t=0; every later utterance on
    // the channel with the earlier last end, onset strictly inside
    // (e_n, e_other).
    CHECK(script.records[0].channel == 1);
    CHECK(script.records[0].start == 0);
    int64_t last_end[2] = {0, 0};
    last_end[0] = script.records[0].end;
    for (size_t i = 1; i < script.records.size(); ++i) {
      const auto& r = script.records[i];
      const int expect = last_end[0] <= last_end[1] ? 1 : 2;
      CHECK(r.channel == expect);
      CHECK(r.start > last_end[r.channel - 1]);
      CHECK(r.start < last_end[2 - r.channel]);
      last_end[r.channel - 1] = r.end;
    }
  }
}

TEST_CASE("sequential meetings have zero overlap and short gaps") {
  for (uint64_t seed = 50; seed < 54; ++seed) {
    SimConfig cfg;
    cfg.mode = MeetingMode::kSequential;
    cfg.meeting_len = 40.0;
    cfg.rng_seed = seed;
    const MeetingScript script = SimulateMeeting(cfg);
    CheckScriptValid(script, cfg);

    std::vector<UtteranceRecord> sorted = script.records;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.start < b.start; });
    for (size_t i = 1; i < sorted.size(); ++i) {
      CHECK(sorted[i].channel != sorted[i - 1].channel);
      const int64_t gap = sorted[i].start - sorted[i - 1].end;
      CHECK(gap > 0);
      CHECK(gap < static_cast<int64_t>(cfg.pause_max * cfg.sample_rate));
    }
  }
}

TEST_CASE("degenerate one-utterance pool") {
  Rng rng(1);
  std::vector<SourceUtterance> utts = {SynthSource(0, 3.0, &rng)};
  FixedSourcePool pool(std::move(utts));
  SimConfig cfg;
  cfg.meeting_len = 20.0;
  cfg.overlap_lo = 0.0;  // a lone utterance has zero overlap
  const MeetingScript script = SimulateMeeting(cfg, &pool);
  REQUIRE(script.records.size() == 1);
  CHECK(script.records[0].channel == 1);
  for (double s : script.references[1].samples) CHECK(s == 0.0);
  CHECK(NaiveGroupCount(script.records) == 1);
}

TEST_CASE("overlap ratio against the per-sample oracle") {
  std::vector<UtteranceRecord> records = {
      {0, 0, 0, 20000, 1}, {1, 0, 15000, 40000, 2}, {2, 0, 36000, 50000, 1}};
  CHECK(OverlapRatio(records) ==
        doctest::Approx(NaiveOverlapRatio(records)).epsilon(1e-12));

  // Two identical intervals on opposite channels fully overlap.
  std::vector<UtteranceRecord> twin = {{0, 0, 0, 16000, 1}, {1, 1, 0, 16000, 2}};
  CHECK(OverlapRatio(twin) == 1.0);
}

TEST_CASE("meeting dir round trip") {
  SimConfig cfg;
  cfg.meeting_len = 20.0;
  cfg.rng_seed = 123;
  const MeetingScript script = SimulateMeeting(cfg);
  const std::string dir = (std::filesystem::temp_directory_path() /
                           "css_meeting_rt")
                              .string();
  std::filesystem::remove_all(dir);
  WriteMeetingDir(dir, script);
  const MeetingScript loaded = ReadMeetingDir(dir);
  REQUIRE(loaded.records.size() == script.records.size());
  for (size_t i = 0; i < script.records.size(); ++i) {
    CHECK(loaded.records[i].start == script.records[i].start);
    CHECK(loaded.records[i].end == script.records[i].end);
    CHECK(loaded.records[i].channel == script.records[i].channel);
    CHECK(loaded.records[i].speaker_id == script.records[i].speaker_id);
  }
  CHECK(loaded.mode == script.mode);
  CHECK(loaded.seed == script.seed);
  // 16-bit quantization: write scales by 32767, read divides by 32768, so the
  // worst case is 1.5 LSB at full scale.
  CHECK(test::MaxAbsDiff(loaded.references[0], script.references[0]) <=
        1.5 / 32768.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("infeasible overlap bounds raise") {
  SimConfig cfg;
  cfg.meeting_len = 30.0;
  cfg.overlap_lo = 0.99;
  cfg.overlap_hi = 0.999;
  cfg.max_retries = 5;
  CHECK_THROWS_WITH_AS(SimulateMeeting(cfg),
                       doctest::Contains("overlap target infeasible"),
                       std::runtime_error);
}
