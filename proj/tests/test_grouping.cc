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

#include <cstdint>
#include <map>
#include <vector>

#include "css/grouping.h"
#include "css/meeting.h"
#include "css/rng.h"

using namespace css;

namespace {

// Five utterances: a two-utterance head, a gap wider than the quick-turn
// threshold, then a three-utterance chain that can swap as one block.
IntervalLayout ReferenceLayout() {
  IntervalLayout layout;
  layout.intervals = {
      {0, 0, 30000},       {1, 20000, 50000},  {2, 60000, 80000},
      {3, 75000, 95000},   {4, 90000, 110000},
  };
  return layout;
}

// Test-side validity check, independent of the library's enumeration.
bool ValidAssignment(const IntervalLayout& layout,
                     const std::map<int, int>& channels) {
  const auto& iv = layout.intervals;
  for (size_t i = 0; i < iv.size(); ++i) {
    for (size_t j = i + 1; j < iv.size(); ++j) {
      const bool overlap = iv[i].start < iv[j].end && iv[j].start < iv[i].end;
      const int64_t gap = iv[i].start < iv[j].start ? iv[j].start - iv[i].end
                                                    : iv[i].start - iv[j].end;
      const bool same = channels.at(iv[i].utt_id) == channels.at(iv[j].utt_id);
      if (overlap && same) return false;
      if (!overlap && gap < layout.link_gap && same) return false;
    }
  }
  return true;
}

IntervalLayout RandomTwoChannelLayout(int num_utts, uint64_t seed) {
  // Two-channel placement discipline keeps overlaps pairwise, but short gaps
  // can still produce odd link cycles, so not every draw is feasible.
  Rng rng(seed);
  IntervalLayout layout;
  int64_t last_end[2] = {0, 0};
  for (int u = 0; u < num_utts; ++u) {
    const int ch = last_end[0] <= last_end[1] ? 0 : 1;
    const int64_t lo = u == 0 ? 0 : last_end[ch];
    int64_t start;
    if (rng.Bernoulli(0.5) && last_end[1 - ch] > lo + 1) {
      start = lo + rng.UniformInt(1, static_cast<int>(last_end[1 - ch] - lo - 1));
    } else {
      start = last_end[1 - ch] + rng.UniformInt(0, 20000);
    }
    const int64_t len = rng.UniformInt(8000, 60000);
    layout.intervals.push_back({u, start, start + len});
    last_end[ch] = start + len;
  }
  return layout;
}

// Independent exhaustive oracle over all 2^U assignments.
int64_t NaiveAssignmentCount(const IntervalLayout& layout) {
  const size_t n = layout.intervals.size();
  int64_t count = 0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::map<int, int> channels;
    for (size_t i = 0; i < n; ++i) {
      channels[layout.intervals[i].utt_id] = (mask >> i) & 1 ? 2 : 1;
    }
    if (ValidAssignment(layout, channels)) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("reference layout has two groups and four assignments") {
  const IntervalLayout layout = ReferenceLayout();
  CHECK(CountGroups(layout) == 2);
  CHECK(CountValidAssignments(layout) == 4);
}

TEST_CASE("single utterance") {
  IntervalLayout layout;
  layout.intervals = {{0, 0, 16000}};
  CHECK(CountGroups(layout) == 1);
  CHECK(CountValidAssignments(layout) == 2);
  CHECK(CanonicalAssignment(layout).at(0) == 1);
}

TEST_CASE("disjoint utterances with wide gaps give G = U") {
  IntervalLayout layout;
  for (int u = 0; u < 6; ++u) {
    const int64_t start = u * 30000;
    layout.intervals.push_back({u, start, start + 16000});
  }
  CHECK(CountGroups(layout) == 6);
  CHECK(CountValidAssignments(layout) == 64);
}

TEST_CASE("quick-turn gap links across silence") {
  IntervalLayout layout;
  layout.intervals = {{0, 0, 16000}, {1, 16000 + 4000, 40000}};
  CHECK(CountGroups(layout) == 1);

  // Widening the gap beyond the threshold splits the group.
  layout.intervals[1].start = 16000 + 9000;
  CHECK(CountGroups(layout) == 2);
}

TEST_CASE("identity count = 2^G on feasible layouts, 0 otherwise") {
  int feasible = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const IntervalLayout layout = RandomTwoChannelLayout(8, seed);
    const int64_t naive = NaiveAssignmentCount(layout);
    CHECK(CountValidAssignments(layout) == naive);
    if (naive == 0) continue;  // odd link cycle: no 2-channel labeling exists
    ++feasible;
    const int g = CountGroups(layout);
    CHECK(naive == (int64_t{1} << g));
  }
  CHECK(feasible >= 30);
}

TEST_CASE("monotonicity: an inserted wide gap adds exactly one group") {
  for (uint64_t seed = 200; seed < 210; ++seed) {
    IntervalLayout layout = RandomTwoChannelLayout(6, seed);
    const int g = CountGroups(layout);
    int64_t shift = 0;
    for (auto& iv : layout.intervals) shift = std::max(shift, iv.end);
    IntervalLayout extended = layout;
    extended.intervals.push_back({6, shift + 2 * layout.link_gap,
                                  shift + 2 * layout.link_gap + 16000});
    CHECK(CountGroups(extended) == g + 1);
  }
}

TEST_CASE("triple overlap is infeasible for two channels") {
  IntervalLayout layout;
  layout.intervals = {{0, 0, 30000}, {1, 5000, 30000}, {2, 10000, 30000}};
  CHECK_THROWS_WITH_AS(CountValidAssignments(layout),
                       doctest::Contains("needs N>2"), std::runtime_error);
  CHECK_THROWS_AS(CanonicalAssignment(layout), std::runtime_error);
}

TEST_CASE("canonical assignment is valid and earliest-first") {
  for (uint64_t seed = 300; seed < 320; ++seed) {
    const IntervalLayout layout = RandomTwoChannelLayout(7, seed);
    if (NaiveAssignmentCount(layout) == 0) continue;
    const auto channels = CanonicalAssignment(layout);
    CHECK(ValidAssignment(layout, channels));

    // Per group, the earliest-onset utterance sits on channel 1; flipping a
    // whole group keeps validity but breaks canonicality.
    std::map<int, int> flipped = channels;
    for (auto& [id, ch] : flipped) ch = 3 - ch;
    CHECK(ValidAssignment(layout, flipped));
  }
}

TEST_CASE("canonical assignment matches the simulator's channels") {
  for (uint64_t seed = 400; seed < 404; ++seed) {
    SimConfig cfg;
    cfg.meeting_len = 30.0;
    cfg.rng_seed = seed;
    const MeetingScript script = SimulateMeeting(cfg);
    const auto channels = CanonicalAssignment(script.Layout());
    for (const auto& r : script.records) {
      CHECK(channels.at(r.utt_id) == r.channel);
    }
  }
}
