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

#ifndef CSS_GROUPING_H_
#define CSS_GROUPING_H_

#include <cstdint>
#include <map>
#include <vector>

namespace css {

struct Interval {
  int utt_id = 0;
  int64_t start = 0;  // sample index, inclusive
  int64_t end = 0;    // sample index, exclusive
};

// Utterance layout with the quick-turn linkage threshold: two utterances are
// linked iff their intervals overlap or the gap between them is < link_gap.
struct IntervalLayout {
  std::vector<Interval> intervals;
  int64_t link_gap = 8000;  // 0.5 s at 16 kHz

  bool Linked(size_t i, size_t j) const;
};

// Number of connected components of the link graph (the utterance group
// count G).
int CountGroups(const IntervalLayout& layout);

// Brute-force enumeration over all 2^U channel assignments. An assignment is
// valid iff no two same-channel utterances overlap and every linked pair sits
// on different channels. For feasible layouts the count equals 2^G.
// Throws for U > 20 and for layouts with a triple overlap ("needs N>2").
int64_t CountValidAssignments(const IntervalLayout& layout);

// Canonical assignment (utt_id -> channel in {1, 2}): replays the arrangement
// discipline per group in onset order, sending each utterance to the channel
// whose last end is earlier and the earliest-onset utterance to channel 1.
// For feasible layouts this is the unique valid assignment. Overlap conflicts
// throw; quick-turn gap links are advisory.
std::map<int, int> CanonicalAssignment(const IntervalLayout& layout);

}  // namespace css

#endif  // CSS_GROUPING_H_
