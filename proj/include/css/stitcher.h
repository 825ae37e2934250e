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

#ifndef CSS_STITCHER_H_
#define CSS_STITCHER_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "css/meeting.h"
#include "css/pit.h"
#include "css/separation.h"
#include "css/stft.h"

namespace css {

// History / current / future portions of the sliding window, in frames.
// Window length = t_h + t_c + t_f, hop = t_c, adjacent overlap = t_h + t_f.
struct WindowSpec {
  int t_h = 0;
  int t_c = 1;
  int t_f = 0;

  int Length() const { return t_h + t_c + t_f; }
  static WindowSpec FromSeconds(double window_s, double th_s, double tf_s,
                                const StftConfig& cfg, int sample_rate);
};

struct FrameRange {
  int begin = 0;  // inclusive
  int end = 0;    // exclusive
  bool left_truncated = false;
  bool short_tail = false;

  int Length() const { return end - begin; }
};

// Sliding-window segmentation: ranges start at -t_h (clamped to 0), advance
// by t_c, and cover every frame at least once. Throws if t_c == 0 or the
// meeting is empty.
std::vector<FrameRange> Segment(int total_frames, const WindowSpec& w);

struct SegmentOutput {
  int index = 0;
  FrameRange range;
  ChannelPair pair;       // separated magnitudes+phase for this segment
  bool swapped = false;   // orientation applied during alignment
};

// Returns the absolute orientation for `cur` given the already-aligned
// `prev`: channels are paired by the lower mean squared magnitude difference
// over the shared frame range; a tie (difference < 1e-12) keeps prev's
// orientation. A zero-frame overlap keeps identity and sets *warned.
bool AlignAdjacent(const SegmentOutput& prev, const SegmentOutput& cur,
                   bool* warned = nullptr);

// Per frame and bin, the arithmetic mean of all aligned segments covering the
// frame. Throws "coverage hole" on an uncovered frame.
ChannelPair OverlapAverage(const std::vector<SegmentOutput>& aligned,
                           int total_frames);

struct CssOptions {
  StftConfig stft;
  // Pick each segment's orientation from the references instead of the
  // similarity chain (the oracle-permutation condition).
  bool oracle_permutation = false;
  // Average only each window's T_c crop instead of the full window.
  bool current_only = false;
};

struct CssResult {
  AudioBuffer ch1, ch2;
  std::vector<uint8_t> segment_swaps;  // applied permutation flag per segment
  ChannelPair averaged;                // meeting-level spectrogram pair
  int zero_overlap_warnings = 0;
};

// Full stitching pipeline: stft -> segment -> separate -> align left-to-right
// -> overlap-and-average -> istft.
CssResult RunCss(const MeetingScript& meeting, const SeparatorKind& kind,
                 const WindowSpec& w, const CssOptions& opts = CssOptions());

}  // namespace css

#endif  // CSS_STITCHER_H_
