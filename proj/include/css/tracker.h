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

#ifndef CSS_TRACKER_H_
#define CSS_TRACKER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "css/meeting.h"
#include "css/pit.h"
#include "css/separation.h"
#include "css/stitcher.h"

namespace css {

// Per-frame binary swap sequence: 1 = swap channels at this frame.
struct PermutationIndicator {
  std::vector<uint8_t> values;

  int NumFrames() const { return static_cast<int>(values.size()); }
};

struct SpliceConfig {
  int context = 1;  // frames per side; zero-padding at sequence edges
};

// Short-window tiling with t_h = t_f = 1 frame: current regions tile the
// span exactly, adjacent windows share 2 frames.
struct ShortTiling {
  int total_frames = 0;
  std::vector<FrameRange> ranges;        // clamped window extents
  std::vector<FrameRange> current;       // deduped regions, tile [0, total)

  // Global frame indices where a new window's current region starts (m >= 1).
  std::vector<int> BoundaryFrames() const;
};

ShortTiling TileShortWindows(int total_frames, int window_frames);

// Separates every short window of the tiling. segment_index_base offsets the
// per-window corruption stream so window indices stay globally unique.
std::vector<ChannelPair> SeparateShortWindows(const SeparatorKind& kind,
                                              const Spectrogram& mix,
                                              const ChannelPair* refs,
                                              const ShortTiling& tiling,
                                              int segment_index_base = 0);

// Concatenates the current regions of ordered short-window outputs into one
// sequence. Throws on out-of-order or gapped windows.
ChannelPair AssembleShortOutputs(const std::vector<ChannelPair>& windows,
                                 const ShortTiling& tiling);

// Feature matrix O, T x 2F(2c+1): per frame the stacked [ch1|ch2] magnitudes
// of the assembled outputs, spliced with +/- c frames and zero-padded at the
// sequence edges. Row layout: [t-c ... t+c] x [ch1 bins | ch2 bins].
std::vector<double> SpliceConcat(const std::vector<ChannelPair>& windows,
                                 const ShortTiling& tiling,
                                 const SpliceConfig& cfg);

std::vector<double> SpliceFeatures(const ChannelPair& assembled,
                                   const SpliceConfig& cfg);

// Oracle frame-wise permutation: R_t = 1 iff swapping the output channels is
// strictly cheaper against the references; ties (cost difference < 1e-12,
// e.g. silence) carry the previous label, R_0 ties resolve to 0.
PermutationIndicator OracleLabels(const ChannelPair& outputs,
                                  const ChannelPair& refs);

// Frame t of output channel 1 becomes channel (1 xor P_t) of the input, and
// symmetrically. Involution: applying the same P twice restores the input.
ChannelPair ApplyIndicator(const ChannelPair& outputs,
                           const PermutationIndicator& indicator);

// Per-frame tracking network on spliced stacked-channel magnitude features.
// The logistic output scores an orientation flip between frame t-1 and t;
// the indicator is recovered by integrating flips left to right (an absolute
// per-frame orientation is not identifiable from channel-symmetric data).
struct TrackNet {
  int context = 1;
  int hidden = 32;
  int bins = 257;
  double input_scale = 0.1;  // fixed magnitude pre-scaling
  std::vector<double> w1, b1;  // hidden x dim, hidden
  std::vector<double> w2, b2;  // 1 x hidden, 1
  uint64_t seed = 0;
  double final_loss = 0.0;

  int FeatureDim() const { return 2 * bins * (2 * context + 1); }
  size_t NumParams() const;
  std::vector<double> FlatParams() const;
  void SetFlatParams(const std::vector<double>& p);
};

TrackNet InitTrackNet(int context, int hidden, int bins, uint64_t seed);

// Per-frame flip probabilities for the given feature rows.
std::vector<double> TrackNetForward(const TrackNet& net,
                                    const std::vector<double>& features,
                                    const std::vector<int>& frame_indices);

// Weighted binary cross-entropy over the selected frames; returns the mean
// loss and accumulates the parameter gradient into *grad when non-null.
double TrackNetLossGrad(const TrackNet& net, const std::vector<double>& features,
                        const std::vector<int>& frame_indices,
                        const std::vector<uint8_t>& targets,
                        const std::vector<double>& weights,
                        std::vector<double>* grad);

// Indicator from flip probabilities: P_0 = 0; at each window-boundary frame
// the orientation flips iff the predicted probability exceeds 0.5. The
// remaining global flip is absorbed by downstream stitching and metrics.
PermutationIndicator PredictIndicator(const TrackNet& net,
                                      const std::vector<double>& features,
                                      const ShortTiling& tiling);

struct TrackTrainConfig {
  double window_s = 24.0;
  double train_overlap_s = 12.0;
  double short_window_s = 4.0;
  double learning_rate = 0.2;
  int epochs = 30;
  int interior_stride = 8;  // interior-frame subsampling for training
  int context = 1;
  int hidden = 48;
  uint64_t seed = 0;
};

// Trains the tracker on frozen short-span separation outputs over 24 s
// windows hopped by 12 s, minimizing cross-entropy against the oracle
// frame-wise permutation transitions.
TrackNet TrainTrackNet(const std::vector<MeetingScript>& dataset,
                       const SeparatorKind& short_separator,
                       const TrackTrainConfig& cfg,
                       const StftConfig& stft_cfg = StftConfig());

void SaveTrackNet(const std::string& path, const TrackNet& net);
TrackNet LoadTrackNet(const std::string& path);

struct TrackCssOptions {
  double short_window_s = 4.0;   // 2 or 4
  double long_window_s = 24.0;
  double eval_overlap_s = 2.0;
  bool use_oracle_labels = false;  // oracle tracking condition
  StftConfig stft;
};

struct TrackCssResult {
  AudioBuffer ch1, ch2;
  double tracking_accuracy = -1.0;  // vs oracle labels, up to a global flip
  int num_long_segments = 0;
  int total_indicator_flips = 0;
  double indicator_swap_fraction = 0.0;
  std::vector<int> swap_run_lengths;
};

// Full tracking pipeline: 24 s tracking segments (2 s eval overlap); within
// each, short-window separation -> splice features -> indicator ->
// rearrangement; segments are then stitched by alignment + overlap-average.
TrackCssResult RunTrackCss(const MeetingScript& meeting,
                           const SeparatorKind& short_separator,
                           const TrackNet* net, const TrackCssOptions& opts);

}  // namespace css

#endif  // CSS_TRACKER_H_
