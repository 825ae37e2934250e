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

#ifndef CSS_SEPARATION_H_
#define CSS_SEPARATION_H_

#include <memory>
#include <string>
#include <vector>

#include "css/meeting.h"
#include "css/pit.h"
#include "css/rng.h"
#include "css/stft.h"

namespace css {

// One-hidden-layer time-frequency mask model: per frame, spliced log-magnitude
// features of the mixture plus the segment-mean log magnitude, a tanh hidden
// layer, and 2F sigmoid mask outputs. Small enough that all gradients are
// hand-derived and checkable by finite differences.
struct MaskModel {
  int context = 1;    // splice frames per side
  int hidden = 64;
  int bins = 257;
  std::vector<double> w1, b1;  // hidden x dim, hidden
  std::vector<double> w2, b2;  // 2*bins x hidden, 2*bins
  uint64_t seed = 0;
  double final_loss = 0.0;
  int trained_window_frames = 0;

  int FeatureDim() const { return (2 * context + 1) * bins + bins; }
  size_t NumParams() const;
  std::vector<double> FlatParams() const;
  void SetFlatParams(const std::vector<double>& p);
};

MaskModel InitMaskModel(int context, int hidden, int bins, uint64_t seed);

// Per-frame features for a segment: spliced log magnitudes (out-of-range
// frames treated as silence) followed by the segment-mean log magnitude.
std::vector<double> MaskFeatures(const Spectrogram& mix_seg, int context);

// Sigmoid masks, frames x 2F (channel 1 bins then channel 2 bins per frame).
std::vector<double> MaskForward(const MaskModel& model,
                                const std::vector<double>& features,
                                int num_frames);

enum class SeparatorType {
  kOraclePass,
  kOraclePassCorrupted,
  kOracleIrm,
  kTrainableMask,
};

struct SeparatorKind {
  SeparatorType type = SeparatorType::kOraclePass;
  uint64_t seed = 0;                      // corruption stream
  std::shared_ptr<const MaskModel> model;  // for kTrainableMask

  static SeparatorKind OraclePass() { return {SeparatorType::kOraclePass, 0, nullptr}; }
  static SeparatorKind OraclePassCorrupted(uint64_t seed) {
    return {SeparatorType::kOraclePassCorrupted, seed, nullptr};
  }
  static SeparatorKind OracleIrm() { return {SeparatorType::kOracleIrm, 0, nullptr}; }
  static SeparatorKind TrainableMask(std::shared_ptr<const MaskModel> m) {
    return {SeparatorType::kTrainableMask, 0, std::move(m)};
  }
};

SeparatorKind SeparatorFromName(const std::string& name, uint64_t seed,
                                std::shared_ptr<const MaskModel> model);

// Deterministic per (seed, segment_index) swap decision for the corrupted
// oracle, independent of processing order.
bool CorruptionSwap(uint64_t seed, int segment_index);

// Per-segment separation into two channels. Oracle variants require
// oracle_refs (the reference spectrogram crop for this segment) and throw
// without it. Mask-based outputs carry mixture phase; oracle passes carry the
// reference bins so that exact reconstruction is possible downstream.
ChannelPair Separate(const SeparatorKind& kind, const Spectrogram& mix_seg,
                     const ChannelPair* oracle_refs, int segment_index = 0);

struct MaskTrainConfig {
  double learning_rate = 0.5;
  double momentum = 0.9;
  int epochs = 20;
  int steps_per_epoch = 60;
  int context = 1;
  int hidden = 64;
  uint64_t seed = 0;
};

// Loss and parameter gradient of the Group-PIT objective for one window.
// Returns the loss; grad (same layout as FlatParams) is accumulated into
// *grad if non-null.
double MaskBatchLossGrad(const MaskModel& model, const Spectrogram& mix_seg,
                         const MagPair& ref_mags, std::vector<double>* grad);

// Stochastic gradient training on window crops of the given meetings.
// Deterministic per cfg.seed. Throws if window_frames exceeds every meeting.
MaskModel TrainMaskModel(const std::vector<MeetingScript>& dataset,
                         int window_frames, const MaskTrainConfig& cfg,
                         const StftConfig& stft_cfg = StftConfig());

void SaveMaskModel(const std::string& path, const MaskModel& model);
MaskModel LoadMaskModel(const std::string& path);

}  // namespace css

#endif  // CSS_SEPARATION_H_
