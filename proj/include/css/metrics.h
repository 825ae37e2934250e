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

#ifndef CSS_METRICS_H_
#define CSS_METRICS_H_

#include <string>
#include <vector>

#include "css/meeting.h"
#include "css/pit.h"
#include "css/stft.h"

namespace css {

constexpr double kSiSnrCapDb = 60.0;

// Scale-invariant SNR in dB, both signals mean-removed before the projection.
// Capped at +60 dB (vanishing residual); an all-zero estimate reports the
// -60 dB floor. Throws on length mismatch or an all-zero reference.
double SiSnr(const AudioBuffer& ref, const AudioBuffer& est);

struct EvalReport {
  std::vector<double> utterance_si_snr_db;
  double mean_si_snr_db = 0.0;
  double frame_accuracy = 0.0;
  bool global_swap = false;    // chosen meeting-level permutation
  int active_frames = 0;
  int silent_frames_excluded = 0;
};

// Meeting-level best channel permutation (total squared-magnitude similarity
// over the whole meeting), then per-utterance SI-SNR on the oracle utterance
// boundaries.
EvalReport UtteranceSiSnr(const MeetingScript& meeting, const AudioBuffer& out1,
                          const AudioBuffer& out2,
                          const StftConfig& cfg = StftConfig());

// Fraction of reference-active frames whose per-frame best permutation between
// output and reference magnitudes is the identity, after fixing the global
// best permutation. Silent frames (below 1e-10 of peak frame energy) are
// excluded and counted.
double FrameAccuracy(const MeetingScript& meeting, const AudioBuffer& out1,
                     const AudioBuffer& out2, const StftConfig& cfg = StftConfig(),
                     EvalReport* detail = nullptr);

// Runs both metrics and fills one report.
EvalReport Evaluate(const MeetingScript& meeting, const AudioBuffer& out1,
                    const AudioBuffer& out2, const StftConfig& cfg = StftConfig());

// Meeting-level permutation choice shared by the metrics: returns true if the
// swapped pairing has lower total squared magnitude difference.
bool GlobalBestSwap(const ChannelPair& refs, const ChannelPair& outputs);

std::string ReportToJson(const EvalReport& report);

}  // namespace css

#endif  // CSS_METRICS_H_
