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

#ifndef CSS_PIT_H_
#define CSS_PIT_H_

#include <array>
#include <vector>

#include "css/stft.h"

namespace css {

// Two output channels with identical STFT geometry.
struct ChannelPair {
  std::array<Spectrogram, 2> ch;

  bool SameGeometry(const ChannelPair& other) const {
    return ch[0].SameGeometry(other.ch[0]) && ch[1].SameGeometry(other.ch[1]);
  }
  ChannelPair Crop(int begin, int end) const {
    return {{ch[0].Crop(begin, end), ch[1].Crop(begin, end)}};
  }
  ChannelPair Swapped() const { return {{ch[1], ch[0]}}; }
  int NumFrames() const { return ch[0].num_frames; }
  int NumBins() const { return ch[0].NumBins(); }
};

// Plain magnitude matrices (frames x bins), the domain of the training loss.
struct MagPair {
  int frames = 0;
  int bins = 0;
  std::array<std::vector<double>, 2> ch;

  static MagPair Zeros(int frames, int bins);
  double& At(int c, int t, int f) { return ch[c][static_cast<size_t>(t) * bins + f]; }
  double At(int c, int t, int f) const { return ch[c][static_cast<size_t>(t) * bins + f]; }
};

MagPair Magnitudes(const ChannelPair& pair);

// Entry (n, m) = mean over frames and bins of (|ref_n| - |est_m|)^2.
std::array<std::array<double, 2>, 2> PairwiseL2(const MagPair& ref, const MagPair& est);
std::array<std::array<double, 2>, 2> PairwiseL2(const ChannelPair& ref,
                                                const ChannelPair& est);

struct PitResult {
  double loss = 0.0;
  bool swapped = false;  // chosen permutation; ties resolve to identity
};

// Group-PIT objective: min over the two channel permutations of the summed
// per-channel L2 distances between magnitude spectra.
PitResult GroupPitLoss(const MagPair& ref, const MagPair& est);
PitResult GroupPitLoss(const ChannelPair& ref, const ChannelPair& est);

// Gradient of the selected-permutation loss w.r.t. est magnitudes, scaled by
// `upstream`. The non-selected permutation contributes zero.
MagPair GradGroupPit(const MagPair& ref, const MagPair& est, double upstream = 1.0);

}  // namespace css

#endif  // CSS_PIT_H_
