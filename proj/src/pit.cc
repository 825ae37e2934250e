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

#include "css/pit.h"

#include <cmath>
#include <stdexcept>

namespace css {

namespace {

void CheckSameShape(const MagPair& a, const MagPair& b) {
  if (a.frames != b.frames || a.bins != b.bins) {
    throw std::runtime_error("pit: geometry mismatch");
  }
  if (a.frames <= 0 || a.bins <= 0) {
    throw std::runtime_error("pit: empty magnitude pair");
  }
}

}  // namespace

MagPair MagPair::Zeros(int frames, int bins) {
  MagPair p;
  p.frames = frames;
  p.bins = bins;
  p.ch[0].assign(static_cast<size_t>(frames) * bins, 0.0);
  p.ch[1].assign(static_cast<size_t>(frames) * bins, 0.0);
  return p;
}

MagPair Magnitudes(const ChannelPair& pair) {
  if (!pair.ch[0].SameGeometry(pair.ch[1])) {
    throw std::runtime_error("pit: channel pair geometry mismatch");
  }
  MagPair m = MagPair::Zeros(pair.NumFrames(), pair.NumBins());
  for (int c = 0; c < 2; ++c) {
    for (size_t i = 0; i < pair.ch[c].bins.size(); ++i) {
      m.ch[c][i] = std::abs(pair.ch[c].bins[i]);
    }
  }
  return m;
}

std::array<std::array<double, 2>, 2> PairwiseL2(const MagPair& ref, const MagPair& est) {
  CheckSameShape(ref, est);
  const size_t n = ref.ch[0].size();
  std::array<std::array<double, 2>, 2> cost{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      double sum = 0.0;
      const double* r = ref.ch[a].data();
      const double* e = est.ch[b].data();
      for (size_t i = 0; i < n; ++i) {
        const double d = r[i] - e[i];
        sum += d * d;
      }
      cost[a][b] = sum / static_cast<double>(n);
    }
  }
  return cost;
}

std::array<std::array<double, 2>, 2> PairwiseL2(const ChannelPair& ref,
                                                const ChannelPair& est) {
  return PairwiseL2(Magnitudes(ref), Magnitudes(est));
}

PitResult GroupPitLoss(const MagPair& ref, const MagPair& est) {
  const auto cost = PairwiseL2(ref, est);
  const double identity = cost[0][0] + cost[1][1];
  const double swapped = cost[0][1] + cost[1][0];
  PitResult result;
  result.swapped = swapped < identity;  // tie -> identity
  result.loss = result.swapped ? swapped : identity;
  return result;
}

PitResult GroupPitLoss(const ChannelPair& ref, const ChannelPair& est) {
  return GroupPitLoss(Magnitudes(ref), Magnitudes(est));
}

MagPair GradGroupPit(const MagPair& ref, const MagPair& est, double upstream) {
  CheckSameShape(ref, est);
  const PitResult pit = GroupPitLoss(ref, est);
  const size_t n = est.ch[0].size();
  const double scale = 2.0 * upstream / static_cast<double>(n);
  MagPair grad = MagPair::Zeros(est.frames, est.bins);
  for (int m = 0; m < 2; ++m) {
    const int ref_idx = pit.swapped ? 1 - m : m;
    const double* r = ref.ch[ref_idx].data();
    const double* e = est.ch[m].data();
    double* g = grad.ch[m].data();
    for (size_t i = 0; i < n; ++i) {
      g[i] = scale * (e[i] - r[i]);
    }
  }
  return grad;
}

}  // namespace css
