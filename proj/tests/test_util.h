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

#ifndef CSS_TESTS_TEST_UTIL_H_
#define CSS_TESTS_TEST_UTIL_H_

#include <cmath>
#include <vector>

#include "css/audio.h"
#include "css/pit.h"
#include "css/rng.h"
#include "css/stft.h"

namespace css::test {

inline AudioBuffer RandomSignal(int64_t n, uint64_t seed, int sr = 16000) {
  Rng rng(seed);
  AudioBuffer buf;
  buf.sample_rate = sr;
  buf.samples.resize(n);
  for (auto& s : buf.samples) s = rng.Uniform(-0.5, 0.5);
  return buf;
}

// Relative L2 error over [begin, end).
inline double RelativeL2(const std::vector<double>& a,
                         const std::vector<double>& b, size_t begin,
                         size_t end) {
  double num = 0.0, den = 0.0;
  for (size_t i = begin; i < end; ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += a[i] * a[i];
  }
  return std::sqrt(num / den);
}

inline Spectrogram RandomSpectrogram(int frames, uint64_t seed,
                                     const StftConfig& cfg = StftConfig()) {
  Rng rng(seed);
  Spectrogram spec;
  spec.fft_size = cfg.fft_size;
  spec.hop = cfg.hop;
  spec.num_frames = frames;
  spec.bins.resize(static_cast<size_t>(frames) * spec.NumBins());
  for (auto& b : spec.bins) b = {rng.Uniform(-1.0, 1.0), rng.Uniform(-1.0, 1.0)};
  return spec;
}

inline ChannelPair RandomPair(int frames, uint64_t seed,
                              const StftConfig& cfg = StftConfig()) {
  return {{RandomSpectrogram(frames, seed, cfg),
           RandomSpectrogram(frames, seed ^ 0xabcdefULL, cfg)}};
}

inline double MaxAbsDiff(const AudioBuffer& a, const AudioBuffer& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.samples.size(); ++i) {
    m = std::max(m, std::abs(a.samples[i] - b.samples[i]));
  }
  return m;
}

}  // namespace css::test

#endif  // CSS_TESTS_TEST_UTIL_H_
