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

#ifndef CSS_STFT_H_
#define CSS_STFT_H_

#include <complex>
#include <string>
#include <vector>

#include "css/audio.h"

namespace css {

enum class Taper {
  kSqrtHann,  // analysis == synthesis, constant overlap-add at 50% hop
};

struct StftConfig {
  int fft_size = 512;
  int hop = 256;
  Taper taper = Taper::kSqrtHann;
};

// Complex time-frequency matrix, frames x (fft_size/2 + 1), row-major.
// No centering or padding: frame t covers samples [t*hop, t*hop + fft_size).
struct Spectrogram {
  std::vector<std::complex<double>> bins;
  int num_frames = 0;
  int fft_size = 512;
  int hop = 256;
  int sample_rate = 16000;

  int NumBins() const { return fft_size / 2 + 1; }
  std::complex<double>& At(int t, int f) { return bins[static_cast<size_t>(t) * NumBins() + f]; }
  const std::complex<double>& At(int t, int f) const {
    return bins[static_cast<size_t>(t) * NumBins() + f];
  }
  bool SameGeometry(const Spectrogram& other) const {
    return num_frames == other.num_frames && fft_size == other.fft_size &&
           hop == other.hop && sample_rate == other.sample_rate;
  }
  // Frame range crop [begin, end).
  Spectrogram Crop(int begin, int end) const;
};

// In-place radix-2 complex FFT; size must be a power of two.
void Fft(std::vector<std::complex<double>>* x, bool inverse);

std::vector<double> MakeTaper(Taper taper, int fft_size);

// Frame count: floor((len - fft_size)/hop) + 1. Throws "input too short"
// if the signal does not cover one frame.
Spectrogram Stft(const AudioBuffer& signal, const StftConfig& cfg);

// Overlap-add synthesis with the matching synthesis taper, normalized by the
// accumulated squared-taper envelope. Output truncated/zero-padded to out_len.
AudioBuffer Istft(const Spectrogram& spec, const StftConfig& cfg, int64_t out_len);

// floor(t * sr / hop); the rounding rule used pipeline-wide.
int SecondsToFrames(double seconds, const StftConfig& cfg, int sample_rate);

}  // namespace css

#endif  // CSS_STFT_H_
