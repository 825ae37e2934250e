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

#ifndef CSS_AUDIO_H_
#define CSS_AUDIO_H_

#include <cstdint>
#include <string>
#include <vector>

namespace css {

// Mono sample sequence at a fixed sample rate. All DSP runs in double
// precision; WAV I/O converts at the boundary.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  int64_t NumSamples() const { return static_cast<int64_t>(samples.size()); }
  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Throws std::runtime_error if the buffer contains NaN/Inf or sample_rate <= 0.
void CheckFinite(const AudioBuffer& buf, const std::string& what);

// PCM 16-bit mono little-endian RIFF only; anything else is an error.
AudioBuffer ReadWav(const std::string& path);
void WriteWav(const std::string& path, const AudioBuffer& buf);

}  // namespace css

#endif  // CSS_AUDIO_H_
