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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "css/stft.h"
#include "test_util.h"

using namespace css;

namespace {

// Independent oracle: direct DFT of one tapered frame.
std::vector<std::complex<double>> DirectFrameDft(const AudioBuffer& x, int t,
                                                 const StftConfig& cfg) {
  const auto taper = MakeTaper(cfg.taper, cfg.fft_size);
  std::vector<std::complex<double>> out(cfg.fft_size / 2 + 1);
  for (int k = 0; k <= cfg.fft_size / 2; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (int n = 0; n < cfg.fft_size; ++n) {
      const double ang = -2.0 * M_PI * k * n / cfg.fft_size;
      acc += x.samples[t * cfg.hop + n] * taper[n] *
             std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("frame count formula") {
  AudioBuffer x = test::RandomSignal(1024, 1);
  const Spectrogram spec = Stft(x, StftConfig());
  CHECK(spec.num_frames == 3);
  CHECK(spec.NumBins() == 257);
}

TEST_CASE("input too short") {
  AudioBuffer x = test::RandomSignal(511, 2);
  CHECK_THROWS_WITH_AS(Stft(x, StftConfig()), doctest::Contains("input too short"),
                       std::runtime_error);
}

TEST_CASE("all-zero signal gives all-zero spectrogram") {
  AudioBuffer x;
  x.samples.assign(4096, 0.0);
  const Spectrogram spec = Stft(x, StftConfig());
  for (const auto& b : spec.bins) CHECK(std::abs(b) == 0.0);
}

TEST_CASE("bin-center sine peaks at its bin in every frame") {
  const StftConfig cfg;
  const int k = 20;
  AudioBuffer x;
  x.samples.resize(16000);
  for (size_t n = 0; n < x.samples.size(); ++n) {
    x.samples[n] = std::sin(2.0 * M_PI * k * static_cast<double>(n) / cfg.fft_size);
  }
  const Spectrogram spec = Stft(x, cfg);
  for (int t = 0; t < spec.num_frames; ++t) {
    int argmax = 0;
    for (int f = 1; f < spec.NumBins(); ++f) {
      if (std::abs(spec.At(t, f)) > std::abs(spec.At(t, argmax))) argmax = f;
    }
    CHECK(argmax == k);
  }
}

TEST_CASE("frames match a direct DFT oracle") {
  const StftConfig cfg;
  AudioBuffer x = test::RandomSignal(2048, 3);
  const Spectrogram spec = Stft(x, cfg);
  for (int t : {0, spec.num_frames - 1}) {
    const auto oracle = DirectFrameDft(x, t, cfg);
    for (int f = 0; f < spec.NumBins(); ++f) {
      CHECK(std::abs(spec.At(t, f) - oracle[f]) < 1e-9);
    }
  }
}

TEST_CASE("stft linearity") {
  const StftConfig cfg;
  AudioBuffer x = test::RandomSignal(4096, 4);
  AudioBuffer y = test::RandomSignal(4096, 5);
  AudioBuffer z = x;
  const double a = 0.7, b = -1.3;
  for (size_t i = 0; i < z.samples.size(); ++i) {
    z.samples[i] = a * x.samples[i] + b * y.samples[i];
  }
  const Spectrogram sx = Stft(x, cfg), sy = Stft(y, cfg), sz = Stft(z, cfg);
  for (size_t i = 0; i < sz.bins.size(); ++i) {
    CHECK(std::abs(sz.bins[i] - (a * sx.bins[i] + b * sy.bins[i])) < 1e-9);
  }
}

TEST_CASE("round trip restores the interior") {
  const StftConfig cfg;
  for (uint64_t seed : {10, 11, 12, 13, 14}) {
    AudioBuffer x = test::RandomSignal(4 * 16000 + 777, seed);
    const Spectrogram spec = Stft(x, cfg);
    const AudioBuffer y = Istft(spec, cfg, x.NumSamples());
    CHECK(test::RelativeL2(x.samples, y.samples, cfg.fft_size,
                           x.samples.size() - cfg.fft_size) < 1e-6);
  }
}

TEST_CASE("istft of all-zero spectrogram is zero and istft is linear") {
  const StftConfig cfg;
  AudioBuffer x = test::RandomSignal(8192, 20);
  Spectrogram spec = Stft(x, cfg);

  Spectrogram zero = spec;
  for (auto& b : zero.bins) b = {0.0, 0.0};
  const AudioBuffer silent = Istft(zero, cfg, x.NumSamples());
  for (double s : silent.samples) CHECK(s == 0.0);

  Spectrogram scaled = spec;
  for (auto& b : scaled.bins) b *= 2.5;
  const AudioBuffer y = Istft(spec, cfg, x.NumSamples());
  const AudioBuffer y2 = Istft(scaled, cfg, x.NumSamples());
  for (size_t i = 0; i < y.samples.size(); ++i) {
    CHECK(y2.samples[i] == doctest::Approx(2.5 * y.samples[i]).epsilon(1e-12));
  }
}

TEST_CASE("istft geometry mismatch is an error") {
  const StftConfig cfg;
  Spectrogram spec = Stft(test::RandomSignal(2048, 21), cfg);
  StftConfig other = cfg;
  other.hop = 128;
  CHECK_THROWS_AS(Istft(spec, other, 2048), std::runtime_error);
}

TEST_CASE("Parseval-style frame energy constant") {
  // With an unnormalized DFT, full-spectrum energy = fft_size * windowed frame
  // energy; verify once via the hermitian expansion of the stored half bins.
  const StftConfig cfg;
  AudioBuffer x = test::RandomSignal(2048, 22);
  const Spectrogram spec = Stft(x, cfg);
  const auto taper = MakeTaper(cfg.taper, cfg.fft_size);
  double time_energy = 0.0;
  for (int n = 0; n < cfg.fft_size; ++n) {
    const double v = x.samples[n] * taper[n];
    time_energy += v * v;
  }
  double freq_energy = 0.0;
  for (int f = 0; f < spec.NumBins(); ++f) {
    const double e = std::norm(spec.At(0, f));
    const bool shared = (f == 0 || f == cfg.fft_size / 2);
    freq_energy += shared ? e : 2.0 * e;
  }
  CHECK(freq_energy / time_energy == doctest::Approx(cfg.fft_size).epsilon(1e-9));
}

TEST_CASE("seconds_to_frames rounding rule") {
  const StftConfig cfg;
  CHECK(SecondsToFrames(1.0, cfg, 16000) == 62);
  CHECK(SecondsToFrames(0.0, cfg, 16000) == 0);
  CHECK(SecondsToFrames(4.0, cfg, 16000) == 250);
}

TEST_CASE("spectrogram crop") {
  const Spectrogram spec = test::RandomSpectrogram(10, 30);
  const Spectrogram crop = spec.Crop(3, 7);
  CHECK(crop.num_frames == 4);
  for (int t = 0; t < 4; ++t) {
    for (int f = 0; f < spec.NumBins(); ++f) {
      CHECK(crop.At(t, f) == spec.At(t + 3, f));
    }
  }
}
