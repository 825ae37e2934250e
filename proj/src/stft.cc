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

#include "css/stft.h"

#include <cmath>
#include <stdexcept>

namespace css {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Spectrogram Spectrogram::Crop(int begin, int end) const {
  if (begin < 0 || end > num_frames || begin > end) {
    throw std::runtime_error("Spectrogram::Crop: range out of bounds");
  }
  Spectrogram out;
  out.num_frames = end - begin;
  out.fft_size = fft_size;
  out.hop = hop;
  out.sample_rate = sample_rate;
  out.bins.assign(bins.begin() + static_cast<size_t>(begin) * NumBins(),
                  bins.begin() + static_cast<size_t>(end) * NumBins());
  return out;
}

void Fft(std::vector<std::complex<double>>* x, bool inverse) {
  const size_t n = x->size();
  if (!IsPowerOfTwo(static_cast<int>(n))) {
    throw std::runtime_error("Fft: size must be a power of two");
  }
  auto& a = *x;
  // Bit reversal.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& v : a) v /= static_cast<double>(n);
  }
}

std::vector<double> MakeTaper(Taper taper, int fft_size) {
  std::vector<double> w(fft_size);
  switch (taper) {
    case Taper::kSqrtHann:
      // Periodic Hann; its square sums to 1 across 50% overlapped frames.
      for (int i = 0; i < fft_size; ++i) {
        double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * i / fft_size);
        w[i] = std::sqrt(hann);
      }
      break;
  }
  return w;
}

Spectrogram Stft(const AudioBuffer& signal, const StftConfig& cfg) {
  if (cfg.hop <= 0 || cfg.fft_size <= 0 || cfg.hop > cfg.fft_size) {
    throw std::runtime_error("Stft: invalid config (need 0 < hop <= fft_size)");
  }
  if (!IsPowerOfTwo(cfg.fft_size)) {
    throw std::runtime_error("Stft: fft_size must be a power of two");
  }
  const int64_t len = signal.NumSamples();
  if (len < cfg.fft_size) throw std::runtime_error("input too short");

  Spectrogram spec;
  spec.fft_size = cfg.fft_size;
  spec.hop = cfg.hop;
  spec.sample_rate = signal.sample_rate;
  spec.num_frames = static_cast<int>((len - cfg.fft_size) / cfg.hop) + 1;
  const int n_bins = spec.NumBins();
  spec.bins.resize(static_cast<size_t>(spec.num_frames) * n_bins);

  const std::vector<double> window = MakeTaper(cfg.taper, cfg.fft_size);
  std::vector<std::complex<double>> frame(cfg.fft_size);
  for (int t = 0; t < spec.num_frames; ++t) {
    const int64_t off = static_cast<int64_t>(t) * cfg.hop;
    for (int i = 0; i < cfg.fft_size; ++i) {
      frame[i] = {signal.samples[off + i] * window[i], 0.0};
    }
    Fft(&frame, /*inverse=*/false);
    for (int f = 0; f < n_bins; ++f) spec.At(t, f) = frame[f];
  }
  return spec;
}

AudioBuffer Istft(const Spectrogram& spec, const StftConfig& cfg, int64_t out_len) {
  if (spec.fft_size != cfg.fft_size || spec.hop != cfg.hop) {
    throw std::runtime_error("Istft: geometry mismatch between spectrogram and config");
  }
  const int n = cfg.fft_size;
  const int n_bins = spec.NumBins();
  const std::vector<double> window = MakeTaper(cfg.taper, n);

  const int64_t cover = spec.num_frames > 0
                            ? static_cast<int64_t>(spec.num_frames - 1) * cfg.hop + n
                            : 0;
  std::vector<double> acc(cover, 0.0);
  std::vector<double> wsum(cover, 0.0);

  std::vector<std::complex<double>> frame(n);
  for (int t = 0; t < spec.num_frames; ++t) {
    for (int f = 0; f < n_bins; ++f) frame[f] = spec.At(t, f);
    for (int f = n_bins; f < n; ++f) frame[f] = std::conj(spec.At(t, n - f));
    Fft(&frame, /*inverse=*/true);
    const int64_t off = static_cast<int64_t>(t) * cfg.hop;
    for (int i = 0; i < n; ++i) {
      acc[off + i] += frame[i].real() * window[i];
      wsum[off + i] += window[i] * window[i];
    }
  }

  AudioBuffer out;
  out.sample_rate = spec.sample_rate;
  out.samples.assign(static_cast<size_t>(out_len), 0.0);
  const int64_t copy = std::min<int64_t>(out_len, cover);
  for (int64_t i = 0; i < copy; ++i) {
    out.samples[i] = wsum[i] > 1e-12 ? acc[i] / wsum[i] : 0.0;
  }
  return out;
}

int SecondsToFrames(double seconds, const StftConfig& cfg, int sample_rate) {
  if (seconds < 0.0) throw std::runtime_error("SecondsToFrames: negative time");
  return static_cast<int>(std::floor(seconds * sample_rate / cfg.hop));
}

}  // namespace css
