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

#include "css/separation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace css {

namespace {

constexpr double kIrmEps = 1e-8;
constexpr double kLogFloor = 1e-6;
constexpr double kFeatureScale = 0.25;

// Silence feature value: log(kLogFloor) scaled.
double SilenceFeature() { return std::log(kLogFloor) * kFeatureScale; }

double LogMagFeature(double mag) { return std::log(mag + kLogFloor) * kFeatureScale; }

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

size_t MaskModel::NumParams() const {
  return w1.size() + b1.size() + w2.size() + b2.size();
}

std::vector<double> MaskModel::FlatParams() const {
  std::vector<double> p;
  p.reserve(NumParams());
  p.insert(p.end(), w1.begin(), w1.end());
  p.insert(p.end(), b1.begin(), b1.end());
  p.insert(p.end(), w2.begin(), w2.end());
  p.insert(p.end(), b2.begin(), b2.end());
  return p;
}

void MaskModel::SetFlatParams(const std::vector<double>& p) {
  if (p.size() != NumParams()) {
    throw std::runtime_error("MaskModel::SetFlatParams: size mismatch");
  }
  size_t off = 0;
  auto take = [&](std::vector<double>* dst) {
    std::copy(p.begin() + off, p.begin() + off + dst->size(), dst->begin());
    off += dst->size();
  };
  take(&w1);
  take(&b1);
  take(&w2);
  take(&b2);
}

MaskModel InitMaskModel(int context, int hidden, int bins, uint64_t seed) {
  MaskModel m;
  m.context = context;
  m.hidden = hidden;
  m.bins = bins;
  m.seed = seed;
  const int dim = m.FeatureDim();
  Rng rng(SplitMix64(seed ^ 0x6d61736b6d6f64ULL));
  const double s1 = 1.0 / std::sqrt(static_cast<double>(dim));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  m.w1.resize(static_cast<size_t>(hidden) * dim);
  for (auto& v : m.w1) v = s1 * rng.Gaussian();
  m.b1.assign(hidden, 0.0);
  m.w2.resize(static_cast<size_t>(2 * bins) * hidden);
  for (auto& v : m.w2) v = s2 * rng.Gaussian();
  m.b2.assign(2 * bins, 0.0);
  return m;
}

std::vector<double> MaskFeatures(const Spectrogram& mix_seg, int context) {
  const int T = mix_seg.num_frames;
  const int F = mix_seg.NumBins();
  const int dim = (2 * context + 1) * F + F;
  std::vector<double> feats(static_cast<size_t>(T) * dim);

  // Log magnitudes once.
  std::vector<double> logmag(static_cast<size_t>(T) * F);
  std::vector<double> mean(F, 0.0);
  for (int t = 0; t < T; ++t) {
    for (int f = 0; f < F; ++f) {
      const double lm = LogMagFeature(std::abs(mix_seg.At(t, f)));
      logmag[static_cast<size_t>(t) * F + f] = lm;
      mean[f] += lm;
    }
  }
  for (int f = 0; f < F; ++f) mean[f] /= std::max(1, T);

  // Spliced features carry the segment-mean-normalized log magnitudes, with
  // the mean itself appended, so the model's input distribution is tied to
  // the window statistics it was trained on.
  const double silence = SilenceFeature();
  for (int t = 0; t < T; ++t) {
    double* row = &feats[static_cast<size_t>(t) * dim];
    int pos = 0;
    for (int k = -context; k <= context; ++k) {
      const int src = t + k;
      if (src < 0 || src >= T) {
        for (int f = 0; f < F; ++f) row[pos++] = silence - mean[f];
      } else {
        const double* lm = &logmag[static_cast<size_t>(src) * F];
        for (int f = 0; f < F; ++f) row[pos++] = lm[f] - mean[f];
      }
    }
    for (int f = 0; f < F; ++f) row[pos++] = mean[f];
  }
  return feats;
}

std::vector<double> MaskForward(const MaskModel& model,
                                const std::vector<double>& features,
                                int num_frames) {
  const int dim = model.FeatureDim();
  const int H = model.hidden;
  const int out = 2 * model.bins;
  std::vector<double> masks(static_cast<size_t>(num_frames) * out);
  std::vector<double> h(H);
  for (int t = 0; t < num_frames; ++t) {
    const double* x = &features[static_cast<size_t>(t) * dim];
    for (int j = 0; j < H; ++j) {
      const double* w = &model.w1[static_cast<size_t>(j) * dim];
      double acc = model.b1[j];
      for (int i = 0; i < dim; ++i) acc += w[i] * x[i];
      h[j] = std::tanh(acc);
    }
    double* m = &masks[static_cast<size_t>(t) * out];
    for (int o = 0; o < out; ++o) {
      const double* w = &model.w2[static_cast<size_t>(o) * H];
      double acc = model.b2[o];
      for (int j = 0; j < H; ++j) acc += w[j] * h[j];
      m[o] = Sigmoid(acc);
    }
  }
  return masks;
}

SeparatorKind SeparatorFromName(const std::string& name, uint64_t seed,
                                std::shared_ptr<const MaskModel> model) {
  if (name == "oracle_pass") return SeparatorKind::OraclePass();
  if (name == "oracle_pass_corrupted") return SeparatorKind::OraclePassCorrupted(seed);
  if (name == "oracle_irm") return SeparatorKind::OracleIrm();
  if (name == "trainable_mask") {
    if (!model) throw std::runtime_error("trainable_mask separator needs a model");
    return SeparatorKind::TrainableMask(std::move(model));
  }
  throw std::runtime_error("unknown separator: " + name);
}

bool CorruptionSwap(uint64_t seed, int segment_index) {
  return (SplitMix64(seed ^ SplitMix64(static_cast<uint64_t>(segment_index) + 1)) & 1) != 0;
}

ChannelPair Separate(const SeparatorKind& kind, const Spectrogram& mix_seg,
                     const ChannelPair* oracle_refs, int segment_index) {
  const bool needs_oracle = kind.type == SeparatorType::kOraclePass ||
                            kind.type == SeparatorType::kOraclePassCorrupted ||
                            kind.type == SeparatorType::kOracleIrm;
  if (needs_oracle) {
    if (oracle_refs == nullptr) {
      throw std::runtime_error("Separate: oracle separator without oracle context");
    }
    if (!oracle_refs->ch[0].SameGeometry(mix_seg)) {
      throw std::runtime_error("Separate: oracle context geometry mismatch");
    }
  }

  switch (kind.type) {
    case SeparatorType::kOraclePass:
      return *oracle_refs;
    case SeparatorType::kOraclePassCorrupted: {
      if (CorruptionSwap(kind.seed, segment_index)) return oracle_refs->Swapped();
      return *oracle_refs;
    }
    case SeparatorType::kOracleIrm: {
      ChannelPair out = *oracle_refs;
      const int T = mix_seg.num_frames;
      const int F = mix_seg.NumBins();
      for (int t = 0; t < T; ++t) {
        for (int f = 0; f < F; ++f) {
          const double m1 = std::abs(oracle_refs->ch[0].At(t, f));
          const double m2 = std::abs(oracle_refs->ch[1].At(t, f));
          double g1, g2;
          if (m1 + m2 < kIrmEps) {
            g1 = g2 = 0.5;  // silent bin
          } else {
            g1 = m1 / (m1 + m2 + kIrmEps);
            g2 = m2 / (m1 + m2 + kIrmEps);
          }
          out.ch[0].At(t, f) = g1 * mix_seg.At(t, f);
          out.ch[1].At(t, f) = g2 * mix_seg.At(t, f);
        }
      }
      return out;
    }
    case SeparatorType::kTrainableMask: {
      if (!kind.model) throw std::runtime_error("Separate: trainable_mask without model");
      const MaskModel& model = *kind.model;
      if (model.bins != mix_seg.NumBins()) {
        throw std::runtime_error("Separate: model bin count mismatch");
      }
      const auto feats = MaskFeatures(mix_seg, model.context);
      const auto masks = MaskForward(model, feats, mix_seg.num_frames);
      ChannelPair out;
      out.ch[0] = mix_seg;
      out.ch[1] = mix_seg;
      const int T = mix_seg.num_frames;
      const int F = mix_seg.NumBins();
      for (int t = 0; t < T; ++t) {
        const double* m = &masks[static_cast<size_t>(t) * 2 * F];
        for (int f = 0; f < F; ++f) {
          out.ch[0].At(t, f) = m[f] * mix_seg.At(t, f);
          out.ch[1].At(t, f) = m[F + f] * mix_seg.At(t, f);
        }
      }
      return out;
    }
  }
  throw std::runtime_error("Separate: unreachable");
}

double MaskBatchLossGrad(const MaskModel& model, const Spectrogram& mix_seg,
                         const MagPair& ref_mags, std::vector<double>* grad) {
  const int T = mix_seg.num_frames;
  const int F = mix_seg.NumBins();
  if (ref_mags.frames != T || ref_mags.bins != F) {
    throw std::runtime_error("MaskBatchLossGrad: geometry mismatch");
  }
  const int dim = model.FeatureDim();
  const int H = model.hidden;
  const int out = 2 * F;

  const auto feats = MaskFeatures(mix_seg, model.context);

  // Forward with caches.
  std::vector<double> hidden(static_cast<size_t>(T) * H);
  std::vector<double> masks(static_cast<size_t>(T) * out);
  for (int t = 0; t < T; ++t) {
    const double* x = &feats[static_cast<size_t>(t) * dim];
    double* h = &hidden[static_cast<size_t>(t) * H];
    for (int j = 0; j < H; ++j) {
      const double* w = &model.w1[static_cast<size_t>(j) * dim];
      double acc = model.b1[j];
      for (int i = 0; i < dim; ++i) acc += w[i] * x[i];
      h[j] = std::tanh(acc);
    }
    double* m = &masks[static_cast<size_t>(t) * out];
    for (int o = 0; o < out; ++o) {
      const double* w = &model.w2[static_cast<size_t>(o) * H];
      double acc = model.b2[o];
      for (int j = 0; j < H; ++j) acc += w[j] * h[j];
      m[o] = Sigmoid(acc);
    }
  }

  // Estimated magnitudes = mask * |mix|.
  MagPair est = MagPair::Zeros(T, F);
  std::vector<double> mixmag(static_cast<size_t>(T) * F);
  for (int t = 0; t < T; ++t) {
    for (int f = 0; f < F; ++f) {
      const double mm = std::abs(mix_seg.At(t, f));
      mixmag[static_cast<size_t>(t) * F + f] = mm;
      est.At(0, t, f) = masks[static_cast<size_t>(t) * out + f] * mm;
      est.At(1, t, f) = masks[static_cast<size_t>(t) * out + F + f] * mm;
    }
  }

  const PitResult pit = GroupPitLoss(ref_mags, est);
  if (grad == nullptr) return pit.loss;

  const MagPair dmag = GradGroupPit(ref_mags, est, 1.0);
  if (grad->size() != model.NumParams()) grad->assign(model.NumParams(), 0.0);

  const size_t w1_off = 0;
  const size_t b1_off = model.w1.size();
  const size_t w2_off = b1_off + model.b1.size();
  const size_t b2_off = w2_off + model.w2.size();

  std::vector<double> dz2(out);
  std::vector<double> dh(H);
  for (int t = 0; t < T; ++t) {
    const double* x = &feats[static_cast<size_t>(t) * dim];
    const double* h = &hidden[static_cast<size_t>(t) * H];
    const double* m = &masks[static_cast<size_t>(t) * out];
    // dL/dmask = dL/d|est| * |mix|; dL/dz2 = dL/dmask * m(1-m).
    for (int o = 0; o < out; ++o) {
      const int c = o < F ? 0 : 1;
      const int f = o < F ? o : o - F;
      const double dmask = dmag.At(c, t, f) * mixmag[static_cast<size_t>(t) * F + f];
      dz2[o] = dmask * m[o] * (1.0 - m[o]);
    }
    std::fill(dh.begin(), dh.end(), 0.0);
    for (int o = 0; o < out; ++o) {
      if (dz2[o] == 0.0) continue;
      const double* w = &model.w2[static_cast<size_t>(o) * H];
      double* gw2 = &(*grad)[w2_off + static_cast<size_t>(o) * H];
      for (int j = 0; j < H; ++j) {
        gw2[j] += dz2[o] * h[j];
        dh[j] += dz2[o] * w[j];
      }
      (*grad)[b2_off + o] += dz2[o];
    }
    for (int j = 0; j < H; ++j) {
      const double dz1 = dh[j] * (1.0 - h[j] * h[j]);
      if (dz1 == 0.0) continue;
      double* gw1 = &(*grad)[w1_off + static_cast<size_t>(j) * dim];
      for (int i = 0; i < dim; ++i) gw1[i] += dz1 * x[i];
      (*grad)[b1_off + j] += dz1;
    }
  }
  return pit.loss;
}

MaskModel TrainMaskModel(const std::vector<MeetingScript>& dataset,
                         int window_frames, const MaskTrainConfig& cfg,
                         const StftConfig& stft_cfg) {
  if (dataset.empty()) throw std::runtime_error("TrainMaskModel: empty dataset");

  // Precompute spectrograms once.
  struct Prepared {
    Spectrogram mix;
    MagPair ref_mags;
  };
  std::vector<Prepared> prepared;
  int max_frames = 0;
  for (const auto& script : dataset) {
    Prepared p;
    p.mix = Stft(script.mixture, stft_cfg);
    ChannelPair refs{{Stft(script.references[0], stft_cfg),
                      Stft(script.references[1], stft_cfg)}};
    p.ref_mags = Magnitudes(refs);
    max_frames = std::max(max_frames, p.mix.num_frames);
    prepared.push_back(std::move(p));
  }
  if (window_frames > max_frames) {
    throw std::runtime_error("TrainMaskModel: window longer than any meeting");
  }

  MaskModel model = InitMaskModel(cfg.context, cfg.hidden,
                                  prepared[0].mix.NumBins(), cfg.seed);
  model.trained_window_frames = window_frames;
  Rng rng(SplitMix64(cfg.seed ^ 0x747261696eULL));
  std::vector<double> grad(model.NumParams(), 0.0);
  std::vector<double> velocity(model.NumParams(), 0.0);

  double epoch_loss = 0.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    epoch_loss = 0.0;
    int counted = 0;
    for (int step = 0; step < cfg.steps_per_epoch; ++step) {
      // Uniform over meetings that can host the window.
      int mi;
      do {
        mi = rng.UniformInt(0, static_cast<int>(prepared.size()) - 1);
      } while (prepared[mi].mix.num_frames < window_frames);
      const auto& p = prepared[mi];
      const int off = rng.UniformInt(0, p.mix.num_frames - window_frames);
      Spectrogram mix_crop = p.mix.Crop(off, off + window_frames);
      MagPair ref_crop = MagPair::Zeros(window_frames, p.ref_mags.bins);
      for (int c = 0; c < 2; ++c) {
        std::copy(p.ref_mags.ch[c].begin() + static_cast<size_t>(off) * p.ref_mags.bins,
                  p.ref_mags.ch[c].begin() +
                      static_cast<size_t>(off + window_frames) * p.ref_mags.bins,
                  ref_crop.ch[c].begin());
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      const double loss = MaskBatchLossGrad(model, mix_crop, ref_crop, &grad);
      epoch_loss += loss;
      ++counted;

      auto params = model.FlatParams();
      for (size_t i = 0; i < params.size(); ++i) {
        velocity[i] = cfg.momentum * velocity[i] - cfg.learning_rate * grad[i];
        params[i] += velocity[i];
      }
      model.SetFlatParams(params);
    }
    epoch_loss /= std::max(1, counted);
  }
  model.final_loss = epoch_loss;
  return model;
}

void SaveMaskModel(const std::string& path, const MaskModel& model) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write model: " + path);
  os << std::setprecision(17);
  os << "mask_model v1\n";
  os << model.context << " " << model.hidden << " " << model.bins << " "
     << model.seed << " " << model.final_loss << " "
     << model.trained_window_frames << "\n";
  for (const auto* vec : {&model.w1, &model.b1, &model.w2, &model.b2}) {
    os << vec->size();
    for (double v : *vec) os << " " << v;
    os << "\n";
  }
}

MaskModel LoadMaskModel(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read model: " + path);
  std::string line;
  std::getline(is, line);
  if (line != "mask_model v1") throw std::runtime_error("bad model header: " + path);
  MaskModel model;
  is >> model.context >> model.hidden >> model.bins >> model.seed >>
      model.final_loss >> model.trained_window_frames;
  for (auto* vec : {&model.w1, &model.b1, &model.w2, &model.b2}) {
    size_t n;
    is >> n;
    vec->resize(n);
    for (auto& v : *vec) is >> v;
  }
  if (!is) throw std::runtime_error("truncated model file: " + path);
  return model;
}

}  // namespace css
