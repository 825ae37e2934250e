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

#include "css/tracker.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace css {

namespace {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr double kTieEps = 1e-12;
constexpr double kBceClamp = 1e-9;

}  // namespace

std::vector<int> ShortTiling::BoundaryFrames() const {
  std::vector<int> boundaries;
  for (size_t m = 1; m < current.size(); ++m) {
    boundaries.push_back(current[m].begin);
  }
  return boundaries;
}

ShortTiling TileShortWindows(int total_frames, int window_frames) {
  if (window_frames < 3) {
    throw std::runtime_error("TileShortWindows: window must be >= 3 frames for t_h=t_f=1");
  }
  WindowSpec w;
  w.t_h = 1;
  w.t_f = 1;
  w.t_c = window_frames - 2;
  ShortTiling tiling;
  tiling.total_frames = total_frames;
  tiling.ranges = Segment(total_frames, w);
  for (size_t m = 0; m < tiling.ranges.size(); ++m) {
    FrameRange cur;
    cur.begin = static_cast<int>(m) * w.t_c;
    cur.end = std::min(total_frames, static_cast<int>(m + 1) * w.t_c);
    tiling.current.push_back(cur);
  }
  return tiling;
}

std::vector<ChannelPair> SeparateShortWindows(const SeparatorKind& kind,
                                              const Spectrogram& mix,
                                              const ChannelPair* refs,
                                              const ShortTiling& tiling,
                                              int segment_index_base) {
  std::vector<ChannelPair> outputs;
  outputs.reserve(tiling.ranges.size());
  for (size_t m = 0; m < tiling.ranges.size(); ++m) {
    const auto& r = tiling.ranges[m];
    Spectrogram mix_crop = mix.Crop(r.begin, r.end);
    ChannelPair refs_crop;
    const ChannelPair* refs_ptr = nullptr;
    if (refs != nullptr) {
      refs_crop = refs->Crop(r.begin, r.end);
      refs_ptr = &refs_crop;
    }
    outputs.push_back(Separate(kind, mix_crop, refs_ptr,
                               segment_index_base + static_cast<int>(m)));
  }
  return outputs;
}

namespace {

void CheckTiling(const std::vector<ChannelPair>& windows, const ShortTiling& tiling) {
  if (windows.size() != tiling.ranges.size()) {
    throw std::runtime_error("tracker: window count does not match tiling");
  }
  int expected_begin = 0;
  for (size_t m = 0; m < windows.size(); ++m) {
    if (tiling.current[m].begin != expected_begin) {
      throw std::runtime_error("tracker: out-of-order or gapped windows");
    }
    if (windows[m].NumFrames() != tiling.ranges[m].Length()) {
      throw std::runtime_error("tracker: window frame count mismatch");
    }
    expected_begin = tiling.current[m].end;
  }
  if (expected_begin != tiling.total_frames) {
    throw std::runtime_error("tracker: tiling does not cover the segment");
  }
}

}  // namespace

ChannelPair AssembleShortOutputs(const std::vector<ChannelPair>& windows,
                                 const ShortTiling& tiling) {
  CheckTiling(windows, tiling);
  const auto& proto = windows.front().ch[0];
  ChannelPair out;
  for (int c = 0; c < 2; ++c) {
    out.ch[c].fft_size = proto.fft_size;
    out.ch[c].hop = proto.hop;
    out.ch[c].sample_rate = proto.sample_rate;
    out.ch[c].num_frames = tiling.total_frames;
    out.ch[c].bins.assign(static_cast<size_t>(tiling.total_frames) * proto.NumBins(),
                          {0.0, 0.0});
  }
  const int F = proto.NumBins();
  for (size_t m = 0; m < windows.size(); ++m) {
    const auto& cur = tiling.current[m];
    const auto& rng = tiling.ranges[m];
    for (int t = cur.begin; t < cur.end; ++t) {
      const int ts = t - rng.begin;
      for (int c = 0; c < 2; ++c) {
        for (int f = 0; f < F; ++f) {
          out.ch[c].At(t, f) = windows[m].ch[c].At(ts, f);
        }
      }
    }
  }
  return out;
}

std::vector<double> SpliceFeatures(const ChannelPair& assembled,
                                   const SpliceConfig& cfg) {
  const int T = assembled.NumFrames();
  const int F = assembled.NumBins();
  const int c_ctx = cfg.context;
  const int dim = 2 * F * (2 * c_ctx + 1);
  std::vector<double> feats(static_cast<size_t>(T) * dim, 0.0);
  for (int t = 0; t < T; ++t) {
    double* row = &feats[static_cast<size_t>(t) * dim];
    int pos = 0;
    for (int k = -c_ctx; k <= c_ctx; ++k) {
      const int src = t + k;
      if (src < 0 || src >= T) {
        pos += 2 * F;  // zero padding at sequence edges
        continue;
      }
      for (int ch = 0; ch < 2; ++ch) {
        for (int f = 0; f < F; ++f) {
          row[pos++] = std::abs(assembled.ch[ch].At(src, f));
        }
      }
    }
  }
  return feats;
}

std::vector<double> SpliceConcat(const std::vector<ChannelPair>& windows,
                                 const ShortTiling& tiling,
                                 const SpliceConfig& cfg) {
  return SpliceFeatures(AssembleShortOutputs(windows, tiling), cfg);
}

PermutationIndicator OracleLabels(const ChannelPair& outputs,
                                  const ChannelPair& refs) {
  if (!outputs.SameGeometry(refs)) {
    throw std::runtime_error("OracleLabels: geometry mismatch");
  }
  const int T = outputs.NumFrames();
  const int F = outputs.NumBins();
  PermutationIndicator indicator;
  indicator.values.assign(T, 0);
  uint8_t prev = 0;
  for (int t = 0; t < T; ++t) {
    double cost_id = 0.0, cost_sw = 0.0;
    for (int f = 0; f < F; ++f) {
      const double r1 = std::abs(refs.ch[0].At(t, f));
      const double r2 = std::abs(refs.ch[1].At(t, f));
      const double o1 = std::abs(outputs.ch[0].At(t, f));
      const double o2 = std::abs(outputs.ch[1].At(t, f));
      cost_id += (r1 - o1) * (r1 - o1) + (r2 - o2) * (r2 - o2);
      cost_sw += (r1 - o2) * (r1 - o2) + (r2 - o1) * (r2 - o1);
    }
    uint8_t label;
    if (std::abs(cost_id - cost_sw) < kTieEps) {
      label = prev;  // silence carries the previous decision
    } else {
      label = cost_sw < cost_id ? 1 : 0;
    }
    indicator.values[t] = label;
    prev = label;
  }
  return indicator;
}

ChannelPair ApplyIndicator(const ChannelPair& outputs,
                           const PermutationIndicator& indicator) {
  if (indicator.NumFrames() != outputs.NumFrames()) {
    throw std::runtime_error("ApplyIndicator: length mismatch");
  }
  ChannelPair result = outputs;
  const int F = outputs.NumBins();
  for (int t = 0; t < outputs.NumFrames(); ++t) {
    if (!indicator.values[t]) continue;
    for (int f = 0; f < F; ++f) {
      std::swap(result.ch[0].At(t, f), result.ch[1].At(t, f));
    }
  }
  return result;
}

size_t TrackNet::NumParams() const {
  return w1.size() + b1.size() + w2.size() + b2.size();
}

std::vector<double> TrackNet::FlatParams() const {
  std::vector<double> p;
  p.reserve(NumParams());
  p.insert(p.end(), w1.begin(), w1.end());
  p.insert(p.end(), b1.begin(), b1.end());
  p.insert(p.end(), w2.begin(), w2.end());
  p.insert(p.end(), b2.begin(), b2.end());
  return p;
}

void TrackNet::SetFlatParams(const std::vector<double>& p) {
  if (p.size() != NumParams()) {
    throw std::runtime_error("TrackNet::SetFlatParams: size mismatch");
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

TrackNet InitTrackNet(int context, int hidden, int bins, uint64_t seed) {
  TrackNet net;
  net.context = context;
  net.hidden = hidden;
  net.bins = bins;
  net.seed = seed;
  const int dim = net.FeatureDim();
  Rng rng(SplitMix64(seed ^ 0x747261636b6e6574ULL));
  const double s1 = 1.0 / std::sqrt(static_cast<double>(dim));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  net.w1.resize(static_cast<size_t>(hidden) * dim);
  for (auto& v : net.w1) v = s1 * rng.Gaussian();
  net.b1.assign(hidden, 0.0);
  net.w2.resize(hidden);
  for (auto& v : net.w2) v = s2 * rng.Gaussian();
  net.b2.assign(1, 0.0);
  return net;
}

namespace {

double TrackNetFrame(const TrackNet& net, const double* row,
                     std::vector<double>* hidden_cache) {
  const int dim = net.FeatureDim();
  const int H = net.hidden;
  double out = net.b2[0];
  for (int j = 0; j < H; ++j) {
    const double* w = &net.w1[static_cast<size_t>(j) * dim];
    double acc = net.b1[j];
    for (int i = 0; i < dim; ++i) acc += w[i] * row[i] * net.input_scale;
    const double h = std::tanh(acc);
    if (hidden_cache != nullptr) (*hidden_cache)[j] = h;
    out += net.w2[j] * h;
  }
  return Sigmoid(out);
}

}  // namespace

std::vector<double> TrackNetForward(const TrackNet& net,
                                    const std::vector<double>& features,
                                    const std::vector<int>& frame_indices) {
  const int dim = net.FeatureDim();
  std::vector<double> probs(frame_indices.size());
  for (size_t i = 0; i < frame_indices.size(); ++i) {
    probs[i] = TrackNetFrame(net, &features[static_cast<size_t>(frame_indices[i]) * dim],
                             nullptr);
  }
  return probs;
}

double TrackNetLossGrad(const TrackNet& net, const std::vector<double>& features,
                        const std::vector<int>& frame_indices,
                        const std::vector<uint8_t>& targets,
                        const std::vector<double>& weights,
                        std::vector<double>* grad) {
  if (frame_indices.size() != targets.size() ||
      frame_indices.size() != weights.size()) {
    throw std::runtime_error("TrackNetLossGrad: size mismatch");
  }
  const int dim = net.FeatureDim();
  const int H = net.hidden;
  const size_t w1_off = 0;
  const size_t b1_off = net.w1.size();
  const size_t w2_off = b1_off + net.b1.size();
  const size_t b2_off = w2_off + net.w2.size();
  if (grad != nullptr && grad->size() != net.NumParams()) {
    grad->assign(net.NumParams(), 0.0);
  }

  double total_weight = 0.0;
  for (double w : weights) total_weight += w;
  if (total_weight <= 0.0) throw std::runtime_error("TrackNetLossGrad: zero weight");

  std::vector<double> hidden(H);
  double loss = 0.0;
  for (size_t i = 0; i < frame_indices.size(); ++i) {
    const double* row = &features[static_cast<size_t>(frame_indices[i]) * dim];
    const double p = TrackNetFrame(net, row, &hidden);
    const double y = static_cast<double>(targets[i]);
    const double pc = std::clamp(p, kBceClamp, 1.0 - kBceClamp);
    loss += -weights[i] * (y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
    if (grad == nullptr) continue;
    // d(BCE)/d(logit) = p - y.
    const double dlogit = weights[i] * (p - y) / total_weight;
    for (int j = 0; j < H; ++j) {
      (*grad)[w2_off + j] += dlogit * hidden[j];
    }
    (*grad)[b2_off] += dlogit;
    for (int j = 0; j < H; ++j) {
      const double dz1 = dlogit * net.w2[j] * (1.0 - hidden[j] * hidden[j]);
      if (dz1 == 0.0) continue;
      double* gw1 = &(*grad)[w1_off + static_cast<size_t>(j) * dim];
      for (int i2 = 0; i2 < dim; ++i2) gw1[i2] += dz1 * row[i2] * net.input_scale;
      (*grad)[b1_off + j] += dz1;
    }
  }
  return loss / total_weight;
}

PermutationIndicator PredictIndicator(const TrackNet& net,
                                      const std::vector<double>& features,
                                      const ShortTiling& tiling) {
  const int T = tiling.total_frames;
  PermutationIndicator indicator;
  indicator.values.assign(T, 0);
  const auto boundaries = tiling.BoundaryFrames();
  const auto probs = TrackNetForward(net, features, boundaries);
  uint8_t state = 0;
  size_t b = 0;
  for (int t = 1; t < T; ++t) {
    if (b < boundaries.size() && boundaries[b] == t) {
      if (probs[b] > 0.5) state ^= 1;
      ++b;
    }
    indicator.values[t] = state;
  }
  return indicator;
}

TrackNet TrainTrackNet(const std::vector<MeetingScript>& dataset,
                       const SeparatorKind& short_separator,
                       const TrackTrainConfig& cfg,
                       const StftConfig& stft_cfg) {
  if (dataset.empty()) throw std::runtime_error("TrainTrackNet: empty dataset");
  const int sr = dataset.front().mixture.sample_rate;
  const int long_frames = SecondsToFrames(cfg.window_s, stft_cfg, sr);
  const int hop_frames = SecondsToFrames(cfg.window_s - cfg.train_overlap_s, stft_cfg, sr);
  const int short_frames = SecondsToFrames(cfg.short_window_s, stft_cfg, sr);
  if (hop_frames <= 0) throw std::runtime_error("TrainTrackNet: overlap >= window");

  // Prepare training batches: one per 24 s window, with features, transition
  // targets, and the training frame subset (all boundaries + strided interiors).
  struct Batch {
    std::vector<double> features;
    std::vector<int> frames;
    std::vector<uint8_t> targets;
    std::vector<double> weights;
  };
  std::vector<Batch> batches;
  int bins = 0;
  int global_window_base = 0;
  for (const auto& meeting : dataset) {
    const Spectrogram mix = Stft(meeting.mixture, stft_cfg);
    const ChannelPair refs{{Stft(meeting.references[0], stft_cfg),
                            Stft(meeting.references[1], stft_cfg)}};
    bins = mix.NumBins();
    if (mix.num_frames < long_frames) {
      throw std::runtime_error("TrainTrackNet: window exceeds meeting length");
    }
    for (int off = 0; off + long_frames <= mix.num_frames; off += hop_frames) {
      const Spectrogram mix_crop = mix.Crop(off, off + long_frames);
      const ChannelPair refs_crop = refs.Crop(off, off + long_frames);
      const ShortTiling tiling = TileShortWindows(long_frames, short_frames);
      const auto windows = SeparateShortWindows(short_separator, mix_crop,
                                                &refs_crop, tiling,
                                                global_window_base);
      global_window_base += static_cast<int>(windows.size());
      const ChannelPair assembled = AssembleShortOutputs(windows, tiling);
      const auto labels = OracleLabels(assembled, refs_crop);

      Batch batch;
      batch.features = SpliceFeatures(assembled, SpliceConfig{cfg.context});
      std::vector<char> is_boundary(long_frames, 0);
      for (int bframe : tiling.BoundaryFrames()) is_boundary[bframe] = 1;
      int num_boundary = 0, num_interior = 0;
      for (int t = 1; t < long_frames; ++t) {
        if (!is_boundary[t] && (t % cfg.interior_stride) != 0) continue;
        batch.frames.push_back(t);
        batch.targets.push_back(labels.values[t] ^ labels.values[t - 1]);
        batch.weights.push_back(is_boundary[t] ? 1.0 : 0.0);
        ++(is_boundary[t] ? num_boundary : num_interior);
      }
      // Transitions can only occur at window boundaries, so interior frames
      // are all-negative filler; balance the two populations so the boundary
      // signal is not drowned out.
      const double interior_w =
          num_interior > 0
              ? static_cast<double>(num_boundary) / num_interior
              : 0.0;
      for (size_t k = 0; k < batch.frames.size(); ++k) {
        if (batch.weights[k] == 0.0) batch.weights[k] = interior_w;
      }
      batches.push_back(std::move(batch));
    }
  }

  TrackNet net = InitTrackNet(cfg.context, cfg.hidden, bins, cfg.seed);
  Rng rng(SplitMix64(cfg.seed ^ 0x7472636bULL));
  std::vector<double> grad(net.NumParams(), 0.0);
  double last_loss = 0.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Deterministic shuffle of batch order.
    std::vector<int> order(batches.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.UniformInt(0, static_cast<int>(i) - 1)]);
    }
    double epoch_loss = 0.0;
    for (int bi : order) {
      const Batch& batch = batches[bi];
      std::fill(grad.begin(), grad.end(), 0.0);
      epoch_loss += TrackNetLossGrad(net, batch.features, batch.frames,
                                     batch.targets, batch.weights, &grad);
      auto params = net.FlatParams();
      for (size_t i = 0; i < params.size(); ++i) {
        params[i] -= cfg.learning_rate * grad[i];
      }
      net.SetFlatParams(params);
    }
    last_loss = epoch_loss / static_cast<double>(batches.size());
  }
  net.final_loss = last_loss;
  return net;
}

void SaveTrackNet(const std::string& path, const TrackNet& net) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write tracknet: " + path);
  os << std::setprecision(17);
  os << "tracknet v1\n";
  os << net.context << " " << net.hidden << " " << net.bins << " "
     << net.input_scale << " " << net.seed << " " << net.final_loss << "\n";
  for (const auto* vec : {&net.w1, &net.b1, &net.w2, &net.b2}) {
    os << vec->size();
    for (double v : *vec) os << " " << v;
    os << "\n";
  }
}

TrackNet LoadTrackNet(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read tracknet: " + path);
  std::string line;
  std::getline(is, line);
  if (line != "tracknet v1") throw std::runtime_error("bad tracknet header: " + path);
  TrackNet net;
  is >> net.context >> net.hidden >> net.bins >> net.input_scale >> net.seed >>
      net.final_loss;
  for (auto* vec : {&net.w1, &net.b1, &net.w2, &net.b2}) {
    size_t n;
    is >> n;
    vec->resize(n);
    for (auto& v : *vec) is >> v;
  }
  if (!is) throw std::runtime_error("truncated tracknet file: " + path);
  return net;
}

TrackCssResult RunTrackCss(const MeetingScript& meeting,
                           const SeparatorKind& short_separator,
                           const TrackNet* net, const TrackCssOptions& opts) {
  if (!opts.use_oracle_labels && net == nullptr) {
    throw std::runtime_error("RunTrackCss: need a TrackNet or oracle labels");
  }
  const int sr = meeting.mixture.sample_rate;
  const Spectrogram mix = Stft(meeting.mixture, opts.stft);
  const ChannelPair refs{{Stft(meeting.references[0], opts.stft),
                          Stft(meeting.references[1], opts.stft)}};
  const int short_frames = SecondsToFrames(opts.short_window_s, opts.stft, sr);
  const int half_overlap_frames =
      std::max(1, SecondsToFrames(opts.eval_overlap_s / 2.0, opts.stft, sr));
  const int long_frames = SecondsToFrames(opts.long_window_s, opts.stft, sr);
  WindowSpec long_w;
  long_w.t_h = half_overlap_frames;
  long_w.t_f = half_overlap_frames;
  long_w.t_c = long_frames - 2 * half_overlap_frames;
  if (long_w.t_c < 1) throw std::runtime_error("RunTrackCss: long window too short");

  const auto long_ranges = Segment(mix.num_frames, long_w);
  TrackCssResult result;
  result.num_long_segments = static_cast<int>(long_ranges.size());

  // Per-frame applied orientation and oracle orientation, over current regions
  // only, for the tracking-accuracy report.
  std::vector<uint8_t> applied, oracle;

  std::vector<SegmentOutput> segments;
  int window_base = 0;
  for (size_t si = 0; si < long_ranges.size(); ++si) {
    const auto& lr = long_ranges[si];
    const Spectrogram mix_crop = mix.Crop(lr.begin, lr.end);
    const ChannelPair refs_crop = refs.Crop(lr.begin, lr.end);
    const ShortTiling tiling = TileShortWindows(lr.Length(), short_frames);
    const auto windows = SeparateShortWindows(short_separator, mix_crop,
                                              &refs_crop, tiling, window_base);
    window_base += static_cast<int>(windows.size());
    const ChannelPair assembled = AssembleShortOutputs(windows, tiling);
    const PermutationIndicator oracle_ind = OracleLabels(assembled, refs_crop);
    PermutationIndicator indicator;
    if (opts.use_oracle_labels) {
      indicator = oracle_ind;
    } else {
      const auto features = SpliceFeatures(assembled, SpliceConfig{net->context});
      indicator = PredictIndicator(*net, features, tiling);
    }

    SegmentOutput seg;
    seg.index = static_cast<int>(si);
    seg.range = lr;
    seg.pair = ApplyIndicator(assembled, indicator);
    segments.push_back(std::move(seg));

    // Current region of this long segment in meeting coordinates.
    const int c0 = static_cast<int>(si) * long_w.t_c;
    const int c1 = std::min(mix.num_frames, (static_cast<int>(si) + 1) * long_w.t_c);
    for (int t = c0; t < c1; ++t) {
      const int ts = t - lr.begin;
      applied.push_back(indicator.values[ts]);
      oracle.push_back(oracle_ind.values[ts]);
    }

    for (int t = 0; t < indicator.NumFrames(); ++t) {
      if (t > 0 && indicator.values[t] != indicator.values[t - 1]) {
        ++result.total_indicator_flips;
      }
      if (indicator.values[t]) result.indicator_swap_fraction += 1.0;
    }
  }
  {
    int total_frames = 0;
    for (const auto& seg : segments) total_frames += seg.pair.NumFrames();
    if (total_frames > 0) result.indicator_swap_fraction /= total_frames;
  }

  // Stitch the long segments: chain alignment then overlap-average.
  for (size_t i = 1; i < segments.size(); ++i) {
    segments[i].swapped = AlignAdjacent(segments[i - 1], segments[i]);
  }
  // Fold segment orientation into the applied-orientation trace.
  {
    size_t pos = 0;
    for (size_t si = 0; si < segments.size(); ++si) {
      const int c0 = static_cast<int>(si) * long_w.t_c;
      const int c1 = std::min(mix.num_frames, (static_cast<int>(si) + 1) * long_w.t_c);
      for (int t = c0; t < c1; ++t, ++pos) {
        applied[pos] ^= segments[si].swapped ? 1 : 0;
      }
    }
  }

  ChannelPair averaged = OverlapAverage(segments, mix.num_frames);
  const int64_t out_len = meeting.mixture.NumSamples();
  result.ch1 = Istft(averaged.ch[0], opts.stft, out_len);
  result.ch2 = Istft(averaged.ch[1], opts.stft, out_len);

  // Tracking accuracy up to the meeting-global flip.
  int match = 0;
  for (size_t i = 0; i < applied.size(); ++i) {
    if (applied[i] == oracle[i]) ++match;
  }
  const double acc = static_cast<double>(match) / static_cast<double>(applied.size());
  result.tracking_accuracy = std::max(acc, 1.0 - acc);

  // Swap-run summary of the final applied orientation.
  int run = 1;
  for (size_t i = 1; i < applied.size(); ++i) {
    if (applied[i] == applied[i - 1]) {
      ++run;
    } else {
      result.swap_run_lengths.push_back(run);
      run = 1;
    }
  }
  if (!applied.empty()) result.swap_run_lengths.push_back(run);
  return result;
}

}  // namespace css
