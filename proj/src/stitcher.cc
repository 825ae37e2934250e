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

#include "css/stitcher.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace css {

WindowSpec WindowSpec::FromSeconds(double window_s, double th_s, double tf_s,
                                   const StftConfig& cfg, int sample_rate) {
  WindowSpec w;
  const int total = SecondsToFrames(window_s, cfg, sample_rate);
  w.t_h = SecondsToFrames(th_s, cfg, sample_rate);
  w.t_f = SecondsToFrames(tf_s, cfg, sample_rate);
  w.t_c = total - w.t_h - w.t_f;
  if (w.t_c < 1) {
    throw std::runtime_error("WindowSpec: window too short for given t_h/t_f");
  }
  return w;
}

std::vector<FrameRange> Segment(int total_frames, const WindowSpec& w) {
  if (w.t_c <= 0) throw std::runtime_error("Segment: t_c must be >= 1");
  if (total_frames <= 0) throw std::runtime_error("Segment: empty meeting");
  std::vector<FrameRange> ranges;
  for (int m = 0; static_cast<int64_t>(m) * w.t_c < total_frames; ++m) {
    const int nominal_begin = m * w.t_c - w.t_h;
    const int nominal_end = m * w.t_c + w.t_c + w.t_f;
    FrameRange r;
    r.begin = std::max(0, nominal_begin);
    r.end = std::min(total_frames, nominal_end);
    r.left_truncated = nominal_begin < 0;
    r.short_tail = nominal_end > total_frames;
    ranges.push_back(r);
  }
  return ranges;
}

namespace {

// Mean squared magnitude difference over the shared global frame range,
// with `swap_cur` selecting cur's channel pairing.
double OverlapCost(const SegmentOutput& prev, bool prev_swapped,
                   const SegmentOutput& cur, bool swap_cur, int g0, int g1) {
  const int F = cur.pair.NumBins();
  double sum = 0.0;
  for (int t = g0; t < g1; ++t) {
    const int tp = t - prev.range.begin;
    const int tc = t - cur.range.begin;
    for (int c = 0; c < 2; ++c) {
      const int pc = prev_swapped ? 1 - c : c;
      const int cc = swap_cur ? 1 - c : c;
      for (int f = 0; f < F; ++f) {
        const double d = std::abs(prev.pair.ch[pc].At(tp, f)) -
                         std::abs(cur.pair.ch[cc].At(tc, f));
        sum += d * d;
      }
    }
  }
  return sum / (static_cast<double>(g1 - g0) * F * 2.0);
}

}  // namespace

bool AlignAdjacent(const SegmentOutput& prev, const SegmentOutput& cur,
                   bool* warned) {
  const int g0 = std::max(prev.range.begin, cur.range.begin);
  const int g1 = std::min(prev.range.end, cur.range.end);
  if (g1 <= g0) {
    if (warned != nullptr) *warned = true;
    return false;  // no evidence: identity
  }
  const double keep = OverlapCost(prev, prev.swapped, cur, false, g0, g1);
  const double swap = OverlapCost(prev, prev.swapped, cur, true, g0, g1);
  if (std::abs(keep - swap) < 1e-12) return prev.swapped;  // silent overlap
  return swap < keep;
}

ChannelPair OverlapAverage(const std::vector<SegmentOutput>& aligned,
                           int total_frames) {
  if (aligned.empty()) throw std::runtime_error("OverlapAverage: no segments");
  const int F = aligned.front().pair.NumBins();
  ChannelPair out;
  for (int c = 0; c < 2; ++c) {
    out.ch[c].fft_size = aligned.front().pair.ch[c].fft_size;
    out.ch[c].hop = aligned.front().pair.ch[c].hop;
    out.ch[c].sample_rate = aligned.front().pair.ch[c].sample_rate;
    out.ch[c].num_frames = total_frames;
    out.ch[c].bins.assign(static_cast<size_t>(total_frames) * F, {0.0, 0.0});
  }
  std::vector<int> count(total_frames, 0);
  for (const auto& seg : aligned) {
    if (seg.pair.NumFrames() != seg.range.Length()) {
      throw std::runtime_error("OverlapAverage: segment frame count mismatch");
    }
    for (int t = seg.range.begin; t < seg.range.end; ++t) {
      const int ts = t - seg.range.begin;
      for (int c = 0; c < 2; ++c) {
        const int sc = seg.swapped ? 1 - c : c;
        for (int f = 0; f < F; ++f) {
          out.ch[c].At(t, f) += seg.pair.ch[sc].At(ts, f);
        }
      }
      ++count[t];
    }
  }
  for (int t = 0; t < total_frames; ++t) {
    if (count[t] == 0) throw std::runtime_error("coverage hole");
    const double inv = 1.0 / count[t];
    for (int c = 0; c < 2; ++c) {
      for (int f = 0; f < F; ++f) out.ch[c].At(t, f) *= inv;
    }
  }
  return out;
}

CssResult RunCss(const MeetingScript& meeting, const SeparatorKind& kind,
                 const WindowSpec& w, const CssOptions& opts) {
  const Spectrogram mix = Stft(meeting.mixture, opts.stft);
  const bool needs_oracle = kind.type != SeparatorType::kTrainableMask;
  ChannelPair refs;
  if (needs_oracle || opts.oracle_permutation) {
    refs = ChannelPair{{Stft(meeting.references[0], opts.stft),
                        Stft(meeting.references[1], opts.stft)}};
  }

  const auto ranges = Segment(mix.num_frames, w);
  std::vector<SegmentOutput> segments;
  segments.reserve(ranges.size());
  for (size_t i = 0; i < ranges.size(); ++i) {
    SegmentOutput seg;
    seg.index = static_cast<int>(i);
    seg.range = ranges[i];
    Spectrogram mix_crop = mix.Crop(seg.range.begin, seg.range.end);
    ChannelPair refs_crop;
    const ChannelPair* refs_ptr = nullptr;
    if (needs_oracle || opts.oracle_permutation) {
      refs_crop = refs.Crop(seg.range.begin, seg.range.end);
      refs_ptr = &refs_crop;
    }
    seg.pair = Separate(kind, mix_crop,
                        needs_oracle ? refs_ptr : nullptr, seg.index);

    if (opts.oracle_permutation) {
      // Orientation straight from the references for this window.
      seg.swapped = GroupPitLoss(refs_crop, seg.pair).swapped;
    }
    segments.push_back(std::move(seg));
  }

  CssResult result;
  if (!opts.oracle_permutation) {
    for (size_t i = 1; i < segments.size(); ++i) {
      bool warned = false;
      segments[i].swapped = AlignAdjacent(segments[i - 1], segments[i], &warned);
      if (warned) ++result.zero_overlap_warnings;
    }
  }
  for (const auto& seg : segments) result.segment_swaps.push_back(seg.swapped ? 1 : 0);

  if (opts.current_only) {
    for (auto& seg : segments) {
      const int c0 = std::max(seg.range.begin,
                              seg.index * w.t_c);
      const int c1 = std::min(seg.range.end, (seg.index + 1) * w.t_c);
      seg.pair = seg.pair.Crop(c0 - seg.range.begin, c1 - seg.range.begin);
      seg.range.begin = c0;
      seg.range.end = c1;
    }
  }

  result.averaged = OverlapAverage(segments, mix.num_frames);
  const int64_t out_len = meeting.mixture.NumSamples();
  result.ch1 = Istft(result.averaged.ch[0], opts.stft, out_len);
  result.ch2 = Istft(result.averaged.ch[1], opts.stft, out_len);
  return result;
}

}  // namespace css
