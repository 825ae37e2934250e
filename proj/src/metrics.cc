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

#include "css/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "css/pit.h"
#include "json.hpp"

namespace css {

double SiSnr(const AudioBuffer& ref, const AudioBuffer& est) {
  const size_t n = ref.samples.size();
  if (n == 0 || n != est.samples.size()) {
    throw std::runtime_error("SiSnr: length mismatch or empty input");
  }
  double ref_mean = 0.0, est_mean = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ref_mean += ref.samples[i];
    est_mean += est.samples[i];
  }
  ref_mean /= static_cast<double>(n);
  est_mean /= static_cast<double>(n);

  double dot = 0.0, ref_energy = 0.0, est_energy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = ref.samples[i] - ref_mean;
    const double e = est.samples[i] - est_mean;
    dot += e * r;
    ref_energy += r * r;
    est_energy += e * e;
  }
  if (ref_energy <= 0.0) throw std::runtime_error("SiSnr: all-zero reference");
  if (est_energy <= 0.0) return -kSiSnrCapDb;

  const double alpha = dot / ref_energy;
  const double target_energy = alpha * alpha * ref_energy;
  double residual = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = ref.samples[i] - ref_mean;
    const double e = est.samples[i] - est_mean;
    const double d = e - alpha * r;
    residual += d * d;
  }
  if (residual <= 1e-12 * target_energy) return kSiSnrCapDb;
  if (target_energy <= 0.0) return -kSiSnrCapDb;
  const double db = 10.0 * std::log10(target_energy / residual);
  return std::clamp(db, -kSiSnrCapDb, kSiSnrCapDb);
}

bool GlobalBestSwap(const ChannelPair& refs, const ChannelPair& outputs) {
  const auto cost = PairwiseL2(refs, outputs);
  const double identity = cost[0][0] + cost[1][1];
  const double swapped = cost[0][1] + cost[1][0];
  return swapped < identity;
}

EvalReport UtteranceSiSnr(const MeetingScript& meeting, const AudioBuffer& out1,
                          const AudioBuffer& out2, const StftConfig& cfg) {
  if (meeting.records.empty()) throw std::runtime_error("UtteranceSiSnr: no records");
  if (out1.NumSamples() != meeting.mixture.NumSamples() ||
      out2.NumSamples() != meeting.mixture.NumSamples()) {
    throw std::runtime_error("UtteranceSiSnr: outputs must be meeting-length");
  }
  ChannelPair refs{{Stft(meeting.references[0], cfg), Stft(meeting.references[1], cfg)}};
  ChannelPair outs{{Stft(out1, cfg), Stft(out2, cfg)}};

  EvalReport report;
  report.global_swap = GlobalBestSwap(refs, outs);
  const AudioBuffer* chans[2] = {&out1, &out2};
  if (report.global_swap) std::swap(chans[0], chans[1]);

  double sum = 0.0;
  for (const auto& r : meeting.records) {
    AudioBuffer ref_crop, est_crop;
    ref_crop.sample_rate = meeting.mixture.sample_rate;
    est_crop.sample_rate = meeting.mixture.sample_rate;
    const auto& ref_sig = meeting.references[r.channel - 1].samples;
    const auto& est_sig = chans[r.channel - 1]->samples;
    ref_crop.samples.assign(ref_sig.begin() + r.start, ref_sig.begin() + r.end);
    est_crop.samples.assign(est_sig.begin() + r.start, est_sig.begin() + r.end);
    const double db = SiSnr(ref_crop, est_crop);
    report.utterance_si_snr_db.push_back(db);
    sum += db;
  }
  report.mean_si_snr_db = sum / static_cast<double>(report.utterance_si_snr_db.size());
  return report;
}

double FrameAccuracy(const MeetingScript& meeting, const AudioBuffer& out1,
                     const AudioBuffer& out2, const StftConfig& cfg,
                     EvalReport* detail) {
  ChannelPair refs{{Stft(meeting.references[0], cfg), Stft(meeting.references[1], cfg)}};
  ChannelPair outs{{Stft(out1, cfg), Stft(out2, cfg)}};
  const bool global_swap = GlobalBestSwap(refs, outs);
  const int o1 = global_swap ? 1 : 0;

  const int T = refs.ch[0].num_frames;
  const int F = refs.ch[0].NumBins();

  // Reference frame energies (both channels) and the activity floor.
  std::vector<double> frame_energy(T, 0.0);
  double peak = 0.0;
  for (int t = 0; t < T; ++t) {
    double e = 0.0;
    for (int c = 0; c < 2; ++c) {
      for (int f = 0; f < F; ++f) e += std::norm(refs.ch[c].At(t, f));
    }
    frame_energy[t] = e;
    peak = std::max(peak, e);
  }
  const double floor = 1e-10 * peak;

  int active = 0, correct = 0, silent = 0;
  for (int t = 0; t < T; ++t) {
    if (frame_energy[t] <= floor) {
      ++silent;
      continue;
    }
    ++active;
    double cost_id = 0.0, cost_sw = 0.0;
    for (int f = 0; f < F; ++f) {
      const double r1 = std::abs(refs.ch[0].At(t, f));
      const double r2 = std::abs(refs.ch[1].At(t, f));
      const double e1 = std::abs(outs.ch[o1].At(t, f));
      const double e2 = std::abs(outs.ch[1 - o1].At(t, f));
      cost_id += (r1 - e1) * (r1 - e1) + (r2 - e2) * (r2 - e2);
      cost_sw += (r1 - e2) * (r1 - e2) + (r2 - e1) * (r2 - e1);
    }
    if (cost_id <= cost_sw) ++correct;  // tie counts as identity
  }
  if (active == 0) throw std::runtime_error("FrameAccuracy: no active frames");
  if (detail != nullptr) {
    detail->active_frames = active;
    detail->silent_frames_excluded = silent;
    detail->global_swap = global_swap;
  }
  return static_cast<double>(correct) / static_cast<double>(active);
}

EvalReport Evaluate(const MeetingScript& meeting, const AudioBuffer& out1,
                    const AudioBuffer& out2, const StftConfig& cfg) {
  EvalReport report = UtteranceSiSnr(meeting, out1, out2, cfg);
  report.frame_accuracy = FrameAccuracy(meeting, out1, out2, cfg, &report);
  return report;
}

std::string ReportToJson(const EvalReport& report) {
  nlohmann::json j = {
      {"mean_si_snr_db", report.mean_si_snr_db},
      {"utterance_si_snr_db", report.utterance_si_snr_db},
      {"frame_accuracy", report.frame_accuracy},
      {"global_swap", report.global_swap},
      {"active_frames", report.active_frames},
      {"silent_frames_excluded", report.silent_frames_excluded},
  };
  return j.dump(2);
}

}  // namespace css
