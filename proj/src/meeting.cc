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

#include "css/meeting.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace css {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

std::string ModeName(MeetingMode mode) {
  return mode == MeetingMode::kPartial ? "partial" : "sequential";
}

MeetingMode ModeFromName(const std::string& name) {
  if (name == "partial") return MeetingMode::kPartial;
  if (name == "sequential") return MeetingMode::kSequential;
  throw std::runtime_error("unknown meeting mode: " + name);
}

IntervalLayout MeetingScript::Layout(int64_t link_gap_samples) const {
  IntervalLayout layout;
  layout.link_gap = link_gap_samples;
  for (const auto& r : records) {
    layout.intervals.push_back({r.utt_id, r.start, r.end});
  }
  return layout;
}

SourceUtterance SynthSource(int speaker_id, double duration, Rng* rng,
                            int sample_rate) {
  if (duration <= 0.0) throw std::runtime_error("SynthSource: duration <= 0");
  SourceUtterance utt;
  utt.speaker_id = speaker_id;
  utt.audio.sample_rate = sample_rate;
  const int64_t n = static_cast<int64_t>(std::llround(duration * sample_rate));
  utt.audio.samples.resize(n);

  // Speaker-specific fundamental; harmonics land on well-separated bins for
  // the default 512-point analysis (bin spacing 31.25 Hz at 16 kHz).
  const double f0 = 150.0 + 85.0 * speaker_id;
  const double harmonics[3] = {1.0, 2.0, 3.0};
  const double amps[3] = {1.0, 0.55, 0.35};
  double phase[3];
  for (int h = 0; h < 3; ++h) phase[h] = rng->Uniform(0.0, kTwoPi);
  const double am_rate = 2.1 + 0.37 * speaker_id;
  const double am_phase = rng->Uniform(0.0, kTwoPi);

  const double ramp = std::min(0.05, duration / 4.0);
  const int64_t ramp_n = std::max<int64_t>(1, static_cast<int64_t>(ramp * sample_rate));
  for (int64_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    double s = 0.0;
    for (int h = 0; h < 3; ++h) {
      s += amps[h] * std::sin(kTwoPi * f0 * harmonics[h] * t + phase[h]);
    }
    s *= 1.0 + 0.25 * std::sin(kTwoPi * am_rate * t + am_phase);
    double env = 1.0;
    if (i < ramp_n) {
      env = 0.5 - 0.5 * std::cos(kTwoPi / 2.0 * i / ramp_n);
    } else if (i >= n - ramp_n) {
      env = 0.5 - 0.5 * std::cos(kTwoPi / 2.0 * (n - 1 - i) / ramp_n);
    }
    utt.audio.samples[i] = 0.25 * env * s;
  }
  return utt;
}

std::optional<SourceUtterance> SynthSourcePool::Next(int exclude_speaker,
                                                     double max_duration,
                                                     Rng* rng) {
  if (max_duration < min_len_) return std::nullopt;
  int speaker;
  do {
    speaker = rng->UniformInt(0, num_speakers_ - 1);
  } while (speaker == exclude_speaker && num_speakers_ > 1);
  const double dur = rng->Uniform(min_len_, std::min(max_len_, max_duration));
  return SynthSource(speaker, dur, rng);
}

std::optional<SourceUtterance> FixedSourcePool::Next(int exclude_speaker,
                                                     double max_duration,
                                                     Rng* rng) {
  (void)exclude_speaker;
  (void)rng;
  if (next_ >= utts_.size()) return std::nullopt;
  if (utts_[next_].DurationSeconds() > max_duration) return std::nullopt;
  return utts_[next_++];
}

namespace {

struct Placement {
  std::vector<UtteranceRecord> records;
  std::vector<AudioBuffer> audio;  // aligned with records
};

// One pass of the data arrangement rules: (i) first utterance to channel 1 at
// time 0; (ii) utterance u to the channel whose last end is earlier, onset
// uniform on (e_n, e_other) in partial mode and on (e_other, e_other + pause)
// in sequential mode.
Placement ArrangeOnce(const SimConfig& cfg, SourcePool* pool, Rng* rng) {
  Placement p;
  const int64_t len = static_cast<int64_t>(std::llround(cfg.meeting_len * cfg.sample_rate));
  const int64_t margin = static_cast<int64_t>(std::llround(cfg.end_margin * cfg.sample_rate));
  const int64_t pause_samples =
      static_cast<int64_t>(std::llround(cfg.pause_max * cfg.sample_rate));
  int64_t chan_end[2] = {0, 0};
  int chan_last_speaker[2] = {-1, -1};
  int utt_id = 0;

  while (true) {
    const int n = chan_end[0] <= chan_end[1] ? 0 : 1;
    const int other = 1 - n;
    int64_t start;
    if (utt_id == 0) {
      start = 0;
    } else if (cfg.mode == MeetingMode::kPartial) {
      // Open interval (e_n, e_other) in samples.
      int64_t lo = chan_end[n] + 1;
      int64_t hi = chan_end[other] - 1;
      if (lo > hi) {
        start = lo;  // degenerate sub-sample interval
      } else {
        start = lo + static_cast<int64_t>(rng->NextU64() %
                                          static_cast<uint64_t>(hi - lo + 1));
      }
    } else {
      int64_t lo = chan_end[other] + 1;
      int64_t hi = chan_end[other] + pause_samples - 1;
      start = lo + static_cast<int64_t>(rng->NextU64() %
                                        static_cast<uint64_t>(hi - lo + 1));
    }
    const double max_dur =
        static_cast<double>(len - margin - start) / cfg.sample_rate;
    if (max_dur < cfg.min_utt_len) break;
    const int exclude =
        chan_end[other] > start ? chan_last_speaker[other] : -1;
    auto utt = pool->Next(exclude, max_dur, rng);
    if (!utt.has_value()) break;
    const int64_t end = start + utt->audio.NumSamples();

    UtteranceRecord rec;
    rec.utt_id = utt_id++;
    rec.speaker_id = utt->speaker_id;
    rec.start = start;
    rec.end = end;
    rec.channel = n + 1;
    p.records.push_back(rec);
    p.audio.push_back(std::move(utt->audio));
    chan_end[n] = end;
    chan_last_speaker[n] = rec.speaker_id;
  }
  if (p.records.empty()) throw std::runtime_error("pool exhausted");
  return p;
}

}  // namespace

double OverlapRatio(const std::vector<UtteranceRecord>& records) {
  if (records.empty()) throw std::runtime_error("OverlapRatio: empty script");
  std::vector<std::pair<int64_t, int>> events;
  for (const auto& r : records) {
    events.emplace_back(r.start, +1);
    events.emplace_back(r.end, -1);
  }
  std::sort(events.begin(), events.end());
  int64_t any_active = 0, both_active = 0;
  int active = 0;
  int64_t prev = events.front().first;
  for (const auto& [pos, delta] : events) {
    const int64_t span = pos - prev;
    if (active >= 1) any_active += span;
    if (active >= 2) both_active += span;
    active += delta;
    prev = pos;
  }
  if (any_active == 0) throw std::runtime_error("OverlapRatio: all-silent script");
  return static_cast<double>(both_active) / static_cast<double>(any_active);
}

double OverlapRatio(const MeetingScript& script) {
  return OverlapRatio(script.records);
}

MeetingScript SimulateMeeting(const SimConfig& cfg, SourcePool* pool) {
  if (cfg.num_speakers < 2) {
    throw std::runtime_error("SimConfig: num_speakers must be >= 2");
  }
  if (!(cfg.overlap_lo >= 0.0 && cfg.overlap_lo <= cfg.overlap_hi &&
        cfg.overlap_hi < 1.0)) {
    throw std::runtime_error("SimConfig: invalid overlap bounds");
  }
  Rng rng(cfg.rng_seed);

  Placement placement;
  double ratio = 0.0;
  bool accepted = false;
  for (int attempt = 0; attempt < std::max(1, cfg.max_retries); ++attempt) {
    placement = ArrangeOnce(cfg, pool, &rng);
    ratio = OverlapRatio(placement.records);
    if (cfg.mode == MeetingMode::kSequential ||
        (ratio >= cfg.overlap_lo && ratio <= cfg.overlap_hi)) {
      accepted = true;
      break;
    }
  }
  if (!accepted) throw std::runtime_error("overlap target infeasible");

  MeetingScript script;
  script.mode = cfg.mode;
  script.seed = cfg.rng_seed;
  script.overlap_ratio = ratio;
  script.records = placement.records;
  const int64_t len = static_cast<int64_t>(std::llround(cfg.meeting_len * cfg.sample_rate));
  for (auto& ref : script.references) {
    ref.sample_rate = cfg.sample_rate;
    ref.samples.assign(static_cast<size_t>(len), 0.0);
  }
  for (size_t i = 0; i < script.records.size(); ++i) {
    const auto& r = script.records[i];
    const auto& a = placement.audio[i].samples;
    auto& dst = script.references[r.channel - 1].samples;
    for (int64_t k = 0; k < r.end - r.start; ++k) dst[r.start + k] = a[k];
  }
  script.mixture.sample_rate = cfg.sample_rate;
  script.mixture.samples.resize(static_cast<size_t>(len));
  for (int64_t i = 0; i < len; ++i) {
    script.mixture.samples[i] =
        script.references[0].samples[i] + script.references[1].samples[i];
  }
  return script;
}

MeetingScript SimulateMeeting(const SimConfig& cfg) {
  SynthSourcePool pool(cfg.num_speakers, cfg.min_utt_len, cfg.max_utt_len);
  return SimulateMeeting(cfg, &pool);
}

void WriteMeetingDir(const std::string& dir, const MeetingScript& script) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  WriteWav(dir + "/mixture.wav", script.mixture);
  WriteWav(dir + "/ref1.wav", script.references[0]);
  WriteWav(dir + "/ref2.wav", script.references[1]);
  std::ofstream os(dir + "/script.jsonl");
  if (!os) throw std::runtime_error("cannot write script.jsonl in " + dir);
  nlohmann::json header = {
      {"sample_rate", script.mixture.sample_rate},
      {"mode", ModeName(script.mode)},
      {"seed", script.seed},
      {"overlap_ratio", script.overlap_ratio},
      {"num_samples", script.mixture.NumSamples()},
  };
  os << header.dump() << "\n";
  for (const auto& r : script.records) {
    nlohmann::json row = {
        {"utt_id", r.utt_id},         {"speaker_id", r.speaker_id},
        {"start_sample", r.start},    {"end_sample", r.end},
        {"channel", r.channel},
    };
    os << row.dump() << "\n";
  }
}

MeetingScript ReadMeetingDir(const std::string& dir) {
  MeetingScript script;
  script.mixture = ReadWav(dir + "/mixture.wav");
  script.references[0] = ReadWav(dir + "/ref1.wav");
  script.references[1] = ReadWav(dir + "/ref2.wav");
  std::ifstream is(dir + "/script.jsonl");
  if (!is) throw std::runtime_error("missing script.jsonl in " + dir);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty script.jsonl in " + dir);
  auto header = nlohmann::json::parse(line);
  script.mode = ModeFromName(header.at("mode").get<std::string>());
  script.seed = header.at("seed").get<uint64_t>();
  script.overlap_ratio = header.at("overlap_ratio").get<double>();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto row = nlohmann::json::parse(line);
    UtteranceRecord r;
    r.utt_id = row.at("utt_id").get<int>();
    r.speaker_id = row.at("speaker_id").get<int>();
    r.start = row.at("start_sample").get<int64_t>();
    r.end = row.at("end_sample").get<int64_t>();
    r.channel = row.at("channel").get<int>();
    script.records.push_back(r);
  }
  return script;
}

}  // namespace css
