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

#ifndef CSS_MEETING_H_
#define CSS_MEETING_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "css/audio.h"
#include "css/grouping.h"
#include "css/rng.h"

namespace css {

enum class MeetingMode { kPartial, kSequential };

std::string ModeName(MeetingMode mode);
MeetingMode ModeFromName(const std::string& name);

struct SourceUtterance {
  int speaker_id = 0;
  AudioBuffer audio;
  double DurationSeconds() const { return audio.DurationSeconds(); }
};

struct UtteranceRecord {
  int utt_id = 0;
  int speaker_id = 0;
  int64_t start = 0;  // sample index, inclusive
  int64_t end = 0;    // sample index, exclusive
  int channel = 1;    // 1 or 2
};

// Long-form meeting: mixture = references[0] + references[1] sample-exact,
// per-channel utterances disjoint, and exactly one utterance group.
struct MeetingScript {
  std::vector<UtteranceRecord> records;  // ordered by start
  AudioBuffer mixture;
  std::array<AudioBuffer, 2> references;
  MeetingMode mode = MeetingMode::kPartial;
  uint64_t seed = 0;
  double overlap_ratio = 0.0;

  IntervalLayout Layout(int64_t link_gap_samples = 8000) const;
};

struct SimConfig {
  int num_speakers = 3;        // in [2, 5]
  double meeting_len = 80.0;   // seconds
  double overlap_lo = 0.20;
  double overlap_hi = 0.60;
  MeetingMode mode = MeetingMode::kPartial;
  double pause_max = 0.5;      // sequential-mode max gap, seconds
  double min_utt_len = 1.0;
  double max_utt_len = 8.0;
  int max_retries = 100;       // partial-mode overlap-ratio rejection budget
  int sample_rate = 16000;
  uint64_t rng_seed = 0;
  // Utterances are never placed closer than this to the meeting end, so the
  // analysis frames of the default STFT geometry cover all active samples.
  double end_margin = 0.05;
};

// Supplies utterances to the simulator. The synthetic pool is unbounded;
// fixed pools are for tests and run dry gracefully.
class SourcePool {
 public:
  virtual ~SourcePool() = default;
  // exclude_speaker < 0 means no constraint; max_duration caps the draw.
  virtual std::optional<SourceUtterance> Next(int exclude_speaker,
                                              double max_duration, Rng* rng) = 0;
};

class SynthSourcePool : public SourcePool {
 public:
  SynthSourcePool(int num_speakers, double min_len, double max_len)
      : num_speakers_(num_speakers), min_len_(min_len), max_len_(max_len) {}
  std::optional<SourceUtterance> Next(int exclude_speaker, double max_duration,
                                      Rng* rng) override;

 private:
  int num_speakers_;
  double min_len_, max_len_;
};

class FixedSourcePool : public SourcePool {
 public:
  explicit FixedSourcePool(std::vector<SourceUtterance> utts)
      : utts_(std::move(utts)) {}
  std::optional<SourceUtterance> Next(int exclude_speaker, double max_duration,
                                      Rng* rng) override;

 private:
  std::vector<SourceUtterance> utts_;
  size_t next_ = 0;
};

// Deterministic synthetic speaker: harmonic stack on a speaker-specific
// fundamental with a raised-cosine onset/offset envelope, so different
// speakers have distinct dominant spectral bins.
SourceUtterance SynthSource(int speaker_id, double duration, Rng* rng,
                            int sample_rate = 16000);

// Group-PIT data arrangement of two overlap-free reference channels.
// Throws "overlap target infeasible" when partial-mode rejection exhausts
// cfg.max_retries, and "pool exhausted" when no utterance can be placed.
MeetingScript SimulateMeeting(const SimConfig& cfg, SourcePool* pool);

// Convenience: simulate with a synthetic pool derived from cfg.
MeetingScript SimulateMeeting(const SimConfig& cfg);

// Overlapped-active samples over any-active samples. Throws on an all-silent
// script.
double OverlapRatio(const MeetingScript& script);
double OverlapRatio(const std::vector<UtteranceRecord>& records);

// Meeting directory layout: mixture.wav, ref1.wav, ref2.wav, script.jsonl.
void WriteMeetingDir(const std::string& dir, const MeetingScript& script);
MeetingScript ReadMeetingDir(const std::string& dir);

}  // namespace css

#endif  // CSS_MEETING_H_
