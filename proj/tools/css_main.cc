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

// css: continuous speech separation toolkit.
//
//   css simulate    generate meeting datasets (train/dev/eval splits)
//   css train-sep   train a mask separation model on a dataset split
//   css train-track train a permutation tracking network
//   css run         separate one meeting (stitching or tracking pipeline)
//   css eval        score separated outputs against a meeting's references
//   css sweep       train/eval window grid, Table-style output
//
// All subcommands accept --config <file> (TOML-style key = value, flags
// override config keys) and honor CSS_NUM_WORKERS for meeting-level
// parallelism. Seeded invocations are deterministic regardless of workers.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "css/audio.h"
#include "css/meeting.h"
#include "css/metrics.h"
#include "css/rng.h"
#include "css/separation.h"
#include "css/stft.h"
#include "css/stitcher.h"
#include "css/tracker.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "css-toolkit 0.1.0";

int NumWorkers() {
  const char* env = std::getenv("CSS_NUM_WORKERS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

// Runs fn(i) for i in [0, n) across the worker pool. Each index gets the same
// work regardless of scheduling, so results do not depend on the worker count.
void ParallelFor(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(NumWorkers(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Sorted meeting directories under root: any directory containing script.jsonl
// (root itself counts if it is a meeting dir).
std::vector<std::string> FindMeetingDirs(const std::string& root) {
  std::vector<std::string> dirs;
  if (fs::exists(fs::path(root) / "script.jsonl")) {
    dirs.push_back(root);
    return dirs;
  }
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_directory() &&
        fs::exists(entry.path() / "script.jsonl")) {
      dirs.push_back(entry.path().string());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw std::runtime_error("no meeting dirs under " + root);
  return dirs;
}

std::vector<css::MeetingScript> LoadMeetings(const std::string& root,
                                             int limit = 0) {
  auto dirs = FindMeetingDirs(root);
  if (limit > 0 && static_cast<int>(dirs.size()) > limit) dirs.resize(limit);
  std::vector<css::MeetingScript> meetings(dirs.size());
  ParallelFor(static_cast<int>(dirs.size()),
              [&](int i) { meetings[i] = css::ReadMeetingDir(dirs[i]); });
  return meetings;
}

void WriteText(const std::string& path, const std::string& text) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

ordered_json ConfigJson(const CLI::App& cmd) {
  ordered_json cfg;
  for (const auto* opt : cmd.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const auto& name = opt->get_lnames().front();
    if (name == "config" || name == "help") continue;
    if (opt->count() > 0 || !opt->get_default_str().empty()) {
      cfg[name] = opt->count() > 0
                      ? ordered_json(CLI::detail::join(opt->results(), ","))
                      : ordered_json(opt->get_default_str());
    }
  }
  return cfg;
}

ordered_json ReportHeader(const CLI::App& cmd) {
  ordered_json j;
  j["version"] = kVersion;
  j["config"] = ConfigJson(cmd);
  return j;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string out;
  int train = 200, dev = 20, eval_count = 20;
  std::string mode = "both";
  int speakers_lo = 2, speakers_hi = 5;
  double meeting_len = 80.0;
  uint64_t seed = 1;
};

void RunSimulateSplit(const std::string& split_dir, const std::string& mode,
                      int count, uint64_t split_seed, const SimulateArgs& a) {
  std::vector<ordered_json> rows(count);
  ParallelFor(count, [&](int i) {
    css::SimConfig cfg;
    cfg.mode = css::ModeFromName(mode);
    cfg.meeting_len = a.meeting_len;
    cfg.rng_seed = css::SplitMix64(split_seed + static_cast<uint64_t>(i));
    css::Rng pick(css::SplitMix64(cfg.rng_seed ^ 0x73706bULL));
    cfg.num_speakers = pick.UniformInt(a.speakers_lo, a.speakers_hi);
    const css::MeetingScript script = css::SimulateMeeting(cfg);

    char name[32];
    std::snprintf(name, sizeof(name), "%s_%04d", mode.c_str(), i);
    const std::string dir = (fs::path(split_dir) / name).string();
    css::WriteMeetingDir(dir, script);
    rows[i] = ordered_json{{"dir", name},
                           {"mode", mode},
                           {"seed", script.seed},
                           {"num_speakers", cfg.num_speakers},
                           {"num_utterances", script.records.size()},
                           {"overlap_ratio", script.overlap_ratio}};
  });
  std::ostringstream manifest;
  for (const auto& row : rows) manifest << row.dump() << "\n";
  WriteText((fs::path(split_dir) / "manifest.jsonl").string(), manifest.str());
}

int CmdSimulate(const CLI::App& cmd, const SimulateArgs& a) {
  const std::vector<std::pair<std::string, int>> splits = {
      {"train", a.train}, {"dev", a.dev}, {"eval", a.eval_count}};
  std::vector<std::string> modes;
  if (a.mode == "both") {
    modes = {"partial", "sequential"};
  } else {
    modes = {a.mode};
  }
  uint64_t salt = 0;
  for (const auto& [split, count] : splits) {
    for (const auto& mode : modes) {
      ++salt;
      if (count <= 0) continue;
      const std::string dir = (fs::path(a.out) / split / mode).string();
      fs::create_directories(dir);
      RunSimulateSplit(dir, mode, count, css::SplitMix64(a.seed ^ (salt << 32)), a);
    }
  }
  ordered_json report = ReportHeader(cmd);
  report["splits"] = ordered_json::object();
  for (const auto& [split, count] : splits) report["splits"][split] = count;
  WriteText((fs::path(a.out) / "simulate_report.json").string(),
            report.dump(2) + "\n");
  std::cout << "wrote dataset to " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train-sep / train-track

struct TrainSepArgs {
  std::string data, out;
  double window_s = 4.0;
  int max_meetings = 0;
  int epochs = 20, steps = 60, hidden = 64, context = 1;
  double lr = 0.5;
  uint64_t seed = 0;
};

int CmdTrainSep(const CLI::App& cmd, const TrainSepArgs& a) {
  const auto meetings = LoadMeetings(a.data, a.max_meetings);
  const css::StftConfig stft;
  const int sr = meetings.front().mixture.sample_rate;
  const int window_frames = css::SecondsToFrames(a.window_s, stft, sr);
  css::MaskTrainConfig cfg;
  cfg.learning_rate = a.lr;
  cfg.epochs = a.epochs;
  cfg.steps_per_epoch = a.steps;
  cfg.context = a.context;
  cfg.hidden = a.hidden;
  cfg.seed = a.seed;
  const css::MaskModel model = css::TrainMaskModel(meetings, window_frames, cfg);
  css::SaveMaskModel(a.out, model);

  ordered_json report = ReportHeader(cmd);
  report["window_frames"] = window_frames;
  report["final_loss"] = model.final_loss;
  WriteText(a.out + ".report.json", report.dump(2) + "\n");
  std::cout << "trained mask model (" << window_frames << " frames), final loss "
            << model.final_loss << " -> " << a.out << "\n";
  return 0;
}

struct TrainTrackArgs {
  std::string data, out;
  std::string separator = "oracle_pass_corrupted";
  uint64_t corrupt_seed = 7;
  std::string model_path;
  double short_window_s = 4.0;
  int max_meetings = 0;
  int epochs = 8, hidden = 32, context = 1, interior_stride = 8;
  double lr = 0.2;
  uint64_t seed = 0;
};

int CmdTrainTrack(const CLI::App& cmd, const TrainTrackArgs& a) {
  const auto meetings = LoadMeetings(a.data, a.max_meetings);
  std::shared_ptr<const css::MaskModel> mask;
  if (!a.model_path.empty()) {
    mask = std::make_shared<css::MaskModel>(css::LoadMaskModel(a.model_path));
  }
  const auto kind = css::SeparatorFromName(a.separator, a.corrupt_seed, mask);
  css::TrackTrainConfig cfg;
  cfg.short_window_s = a.short_window_s;
  cfg.learning_rate = a.lr;
  cfg.epochs = a.epochs;
  cfg.hidden = a.hidden;
  cfg.context = a.context;
  cfg.interior_stride = a.interior_stride;
  cfg.seed = a.seed;
  const css::TrackNet net = css::TrainTrackNet(meetings, kind, cfg);
  css::SaveTrackNet(a.out, net);

  ordered_json report = ReportHeader(cmd);
  report["final_loss"] = net.final_loss;
  WriteText(a.out + ".report.json", report.dump(2) + "\n");
  std::cout << "trained tracknet, final loss " << net.final_loss << " -> "
            << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string mode = "stitch";
  std::string in, out;
  std::string separator = "oracle_irm";
  std::string model_path, tracknet_path;
  uint64_t corrupt_seed = 7;
  double window_s = 32.0, th_s = 1.0, tf_s = 1.0;
  bool oracle_permutation = false;
  double short_window_s = 4.0, long_window_s = 24.0, eval_overlap_s = 2.0;
  bool oracle_labels = false;
};

int CmdRun(const CLI::App& cmd, const RunArgs& a) {
  const css::MeetingScript meeting = css::ReadMeetingDir(a.in);
  std::shared_ptr<const css::MaskModel> mask;
  if (!a.model_path.empty()) {
    mask = std::make_shared<css::MaskModel>(css::LoadMaskModel(a.model_path));
  }
  const auto kind = css::SeparatorFromName(a.separator, a.corrupt_seed, mask);
  const css::StftConfig stft;
  const auto t0 = std::chrono::steady_clock::now();

  ordered_json report = ReportHeader(cmd);
  report["mode"] = a.mode;
  css::AudioBuffer ch1, ch2;
  if (a.mode == "stitch") {
    const auto w = css::WindowSpec::FromSeconds(a.window_s, a.th_s, a.tf_s, stft,
                                                meeting.mixture.sample_rate);
    css::CssOptions opts;
    opts.oracle_permutation = a.oracle_permutation;
    const css::CssResult result = css::RunCss(meeting, kind, w, opts);
    ch1 = result.ch1;
    ch2 = result.ch2;
    report["window_frames"] = ordered_json{{"t_h", w.t_h}, {"t_c", w.t_c}, {"t_f", w.t_f}};
    report["segment_swaps"] = result.segment_swaps;
    report["zero_overlap_warnings"] = result.zero_overlap_warnings;
  } else if (a.mode == "track") {
    css::TrackCssOptions opts;
    opts.short_window_s = a.short_window_s;
    opts.long_window_s = a.long_window_s;
    opts.eval_overlap_s = a.eval_overlap_s;
    opts.use_oracle_labels = a.oracle_labels;
    std::unique_ptr<css::TrackNet> net;
    if (!a.oracle_labels) {
      if (a.tracknet_path.empty()) {
        throw std::runtime_error("--mode track needs --tracknet or --oracle-labels");
      }
      net = std::make_unique<css::TrackNet>(css::LoadTrackNet(a.tracknet_path));
    }
    const css::TrackCssResult result =
        css::RunTrackCss(meeting, kind, net.get(), opts);
    ch1 = result.ch1;
    ch2 = result.ch2;
    report["tracking_accuracy"] = result.tracking_accuracy;
    report["num_long_segments"] = result.num_long_segments;
    report["total_indicator_flips"] = result.total_indicator_flips;
    report["indicator_swap_fraction"] = result.indicator_swap_fraction;
    report["swap_run_lengths"] = result.swap_run_lengths;
  } else {
    throw std::runtime_error("unknown run mode: " + a.mode);
  }

  const auto t1 = std::chrono::steady_clock::now();
  report["runtime_s"] = std::chrono::duration<double>(t1 - t0).count();
  fs::create_directories(a.out);
  css::WriteWav((fs::path(a.out) / "ch1.wav").string(), ch1);
  css::WriteWav((fs::path(a.out) / "ch2.wav").string(), ch2);
  WriteText((fs::path(a.out) / "report.json").string(), report.dump(2) + "\n");
  std::cout << "wrote " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string ref, est;
  bool json = false;
};

int CmdEval(const CLI::App& cmd, const EvalArgs& a) {
  const css::MeetingScript meeting = css::ReadMeetingDir(a.ref);
  const css::AudioBuffer ch1 = css::ReadWav((fs::path(a.est) / "ch1.wav").string());
  const css::AudioBuffer ch2 = css::ReadWav((fs::path(a.est) / "ch2.wav").string());
  const css::EvalReport report = css::Evaluate(meeting, ch1, ch2);
  if (a.json) {
    ordered_json j = ReportHeader(cmd);
    j["metrics"] = ordered_json::parse(css::ReportToJson(report));
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("mean SI-SNR: %.2f dB\n", report.mean_si_snr_db);
    std::printf("frame accuracy: %.2f%%\n", 100.0 * report.frame_accuracy);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string data, out;
  std::string separator = "trainable_mask";
  std::vector<std::string> models;  // window:path entries for trainable_mask
  std::vector<double> eval_windows = {4.0, 16.0, 32.0, 60.0};
  double th_s = 1.0, tf_s = 1.0;
  uint64_t corrupt_seed = 7;
  int max_meetings = 0;
};

struct SweepCell {
  bool present = false;
  double si_snr = 0.0;
  double frame_acc = 0.0;
};

SweepCell EvalGrid(const std::vector<css::MeetingScript>& meetings,
                   const css::SeparatorKind& kind, double window_s, double th_s,
                   double tf_s, bool oracle_perm) {
  const css::StftConfig stft;
  std::vector<double> snr(meetings.size()), acc(meetings.size());
  ParallelFor(static_cast<int>(meetings.size()), [&](int i) {
    const auto& m = meetings[i];
    const auto w = css::WindowSpec::FromSeconds(window_s, th_s, tf_s, stft,
                                                m.mixture.sample_rate);
    css::CssOptions opts;
    opts.oracle_permutation = oracle_perm;
    const auto result = css::RunCss(m, kind, w, opts);
    const auto report = css::Evaluate(m, result.ch1, result.ch2);
    snr[i] = report.mean_si_snr_db;
    acc[i] = report.frame_accuracy;
  });
  SweepCell cell;
  cell.present = true;
  for (size_t i = 0; i < meetings.size(); ++i) {
    cell.si_snr += snr[i];
    cell.frame_acc += acc[i];
  }
  cell.si_snr /= static_cast<double>(meetings.size());
  cell.frame_acc /= static_cast<double>(meetings.size());
  return cell;
}

SweepCell EvalMixtureBaseline(const std::vector<css::MeetingScript>& meetings) {
  SweepCell cell;
  cell.present = true;
  for (const auto& m : meetings) {
    const auto report = css::Evaluate(m, m.mixture, m.mixture);
    cell.si_snr += report.mean_si_snr_db;
    cell.frame_acc += report.frame_accuracy;
  }
  cell.si_snr /= static_cast<double>(meetings.size());
  cell.frame_acc /= static_cast<double>(meetings.size());
  return cell;
}

int CmdSweep(const CLI::App& cmd, const SweepArgs& a) {
  const auto meetings = LoadMeetings(a.data, a.max_meetings);

  // Rows: one per model (trainable) or a single separator row, each with a
  // stitched and an oracle-permutation variant, plus the raw-mixture baseline.
  struct Row {
    std::string label;
    css::SeparatorKind kind;
    bool missing = false;
  };
  std::vector<Row> rows;
  if (a.separator == "trainable_mask") {
    for (const auto& entry : a.models) {
      const auto colon = entry.find(':');
      if (colon == std::string::npos) {
        throw std::runtime_error("--model entries must be <label>:<path>: " + entry);
      }
      Row row;
      row.label = entry.substr(0, colon);
      const std::string path = entry.substr(colon + 1);
      if (!fs::exists(path)) {
        std::cerr << "warning: missing model " << path << ", cells marked absent\n";
        row.missing = true;
      } else {
        row.kind = css::SeparatorKind::TrainableMask(
            std::make_shared<css::MaskModel>(css::LoadMaskModel(path)));
      }
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("sweep over trainable_mask needs --model");
  } else {
    Row row;
    row.label = a.separator;
    row.kind = css::SeparatorFromName(a.separator, a.corrupt_seed, nullptr);
    rows.push_back(std::move(row));
  }

  ordered_json table = ReportHeader(cmd);
  table["eval_windows_s"] = a.eval_windows;
  table["num_meetings"] = meetings.size();
  const SweepCell baseline = EvalMixtureBaseline(meetings);
  table["mixture_baseline"] = ordered_json{{"mean_si_snr_db", baseline.si_snr},
                                           {"frame_accuracy", baseline.frame_acc}};
  std::ostringstream text;
  text << "sliding window size (s) and mean SI-SNR (dB) / frame accuracy (%)\n";
  text << "mixture baseline: "
       << ordered_json(baseline.si_snr).dump() << " dB\n";

  table["rows"] = ordered_json::array();
  for (const auto& row : rows) {
    for (const bool oracle_perm : {false, true}) {
      ordered_json jrow;
      jrow["label"] = row.label + (oracle_perm ? " + oracle permutation" : "");
      jrow["cells"] = ordered_json::array();
      text << jrow["label"].get<std::string>() << ":";
      for (const double w : a.eval_windows) {
        if (row.missing) {
          jrow["cells"].push_back(nullptr);
          text << "      --     ";
          continue;
        }
        const SweepCell cell =
            EvalGrid(meetings, row.kind, w, a.th_s, a.tf_s, oracle_perm);
        jrow["cells"].push_back(ordered_json{{"window_s", w},
                                             {"mean_si_snr_db", cell.si_snr},
                                             {"frame_accuracy", cell.frame_acc}});
        char buf[64];
        std::snprintf(buf, sizeof(buf), "  %6.2f/%5.2f", cell.si_snr,
                      100.0 * cell.frame_acc);
        text << buf;
      }
      text << "\n";
      table["rows"].push_back(std::move(jrow));
    }
  }

  WriteText(a.out, table.dump(2) + "\n");
  WriteText(a.out + ".txt", text.str());
  std::cout << text.str();
  return 0;
}

void AddConfig(CLI::App* cmd) {
  cmd->set_config("--config", "", "key = value config file; flags override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - continuous speech separation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "generate meeting datasets");
  c_sim->add_option("--out", sim.out, "output dataset directory")->required();
  c_sim->add_option("--train", sim.train, "train meetings per mode")->capture_default_str();
  c_sim->add_option("--dev", sim.dev, "dev meetings per mode")->capture_default_str();
  c_sim->add_option("--eval", sim.eval_count, "eval meetings per mode")->capture_default_str();
  c_sim->add_option("--mode", sim.mode, "partial | sequential | both")->capture_default_str();
  c_sim->add_option("--speakers-lo", sim.speakers_lo, "min speakers")->capture_default_str();
  c_sim->add_option("--speakers-hi", sim.speakers_hi, "max speakers")->capture_default_str();
  c_sim->add_option("--meeting-len", sim.meeting_len, "meeting length, seconds")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "dataset seed")->capture_default_str();
  AddConfig(c_sim);

  TrainSepArgs tsep;
  auto* c_tsep = app.add_subcommand("train-sep", "train a mask separation model");
  c_tsep->add_option("--data", tsep.data, "directory of meeting dirs")->required();
  c_tsep->add_option("--out", tsep.out, "model output path")->required();
  c_tsep->add_option("--window-s", tsep.window_s, "training window, seconds")->capture_default_str();
  c_tsep->add_option("--max-meetings", tsep.max_meetings, "0 = all")->capture_default_str();
  c_tsep->add_option("--epochs", tsep.epochs)->capture_default_str();
  c_tsep->add_option("--steps", tsep.steps, "steps per epoch")->capture_default_str();
  c_tsep->add_option("--hidden", tsep.hidden)->capture_default_str();
  c_tsep->add_option("--context", tsep.context)->capture_default_str();
  c_tsep->add_option("--lr", tsep.lr)->capture_default_str();
  c_tsep->add_option("--seed", tsep.seed)->capture_default_str();
  AddConfig(c_tsep);

  TrainTrackArgs ttr;
  auto* c_ttr = app.add_subcommand("train-track", "train a tracking network");
  c_ttr->add_option("--data", ttr.data, "directory of meeting dirs")->required();
  c_ttr->add_option("--out", ttr.out, "tracknet output path")->required();
  c_ttr->add_option("--separator", ttr.separator, "short-span separator")->capture_default_str();
  c_ttr->add_option("--corrupt-seed", ttr.corrupt_seed)->capture_default_str();
  c_ttr->add_option("--model", ttr.model_path, "mask model for trainable_mask");
  c_ttr->add_option("--short-window-s", ttr.short_window_s)->capture_default_str();
  c_ttr->add_option("--max-meetings", ttr.max_meetings, "0 = all")->capture_default_str();
  c_ttr->add_option("--epochs", ttr.epochs)->capture_default_str();
  c_ttr->add_option("--hidden", ttr.hidden)->capture_default_str();
  c_ttr->add_option("--context", ttr.context)->capture_default_str();
  c_ttr->add_option("--interior-stride", ttr.interior_stride)->capture_default_str();
  c_ttr->add_option("--lr", ttr.lr)->capture_default_str();
  c_ttr->add_option("--seed", ttr.seed)->capture_default_str();
  AddConfig(c_ttr);

  RunArgs run;
  auto* c_run = app.add_subcommand("run", "separate one meeting");
  c_run->add_option("--mode", run.mode, "stitch | track")->capture_default_str();
  c_run->add_option("--in", run.in, "meeting directory")->required();
  c_run->add_option("--out", run.out, "output directory")->required();
  c_run->add_option("--separator", run.separator,
                    "oracle_pass | oracle_pass_corrupted | oracle_irm | trainable_mask")
      ->capture_default_str();
  c_run->add_option("--model", run.model_path, "mask model path");
  c_run->add_option("--tracknet", run.tracknet_path, "tracknet path");
  c_run->add_option("--corrupt-seed", run.corrupt_seed)->capture_default_str();
  c_run->add_option("--window-s", run.window_s, "stitch window, seconds")->capture_default_str();
  c_run->add_option("--th-s", run.th_s)->capture_default_str();
  c_run->add_option("--tf-s", run.tf_s)->capture_default_str();
  c_run->add_flag("--oracle-permutation", run.oracle_permutation,
                  "pick stitch permutations from references");
  c_run->add_option("--short-window-s", run.short_window_s)->capture_default_str();
  c_run->add_option("--long-window-s", run.long_window_s)->capture_default_str();
  c_run->add_option("--eval-overlap-s", run.eval_overlap_s)->capture_default_str();
  c_run->add_flag("--oracle-labels", run.oracle_labels,
                  "oracle tracking labels instead of a tracknet");
  AddConfig(c_run);

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "score outputs against references");
  c_ev->add_option("--ref", ev.ref, "meeting directory")->required();
  c_ev->add_option("--est", ev.est, "output directory with ch1.wav/ch2.wav")->required();
  c_ev->add_flag("--json", ev.json, "machine-readable report");
  AddConfig(c_ev);

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "window-size grid evaluation");
  c_sw->add_option("--data", sw.data, "directory of meeting dirs")->required();
  c_sw->add_option("--out", sw.out, "table JSON output path")->required();
  c_sw->add_option("--separator", sw.separator)->capture_default_str();
  c_sw->add_option("--model", sw.models, "repeated <label>:<path> mask models");
  c_sw->add_option("--eval-windows", sw.eval_windows, "seconds")->capture_default_str();
  c_sw->add_option("--th-s", sw.th_s)->capture_default_str();
  c_sw->add_option("--tf-s", sw.tf_s)->capture_default_str();
  c_sw->add_option("--corrupt-seed", sw.corrupt_seed)->capture_default_str();
  c_sw->add_option("--max-meetings", sw.max_meetings, "0 = all")->capture_default_str();
  AddConfig(c_sw);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_sim->parsed()) return CmdSimulate(*c_sim, sim);
    if (c_tsep->parsed()) return CmdTrainSep(*c_tsep, tsep);
    if (c_ttr->parsed()) return CmdTrainTrack(*c_ttr, ttr);
    if (c_run->parsed()) return CmdRun(*c_run, run);
    if (c_ev->parsed()) return CmdEval(*c_ev, ev);
    if (c_sw->parsed()) return CmdSweep(*c_sw, sw);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
