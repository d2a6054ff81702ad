#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ppgtrack/error.hpp"
#include "ppgtrack/io.hpp"
#include "ppgtrack/synth.hpp"
#include "ppgtrack/tracker.hpp"

namespace ppgtrack::cli {

namespace {

constexpr std::string_view kModule = "cli";

// Runs task(i) for i in [0, count) on up to `jobs` threads. The first
// exception is rethrown after all workers finish.
template <typename Task>
void parallel_for(std::size_t count, int jobs, Task task) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

MetricsReport report_for(const TrackResult& result, const RecordingSession& session,
                         const TrackerConfig& cfg, bool& has_truth) {
  has_truth = session.truth_bpm.has_value();
  if (has_truth) {
    return compute_metrics(result.bpm, *session.truth_bpm, result.window_seconds,
                           cfg.ev_sample_variance);
  }
  MetricsReport r;
  r.window_count = result.bpm.size();
  double total = 0.0;
  for (double s : result.window_seconds) total += s;
  r.astpf_s = result.window_seconds.empty() ? 0.0 : total / result.window_seconds.size();
  return r;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kParseError, kModule, "bad n value '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::kParseError, kModule, "empty n list");
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::kIoError, kModule, "cannot write " + path.string());
}

}  // namespace

TrackOutcome cmd_track(const fs::path& session_path, const TrackerConfig& cfg, const fs::path& out,
                       const std::optional<fs::path>& dump_dir) {
  const RecordingSession session = load_session_csv(session_path);
  SpectrumObserver observer;
  if (dump_dir) {
    fs::create_directories(*dump_dir);
    observer = [dir = *dump_dir](std::size_t w, const SpectrumEstimate& s1,
                                 const SpectrumEstimate& s2) { write_spectra(dir, w, s1, s2); };
  }
  const TrackResult result = track_session(session, cfg, observer);

  TrackOutcome outcome;
  outcome.session_id = session.session_id;
  outcome.trace_path = out;
  outcome.bpm = result.bpm;
  outcome.report = report_for(result, session, cfg, outcome.has_truth);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::optional<std::span<const double>> truth;
  if (outcome.has_truth) truth = std::span<const double>(*session.truth_bpm);
  save_trace(out, result.bpm, truth, outcome.report);
  return outcome;
}

std::vector<TrackOutcome> cmd_track_many(const std::vector<fs::path>& sessions,
                                         const TrackerConfig& cfg, const fs::path& out_dir,
                                         const std::optional<fs::path>& dump_dir, int jobs) {
  fs::create_directories(out_dir);
  std::vector<TrackOutcome> outcomes(sessions.size());
  parallel_for(sessions.size(), jobs, [&](std::size_t i) {
    const std::string stem = sessions[i].stem().string();
    std::optional<fs::path> dump;
    if (dump_dir) dump = *dump_dir / stem;
    outcomes[i] = cmd_track(sessions[i], cfg, out_dir / (stem + ".trace.csv"), dump);
  });
  return outcomes;
}

std::vector<SweepRow> cmd_sweep_n(const std::vector<fs::path>& sessions, const TrackerConfig& cfg,
                                  const std::vector<int>& n_values, int jobs) {
  std::vector<SweepRow> rows(sessions.size() * n_values.size());
  parallel_for(sessions.size(), jobs, [&](std::size_t i) {
    const RecordingSession session = load_session_csv(sessions[i]);
    if (!session.truth_bpm) {
      throw Error(ErrorKind::kDegenerateTruth, kModule,
                  sessions[i].string() + ": sweep needs a truth file");
    }
    for (std::size_t k = 0; k < n_values.size(); ++k) {
      TrackerConfig c = cfg;
      c.n_refs = n_values[k];
      const TrackResult result = track_session(session, c);
      bool has_truth = false;
      rows[i * n_values.size() + k] = {session.session_id, n_values[k],
                                       report_for(result, session, c, has_truth)};
    }
  });
  return rows;
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
  std::string out = "session_id,n_refs,aae,aep,ev,pc,astpf\n";
  char buf[256];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.session_id.c_str(),
                  r.n_refs, r.report.aae_bpm, r.report.aep_percent, r.report.ev, r.report.pc,
                  r.report.astpf_s);
    out += buf;
  }
  return out;
}

RecordingSession cmd_synth(const fs::path& spec_path, const fs::path& out,
                           std::optional<std::uint64_t> seed) {
  SynthSpec spec = load_synth_spec(spec_path);
  if (seed) spec.options.seed = *seed;
  RecordingSession session = synth_session(spec.profile_bpm, spec.tones, spec.options);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_session_csv(session, out);
  return session;
}

MetricsReport cmd_eval(const fs::path& trace_path, const std::optional<fs::path>& truth_path,
                       bool sample_variance) {
  const Trace trace = load_trace(trace_path);
  std::vector<double> truth;
  if (truth_path) {
    truth = load_column(*truth_path);
  } else if (trace.truth_bpm) {
    truth = *trace.truth_bpm;
  } else {
    throw Error(ErrorKind::kDegenerateTruth, kModule,
                trace_path.string() + " has no truth column; pass --truth");
  }
  std::vector<double> times;
  if (const fs::path footer = metrics_path_for(trace_path); fs::exists(footer)) {
    std::istringstream in(read_text(footer));
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("astpf=", 0) == 0) times.push_back(std::stod(line.substr(6)));
    }
  }
  return compute_metrics(trace.est_bpm, truth, times, sample_variance);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heart-rate tracking from wrist PPG and acceleration"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::string out_path;
  std::optional<std::string> dump_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::vector<std::string> inputs;
  std::string n_list = "3,50,100,150,200";
  std::optional<std::string> truth_path;

  auto* track = app.add_subcommand("track", "Track one or more session CSV files");
  track->add_option("sessions", inputs, "Session CSV files")->required();
  track->add_option("--config", config_path, "key=value tracker configuration");
  track->add_option("--out", out_path,
                    "Trace CSV (one session) or output directory (several sessions)")
      ->required();
  track->add_option("--dump-spectra", dump_dir, "Directory for per-window spectrum CSVs");
  track->add_option("--jobs", jobs, "Sessions processed in parallel")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep-n", "AAE and ASTPF over a list of reference counts");
  sweep->add_option("sessions", inputs, "Session CSV files with truth")->required();
  sweep->add_option("--n", n_list, "Comma-separated reference counts")->capture_default_str();
  sweep->add_option("--config", config_path, "key=value tracker configuration");
  sweep->add_option("--out", out_path, "Result CSV (also printed)");
  sweep->add_option("--jobs", jobs, "Sessions processed in parallel")->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic session");
  synth->add_option("spec", inputs, "Synthetic session description (key=value)")
      ->required()
      ->expected(1);
  synth->add_option("--out", out_path, "Session CSV to write")->required();
  synth->add_option("--seed", seed, "Overrides the description's seed");

  auto* eval = app.add_subcommand("eval", "Metrics of an existing trace");
  eval->add_option("trace", inputs, "Trace CSV")->required()->expected(1);
  eval->add_option("--truth", truth_path, "Truth column file");
  eval->add_option("--config", config_path, "key=value configuration (ev_sample_variance)");
  eval->add_option("--out", out_path, "Metrics file (also printed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const TrackerConfig cfg = config_path ? load_config(*config_path) : TrackerConfig{};
    if (*track) {
      std::optional<fs::path> dump;
      if (dump_dir) dump = fs::path(*dump_dir);
      std::vector<TrackOutcome> outcomes;
      if (inputs.size() == 1) {
        outcomes.push_back(cmd_track(inputs[0], cfg, out_path, dump));
      } else {
        const std::vector<fs::path> paths(inputs.begin(), inputs.end());
        outcomes = cmd_track_many(paths, cfg, out_path, dump, jobs);
      }
      for (const TrackOutcome& o : outcomes) {
        out << o.session_id << " -> " << o.trace_path.string() << '\n'
            << format_metrics(o.report, o.has_truth);
      }
    } else if (*sweep) {
      const std::vector<fs::path> paths(inputs.begin(), inputs.end());
      const std::string table = format_sweep(cmd_sweep_n(paths, cfg, parse_n_list(n_list), jobs));
      out << table;
      if (!out_path.empty()) write_file(out_path, table);
    } else if (*synth) {
      const RecordingSession s = cmd_synth(inputs[0], out_path, seed);
      out << s.session_id << ": " << s.size() << " samples, "
          << (s.truth_bpm ? s.truth_bpm->size() : 0) << " windows -> " << out_path << '\n';
    } else if (*eval) {
      std::optional<fs::path> truth;
      if (truth_path) truth = fs::path(*truth_path);
      const std::string text = format_metrics(cmd_eval(inputs[0], truth, cfg.ev_sample_variance));
      out << text;
      if (!out_path.empty()) write_file(out_path, text);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace ppgtrack::cli
