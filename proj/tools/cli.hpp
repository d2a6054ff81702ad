#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ppgtrack/evaluation.hpp"
#include "ppgtrack/signal_model.hpp"

namespace ppgtrack::cli {

namespace fs = std::filesystem;

struct TrackOutcome {
  std::string session_id;
  fs::path trace_path;
  std::vector<double> bpm;
  MetricsReport report;
  bool has_truth = false;
};

/// Tracks one session file and writes `out` plus its metrics footer. With
/// dump_dir set, every window's spectra go to dump_dir/window_NNNNN.csv.
TrackOutcome cmd_track(const fs::path& session_path, const TrackerConfig& cfg, const fs::path& out,
                       const std::optional<fs::path>& dump_dir = std::nullopt);

/// Several sessions into directory out_dir (one `<stem>.trace.csv` each),
/// processed by up to `jobs` threads. Results keep the input order.
std::vector<TrackOutcome> cmd_track_many(const std::vector<fs::path>& sessions,
                                         const TrackerConfig& cfg, const fs::path& out_dir,
                                         const std::optional<fs::path>& dump_dir, int jobs);

struct SweepRow {
  std::string session_id;
  int n_refs = 0;
  MetricsReport report;
};

/// One row per (session, n); sessions spread over `jobs` threads.
std::vector<SweepRow> cmd_sweep_n(const std::vector<fs::path>& sessions, const TrackerConfig& cfg,
                                  const std::vector<int>& n_values, int jobs = 1);

std::string format_sweep(const std::vector<SweepRow>& rows);

/// Generates the session described by a synthetic session description file and saves it as CSV.
RecordingSession cmd_synth(const fs::path& spec_path, const fs::path& out,
                           std::optional<std::uint64_t> seed = std::nullopt);

/// Metrics for an existing trace. Truth comes from the trace's third column
/// or from truth_path; astpf is taken from the trace's metrics footer if any.
MetricsReport cmd_eval(const fs::path& trace_path, const std::optional<fs::path>& truth_path,
                       bool sample_variance = false);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ppgtrack::cli
