#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ppgtrack/evaluation.hpp"
#include "ppgtrack/signal_model.hpp"
#include "ppgtrack/spectrum.hpp"
#include "ppgtrack/synth.hpp"

namespace ppgtrack {

/// Companion files of a session CSV `name.csv`: `name.meta` (key=value,
/// needs sample_rate_hz, optional session_id) and the optional
/// `name.truth.csv` (one BPM per window, optional `truth_bpm` header).
std::filesystem::path meta_path_for(const std::filesystem::path& csv);
std::filesystem::path truth_path_for(const std::filesystem::path& csv);

/// Throws Error(kParseError) with line and column, Error(kRateMissing),
/// Error(kColumnMismatch) for a header other than ppg1,ppg2,accel_x,accel_y,accel_z
/// or a row with the wrong field count, Error(kIoError) if the file cannot be opened.
RecordingSession load_session_csv(const std::filesystem::path& csv);

/// Writes the CSV, the metadata sidecar and, when present, the truth file.
/// Values are printed with 17 significant digits so loading is exact.
void save_session_csv(const RecordingSession& session, const std::filesystem::path& csv);

/// Metrics footer written next to a trace: `name.csv` -> `name.metrics`.
std::filesystem::path metrics_path_for(const std::filesystem::path& trace);

/// `window_index,est_bpm[,truth_bpm]` with 6 significant digits, plus the
/// footer. Without truth the footer carries only astpf and windows.
void save_trace(const std::filesystem::path& path, std::span<const double> est_bpm,
                std::optional<std::span<const double>> truth_bpm, const MetricsReport& report);

struct Trace {
  std::vector<double> est_bpm;
  std::optional<std::vector<double>> truth_bpm;
};

Trace load_trace(const std::filesystem::path& path);

/// One column of numbers, optionally headed by a single non-numeric line.
std::vector<double> load_column(const std::filesystem::path& path);

std::string format_metrics(const MetricsReport& report, bool with_accuracy = true);

/// Flat key=value lines, `#` comments and blank lines ignored. Keys are the
/// TrackerConfig field names; unknown keys and malformed values are
/// Error(kParseError). Missing keys keep their defaults.
TrackerConfig parse_config(const std::string& text, TrackerConfig base = {});
TrackerConfig load_config(const std::filesystem::path& path);
std::string config_to_string(const TrackerConfig& cfg);

/// Synthetic session description. Keys: windows, hr_start_bpm, hr_end_bpm,
/// or profile (comma list), sample_rate_hz, snr_db (inf allowed),
/// accel_noise_rms, ma_onset_s, ma_ramp_s, seed, session_id and repeated
/// tone=freq,ppg1_amp,ppg1_phase,ppg2_amp,ppg2_phase,ax_amp,ax_phase,ay_amp,ay_phase,az_amp,az_phase
struct SynthSpec {
  std::vector<double> profile_bpm;
  std::vector<MaTone> tones;
  SynthOptions options;
};

SynthSpec parse_synth_spec(const std::string& text);
SynthSpec load_synth_spec(const std::filesystem::path& path);

/// `dir/window_NNNNN.csv`: a `bin_hz=` line, then `bin,ppg1,ppg2` rows.
std::filesystem::path write_spectra(const std::filesystem::path& dir, std::size_t window,
                                    const SpectrumEstimate& spec1, const SpectrumEstimate& spec2);

std::string read_text(const std::filesystem::path& path);

}  // namespace ppgtrack
