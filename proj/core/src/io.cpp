#include "ppgtrack/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "ppgtrack/error.hpp"

namespace ppgtrack {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kModule = "io";
constexpr std::string_view kHeader = "ppg1,ppg2,accel_x,accel_y,accel_z";

[[noreturn]] void parse_error(const fs::path& where, std::size_t line, std::size_t column,
                              const std::string& what) {
  std::ostringstream msg;
  msg << where.string() << ":" << line;
  if (column > 0) msg << ":" << column;
  msg << ": " << what;
  throw Error(ErrorKind::kParseError, kModule, msg.str());
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(std::string_view s) {
  const std::string t = trim(s);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

std::optional<long long> to_integer(std::string_view s) {
  const std::string t = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIoError, kModule, "cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::kIoError, kModule, "write failed for " + path.string());
}

struct KeyValue {
  std::size_t line;
  std::string key;
  std::string value;
};

std::vector<KeyValue> key_values(const std::string& text, const fs::path& where) {
  std::vector<KeyValue> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string t = trim(raw);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) parse_error(where, line, 1, "expected key=value");
    out.push_back({line, trim(std::string_view(t).substr(0, eq)),
                   trim(std::string_view(t).substr(eq + 1))});
    if (out.back().key.empty()) parse_error(where, line, 1, "empty key");
  }
  return out;
}

double need_double(const KeyValue& kv, const fs::path& where) {
  const auto v = to_double(kv.value);
  if (!v) parse_error(where, kv.line, kv.key.size() + 2, "bad number for " + kv.key);
  return *v;
}

long long need_integer(const KeyValue& kv, const fs::path& where) {
  const auto v = to_integer(kv.value);
  if (!v) parse_error(where, kv.line, kv.key.size() + 2, "bad integer for " + kv.key);
  return *v;
}

struct ConfigField {
  std::function<void(TrackerConfig&, const KeyValue&, const fs::path&)> set;
  std::function<std::string(const TrackerConfig&)> get;
};

template <typename T>
ConfigField real_field(T TrackerConfig::*member) {
  return {[member](TrackerConfig& c, const KeyValue& kv, const fs::path& w) {
            c.*member = need_double(kv, w);
          },
          [member](const TrackerConfig& c) { return fmt("%.17g", c.*member); }};
}

ConfigField int_field(int TrackerConfig::*member) {
  return {[member](TrackerConfig& c, const KeyValue& kv, const fs::path& w) {
            c.*member = static_cast<int>(need_integer(kv, w));
          },
          [member](const TrackerConfig& c) { return std::to_string(c.*member); }};
}

const std::map<std::string, ConfigField>& config_fields() {
  static const std::map<std::string, ConfigField> fields = [] {
    std::map<std::string, ConfigField> f;
    f["window_len_s"] = real_field(&TrackerConfig::window_len_s);
    f["stride_s"] = real_field(&TrackerConfig::stride_s);
    f["band_low_hz"] = real_field(&TrackerConfig::band_low_hz);
    f["band_high_hz"] = real_field(&TrackerConfig::band_high_hz);
    f["bandpass_order"] = int_field(&TrackerConfig::bandpass_order);
    f["ssa_d"] = int_field(&TrackerConfig::ssa_d);
    f["ssa_embed_len"] = int_field(&TrackerConfig::ssa_embed_len);
    f["n_refs"] = int_field(&TrackerConfig::n_refs);
    f["lms_order"] = int_field(&TrackerConfig::lms_order);
    f["lms_mu"] = real_field(&TrackerConfig::lms_mu);
    f["lms_ref_rms"] = real_field(&TrackerConfig::lms_ref_rms);
    f["imat_iters"] = int_field(&TrackerConfig::imat_iters);
    f["imat_alpha"] = real_field(&TrackerConfig::imat_alpha);
    f["grid_size"] = int_field(&TrackerConfig::grid_size);
    f["dominance_threshold"] = real_field(&TrackerConfig::dominance_threshold);
    f["delta_bins"] = real_field(&TrackerConfig::delta_bins);
    f["eps1_bins"] = real_field(&TrackerConfig::eps1_bins);
    f["eps2_bins"] = real_field(&TrackerConfig::eps2_bins);
    f["eps3_bins"] = real_field(&TrackerConfig::eps3_bins);
    f["long_window"] = {
        [](TrackerConfig& c, const KeyValue& kv, const fs::path& w) {
          if (kv.value == "previous_plus_tail") {
            c.long_window = LongWindowMode::kPreviousPlusNewTail;
          } else if (kv.value == "previous_plus_current") {
            c.long_window = LongWindowMode::kPreviousPlusCurrent;
          } else {
            parse_error(w, kv.line, kv.key.size() + 2,
                        "long_window must be previous_plus_tail or previous_plus_current");
          }
        },
        [](const TrackerConfig& c) {
          return std::string(c.long_window == LongWindowMode::kPreviousPlusNewTail
                                 ? "previous_plus_tail"
                                 : "previous_plus_current");
        }};
    f["ev_sample_variance"] = {
        [](TrackerConfig& c, const KeyValue& kv, const fs::path& w) {
          if (kv.value == "true" || kv.value == "1") {
            c.ev_sample_variance = true;
          } else if (kv.value == "false" || kv.value == "0") {
            c.ev_sample_variance = false;
          } else {
            parse_error(w, kv.line, kv.key.size() + 2, "ev_sample_variance must be true or false");
          }
        },
        [](const TrackerConfig& c) { return std::string(c.ev_sample_variance ? "true" : "false"); }};
    return f;
  }();
  return fields;
}

TrackerConfig parse_config_at(const std::string& text, TrackerConfig cfg, const fs::path& where) {
  const auto& fields = config_fields();
  for (const KeyValue& kv : key_values(text, where)) {
    const auto it = fields.find(kv.key);
    if (it == fields.end()) parse_error(where, kv.line, 1, "unknown key '" + kv.key + "'");
    it->second.set(cfg, kv, where);
  }
  return cfg;
}

SynthSpec parse_synth_at(const std::string& text, const fs::path& where) {
  SynthSpec spec;
  std::optional<long long> windows;
  std::optional<double> start, end;
  for (const KeyValue& kv : key_values(text, where)) {
    if (kv.key == "windows") {
      windows = need_integer(kv, where);
      if (*windows < 1) parse_error(where, kv.line, kv.key.size() + 2, "windows must be >= 1");
    } else if (kv.key == "hr_start_bpm") {
      start = need_double(kv, where);
    } else if (kv.key == "hr_end_bpm") {
      end = need_double(kv, where);
    } else if (kv.key == "profile") {
      for (const std::string& item : split(kv.value, ',')) {
        const auto v = to_double(item);
        if (!v) parse_error(where, kv.line, kv.key.size() + 2, "bad profile value '" + item + "'");
        spec.profile_bpm.push_back(*v);
      }
    } else if (kv.key == "sample_rate_hz") {
      spec.options.sample_rate_hz = need_double(kv, where);
    } else if (kv.key == "snr_db") {
      spec.options.snr_db = need_double(kv, where);
    } else if (kv.key == "accel_noise_rms") {
      spec.options.accel_noise_rms = need_double(kv, where);
    } else if (kv.key == "ma_onset_s") {
      spec.options.ma_onset_s = need_double(kv, where);
    } else if (kv.key == "ma_ramp_s") {
      spec.options.ma_ramp_s = need_double(kv, where);
    } else if (kv.key == "seed") {
      spec.options.seed = static_cast<std::uint64_t>(need_integer(kv, where));
    } else if (kv.key == "session_id") {
      spec.options.session_id = kv.value;
    } else if (kv.key == "tone") {
      const auto parts = split(kv.value, ',');
      if (parts.size() != 11) {
        parse_error(where, kv.line, kv.key.size() + 2, "tone needs 11 comma-separated numbers");
      }
      std::array<double, 11> v{};
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto d = to_double(parts[i]);
        if (!d) parse_error(where, kv.line, kv.key.size() + 2, "bad tone value '" + parts[i] + "'");
        v[i] = *d;
      }
      MaTone tone;
      tone.freq_hz = v[0];
      tone.ppg = {TonePart{v[1], v[2]}, TonePart{v[3], v[4]}};
      tone.accel = {TonePart{v[5], v[6]}, TonePart{v[7], v[8]}, TonePart{v[9], v[10]}};
      spec.tones.push_back(tone);
    } else {
      parse_error(where, kv.line, 1, "unknown key '" + kv.key + "'");
    }
  }
  if (spec.profile_bpm.empty()) {
    if (!windows || !start) {
      throw Error(ErrorKind::kBadProfile, kModule,
                  "profile needs either profile= or windows= with hr_start_bpm=");
    }
    spec.profile_bpm = linear_profile(*start, end.value_or(*start), static_cast<std::size_t>(*windows));
  }
  return spec;
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, kModule, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path meta_path_for(const fs::path& csv) {
  fs::path p = csv;
  return p.replace_extension(".meta");
}

fs::path truth_path_for(const fs::path& csv) {
  fs::path p = csv;
  return p.replace_extension(".truth.csv");
}

fs::path metrics_path_for(const fs::path& trace) {
  fs::path p = trace;
  return p.replace_extension(".metrics");
}

RecordingSession load_session_csv(const fs::path& csv) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) parse_error(csv, 0, 0, "cannot open session file");

  std::string raw;
  if (!std::getline(in, raw)) parse_error(csv, 1, 0, "empty file");
  const std::string header = trim(raw);
  if (header != kHeader) {
    throw Error(ErrorKind::kColumnMismatch, kModule,
                csv.string() + ": header must be '" + std::string(kHeader) + "', got '" + header +
                    "'");
  }

  std::array<std::vector<double>, 5> cols;
  std::size_t line = 1;
  while (std::getline(in, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    const auto fields = split(raw, ',');
    if (fields.size() != 5) {
      throw Error(ErrorKind::kColumnMismatch, kModule,
                  csv.string() + ":" + std::to_string(line) + ": expected 5 fields, got " +
                      std::to_string(fields.size()));
    }
    std::size_t column = 1;
    for (std::size_t c = 0; c < 5; ++c) {
      const auto v = to_double(fields[c]);
      if (!v || !std::isfinite(*v)) {
        parse_error(csv, line, column, "bad sample '" + trim(fields[c]) + "'");
      }
      cols[c].push_back(*v);
      column += fields[c].size() + 1;
    }
  }
  if (cols[0].empty()) parse_error(csv, line, 0, "no samples");

  const fs::path meta = meta_path_for(csv);
  if (!fs::exists(meta)) {
    throw Error(ErrorKind::kRateMissing, kModule, "missing metadata file " + meta.string());
  }
  std::optional<double> rate;
  std::string session_id = csv.stem().string();
  for (const KeyValue& kv : key_values(read_text(meta), meta)) {
    if (kv.key == "sample_rate_hz") {
      rate = need_double(kv, meta);
    } else if (kv.key == "session_id") {
      session_id = kv.value;
    }
  }
  if (!rate || !(*rate > 0.0) || !std::isfinite(*rate)) {
    throw Error(ErrorKind::kRateMissing, kModule, meta.string() + ": no valid sample_rate_hz");
  }

  std::optional<std::vector<double>> truth;
  if (const fs::path t = truth_path_for(csv); fs::exists(t)) truth = load_column(t);

  RecordingSession session{session_id,
                           SampledSignal(std::move(cols[0]), *rate),
                           SampledSignal(std::move(cols[1]), *rate),
                           SampledSignal(std::move(cols[2]), *rate),
                           SampledSignal(std::move(cols[3]), *rate),
                           SampledSignal(std::move(cols[4]), *rate),
                           std::move(truth)};
  return session;
}

void save_session_csv(const RecordingSession& session, const fs::path& csv) {
  session.validate();
  {
    std::ofstream out = open_out(csv);
    out << kHeader << '\n';
    const SampledSignal* ch[5] = {&session.ppg1, &session.ppg2, &session.accel_x,
                                  &session.accel_y, &session.accel_z};
    for (std::size_t i = 0; i < session.size(); ++i) {
      for (std::size_t c = 0; c < 5; ++c) {
        if (c) out << ',';
        out << fmt("%.17g", (*ch[c])[i]);
      }
      out << '\n';
    }
    close_out(out, csv);
  }
  {
    const fs::path meta = meta_path_for(csv);
    std::ofstream out = open_out(meta);
    out << "sample_rate_hz=" << fmt("%.17g", session.sample_rate_hz()) << '\n'
        << "session_id=" << session.session_id << '\n';
    close_out(out, meta);
  }
  if (session.truth_bpm) {
    const fs::path truth = truth_path_for(csv);
    std::ofstream out = open_out(truth);
    out << "truth_bpm\n";
    for (double v : *session.truth_bpm) out << fmt("%.17g", v) << '\n';
    close_out(out, truth);
  }
}

std::vector<double> load_column(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::vector<double> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string t = trim(raw);
    if (t.empty()) continue;
    const auto v = to_double(t);
    if (!v) {
      if (line == 1) continue;  // header
      parse_error(path, line, 1, "bad value '" + t + "'");
    }
    if (!std::isfinite(*v)) parse_error(path, line, 1, "non-finite value");
    out.push_back(*v);
  }
  return out;
}

std::string format_metrics(const MetricsReport& r, bool with_accuracy) {
  std::ostringstream out;
  if (with_accuracy) {
    out << "aae=" << fmt("%.6g", r.aae_bpm) << '\n'
        << "aep=" << fmt("%.6g", r.aep_percent) << '\n'
        << "ev=" << fmt("%.6g", r.ev) << '\n'
        << "pc=" << fmt("%.6g", r.pc) << '\n';
  }
  out << "astpf=" << fmt("%.6g", r.astpf_s) << '\n' << "windows=" << r.window_count << '\n';
  return out.str();
}

void save_trace(const fs::path& path, std::span<const double> est_bpm,
                std::optional<std::span<const double>> truth_bpm, const MetricsReport& report) {
  if (truth_bpm && truth_bpm->size() != est_bpm.size()) {
    throw Error(ErrorKind::kLengthMismatch, kModule, "trace and truth lengths differ");
  }
  {
    std::ofstream out = open_out(path);
    out << (truth_bpm ? "window_index,est_bpm,truth_bpm\n" : "window_index,est_bpm\n");
    for (std::size_t i = 0; i < est_bpm.size(); ++i) {
      out << i << ',' << fmt("%.6g", est_bpm[i]);
      if (truth_bpm) out << ',' << fmt("%.6g", (*truth_bpm)[i]);
      out << '\n';
    }
    close_out(out, path);
  }
  const fs::path footer = metrics_path_for(path);
  std::ofstream out = open_out(footer);
  out << format_metrics(report, truth_bpm.has_value());
  close_out(out, footer);
}

Trace load_trace(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string raw;
  if (!std::getline(in, raw)) parse_error(path, 1, 0, "empty trace");
  const std::string header = trim(raw);
  const bool with_truth = header == "window_index,est_bpm,truth_bpm";
  if (!with_truth && header != "window_index,est_bpm") {
    throw Error(ErrorKind::kColumnMismatch, kModule, path.string() + ": unexpected trace header");
  }
  Trace trace;
  if (with_truth) trace.truth_bpm.emplace();
  std::size_t line = 1;
  while (std::getline(in, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    const auto fields = split(raw, ',');
    if (fields.size() != (with_truth ? 3u : 2u)) {
      throw Error(ErrorKind::kColumnMismatch, kModule,
                  path.string() + ":" + std::to_string(line) + ": wrong field count");
    }
    const auto est = to_double(fields[1]);
    if (!est || !std::isfinite(*est)) parse_error(path, line, 2, "bad est_bpm");
    trace.est_bpm.push_back(*est);
    if (with_truth) {
      const auto t = to_double(fields[2]);
      if (!t || !std::isfinite(*t)) parse_error(path, line, 3, "bad truth_bpm");
      trace.truth_bpm->push_back(*t);
    }
  }
  return trace;
}

TrackerConfig parse_config(const std::string& text, TrackerConfig base) {
  return parse_config_at(text, std::move(base), "<config>");
}

TrackerConfig load_config(const fs::path& path) {
  return parse_config_at(read_text(path), TrackerConfig{}, path);
}

std::string config_to_string(const TrackerConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : config_fields()) out += key + "=" + field.get(cfg) + "\n";
  return out;
}

SynthSpec parse_synth_spec(const std::string& text) { return parse_synth_at(text, "<synth>"); }

SynthSpec load_synth_spec(const fs::path& path) { return parse_synth_at(read_text(path), path); }

fs::path write_spectra(const fs::path& dir, std::size_t window, const SpectrumEstimate& spec1,
                       const SpectrumEstimate& spec2) {
  char name[32];
  std::snprintf(name, sizeof name, "window_%05zu.csv", window);
  const fs::path path = dir / name;
  std::ofstream out = open_out(path);
  out << "bin_hz=" << fmt("%.17g", spec1.bin_hz()) << '\n' << "bin,ppg1,ppg2\n";
  for (std::size_t k = 0; k < spec1.size(); ++k) {
    out << k << ',' << fmt("%.6g", spec1[k]) << ',' << fmt("%.6g", spec2[k]) << '\n';
  }
  close_out(out, path);
  return path;
}

}  // namespace ppgtrack
