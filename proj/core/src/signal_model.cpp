#include "ppgtrack/signal_model.hpp"

#include <cmath>
#include <sstream>

#include "ppgtrack/error.hpp"

namespace ppgtrack {

namespace {
constexpr std::string_view kModule = "signal_model";

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, kModule, what);
}
}  // namespace

SampledSignal::SampledSignal(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  require(!samples_.empty(), ErrorKind::kInvalidSignal, "signal has no samples");
  require(std::isfinite(sample_rate_hz_) && sample_rate_hz_ > 0.0, ErrorKind::kInvalidSignal,
          "sample rate must be positive");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw Error(ErrorKind::kInvalidSignal, kModule,
                  "non-finite sample at index " + std::to_string(i));
    }
  }
}

SampledSignal SampledSignal::slice(std::size_t begin, std::size_t count) const {
  require(begin + count <= samples_.size(), ErrorKind::kInvalidSignal, "slice out of range");
  return SampledSignal(std::vector<double>(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                                           samples_.begin() +
                                               static_cast<std::ptrdiff_t>(begin + count)),
                       sample_rate_hz_);
}

void RecordingSession::validate() const {
  const double fs = ppg1.sample_rate_hz();
  const std::size_t n = ppg1.size();
  for (const SampledSignal* s : {&ppg2, &accel_x, &accel_y, &accel_z}) {
    require(s->sample_rate_hz() == fs, ErrorKind::kInvalidSignal,
            "channels disagree on sample rate");
    require(s->size() == n, ErrorKind::kInvalidSignal, "channels disagree on length");
  }
}

std::size_t TrackerConfig::window_samples(double sample_rate_hz) const {
  return static_cast<std::size_t>(std::llround(window_len_s * sample_rate_hz));
}

std::size_t TrackerConfig::stride_samples(double sample_rate_hz) const {
  return static_cast<std::size_t>(std::llround(stride_s * sample_rate_hz));
}

std::size_t TrackerConfig::embed_len(std::size_t window_samples) const {
  if (ssa_embed_len > 0) return static_cast<std::size_t>(ssa_embed_len);
  return static_cast<std::size_t>(std::llround(static_cast<double>(window_samples) / 2.0));
}

void TrackerConfig::validate(double sample_rate_hz) const {
  auto bad = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidConfig, kModule, what);
  };
  if (!(window_len_s > 0.0)) bad("window_len_s must be positive");
  if (!(stride_s > 0.0)) bad("stride_s must be positive");
  if (window_samples(sample_rate_hz) < 2) bad("window shorter than two samples");
  if (stride_samples(sample_rate_hz) < 1) bad("stride shorter than one sample");
  if (!(band_low_hz > 0.0 && band_low_hz < band_high_hz && band_high_hz < sample_rate_hz / 2.0)) {
    bad("band must satisfy 0 < band_low_hz < band_high_hz < sample_rate_hz / 2");
  }
  if (bandpass_order < 1) bad("bandpass_order must be positive");
  if (ssa_d < 1) bad("ssa_d must be positive");
  if (ssa_embed_len < 0) bad("ssa_embed_len must be non-negative");
  if (n_refs < 0) bad("n_refs must be non-negative");
  if (lms_order < 1) bad("lms_order must be positive");
  if (!(lms_mu > 0.0)) bad("lms_mu must be positive");
  if (!(lms_ref_rms > 0.0)) bad("lms_ref_rms must be positive");
  if (imat_iters < 1) bad("imat_iters must be positive");
  if (!(imat_alpha >= 0.0)) bad("imat_alpha must be non-negative");
  if (grid_size < 4 || grid_size % 2 != 0) bad("grid_size must be an even number >= 4");
  if (!(dominance_threshold > 0.0 && dominance_threshold < 1.0)) bad("T must lie in (0, 1)");
  if (!(delta_bins > 0.0)) bad("delta_bins must be positive");
  if (!(eps1_bins >= 0.0 && eps2_bins >= 0.0 && eps3_bins >= 0.0)) {
    bad("eps bins must be non-negative");
  }
  const std::size_t win = window_samples(sample_rate_hz);
  const std::size_t embed = embed_len(win);
  if (embed < 2 || embed >= win) bad("ssa embedding length must satisfy 1 < L < window samples");
}

std::size_t window_count(std::size_t n, std::size_t win, std::size_t stride) {
  if (win == 0 || stride == 0 || n < win) return 0;
  return (n - win) / stride + 1;
}

std::vector<AnalysisWindow> make_windows(const RecordingSession& session,
                                         const TrackerConfig& cfg) {
  session.validate();
  const double fs = session.sample_rate_hz();
  cfg.validate(fs);
  const std::size_t win = cfg.window_samples(fs);
  const std::size_t stride = cfg.stride_samples(fs);
  const std::size_t n = session.size();
  if (n < win) {
    std::ostringstream msg;
    msg << "session has " << n << " samples, one window needs " << win;
    throw Error(ErrorKind::kSessionTooShort, kModule, msg.str());
  }
  const std::size_t count = window_count(n, win, stride);
  std::vector<AnalysisWindow> windows;
  windows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t start = i * stride;
    windows.push_back(AnalysisWindow{i, start, session.ppg1.slice(start, win),
                                     session.ppg2.slice(start, win),
                                     session.accel_x.slice(start, win),
                                     session.accel_y.slice(start, win),
                                     session.accel_z.slice(start, win)});
  }
  return windows;
}

}  // namespace ppgtrack
