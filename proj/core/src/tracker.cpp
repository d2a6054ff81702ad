#include "ppgtrack/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ppgtrack/anc.hpp"
#include "ppgtrack/error.hpp"
#include "ppgtrack/preprocess.hpp"
#include "ppgtrack/ssa.hpp"

namespace ppgtrack {

namespace {

constexpr std::string_view kModule = "tracker";

std::vector<double> mean_removed(std::span<const double> x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v -= mean;
  return out;
}

ImatOptions imat_options(const TrackerConfig& cfg) {
  return ImatOptions{cfg.grid_size, cfg.imat_iters, cfg.imat_alpha, true};
}

// One labelled peak P_ij: harmonic order i (1..3), channel j (0..1).
struct LabelledPeak {
  int harmonic;
  int channel;
  int bin;
  double magnitude;
  double fundamental() const { return static_cast<double>(bin) / harmonic; }
};

std::array<LabelledPeak, 6> label(const PeakTriple& p1, const PeakTriple& p2) {
  std::array<LabelledPeak, 6> out{};
  for (int h = 0; h < 3; ++h) {
    out[static_cast<std::size_t>(h)] = {h + 1, 0, p1.bins[static_cast<std::size_t>(h)],
                                        p1.magnitudes[static_cast<std::size_t>(h)]};
    out[static_cast<std::size_t>(h + 3)] = {h + 1, 1, p2.bins[static_cast<std::size_t>(h)],
                                            p2.magnitudes[static_cast<std::size_t>(h)]};
  }
  return out;
}

double fundamental_sum(const PeakTriple& p) {
  return p.bins[0] + p.bins[1] / 2.0 + p.bins[2] / 3.0;
}

}  // namespace

BinRange band_bins(const SpectrumEstimate& spectrum, const TrackerConfig& cfg) {
  const double bin_hz = spectrum.bin_hz();
  const int last = static_cast<int>(spectrum.size()) - 1;
  const int lo = std::clamp(static_cast<int>(std::ceil(cfg.band_low_hz / bin_hz)), 0, last);
  const int hi = std::clamp(static_cast<int>(std::floor(cfg.band_high_hz / bin_hz)), lo, last);
  return {lo, hi};
}

FrequencyIndex initialize(const SpectrumEstimate& spec1, const SpectrumEstimate& spec2,
                          const TrackerConfig& cfg) {
  const BinRange band = band_bins(spec1, cfg);
  int best_bin = band.lo;
  double best = 0.0;
  for (const SpectrumEstimate* s : {&spec1, &spec2}) {
    for (int b = band.lo; b <= band.hi; ++b) {
      const double m = (*s)[static_cast<std::size_t>(b)];
      if (m > best) {
        best = m;
        best_bin = b;
      }
    }
  }
  if (!(best > 0.0)) {
    throw Error(ErrorKind::kEmptySpectrum, kModule, "both spectra are zero inside the band");
  }
  return {best_bin};
}

HarmonicRanges harmonic_ranges(FrequencyIndex n_prev, const TrackerConfig& cfg,
                               std::size_t spectrum_bins) {
  const double eps[3] = {cfg.eps1_bins, cfg.eps2_bins, cfg.eps3_bins};
  const double last = static_cast<double>(spectrum_bins) - 1.0;
  HarmonicRanges r{};
  for (int h = 0; h < 3; ++h) {
    const double centre = static_cast<double>((h + 1) * n_prev.bin);
    const double lo = std::clamp(centre - eps[h], 0.0, last);
    const double hi = std::clamp(centre + eps[h], 0.0, last);
    r[static_cast<std::size_t>(h)] = {static_cast<int>(std::ceil(lo)),
                                      static_cast<int>(std::floor(hi))};
  }
  return r;
}

PeakTriple find_peaks(const SpectrumEstimate& spec, const HarmonicRanges& ranges) {
  PeakTriple out;
  for (std::size_t h = 0; h < 3; ++h) {
    const BinRange r = ranges[h];
    out.bins[h] = r.lo;
    out.magnitudes[h] = 0.0;
    if (r.hi < r.lo || r.lo < 0 || static_cast<std::size_t>(r.lo) >= spec.size()) continue;
    const int hi = std::min(r.hi, static_cast<int>(spec.size()) - 1);
    double best = -1.0;
    for (int b = r.lo; b <= hi; ++b) {
      const double m = spec[static_cast<std::size_t>(b)];
      if (m > best) {
        best = m;
        out.bins[h] = b;
      }
    }
    out.magnitudes[h] = best;
  }
  return out;
}

int round_bin(double fractional_bin) { return static_cast<int>(std::floor(fractional_bin + 0.5)); }

std::array<SpectrumEstimate, 2> long_window_spectra(const LongWindowInput& input,
                                                    const TrackerConfig& cfg) {
  auto build = [&](int c) {
    const auto prev = input.previous[c];
    const auto cur = input.current[c];
    std::vector<double> joined(prev.begin(), prev.end());
    if (cfg.long_window == LongWindowMode::kPreviousPlusNewTail) {
      const std::size_t tail = std::min(input.stride_samples, cur.size());
      joined.insert(joined.end(), cur.end() - static_cast<std::ptrdiff_t>(tail), cur.end());
    } else {
      joined.insert(joined.end(), cur.begin(), cur.end());
    }
    return imat_spectrum(mean_removed(joined), input.sample_rate_hz, imat_options(cfg));
  };
  return {build(0), build(1)};
}

Selection select(const PeakTriple& peaks1, const PeakTriple& peaks2, FrequencyIndex n_prev,
                 const LongWindowInput& long_window, const TrackerConfig& cfg) {
  const std::array<LabelledPeak, 6> peaks = label(peaks1, peaks2);

  // Case 1: a unique peak that dominates all five others by the ratio T.
  int dominant = -1;
  int dominant_count = 0;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    bool dominates = true;
    for (std::size_t k = 0; k < peaks.size() && dominates; ++k) {
      if (k != i && !(peaks[i].magnitude * cfg.dominance_threshold > peaks[k].magnitude)) {
        dominates = false;
      }
    }
    if (dominates) {
      dominant = static_cast<int>(i);
      ++dominant_count;
    }
  }
  if (dominant_count == 1) {
    return {{round_bin(peaks[static_cast<std::size_t>(dominant)].fundamental())},
            SelectionCase::kDominantPeak};
  }

  // Case 2: the strongest pair whose fundamentals agree within delta.
  bool found = false;
  double best_score = 0.0;
  int best_order = 0;
  double best_value = 0.0;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    for (std::size_t k = i + 1; k < peaks.size(); ++k) {
      const double fi = peaks[i].fundamental();
      const double fk = peaks[k].fundamental();
      if (!(std::abs(fi - fk) < cfg.delta_bins)) continue;
      const double score = peaks[i].magnitude + peaks[k].magnitude;
      const int order = std::min(peaks[i].harmonic, peaks[k].harmonic);
      const double value = (fi + fk) / 2.0;
      const bool better =
          !found || score > best_score ||
          (score == best_score &&
           (order < best_order || (order == best_order && value < best_value)));
      if (better) {
        found = true;
        best_score = score;
        best_order = order;
        best_value = value;
      }
    }
  }
  if (found) return {{round_bin(best_value)}, SelectionCase::kHarmonicPair};

  // Case 3: average the twelve fundamentals of the current and long windows.
  const std::array<SpectrumEstimate, 2> long_spectra = long_window_spectra(long_window, cfg);
  const HarmonicRanges ranges = harmonic_ranges(n_prev, cfg, long_spectra[0].size());
  const double total = fundamental_sum(peaks1) + fundamental_sum(peaks2) +
                       fundamental_sum(find_peaks(long_spectra[0], ranges)) +
                       fundamental_sum(find_peaks(long_spectra[1], ranges));
  return {{round_bin(total / 12.0)}, SelectionCase::kLongWindow};
}

HeartRateTracker::HeartRateTracker(TrackerConfig cfg, double sample_rate_hz)
    : cfg_(std::move(cfg)), sample_rate_hz_(sample_rate_hz) {
  cfg_.validate(sample_rate_hz_);
}

WindowTrace HeartRateTracker::process(const AnalysisWindow& window) {
  const auto started = std::chrono::steady_clock::now();
  const BandpassFilter filter(cfg_.band_low_hz, cfg_.band_high_hz, sample_rate_hz_,
                              cfg_.bandpass_order);
  auto band_limit = [&](const SampledSignal& s) {
    return SampledSignal(filter.filtfilt(s.samples()), sample_rate_hz_);
  };
  const SampledSignal ppg[2] = {band_limit(window.ppg1), band_limit(window.ppg2)};
  const SampledSignal ax = band_limit(window.accel_x);
  const SampledSignal ay = band_limit(window.accel_y);
  const SampledSignal az = band_limit(window.accel_z);

  std::vector<ComponentGroup> refs;
  if (cfg_.n_refs > 0) {
    try {
      refs = extract_references(ax, ay, az, cfg_);
    } catch (const Error& e) {
      // Without in-band references the band-limited PPG goes straight to the spectrum.
      if (e.kind() != ErrorKind::kNoReferencesFound && e.kind() != ErrorKind::kDecompositionFailure) {
        throw;
      }
    }
  }
  const SampledSignal* accel[3] = {&ax, &ay, &az};
  const double gain = reference_gain(accel, cfg_.lms_ref_rms);

  std::array<std::vector<double>, 2> clean;
  for (int c = 0; c < 2; ++c) {
    clean[static_cast<std::size_t>(c)] =
        mean_removed(cascade(ppg[c], refs, cfg_, gain).samples());
  }
  const SpectrumEstimate spec1 = imat_spectrum(clean[0], sample_rate_hz_, imat_options(cfg_));
  const SpectrumEstimate spec2 = imat_spectrum(clean[1], sample_rate_hz_, imat_options(cfg_));
  std::chrono::steady_clock::duration observer_time{};
  if (observer_) {
    const auto before = std::chrono::steady_clock::now();
    observer_(window.index, spec1, spec2);
    observer_time = std::chrono::steady_clock::now() - before;
  }

  const BinRange band = band_bins(spec1, cfg_);
  Selection choice;
  if (!state_) {
    try {
      choice = {initialize(spec1, spec2, cfg_), SelectionCase::kInitial};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kEmptySpectrum) throw;
      // Silent first window: start from the band centre.
      choice = {{(band.lo + band.hi) / 2}, SelectionCase::kInitial};
    }
  } else {
    const HarmonicRanges ranges = harmonic_ranges(state_->n_prev, cfg_, spec1.size());
    LongWindowInput long_window{{state_->prev_window[0], state_->prev_window[1]},
                                {clean[0], clean[1]},
                                sample_rate_hz_,
                                cfg_.stride_samples(sample_rate_hz_)};
    choice = select(find_peaks(spec1, ranges), find_peaks(spec2, ranges), state_->n_prev,
                    long_window, cfg_);
  }
  choice.index.bin = std::clamp(choice.index.bin, band.lo, band.hi);

  state_ = TrackerState{choice.index, std::move(clean), window.index};

  WindowTrace trace;
  trace.index = window.index;
  trace.bin = choice.index;
  trace.bpm = bpm_of(choice.index, spec1);
  trace.which = choice.which;
  trace.reference_count = refs.size();
  trace.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started - observer_time)
          .count();
  return trace;
}

TrackResult track_session(const RecordingSession& session, const TrackerConfig& cfg,
                          const SpectrumObserver& observer) {
  const std::vector<AnalysisWindow> windows = make_windows(session, cfg);
  HeartRateTracker tracker(cfg, session.sample_rate_hz());
  if (observer) tracker.set_spectrum_observer(observer);
  TrackResult result;
  result.bpm.reserve(windows.size());
  for (const AnalysisWindow& w : windows) {
    WindowTrace trace = tracker.process(w);
    result.bpm.push_back(trace.bpm);
    result.window_seconds.push_back(trace.seconds);
    result.windows.push_back(trace);
  }
  return result;
}

}  // namespace ppgtrack
