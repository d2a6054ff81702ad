#include "ppgtrack/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ppgtrack/error.hpp"

namespace ppgtrack {

namespace {
constexpr std::string_view kModule = "evaluation";

double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}
}  // namespace

MetricsReport compute_metrics(std::span<const double> est, std::span<const double> truth,
                              std::span<const double> per_window_times, bool sample_variance) {
  if (est.size() != truth.size()) {
    throw Error(ErrorKind::kLengthMismatch, kModule,
                "estimate has " + std::to_string(est.size()) + " windows, truth has " +
                    std::to_string(truth.size()));
  }
  if (est.size() < 2) throw Error(ErrorKind::kLengthMismatch, kModule, "need at least 2 windows");
  const std::size_t w = est.size();
  for (double t : truth) {
    if (!(t > 0.0)) throw Error(ErrorKind::kDegenerateTruth, kModule, "truth must be positive");
  }

  MetricsReport r;
  r.window_count = w;
  std::vector<double> err(w);
  double abs_sum = 0.0;
  double rel_sum = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    err[i] = est[i] - truth[i];
    abs_sum += std::abs(err[i]);
    rel_sum += std::abs(err[i]) / truth[i];
  }
  r.aae_bpm = abs_sum / static_cast<double>(w);
  r.aep_percent = rel_sum / static_cast<double>(w) * 100.0;

  const double err_mean = mean(err);
  double ss = 0.0;
  for (double e : err) ss += (e - err_mean) * (e - err_mean);
  r.ev = ss / static_cast<double>(sample_variance ? w - 1 : w);

  const double me = mean(est);
  const double mt = mean(truth);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    sxy += (est[i] - me) * (truth[i] - mt);
    sxx += (est[i] - me) * (est[i] - me);
    syy += (truth[i] - mt) * (truth[i] - mt);
  }
  if (syy == 0.0) {
    for (std::size_t i = 0; i < w; ++i) {
      if (est[i] != truth[i]) {
        throw Error(ErrorKind::kDegenerateTruth, kModule,
                    "truth is constant, correlation undefined");
      }
    }
    r.pc = 1.0;
  } else if (sxx == 0.0) {
    r.pc = 0.0;
  } else {
    r.pc = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  }

  r.astpf_s = per_window_times.empty() ? 0.0 : mean(per_window_times);
  return r;
}

}  // namespace ppgtrack
