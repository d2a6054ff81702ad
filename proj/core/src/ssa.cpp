#include "ppgtrack/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ppgtrack/error.hpp"
#include "ppgtrack/fft.hpp"

namespace ppgtrack {

namespace {

constexpr std::string_view kModule = "ssa";

// Singular values below this fraction of the largest carry no signal.
constexpr double kNegligibleSigma = 1e-12;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Anti-diagonal average of sigma * u * v^T, i.e. (u conv v) * sigma / count.
std::vector<double> hankelize_rank_one(const EigenTriple& t) {
  const auto L = static_cast<std::size_t>(t.left.size());
  const auto K = static_cast<std::size_t>(t.right.size());
  const std::size_t n = L + K - 1;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < L; ++i) {
    const double ui = t.singular_value * t.left[static_cast<Eigen::Index>(i)];
    double* dst = out.data() + i;
    const double* v = t.right.data();
    for (std::size_t j = 0; j < K; ++j) dst[j] += ui * v[j];
  }
  const std::size_t short_side = std::min(L, K);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t count = std::min({k + 1, short_side, n - k});
    out[k] /= static_cast<double>(count);
  }
  return out;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller root wins so group identity is order-independent.
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
  }
};

}  // namespace

TrajectoryMatrix embed(const SampledSignal& signal, std::size_t embed_len) {
  const std::size_t n = signal.size();
  if (embed_len <= 1 || embed_len >= n) {
    throw Error(ErrorKind::kBadEmbedLength, kModule,
                "embedding length " + std::to_string(embed_len) + " must satisfy 1 < L < " +
                    std::to_string(n));
  }
  const std::size_t k = n - embed_len + 1;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(embed_len), static_cast<Eigen::Index>(k));
  const auto x = signal.samples();
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < embed_len; ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[i + j];
    }
  }
  return TrajectoryMatrix(std::move(m), signal.sample_rate_hz());
}

std::vector<EigenTriple> decompose(const TrajectoryMatrix& traj, std::size_t d) {
  const Eigen::MatrixXd& m = traj.matrix();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorKind::kDecompositionFailure, kModule, "SVD did not converge");
  }
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (!sigma.allFinite()) {
    throw Error(ErrorKind::kDecompositionFailure, kModule, "SVD produced non-finite values");
  }
  const std::size_t keep = std::min<std::size_t>(d, static_cast<std::size_t>(sigma.size()));
  std::vector<EigenTriple> triples;
  triples.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) {
    const auto c = static_cast<Eigen::Index>(r);
    triples.push_back(EigenTriple{sigma[c], svd.matrixU().col(c), svd.matrixV().col(c),
                                  static_cast<int>(r)});
  }
  return triples;
}

SampledSignal reconstruct_group(std::span<const EigenTriple> triples, double sample_rate_hz) {
  if (triples.empty()) {
    throw Error(ErrorKind::kInvalidSignal, kModule, "cannot reconstruct an empty group");
  }
  std::vector<double> sum = hankelize_rank_one(triples.front());
  for (std::size_t r = 1; r < triples.size(); ++r) {
    const std::vector<double> part = hankelize_rank_one(triples[r]);
    if (part.size() != sum.size()) {
      throw Error(ErrorKind::kInvalidSignal, kModule, "triples come from different matrices");
    }
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part[i];
  }
  return SampledSignal(std::move(sum), sample_rate_hz);
}

double dominant_frequency(std::span<const double> series, double sample_rate_hz) {
  const std::size_t nfft = std::max<std::size_t>(next_pow2(4 * series.size()), 256);
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  std::vector<double> centred(series.begin(), series.end());
  for (double& v : centred) v -= mean;
  const std::vector<double> mag = magnitude_spectrum(centred, nfft);
  const auto best = std::max_element(mag.begin(), mag.end());
  return static_cast<double>(best - mag.begin()) * sample_rate_hz / static_cast<double>(nfft);
}

bool frequencies_related(double f1, double f2, double same_tol_hz, double ratio_tol) {
  if (std::abs(f1 - f2) <= same_tol_hz) return true;
  const double lo = std::min(f1, f2);
  const double hi = std::max(f1, f2);
  if (lo <= 0.0) return false;
  const double ratio = hi / lo;
  return std::abs(ratio - 2.0) <= ratio_tol || std::abs(ratio - 3.0) <= ratio_tol;
}

std::vector<std::vector<int>> group_by_frequency(std::span<const double> freqs_hz) {
  const std::size_t n = freqs_hz.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (frequencies_related(freqs_hz[i], freqs_hz[j])) {
        sets.unite(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = static_cast<std::size_t>(sets.find(static_cast<int>(i)));
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[root])].push_back(static_cast<int>(i));
  }
  return groups;
}

std::vector<ComponentGroup> decompose_channel(const SampledSignal& accel, std::size_t embed_len,
                                              std::size_t d, int channel) {
  const TrajectoryMatrix traj = embed(accel, embed_len);
  const std::vector<EigenTriple> triples = decompose(traj, d);
  if (triples.empty() || !(triples.front().singular_value > 0.0)) return {};

  const double floor = triples.front().singular_value * kNegligibleSigma;
  std::vector<std::vector<double>> parts;
  std::vector<double> freqs;
  std::vector<int> ranks;
  for (const EigenTriple& t : triples) {
    if (t.singular_value <= floor) break;
    parts.push_back(hankelize_rank_one(t));
    freqs.push_back(dominant_frequency(parts.back(), accel.sample_rate_hz()));
    ranks.push_back(t.rank_index);
  }

  std::vector<ComponentGroup> out;
  for (const std::vector<int>& members : group_by_frequency(freqs)) {
    // Diagonal averaging is linear, so the group series is the sum of its parts.
    std::vector<double> series(accel.size(), 0.0);
    std::vector<int> indices;
    for (int m : members) {
      const auto& part = parts[static_cast<std::size_t>(m)];
      for (std::size_t i = 0; i < series.size(); ++i) series[i] += part[i];
      indices.push_back(ranks[static_cast<std::size_t>(m)]);
    }
    double energy = 0.0;
    for (double v : series) energy += v * v;
    const double f = dominant_frequency(series, accel.sample_rate_hz());
    out.push_back(ComponentGroup{std::move(indices), SampledSignal(std::move(series),
                                                                   accel.sample_rate_hz()),
                                 f, energy, channel});
  }
  return out;
}

std::vector<ComponentGroup> extract_references(const SampledSignal& accel_x,
                                               const SampledSignal& accel_y,
                                               const SampledSignal& accel_z,
                                               const TrackerConfig& cfg) {
  if (accel_x.size() != accel_y.size() || accel_x.size() != accel_z.size()) {
    throw Error(ErrorKind::kLengthMismatch, kModule, "acceleration channels differ in length");
  }
  const std::size_t embed_len = cfg.embed_len(accel_x.size());
  const auto d = static_cast<std::size_t>(cfg.ssa_d);

  std::vector<ComponentGroup> pooled;
  int channel = 0;
  for (const SampledSignal* accel : {&accel_x, &accel_y, &accel_z}) {
    for (ComponentGroup& g : decompose_channel(*accel, embed_len, d, channel)) {
      if (g.dominant_freq_hz >= cfg.band_low_hz && g.dominant_freq_hz <= cfg.band_high_hz) {
        pooled.push_back(std::move(g));
      }
    }
    ++channel;
  }
  if (pooled.empty()) {
    throw Error(ErrorKind::kNoReferencesFound, kModule,
                "no acceleration component inside the heart-rate band");
  }
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const ComponentGroup& a, const ComponentGroup& b) {
                     if (a.energy != b.energy) return a.energy > b.energy;
                     if (a.dominant_freq_hz != b.dominant_freq_hz) {
                       return a.dominant_freq_hz < b.dominant_freq_hz;
                     }
                     return a.channel < b.channel;
                   });
  if (pooled.size() > static_cast<std::size_t>(cfg.n_refs)) {
    pooled.erase(pooled.begin() + cfg.n_refs, pooled.end());
  }
  return pooled;
}

}  // namespace ppgtrack
