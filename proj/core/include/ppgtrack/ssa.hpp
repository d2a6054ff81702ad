#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "ppgtrack/signal_model.hpp"

namespace ppgtrack {

/// L x K Hankel matrix of lagged copies: entry(i, j) = x[i + j], K = N - L + 1.
class TrajectoryMatrix {
 public:
  TrajectoryMatrix(Eigen::MatrixXd m, double sample_rate_hz)
      : m_(std::move(m)), sample_rate_hz_(sample_rate_hz) {}

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }
  std::size_t series_length() const noexcept { return rows() + cols() - 1; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }

 private:
  Eigen::MatrixXd m_;
  double sample_rate_hz_;
};

/// One rank-one term sigma * u * v^T of the trajectory SVD.
struct EigenTriple {
  double singular_value = 0.0;
  Eigen::VectorXd left;   // length L
  Eigen::VectorXd right;  // length K
  int rank_index = 0;
};

/// Reconstructed oscillatory component used as a motion-artifact reference.
struct ComponentGroup {
  std::vector<int> member_indices;
  SampledSignal series;
  double dominant_freq_hz = 0.0;
  double energy = 0.0;  // sum of squared series samples
  int channel = 0;      // 0, 1, 2 for x, y, z
};

/// Throws Error(kBadEmbedLength) unless 1 < L < N.
TrajectoryMatrix embed(const SampledSignal& signal, std::size_t embed_len);

/// Leading d singular triples, sorted by non-increasing singular value.
/// d is clamped to min(L, K). Eigenvectors inside a degenerate singular
/// subspace are not unique; only their span is meaningful.
/// Throws Error(kDecompositionFailure) if the SVD fails or yields non-finite values.
std::vector<EigenTriple> decompose(const TrajectoryMatrix& traj, std::size_t d);

/// Diagonal averaging of sum(sigma_r * u_r * v_r^T) back to a length L + K - 1 series.
SampledSignal reconstruct_group(std::span<const EigenTriple> triples, double sample_rate_hz);

/// Frequency of the largest bin of the zero-padded magnitude spectrum of the
/// mean-removed series (padding to at least 4x the length, power of two).
double dominant_frequency(std::span<const double> series, double sample_rate_hz);

/// True when two component frequencies should share a group: within
/// same_tol_hz of each other, or their ratio within ratio_tol of 2 or 3.
bool frequencies_related(double f1, double f2, double same_tol_hz = 0.05,
                         double ratio_tol = 0.02);

/// Partition of indices 0..n-1 into groups: transitive closure of
/// frequencies_related over all pairs. Groups are ordered by their smallest
/// member, members ascending.
std::vector<std::vector<int>> group_by_frequency(std::span<const double> freqs_hz);

/// Embed, decompose and group one acceleration channel into components.
std::vector<ComponentGroup> decompose_channel(const SampledSignal& accel, std::size_t embed_len,
                                              std::size_t d, int channel);

/// Full reference extraction over three channels: per-channel grouping,
/// pooling, band selection, energy ranking; returns at most n_refs groups.
/// Throws Error(kNoReferencesFound) when no group lies inside the band.
std::vector<ComponentGroup> extract_references(const SampledSignal& accel_x,
                                               const SampledSignal& accel_y,
                                               const SampledSignal& accel_z,
                                               const TrackerConfig& cfg);

}  // namespace ppgtrack
