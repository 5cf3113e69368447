#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcpred/matrix.hpp"

namespace bcpred {

struct SmoteConfig {
  int k = 5;
  /// Desired minority / majority count ratio after oversampling, in (0, 1].
  double target_ratio = 1.0;
  std::uint64_t seed = 42;
};

/// neighbors[i] holds the k nearest other points of point i, nearest first,
/// equal distances ordered by index.
struct NeighborTable {
  std::vector<std::vector<std::size_t>> neighbors;
};

/// Exact k-nearest-neighbour search by Euclidean distance. A point is never
/// its own neighbour; duplicates of it are.
NeighborTable k_nearest_neighbors(const Matrix& points, int k);

/// base + gap * (neighbor - base), gap in [0, 1].
std::vector<double> synthesize_sample(std::span<const double> base,
                                      std::span<const double> neighbor, double gap);

/// Where a synthetic row came from, as row indices into the input matrix.
struct SmoteProvenance {
  std::size_t base = 0;
  std::size_t neighbor = 0;
  double gap = 0.0;
};

struct SmoteResult {
  Matrix features;
  std::vector<int> labels;
  /// One entry per appended row, in order.
  std::vector<SmoteProvenance> provenance;
  int minority_label = 1;
};

/// Appends synthetic minority rows until the minority count reaches
/// round(target_ratio * majority). Base samples are taken round-robin over the
/// minority rows in input order; the neighbour (one of the k nearest minority
/// rows) and the gap are drawn from SplitMix64(seed). Original rows come first
/// and are untouched. A target that is already met returns the input as is.
SmoteResult smote_oversample(const Matrix& features, std::span<const int> labels,
                             const SmoteConfig& config = {});

}  // namespace bcpred
