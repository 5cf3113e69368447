#include "bcpred/smote.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bcpred/error.hpp"
#include "bcpred/random.hpp"

namespace bcpred {

NeighborTable k_nearest_neighbors(const Matrix& points, int k) {
  const std::size_t n = points.rows();
  if (k < 1) throw PreconditionError("k must be at least 1");
  if (static_cast<std::size_t>(k) >= n) {
    throw PreconditionError("k = " + std::to_string(k) + " needs more than " +
                            std::to_string(k) + " points, got " + std::to_string(n));
  }
  for (double v : points.data()) {
    if (!std::isfinite(v)) throw PreconditionError("k_nearest_neighbors: non-finite coordinate");
  }

  NeighborTable table;
  table.neighbors.resize(n);
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    dist.clear();
    const auto pi = points.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto pj = points.row(j);
      double d2 = 0.0;
      for (std::size_t c = 0; c < pi.size(); ++c) {
        const double d = pi[c] - pj[c];
        d2 += d * d;
      }
      dist.emplace_back(d2, j);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    auto& out = table.neighbors[i];
    out.reserve(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) out.push_back(dist[static_cast<std::size_t>(r)].second);
  }
  return table;
}

std::vector<double> synthesize_sample(std::span<const double> base,
                                      std::span<const double> neighbor, double gap) {
  if (base.size() != neighbor.size()) throw PreconditionError("synthesize_sample: arity mismatch");
  if (!(gap >= 0.0 && gap <= 1.0)) throw PreconditionError("synthesize_sample: gap outside [0, 1]");
  std::vector<double> out(base.size());
  for (std::size_t j = 0; j < base.size(); ++j) out[j] = base[j] + gap * (neighbor[j] - base[j]);
  return out;
}

SmoteResult smote_oversample(const Matrix& features, std::span<const int> labels,
                             const SmoteConfig& config) {
  if (features.rows() != labels.size()) {
    throw PreconditionError("smote_oversample: feature rows and labels differ in length");
  }
  if (!(config.target_ratio > 0.0 && config.target_ratio <= 1.0)) {
    throw PreconditionError("target_ratio must lie in (0, 1]");
  }
  std::vector<std::size_t> members[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw PreconditionError("labels must be 0 or 1");
    members[labels[i]].push_back(i);
  }
  if (members[0].empty() || members[1].empty()) {
    throw PreconditionError("smote_oversample needs both classes present");
  }

  const int minority = members[1].size() <= members[0].size() ? 1 : 0;
  const auto& minority_rows = members[minority];
  const std::size_t majority_count = members[1 - minority].size();

  SmoteResult result{features, std::vector<int>(labels.begin(), labels.end()), {}, minority};
  const auto target = static_cast<std::size_t>(
      std::llround(config.target_ratio * static_cast<double>(majority_count)));
  if (target <= minority_rows.size()) return result;

  if (config.k < 1 || static_cast<std::size_t>(config.k) >= minority_rows.size()) {
    throw PreconditionError("smote k = " + std::to_string(config.k) +
                            " must be in [1, minority size " +
                            std::to_string(minority_rows.size()) + ")");
  }
  const NeighborTable table = k_nearest_neighbors(features.select_rows(minority_rows), config.k);

  const std::size_t needed = target - minority_rows.size();
  SplitMix64 rng(config.seed);
  result.provenance.reserve(needed);
  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t local = s % minority_rows.size();
    const auto& nbrs = table.neighbors[local];
    const std::size_t pick = nbrs[static_cast<std::size_t>(rng.below(nbrs.size()))];
    const double gap = rng.uniform();
    const std::size_t base = minority_rows[local];
    const std::size_t neighbor = minority_rows[pick];
    result.features.append_row(synthesize_sample(features.row(base), features.row(neighbor), gap));
    result.labels.push_back(minority);
    result.provenance.push_back({base, neighbor, gap});
  }
  return result;
}

}  // namespace bcpred
