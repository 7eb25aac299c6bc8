#pragma once

#include <cstdint>
#include <vector>

#include "lsec/types.hpp"

namespace lsec {

struct ContingencyTable {
  std::size_t rows = 0;  // predicted label count
  std::size_t cols = 0;  // true label count
  std::vector<std::int64_t> counts;  // rows*cols
  std::int64_t n = 0;

  std::int64_t at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }
};

ContingencyTable contingency(const LabelVector& pred, const LabelVector& truth);

/// Injective map pred-label -> true-label maximizing the matched count,
/// solved as a rectangular assignment problem. Unmatched labels map to -1.
std::vector<std::int32_t> optimal_map(const ContingencyTable& table);

std::int64_t matched_count(const ContingencyTable& table,
                           const std::vector<std::int32_t>& map);

/// Fraction of points whose mapped predicted label equals the true label,
/// under the best global mapping.
double acc(const LabelVector& pred, const LabelVector& truth);

/// Mutual information normalized by the joint entropy (natural log).
double nmi(const LabelVector& pred, const LabelVector& truth);

}  // namespace lsec
