#include "lsec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsec {

ContingencyTable contingency(const LabelVector& pred, const LabelVector& truth) {
  if (pred.size() != truth.size())
    throw LengthMismatch("label vectors differ in length");
  if (pred.size() == 0) throw ParamError("empty label vectors");
  validate_labels(pred);
  validate_labels(truth);
  ContingencyTable t;
  t.rows = static_cast<std::size_t>(pred.c);
  t.cols = static_cast<std::size_t>(truth.c);
  t.counts.assign(t.rows * t.cols, 0);
  t.n = static_cast<std::int64_t>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    ++t.counts[static_cast<std::size_t>(pred.labels[i]) * t.cols +
               static_cast<std::size_t>(truth.labels[i])];
  return t;
}

// Hungarian algorithm with potentials on the negated counts, padded square.
std::vector<std::int32_t> optimal_map(const ContingencyTable& table) {
  const std::size_t s = std::max(table.rows, table.cols);
  const double kInf = std::numeric_limits<double>::infinity();
  auto cost = [&](std::size_t r, std::size_t c) -> double {
    if (r < table.rows && c < table.cols)
      return -static_cast<double>(table.at(r, c));
    return 0.0;  // padding rows/columns
  };

  // 1-indexed potentials; way[j] remembers the augmenting path
  std::vector<double> u(s + 1, 0.0), v(s + 1, 0.0);
  std::vector<std::size_t> match(s + 1, 0), way(s + 1, 0);
  for (std::size_t r = 1; r <= s; ++r) {
    match[0] = r;
    std::size_t j0 = 0;
    std::vector<double> minv(s + 1, kInf);
    std::vector<char> used(s + 1, 0);
    do {
      used[j0] = 1;
      std::size_t r0 = match[j0], j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= s; ++j) {
        if (used[j]) continue;
        double cur = cost(r0 - 1, j - 1) - u[r0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= s; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::int32_t> map(table.rows, -1);
  for (std::size_t j = 1; j <= s; ++j) {
    std::size_t r = match[j];
    if (r >= 1 && r <= table.rows && j <= table.cols)
      map[r - 1] = static_cast<std::int32_t>(j - 1);
  }
  return map;
}

std::int64_t matched_count(const ContingencyTable& table,
                           const std::vector<std::int32_t>& map) {
  std::int64_t total = 0;
  for (std::size_t r = 0; r < table.rows; ++r)
    if (map[r] >= 0) total += table.at(r, static_cast<std::size_t>(map[r]));
  return total;
}

double acc(const LabelVector& pred, const LabelVector& truth) {
  ContingencyTable t = contingency(pred, truth);
  return static_cast<double>(matched_count(t, optimal_map(t))) /
         static_cast<double>(t.n);
}

double nmi(const LabelVector& pred, const LabelVector& truth) {
  ContingencyTable t = contingency(pred, truth);

  // identical partitions up to relabeling: exactly one nonzero per row/column
  {
    bool permutation = true;
    std::vector<int> row_nz(t.rows, 0), col_nz(t.cols, 0);
    for (std::size_t r = 0; r < t.rows && permutation; ++r)
      for (std::size_t c = 0; c < t.cols; ++c)
        if (t.at(r, c) > 0) {
          if (++row_nz[r] > 1 || ++col_nz[c] > 1) {
            permutation = false;
            break;
          }
        }
    if (permutation) return 1.0;
  }

  std::vector<double> pr(t.rows, 0.0), pc(t.cols, 0.0);
  const double inv_n = 1.0 / static_cast<double>(t.n);
  for (std::size_t r = 0; r < t.rows; ++r)
    for (std::size_t c = 0; c < t.cols; ++c) {
      double p = static_cast<double>(t.at(r, c)) * inv_n;
      pr[r] += p;
      pc[c] += p;
    }

  double mi = 0.0, h_joint = 0.0;
  for (std::size_t r = 0; r < t.rows; ++r)
    for (std::size_t c = 0; c < t.cols; ++c) {
      if (t.at(r, c) == 0) continue;
      double p = static_cast<double>(t.at(r, c)) * inv_n;
      mi += p * std::log(p / (pr[r] * pc[c]));
      h_joint -= p * std::log(p);
    }
  if (!(h_joint > 0.0)) return 1.0;  // single joint cell: both partitions trivial
  if (mi <= 0.0) return 0.0;
  return std::min(mi / h_joint, 1.0);
}

}  // namespace lsec
