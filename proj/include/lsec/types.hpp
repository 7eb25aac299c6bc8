#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsec/errors.hpp"

namespace lsec {

/// Dense row-major n x d feature matrix.
struct DataMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> values;  // n*d, row-major
  std::string name;

  double* row(std::size_t i) { return values.data() + i * d; }
  const double* row(std::size_t i) const { return values.data() + i * d; }
  double at(std::size_t i, std::size_t j) const { return values[i * d + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * d + j]; }
};

/// Cluster/class labels in [0, c), one per point.
struct LabelVector {
  std::vector<std::int32_t> labels;
  std::int32_t c = 0;

  std::size_t size() const { return labels.size(); }
};

/// k x d row-major matrix of centers (or landmarks).
struct Centers {
  std::size_t k = 0;
  std::size_t d = 0;
  std::vector<double> values;

  double* row(std::size_t i) { return values.data() + i * d; }
  const double* row(std::size_t i) const { return values.data() + i * d; }
};

void validate_matrix(const DataMatrix& m);
void validate_labels(const LabelVector& l);

/// Renumber arbitrary nonnegative labels to a dense 0..c-1 range, preserving
/// the numeric order of the labels that actually occur.
LabelVector compact_labels(const std::vector<std::int32_t>& raw);

}  // namespace lsec
