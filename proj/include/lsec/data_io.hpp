#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "lsec/types.hpp"

namespace lsec {

enum class MatrixFormat { csv, bin };

// The five built-in 2-D shape families.
enum class Shape { tb, sf, cc, cg, fl };

std::optional<Shape> parse_shape(std::string_view s);
const char* shape_name(Shape s);
int shape_class_count(Shape s);

std::optional<MatrixFormat> parse_format(std::string_view s);

// csv: comma-separated rows, no header.
// bin: two little-endian uint64 (n, d), then n*d little-endian float32,
// row-major. Values pass through float32 on disk.
DataMatrix load_matrix(const std::string& path, MatrixFormat fmt);
void save_matrix(const DataMatrix& m, const std::string& path, MatrixFormat fmt);

// One nonnegative integer per line, 0-based.
LabelVector load_labels(const std::string& path);
void save_labels(const LabelVector& l, const std::string& path);

struct SyntheticData {
  DataMatrix data;
  LabelVector truth;
};

// Deterministic per (shape, n, noise, seed). Labels identify the generating
// component. `noise` scales Gaussian jitter by the shape's outer radius.
SyntheticData gen_synthetic(Shape shape, std::size_t n, double noise,
                            std::uint64_t seed);

}  // namespace lsec
