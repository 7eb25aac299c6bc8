#include "lsec/data_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "lsec/rng.hpp"

namespace lsec {

void validate_matrix(const DataMatrix& m) {
  if (m.n < 1 || m.d < 1) throw ParamError("matrix must have n >= 1 and d >= 1");
  if (m.values.size() != m.n * m.d) throw ParamError("matrix storage size mismatch");
  for (double v : m.values)
    if (!std::isfinite(v)) throw ParamError("matrix contains non-finite value");
}

void validate_labels(const LabelVector& l) {
  if (l.c < 1) throw ParamError("label vector needs c >= 1");
  for (auto v : l.labels)
    if (v < 0 || v >= l.c) throw ParamError("label out of range");
}

LabelVector compact_labels(const std::vector<std::int32_t>& raw) {
  std::map<std::int32_t, std::int32_t> remap;
  for (auto v : raw) remap.emplace(v, 0);
  std::int32_t next = 0;
  for (auto& kv : remap) kv.second = next++;
  LabelVector out;
  out.labels.reserve(raw.size());
  for (auto v : raw) out.labels.push_back(remap.at(v));
  out.c = next;
  return out;
}

std::optional<Shape> parse_shape(std::string_view s) {
  if (s == "tb") return Shape::tb;
  if (s == "sf") return Shape::sf;
  if (s == "cc") return Shape::cc;
  if (s == "cg") return Shape::cg;
  if (s == "fl") return Shape::fl;
  return std::nullopt;
}

const char* shape_name(Shape s) {
  switch (s) {
    case Shape::tb: return "tb";
    case Shape::sf: return "sf";
    case Shape::cc: return "cc";
    case Shape::cg: return "cg";
    case Shape::fl: return "fl";
  }
  return "?";
}

int shape_class_count(Shape s) {
  switch (s) {
    case Shape::tb: return 3;
    case Shape::sf: return 4;
    case Shape::cc: return 3;
    case Shape::cg: return 11;
    case Shape::fl: return 13;
  }
  return 0;
}

std::optional<MatrixFormat> parse_format(std::string_view s) {
  if (s == "csv") return MatrixFormat::csv;
  if (s == "bin") return MatrixFormat::bin;
  return std::nullopt;
}

namespace {

double parse_number(const char* begin, const char* end, const std::string& ctx) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw FormatError("non-numeric token '" + std::string(begin, end) + "' " + ctx);
  return v;
}

DataMatrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open " + path);
  DataMatrix m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) break;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t cols = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::size_t end = (comma == std::string::npos) ? line.size() : comma;
      // trim surrounding spaces
      std::size_t b = pos, e = end;
      while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
      while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
      if (b == e) throw FormatError("empty field at line " + std::to_string(lineno));
      double v = parse_number(line.data() + b, line.data() + e,
                              "at line " + std::to_string(lineno));
      if (!std::isfinite(v))
        throw FormatError("non-finite value at line " + std::to_string(lineno));
      m.values.push_back(v);
      ++cols;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (m.d == 0)
      m.d = cols;
    else if (cols != m.d)
      throw FormatError("ragged row at line " + std::to_string(lineno) + ": expected " +
                        std::to_string(m.d) + " fields, got " + std::to_string(cols));
    ++m.n;
  }
  if (m.n == 0 || m.d == 0) throw FormatError("empty matrix file " + path);
  return m;
}

void save_csv(const DataMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write " + path);
  std::array<char, 32> buf;
  std::string line;
  for (std::size_t i = 0; i < m.n; ++i) {
    line.clear();
    for (std::size_t j = 0; j < m.d; ++j) {
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), m.at(i, j));
      (void)ec;
      if (j) line += ',';
      line.append(buf.data(), ptr);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IOError("write failed for " + path);
}

DataMatrix load_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path);
  std::uint64_t header[2] = {0, 0};
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw FormatError("truncated header in " + path);
  DataMatrix m;
  m.n = header[0];
  m.d = header[1];
  if (m.n == 0 || m.d == 0) throw FormatError("bad header counts in " + path);
  if (m.d > (1ull << 32) || m.n > (1ull << 40))
    throw FormatError("implausible header counts in " + path);
  std::size_t total = m.n * m.d;
  std::vector<float> raw(total);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(total * sizeof(float)));
  if (!in) throw FormatError("truncated payload in " + path);
  char extra;
  if (in.read(&extra, 1)) throw FormatError("trailing bytes in " + path);
  m.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (!std::isfinite(raw[i])) throw FormatError("non-finite value in " + path);
    m.values[i] = raw[i];
  }
  return m;
}

void save_bin(const DataMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write " + path);
  std::uint64_t header[2] = {m.n, m.d};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  std::vector<float> raw(m.values.size());
  for (std::size_t i = 0; i < m.values.size(); ++i) raw[i] = static_cast<float>(m.values[i]);
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!out) throw IOError("write failed for " + path);
}

}  // namespace

DataMatrix load_matrix(const std::string& path, MatrixFormat fmt) {
  DataMatrix m = (fmt == MatrixFormat::csv) ? load_csv(path) : load_bin(path);
  m.name = path;
  return m;
}

void save_matrix(const DataMatrix& m, const std::string& path, MatrixFormat fmt) {
  if (m.n < 1 || m.d < 1 || m.values.size() != m.n * m.d)
    throw ParamError("refusing to save malformed matrix");
  if (fmt == MatrixFormat::csv)
    save_csv(m, path);
  else
    save_bin(m, path);
}

LabelVector load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open " + path);
  LabelVector l;
  std::string line;
  std::size_t lineno = 0;
  std::int32_t maxv = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) break;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw FormatError("non-integer label at line " + std::to_string(lineno));
    if (v < 0) throw FormatError("negative label at line " + std::to_string(lineno));
    if (v > INT32_MAX) throw FormatError("label overflow at line " + std::to_string(lineno));
    l.labels.push_back(static_cast<std::int32_t>(v));
    maxv = std::max(maxv, static_cast<std::int32_t>(v));
  }
  if (l.labels.empty()) throw FormatError("empty label file " + path);
  l.c = maxv + 1;
  return l;
}

void save_labels(const LabelVector& l, const std::string& path) {
  validate_labels(l);
  std::ofstream out(path);
  if (!out) throw IOError("cannot write " + path);
  for (auto v : l.labels) out << v << '\n';
  if (!out) throw IOError("write failed for " + path);
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

struct ShapeSpec {
  double outer_radius;  // scales the noise jitter
};

// Component samplers. Each appends one point of class `cls`.
void sample_tb(int cls, Rng& rng, double& x, double& y) {
  // two interleaved arcs plus an off-side blob
  if (cls == 0) {
    double t = rng.uniform() * 3.141592653589793;
    x = 2.0 * std::cos(t);
    y = 2.0 * std::sin(t);
  } else if (cls == 1) {
    double t = rng.uniform() * 3.141592653589793;
    x = 2.0 - 2.0 * std::cos(t);
    y = 1.0 - 2.0 * std::sin(t);
  } else {
    x = 6.0 + 0.25 * rng.normal();
    y = 2.0 + 0.25 * rng.normal();
  }
}

void sample_sf(int cls, Rng& rng, double& x, double& y) {
  // head ring, two eyes, mouth arc
  if (cls == 0) {
    double t = rng.uniform() * kTwoPi;
    x = 3.0 * std::cos(t);
    y = 3.0 * std::sin(t);
  } else if (cls == 1) {
    x = -1.0 + 0.18 * rng.normal();
    y = 0.9 + 0.18 * rng.normal();
  } else if (cls == 2) {
    x = 1.0 + 0.18 * rng.normal();
    y = 0.9 + 0.18 * rng.normal();
  } else {
    double t = 3.141592653589793 + 0.55 + rng.uniform() * (3.141592653589793 - 1.1);
    x = 1.7 * std::cos(t);
    y = 1.7 * std::sin(t);
  }
}

const double kCcRadii[3] = {0.4, 1.6, 2.8};

void sample_cc(int cls, Rng& rng, double& x, double& y) {
  double t = rng.uniform() * kTwoPi;
  x = kCcRadii[cls] * std::cos(t);
  y = kCcRadii[cls] * std::sin(t);
}

void sample_cg(int cls, Rng& rng, double& x, double& y) {
  // two rings around a 3x3 grid of blobs
  if (cls == 0 || cls == 1) {
    double r = (cls == 0) ? 4.5 : 7.0;
    double t = rng.uniform() * kTwoPi;
    x = r * std::cos(t);
    y = r * std::sin(t);
  } else {
    int g = cls - 2;
    double cx = 2.0 * (g % 3 - 1);
    double cy = 2.0 * (g / 3 - 1);
    x = cx + 0.25 * rng.normal();
    y = cy + 0.25 * rng.normal();
  }
}

void sample_fl(int cls, Rng& rng, double& x, double& y) {
  // 13 petal loops around the origin
  double psi = kTwoPi * cls / 13.0;
  double cx = 2.2 * std::cos(psi), cy = 2.2 * std::sin(psi);
  double ux = std::cos(psi), uy = std::sin(psi);   // radial
  double vx = -std::sin(psi), vy = std::cos(psi);  // tangential
  double t = rng.uniform() * kTwoPi;
  double a = 0.7 * std::cos(t), b = 0.28 * std::sin(t);
  x = cx + a * ux + b * vx;
  y = cy + a * uy + b * vy;
}

ShapeSpec shape_spec(Shape s) {
  switch (s) {
    case Shape::tb: return {2.0};
    case Shape::sf: return {3.0};
    case Shape::cc: return {2.8};
    case Shape::cg: return {7.0};
    case Shape::fl: return {2.9};
  }
  return {1.0};
}

// cc rings get members roughly proportional to circumference so the sampled
// density is even; the other shapes round-robin their components.
int class_for_index(Shape shape, std::size_t i, int c) {
  if (shape == Shape::cc) {
    static const int pattern[9] = {0, 1, 1, 1, 2, 2, 2, 2, 2};
    return pattern[i % 9];
  }
  return static_cast<int>(i % static_cast<std::size_t>(c));
}

}  // namespace

SyntheticData gen_synthetic(Shape shape, std::size_t n, double noise,
                            std::uint64_t seed) {
  int c = shape_class_count(shape);
  if (n < 10 * static_cast<std::size_t>(c))
    throw ParamError("need n >= 10 * class count (" + std::to_string(10 * c) + ")");
  if (noise < 0.0 || !std::isfinite(noise)) throw ParamError("noise must be >= 0");

  SyntheticData out;
  out.data.n = n;
  out.data.d = 2;
  out.data.values.resize(n * 2);
  out.data.name = shape_name(shape);
  out.truth.labels.resize(n);
  out.truth.c = c;

  Rng rng(derive_seed(seed, 0xD5, static_cast<std::uint64_t>(shape)));
  double jitter = noise * shape_spec(shape).outer_radius;

  for (std::size_t i = 0; i < n; ++i) {
    int cls = class_for_index(shape, i, c);
    double x = 0.0, y = 0.0;
    switch (shape) {
      case Shape::tb: sample_tb(cls, rng, x, y); break;
      case Shape::sf: sample_sf(cls, rng, x, y); break;
      case Shape::cc: sample_cc(cls, rng, x, y); break;
      case Shape::cg: sample_cg(cls, rng, x, y); break;
      case Shape::fl: sample_fl(cls, rng, x, y); break;
    }
    double gx = rng.normal(), gy = rng.normal();
    if (jitter > 0.0) {
      x += jitter * gx;
      y += jitter * gy;
    }
    out.data.values[i * 2] = x;
    out.data.values[i * 2 + 1] = y;
    out.truth.labels[i] = cls;
  }
  return out;
}

}  // namespace lsec
