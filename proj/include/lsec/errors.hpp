#pragma once

#include <stdexcept>

namespace lsec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IOError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct ParamError : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct DegenerateGraph : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct MalformedEnsemble : Error { using Error::Error; };

}  // namespace lsec
