#pragma once

#include <atomic>
#include <cstdint>

namespace lsec::instrument {

// Cheap global counters for the expensive pipeline stages. Tests use these to
// check that the nested-neighbor reuse actually skips work.
inline std::atomic<std::uint64_t> knn_searches{0};
inline std::atomic<std::uint64_t> landmark_selections{0};

inline void reset() {
  knn_searches = 0;
  landmark_selections = 0;
}

}  // namespace lsec::instrument
