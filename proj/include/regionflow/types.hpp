#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace regionflow {

using Vertex = std::int32_t;
using ArcId = std::int64_t;
using Cap = std::int64_t;
using Label = std::int32_t;
using RegionId = std::int32_t;

inline constexpr Vertex kNoVertex = -1;
inline constexpr ArcId kNoArc = -1;
inline constexpr RegionId kNoRegion = -1;

enum class ErrorKind {
  kArcNotFound,
  kPreflowViolation,
  kNotOptimal,
  kCostMismatch,
  kShapeMismatch,
  kPreconditionViolated,
  kNotApplicable,
  kInternalInconsistency,
  kSweepBoundExceeded,
  kPageIo,
  kPageCorrupt,
  kMalformedLine,
  kCountMismatch,
  kDuplicateTerminal,
  kSizeGuard,
  kOverflow,
  kIo,
  kUsage,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Capacity arithmetic is 64-bit; sums are checked because vision-sized
// instances exceed 32-bit totals and an overflow would silently break duality.
inline Cap checked_add(Cap a, Cap b) {
  Cap r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::kOverflow, "capacity sum overflows int64");
  return r;
}

}  // namespace regionflow
