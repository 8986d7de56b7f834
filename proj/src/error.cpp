#include "stk/error.hpp"

namespace stk {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kInvalidDistribution: return "invalid-distribution";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kAlignment: return "alignment";
    case ErrorKind::kUnknownLabel: return "unknown-label";
    case ErrorKind::kCoverage: return "coverage";
    case ErrorKind::kIntegrity: return "integrity";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kDegenerateMarginals: return "degenerate-marginals";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace stk
