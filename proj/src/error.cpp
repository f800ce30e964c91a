#include "unmask/error.hpp"

namespace unmask {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNotADistribution: return "NotADistribution";
    case ErrorCode::kPositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInfeasibleEnumeration: return "InfeasibleEnumeration";
    case ErrorCode::kHanViolation: return "HanViolation";
    case ErrorCode::kNonMonotoneNodes: return "NonMonotoneNodes";
    case ErrorCode::kInvalidTolerance: return "InvalidTolerance";
    case ErrorCode::kNotPrime: return "NotPrime";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDuplicateEvalPoints: return "DuplicateEvalPoints";
    case ErrorCode::kFieldTooSmall: return "FieldTooSmall";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

}  // namespace unmask
