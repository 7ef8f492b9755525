#include "solpath/error.hpp"

namespace solpath {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::RepairExceeded: return "RepairExceeded";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::InfeasibleAnchor: return "InfeasibleAnchor";
    case ErrorCode::EmptyPath: return "EmptyPath";
    case ErrorCode::AllDegenerate: return "AllDegenerate";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace solpath
