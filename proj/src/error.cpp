#include "warpharm/error.hpp"

namespace warpharm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidFamily: return "InvalidFamily";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::InvalidTolerance: return "InvalidTolerance";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NonPositiveWarp: return "NonPositiveWarp";
    case ErrorCode::DegenerateProfile: return "DegenerateProfile";
    case ErrorCode::TailNotTight: return "TailNotTight";
    case ErrorCode::NotConvergent: return "NotConvergent";
    case ErrorCode::NotSolvable: return "NotSolvable";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::SolverDivergence: return "SolverDivergence";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace warpharm
