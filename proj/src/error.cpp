#include "levy/error.hpp"

namespace levy {

const char* to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::non_positive_gap: return "NonPositiveGap";
    case ErrorCode::gap_exceeds_delta_max: return "GapExceedsDeltaMax";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::no_jump_representation: return "NoJumpRepresentation";
    case ErrorCode::no_density: return "NoDensity";
    case ErrorCode::unsupported_moment: return "UnsupportedMoment";
    case ErrorCode::grid_too_narrow: return "GridTooNarrow";
    case ErrorCode::plan_too_small: return "PlanTooSmall";
    case ErrorCode::no_root_in_unit_interval: return "NoRootInUnitInterval";
    case ErrorCode::bracket_failure: return "BracketFailure";
    case ErrorCode::config: return "ConfigError";
    case ErrorCode::io: return "IoError";
  }
  return "Unknown";
}

} // namespace levy
