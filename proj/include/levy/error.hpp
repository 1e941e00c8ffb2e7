#pragma once

#include <stdexcept>
#include <string>

namespace levy {

enum class ErrorCode
{
  non_positive_gap,
  gap_exceeds_delta_max,
  invalid_argument,
  length_mismatch,
  no_jump_representation,
  no_density,
  unsupported_moment,
  grid_too_narrow,
  plan_too_small,
  no_root_in_unit_interval,
  bracket_failure,
  config,
  io,
};

const char* to_string(ErrorCode code);

//! Library error carrying a machine-readable code.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what)
    , code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace levy
