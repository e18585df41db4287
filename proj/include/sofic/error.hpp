#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sofic {

  enum class ErrorCode {
    invalid_argument,
    group_too_large,
    degree_too_large,
    ball_too_large,
    not_a_group,
    not_a_subgroup,
    not_normal,
    degree_mismatch,
    malformed_letter,
    spec_mismatch,
    disconnected_graph,
    improper_sequence,
    invalid_stage,
    unresolved_product,
    support_mismatch,
    stage_conditions_violated,
    truncation_collision,
    unassigned_factor,
    parse_error,
  };

  std::string_view to_string(ErrorCode code) noexcept;

  class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, std::string const& what)
        : std::runtime_error(what), _code(code) {}

    ErrorCode code() const noexcept {
      return _code;
    }

   private:
    ErrorCode _code;
  };

}  // namespace sofic
