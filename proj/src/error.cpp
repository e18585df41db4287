#include "sofic/error.hpp"

namespace sofic {

  std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
      case ErrorCode::invalid_argument: return "invalid argument";
      case ErrorCode::group_too_large: return "group too large";
      case ErrorCode::degree_too_large: return "degree too large";
      case ErrorCode::ball_too_large: return "ball too large";
      case ErrorCode::not_a_group: return "not a group";
      case ErrorCode::not_a_subgroup: return "not a subgroup";
      case ErrorCode::not_normal: return "not normal";
      case ErrorCode::degree_mismatch: return "degree mismatch";
      case ErrorCode::malformed_letter: return "malformed letter";
      case ErrorCode::spec_mismatch: return "spec mismatch";
      case ErrorCode::disconnected_graph: return "disconnected graph";
      case ErrorCode::improper_sequence: return "improper sequence";
      case ErrorCode::invalid_stage: return "invalid stage";
      case ErrorCode::unresolved_product: return "unresolved product";
      case ErrorCode::support_mismatch: return "support mismatch";
      case ErrorCode::stage_conditions_violated:
        return "stage conditions violated";
      case ErrorCode::truncation_collision: return "truncation collision";
      case ErrorCode::unassigned_factor: return "unassigned factor";
      case ErrorCode::parse_error: return "parse error";
    }
    return "unknown";
  }

}  // namespace sofic
