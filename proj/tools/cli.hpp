#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sofic::cli {

  // Exit codes: 0 success / pass, 2 verified failure (defects not below
  // epsilon, incomplete separation, failed embedding check), 1 usage or
  // parse error.
  inline constexpr int exit_ok        = 0;
  inline constexpr int exit_usage     = 1;
  inline constexpr int exit_violation = 2;

  // args excludes the program name.
  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace sofic::cli
