#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace sofic {

  // Every distance and defect in the library is one of these; there is no
  // floating point on any verification path.
  using Rational = boost::rational<std::int64_t>;

  // Always "p/q", including "0/1" and "1/1".
  std::string format_rational(Rational const& r);

  // Accepts "p/q" or a bare integer "p". Throws Error{parse_error}.
  Rational parse_rational(std::string_view text);

  // ceil(r * n) for r >= 0.
  std::int64_t ceil_times(Rational const& r, std::int64_t n);

}  // namespace sofic
