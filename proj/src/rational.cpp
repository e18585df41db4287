#include "sofic/rational.hpp"

#include <charconv>

#include "sofic/error.hpp"

namespace sofic {

  std::string format_rational(Rational const& r) {
    return std::to_string(r.numerator()) + "/"
           + std::to_string(r.denominator());
  }

  namespace {
    std::int64_t parse_int(std::string_view s, std::string_view whole) {
      std::int64_t v   = 0;
      auto         res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::parse_error,
                    "malformed rational \"" + std::string(whole) + "\"");
      }
      return v;
    }
  }  // namespace

  Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      return Rational(parse_int(text, text));
    }
    auto num = parse_int(text.substr(0, slash), text);
    auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) {
      throw Error(ErrorCode::parse_error,
                  "zero denominator in \"" + std::string(text) + "\"");
    }
    return Rational(num, den);
  }

  std::int64_t ceil_times(Rational const& r, std::int64_t n) {
    __int128 num = static_cast<__int128>(r.numerator()) * n;
    __int128 den = r.denominator();
    __int128 q   = num / den;
    if (num % den != 0 && num > 0) {
      ++q;
    }
    return static_cast<std::int64_t>(q);
  }

}  // namespace sofic
