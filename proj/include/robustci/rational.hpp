#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "robustci/error.hpp"

namespace robustci {

using Rational = mpq_class;

// Always "num/den" with a positive, reduced denominator ("0/1", "-3/4", "5/1").
inline std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

// Accepts "num/den" or a bare integer. Rejects zero denominators and junk.
inline Rational parse_rational(std::string_view text) {
  auto valid_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string_view s) {
    return std::string(!s.empty() && s[0] == '+' ? s.substr(1) : s);
  };
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den))
    throw input_error("malformed rational '" + std::string(text) + "'");
  mpz_class n(strip_plus(num), 10), d(strip_plus(den), 10);
  if (d == 0) throw input_error("zero denominator in rational '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace robustci
