#pragma once

// Exact rationals. All probabilities, charges and scores in this library are
// carried as GMP rationals; nothing is ever rounded.

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "flexcolor/error.hpp"

namespace flexcolor {

using Rational = mpq_class;
using Integer = mpz_class;

/// Renders as "num/den", always with an explicit denominator ("3/1", "-1/2").
inline std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Accepts "n", "n/d" and signed forms; the result is canonicalized.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error(ErrorCode::parse, "empty rational");
  const auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw Error(ErrorCode::parse, "malformed rational '" + s + "'");
  const Integer d{den};
  if (d == 0) throw Error(ErrorCode::parse, "zero denominator in '" + s + "'");
  Rational q{Integer{num}, d};
  q.canonicalize();
  return q;
}

/// base^exp for exp >= 0.
inline Rational power(const Rational& base, unsigned long exp) {
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exp);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exp);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace flexcolor
