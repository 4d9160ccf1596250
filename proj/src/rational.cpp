#include "curvreal/rational.hpp"

#include <cctype>

#include "curvreal/errors.hpp"

namespace curvreal {

namespace {

// Digits with an optional single leading sign.
bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

// GMP's string constructor does not take a leading '+'.
mpz_class parse_integer(const std::string& s) {
  return mpz_class(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const std::size_t slash = text.find('/');
  const std::string num = text.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den)) {
    throw ValidationError("malformed rational literal: \"" + text + "\"");
  }
  const mpz_class d = parse_integer(den);
  if (sgn(d) == 0) {
    throw ValidationError("zero denominator in rational literal: \"" + text + "\"");
  }
  Rational value(parse_integer(num), d);
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) {
  // mpq_class::get_str prints "p" or "p/q" for canonical values.
  return value.get_str();
}

}  // namespace curvreal
