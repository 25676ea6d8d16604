#include "mitk/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace mitk {

BigInt floor(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);  // always > 0
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) {
    q -= 1;
  }
  return q;
}

BigInt floor_plus(const Rational& x) {
  BigInt f = floor(x);
  return f < 0 ? BigInt(0) : f;
}

bool is_integer(const Rational& x) {
  return boost::multiprecision::denominator(x) == 1;
}

namespace {

BigInt parse_integer(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) {
    throw std::invalid_argument("not a rational: '" + std::string(whole) + "'");
  }
  BigInt value = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw std::invalid_argument("not a rational: '" + std::string(whole) + "'");
    }
    value = value * 10 + (s[i] - '0');
  }
  return negative ? BigInt(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(s, text));
  }
  const BigInt num = parse_integer(trim(s.substr(0, slash)), text);
  const std::string_view den_text = trim(s.substr(slash + 1));
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw std::invalid_argument("signed denominator in '" + std::string(text) + "'");
  }
  const BigInt den = parse_integer(den_text, text);
  if (den == 0) {
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

std::string to_string(const Rational& x) {
  if (is_integer(x)) {
    return boost::multiprecision::numerator(x).str();
  }
  return boost::multiprecision::numerator(x).str() + "/" +
         boost::multiprecision::denominator(x).str();
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace mitk
