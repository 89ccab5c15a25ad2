#include "poskb/rational.hpp"

#include "poskb/errors.hpp"

#include <cctype>

namespace poskb {

BigInt pow2(unsigned n) { return BigInt(1) << n; }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Decimal digits to BigInt. Leading zeros are stripped first: cpp_int's
// string constructor would read them as an octal prefix.
BigInt parse_digits(std::string s) {
  std::size_t first = s.find_first_not_of('0');
  if (first == std::string::npos) return BigInt(0);
  return BigInt(s.substr(first));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  const std::string original(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw InvalidWeightError("invalid rational '" + original + "'");

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw InvalidWeightError("invalid rational '" + original + "'");
    BigInt d = parse_digits(std::string(den));
    if (d == 0) throw InvalidWeightError("zero denominator in '" + original + "'");
    value = Rational(parse_digits(std::string(num)), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view intpart = s.substr(0, dot), fracpart = s.substr(dot + 1);
    if (!all_digits(intpart) || !all_digits(fracpart))
      throw InvalidWeightError("invalid rational '" + original + "'");
    BigInt scaled = parse_digits(std::string(intpart) + std::string(fracpart));
    BigInt scale = 1;
    for (std::size_t i = 0; i < fracpart.size(); ++i) scale *= 10;
    value = Rational(scaled, scale);
  } else {
    if (!all_digits(s)) throw InvalidWeightError("invalid rational '" + original + "'");
    value = Rational(parse_digits(std::string(s)));
  }
  return negative ? -value : value;
}

std::string format_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();

  // Count the factors of 2 and 5 in the denominator.
  BigInt rest = den;
  unsigned twos = 0, fives = 0;
  while (rest % 2 == 0) { rest /= 2; ++twos; }
  while (rest % 5 == 0) { rest /= 5; ++fives; }
  if (rest != 1) return num.str() + "/" + den.str();

  const unsigned digits = twos > fives ? twos : fives;
  BigInt abs_num = num < 0 ? BigInt(-num) : num;
  BigInt scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = abs_num * scale / den;  // exact: den | abs_num*scale
  BigInt ipart = scaled / scale, fpart = scaled % scale;
  std::string frac = fpart.str();
  frac.insert(frac.begin(), digits - frac.size(), '0');
  std::string out = (num < 0 ? "-" : "") + ipart.str() + "." + frac;
  return out;
}

std::string format_fraction(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_percent(const Rational& r) { return format_rational(r * 100) + "%"; }

}  // namespace poskb
