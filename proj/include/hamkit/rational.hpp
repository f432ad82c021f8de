#ifndef HAMKIT_RATIONAL_HPP
#define HAMKIT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hamkit {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "p/q" or "p" with integer p, q.
inline std::string to_string(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1)
    return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

namespace detail {

inline Rational parse_decimal(std::string_view s) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    negative = s[i] == '-';
    ++i;
  }
  boost::multiprecision::cpp_int digits = 0;
  boost::multiprecision::cpp_int scale = 1;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits = digits * 10 + (ch - '0');
      if (seen_point)
        scale *= 10;
      any_digit = true;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit)
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  Rational value(digits, scale);
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool neg_exp = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      neg_exp = s[i] == '-';
      ++i;
    }
    if (i == s.size())
      throw std::invalid_argument("bad exponent in '" + std::string(s) + "'");
    int exponent = 0;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      exponent = exponent * 10 + (s[i] - '0');
      if (exponent > 4000)
        throw std::invalid_argument("exponent too large in '" +
                                    std::string(s) + "'");
    }
    boost::multiprecision::cpp_int p = boost::multiprecision::pow(
        boost::multiprecision::cpp_int(10), exponent);
    value = neg_exp ? value / Rational(p) : value * Rational(p);
  }
  if (i != s.size())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return negative ? Rational(-value) : value;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

} // namespace detail

/// Parses a decimal ("0.25", "-1e-3") or a ratio of decimals ("1/4") into an
/// exact rational. Throws std::invalid_argument on malformed input or a zero
/// denominator.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = detail::trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos)
    return detail::parse_decimal(s);
  Rational num = detail::parse_decimal(detail::trim(s.substr(0, slash)));
  Rational den = detail::parse_decimal(detail::trim(s.substr(slash + 1)));
  if (den == 0)
    throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
  return num / den;
}

} // namespace hamkit

#endif // HAMKIT_RATIONAL_HPP
