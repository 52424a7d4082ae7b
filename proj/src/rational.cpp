#include "dbsf/rational.hpp"

#include <charconv>

namespace dbsf {

std::string format_rational(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string format_rational_slashed(const Rational& q) {
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

Int parse_int_strict(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  Int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  // from_chars takes '-' but not '+'; the numerator allows either sign.
  if (text.size() >= 2 && text[0] == '+' && text[1] >= '0' && text[1] <= '9')
    text.remove_prefix(1);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int_strict(text));
  Int num = parse_int_strict(text.substr(0, slash));
  Int den = parse_int_strict(text.substr(slash + 1));
  if (den <= 0) throw std::invalid_argument("denominator must be positive in '" + std::string(text) + "'");
  return Rational(num, den);
}

Int floor_rational(const Rational& q) {
  Int n = q.numerator(), d = q.denominator();  // d > 0
  Int quot = n / d, rem = n % d;
  return (rem != 0 && n < 0) ? quot - 1 : quot;
}

Int ceil_rational(const Rational& q) {
  Int n = q.numerator(), d = q.denominator();
  Int quot = n / d, rem = n % d;
  return (rem != 0 && n > 0) ? quot + 1 : quot;
}

int floor_log2(const Rational& q) {
  if (q <= 0) throw std::domain_error("floor_log2 requires a positive value");
  int k = 0;
  Rational two(2);
  Rational power(1);
  if (q >= 1) {
    // largest k with 2^k <= q
    while (power * two <= q) {
      power *= two;
      ++k;
    }
    return k;
  }
  while (power > q) {
    power /= two;
    --k;
  }
  return k;
}

int ceil_log2_int(Int n) {
  if (n < 1) throw std::domain_error("ceil_log2_int requires n >= 1");
  int k = 0;
  Int power = 1;
  while (power < n) {
    power <<= 1;
    ++k;
  }
  return k;
}

double to_double(const Rational& q) {
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

DegreeBound DegreeBound::make_finite(Rational b) {
  if (b <= 0) throw std::invalid_argument("finite degree bound must be positive");
  return DegreeBound{std::move(b)};
}

DegreeBound parse_degree_bound(std::string_view text) {
  if (text == "inf") return DegreeBound::make_unbounded();
  return DegreeBound::make_finite(parse_rational(text));
}

std::string format_degree_bound(const DegreeBound& b) {
  if (b.unbounded()) return "inf";
  return format_rational(b.value());
}

}  // namespace dbsf
