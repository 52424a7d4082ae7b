#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dbsf {

using Int = std::int64_t;

// Exact arithmetic for every load/threshold comparison. boost::rational keeps
// values in lowest terms with a positive denominator, which the text formats
// below rely on.
using Rational = boost::rational<Int>;

std::string format_rational(const Rational& q);          // canonical: "p" when den==1, else "p/q"
std::string format_rational_slashed(const Rational& q);  // always "p/q" (certificate lines)

// Accepts "p" or "p/q" with optional sign on p. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

Int floor_rational(const Rational& q);
Int ceil_rational(const Rational& q);

// Largest k with 2^k <= q. Requires q > 0; desk-scale magnitudes only.
int floor_log2(const Rational& q);

// Smallest k with 2^k >= n. Requires n >= 1.
int ceil_log2_int(Int n);

// Reporting only; never used in a decision.
double to_double(const Rational& q);

// A vertex either carries a finite positive bound or is unbounded. Unbounded
// vertices have load and uptick load exactly zero by definition.
struct DegreeBound {
  std::optional<Rational> finite;  // nullopt = unbounded

  bool unbounded() const { return !finite.has_value(); }
  const Rational& value() const { return *finite; }

  static DegreeBound make_unbounded() { return DegreeBound{std::nullopt}; }
  static DegreeBound make_finite(Rational b);

  // b >= delta with unbounded treated as +infinity.
  bool at_least(const Rational& delta) const {
    return unbounded() || *finite >= delta;
  }

  bool operator==(const DegreeBound& o) const { return finite == o.finite; }
};

DegreeBound parse_degree_bound(std::string_view text);  // "p", "p/q", or "inf"
std::string format_degree_bound(const DegreeBound& b);

}  // namespace dbsf
