#ifndef TBCOVER_RATIONAL_HPP
#define TBCOVER_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace tbcover {

/// Exact rational number. All timestamp arithmetic goes through this type.
using Rational = mpq_class;

/// Parses an integer or decimal literal ("3", "-2", "2.5", "10.0") exactly.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "3", "-1/2": integers print without a denominator.
std::string to_string(const Rational& q);

/// Writes `q` as a decimal when the expansion is finite ("2.5"), else as a fraction.
std::string to_decimal_string(const Rational& q);

}  // namespace tbcover

#endif  // TBCOVER_RATIONAL_HPP
