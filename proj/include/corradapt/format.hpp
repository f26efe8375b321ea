#pragma once

#include <string>

namespace corradapt {

inline constexpr int default_significant_digits = 6;

// Shortest decimal text of `value` rounded to `digits` significant digits
// (round-half-even on the exact binary value, C locale, no exponent unless
// the magnitude requires one). Negative zero prints as "0".
std::string format_decimal(double value, int digits = default_significant_digits);

// Fixed-point text with `decimals` digits after the dot.
std::string format_fixed(double value, int decimals);

// Value after a round trip through format_decimal.
double round_significant(double value, int digits = default_significant_digits);

}  // namespace corradapt
