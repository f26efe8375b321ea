#include "corradapt/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <system_error>

namespace corradapt {

std::string format_decimal(double value, int digits) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("format_decimal: non-finite value");
    }
    if (value == 0.0) {
        return "0";
    }
    char buf[64];
    // std::to_chars with a precision is exact (round-half-even on the binary
    // value), unlike some printf implementations.
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_decimal: buffer too small");
    }
    return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("format_fixed: non-finite value");
    }
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_fixed: buffer too small");
    }
    std::string s(buf, res.ptr);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

double round_significant(double value, int digits) {
    const std::string s = format_decimal(value, digits);
    double out = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out;
}

}  // namespace corradapt
