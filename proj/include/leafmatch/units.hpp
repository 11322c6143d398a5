#pragma once

// Unit-suffix grammar used at every I/O boundary.
//
//   quantity := number [prefix] [unit]
//   number   := [+-] digits [. digits] [(e|E) [+-] digits]
//   prefix   := f | p | n | u | µ | m | k | M | G | T      (case-sensitive)
//
// Examples: "915MHz", "6.8nH", "1.2pF", "50ohm", "2.2k". Prefix scaling is
// applied to the decimal exponent before conversion, so "6.8nH" yields the
// same double as the literal 6.8e-9.

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

#include "leafmatch/errors.hpp"

namespace leafmatch::units {

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

/// Length of the longest prefix of `s` that is a valid decimal number, or 0.
inline std::size_t scan_number(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t int_digits = 0;
    while (i < s.size() && is_digit(s[i])) { ++i; ++int_digits; }
    std::size_t frac_digits = 0;
    if (i < s.size() && s[i] == '.') {
        std::size_t j = i + 1;
        while (j < s.size() && is_digit(s[j])) { ++j; ++frac_digits; }
        if (int_digits + frac_digits > 0) i = j;
    }
    if (int_digits + frac_digits == 0) return 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        std::size_t exp_digits = 0;
        while (j < s.size() && is_digit(s[j])) { ++j; ++exp_digits; }
        if (exp_digits > 0) i = j;
    }
    return i;
}

}  // namespace detail

/// Parses a complete decimal token and multiplies it by 10^shift with a single
/// correctly rounded conversion. Returns nullopt for anything that is not a
/// finite decimal number.
inline std::optional<double> parse_decimal(std::string_view token, int shift = 0) {
    if (token.empty() || detail::scan_number(token) != token.size()) return std::nullopt;
    std::string_view mantissa = token;
    long exponent = 0;
    if (auto e = token.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = token.substr(0, e);
        std::string_view exp_text = token.substr(e + 1);
        if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
        if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size()) return std::nullopt;
    }
    if (!mantissa.empty() && mantissa.front() == '+') mantissa.remove_prefix(1);
    std::string rebuilt(mantissa);
    rebuilt += 'e';
    rebuilt += std::to_string(exponent + shift);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(rebuilt.data(), rebuilt.data() + rebuilt.size(), value);
    if (ptr != rebuilt.data() + rebuilt.size()) return std::nullopt;
    if (ec == std::errc::result_out_of_range) {
        // Underflow to zero is acceptable; overflow is not.
        return std::nullopt;
    }
    if (ec != std::errc{} || !std::isfinite(value)) return std::nullopt;
    return value;
}

/// Decimal exponent of an SI prefix, or nullopt if `p` is not one.
inline std::optional<int> prefix_exponent(std::string_view p) {
    if (p.empty()) return 0;
    if (p == "f") return -15;
    if (p == "p") return -12;
    if (p == "n") return -9;
    if (p == "u" || p == "\xC2\xB5") return -6;
    if (p == "m") return -3;
    if (p == "k") return 3;
    if (p == "M") return 6;
    if (p == "G") return 9;
    if (p == "T") return 12;
    return std::nullopt;
}

/// Parses "<number>[prefix][unit]". `unit` is the expected base unit symbol
/// ("Hz", "H", "F", "ohm"); it may be omitted in the text. For "ohm" the
/// symbol "Ω" is accepted as well.
inline double parse_quantity(std::string_view text, std::string_view unit) {
    const std::size_t n = detail::scan_number(text);
    if (n == 0) throw InputError("expected a number in '" + std::string(text) + "'");
    std::string_view rest = text.substr(n);
    auto strip_unit = [&](std::string_view symbol) {
        if (!symbol.empty() && rest.ends_with(symbol)) {
            rest.remove_suffix(symbol.size());
            return true;
        }
        return false;
    };
    if (!strip_unit(unit) && unit == "ohm") strip_unit("\xCE\xA9");
    const auto shift = prefix_exponent(rest);
    if (!shift) {
        throw InputError("unrecognized unit suffix in '" + std::string(text) + "' (expected [prefix]" +
                         std::string(unit) + ")");
    }
    const auto value = parse_decimal(text.substr(0, n), *shift);
    if (!value) throw InputError("number out of range in '" + std::string(text) + "'");
    return *value;
}

/// Parses an impedance literal such as "25-10j", "50+0j", "75" or "-j30"
/// style "0-30j". Resistance comes first; reactance carries a trailing 'j'.
inline std::complex<double> parse_impedance(std::string_view text) {
    std::string_view s = text;
    const std::size_t n = detail::scan_number(s);
    if (n == 0) throw InputError("malformed impedance literal '" + std::string(text) + "'");
    // A lone "30j" is pure reactance.
    if (n == s.size() - 1 && s.back() == 'j') {
        const auto x = parse_decimal(s.substr(0, n));
        if (!x) throw InputError("malformed impedance literal '" + std::string(text) + "'");
        return {0.0, *x};
    }
    const auto r = parse_decimal(s.substr(0, n));
    if (!r) throw InputError("malformed impedance literal '" + std::string(text) + "'");
    s.remove_prefix(n);
    if (s.empty()) return {*r, 0.0};
    if ((s.front() != '+' && s.front() != '-') || s.back() != 'j') {
        throw InputError("malformed impedance literal '" + std::string(text) + "'");
    }
    std::string_view x_text = s.substr(0, s.size() - 1);
    const auto x = parse_decimal(x_text);
    if (!x || x_text.size() < 2) throw InputError("malformed impedance literal '" + std::string(text) + "'");
    return {*r, *x};
}

/// Renders a value with an engineering prefix, e.g. 6.8e-9 "H" -> "6.8 nH".
inline std::string format_si(double value, std::string_view unit, int significant = 4) {
    static constexpr struct { int exp; const char* prefix; } kPrefixes[] = {
        {12, "T"}, {9, "G"}, {6, "M"}, {3, "k"}, {0, ""}, {-3, "m"}, {-6, "u"}, {-9, "n"}, {-12, "p"}, {-15, "f"}};
    if (value == 0.0 || !std::isfinite(value)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g %s", value, std::string(unit).c_str());
        return buf;
    }
    const double mag = std::fabs(value);
    int chosen = -15;
    const char* prefix = "f";
    for (const auto& p : kPrefixes) {
        if (mag >= std::pow(10.0, p.exp) * (1.0 - 1e-12)) {
            chosen = p.exp;
            prefix = p.prefix;
            break;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g %s%s", significant, value / std::pow(10.0, chosen), prefix,
                  std::string(unit).c_str());
    return buf;
}

}  // namespace leafmatch::units
