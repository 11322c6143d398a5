#pragma once

// One-port Touchstone v1.0 (.s1p) reader and writer.
//
// Grammar accepted by parse_touchstone():
//   - '!' starts a comment that runs to end of line
//   - at most one option line "# <unit> S <format> R <ohms>", before any data;
//     tokens are case-insensitive and may appear in any order; omitted fields
//     default to GHz, MA and 50 Ω
//   - data lines hold exactly three numbers: frequency and an S11 pair
//       RI: real, imaginary
//       MA: magnitude, angle in degrees
//       DB: 20·log₁₀|S11|, angle in degrees
//   - frequencies strictly increasing
// Version 2.0 keywords ("[Version]", "[Number of Ports]" ...) are rejected.
//
// Everything is normalized to Hz and rectangular Γ on input.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "leafmatch/errors.hpp"
#include "leafmatch/rfcore.hpp"
#include "leafmatch/units.hpp"

namespace leafmatch::touchstone {

enum class FrequencyUnit { Hz, kHz, MHz, GHz };
enum class DataFormat { RI, MA, DB };

inline int unit_exponent(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::Hz: return 0;
        case FrequencyUnit::kHz: return 3;
        case FrequencyUnit::MHz: return 6;
        case FrequencyUnit::GHz: return 9;
    }
    return 0;
}

inline const char* unit_name(FrequencyUnit u) {
    switch (u) {
        case FrequencyUnit::Hz: return "Hz";
        case FrequencyUnit::kHz: return "kHz";
        case FrequencyUnit::MHz: return "MHz";
        case FrequencyUnit::GHz: return "GHz";
    }
    return "GHz";
}

inline const char* format_name(DataFormat f) {
    switch (f) {
        case DataFormat::RI: return "RI";
        case DataFormat::MA: return "MA";
        case DataFormat::DB: return "DB";
    }
    return "MA";
}

enum class ParseErrorKind {
    MalformedOptionLine,
    NonMonotonicFrequency,
    WrongColumnCount,
    NonNumericToken,
    EmptyData,
    UnsupportedVersion,
    InvalidValue,
};

inline const char* kind_name(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::MalformedOptionLine: return "malformed_option_line";
        case ParseErrorKind::NonMonotonicFrequency: return "non_monotonic_frequency";
        case ParseErrorKind::WrongColumnCount: return "wrong_column_count";
        case ParseErrorKind::NonNumericToken: return "non_numeric_token";
        case ParseErrorKind::EmptyData: return "empty_data";
        case ParseErrorKind::UnsupportedVersion: return "unsupported_version";
        case ParseErrorKind::InvalidValue: return "invalid_value";
    }
    return "parse_error";
}

/// Parse failure with the 1-based line number it was detected on.
class ParseError : public InputError {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
        : InputError("line " + std::to_string(line) + ": " + detail), kind_(kind), line_(line) {}
    ParseErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

struct Row {
    double frequency_hz = 0.0;
    ReflectionCoefficient s11;
};

class Dataset {
public:
    Dataset(std::vector<Row> rows, double reference_resistance = 50.0, FrequencyUnit unit = FrequencyUnit::GHz,
            DataFormat format = DataFormat::MA)
        : rows_(std::move(rows)), reference_resistance_(reference_resistance), unit_(unit), format_(format) {
        if (rows_.empty()) throw DomainError("touchstone dataset needs at least one row");
        if (!(reference_resistance_ > 0.0) || !std::isfinite(reference_resistance_)) {
            throw DomainError("reference resistance must be positive");
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Row& r = rows_[i];
            if (!(r.frequency_hz > 0.0) || !std::isfinite(r.frequency_hz) || !std::isfinite(r.s11.re) ||
                !std::isfinite(r.s11.im)) {
                throw DomainError("row " + std::to_string(i) + " holds a non-finite or non-positive value");
            }
            if (i > 0 && !(r.frequency_hz > rows_[i - 1].frequency_hz)) {
                throw DomainError("frequencies must be strictly increasing");
            }
        }
    }

    const std::vector<Row>& rows() const noexcept { return rows_; }
    double reference_resistance() const noexcept { return reference_resistance_; }
    FrequencyUnit frequency_unit() const noexcept { return unit_; }
    DataFormat format() const noexcept { return format_; }
    double min_frequency() const { return rows_.front().frequency_hz; }
    double max_frequency() const { return rows_.back().frequency_hz; }

private:
    std::vector<Row> rows_;
    double reference_resistance_;
    FrequencyUnit unit_;
    DataFormat format_;
};

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

/// cos/sin of an angle in degrees, exact on multiples of 90°.
inline Complex unit_phasor_deg(double degrees) {
    double reduced = std::fmod(degrees, 360.0);
    if (reduced < 0) reduced += 360.0;
    if (reduced == 0.0) return {1.0, 0.0};
    if (reduced == 90.0) return {0.0, 1.0};
    if (reduced == 180.0) return {-1.0, 0.0};
    if (reduced == 270.0) return {0.0, -1.0};
    const double rad = degrees * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

/// Shortest round-trip decimal for `value`, rewritten as value × 10^-shift.
/// parse_decimal(result, shift) recovers `value` bit-exactly.
inline std::string shifted_decimal(double value, int shift) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::scientific);
    std::string_view sci(buf.data(), static_cast<std::size_t>(res.ptr - buf.data()));
    const auto epos = sci.find('e');
    std::string_view mant = sci.substr(0, epos);
    int exp = std::stoi(std::string(sci.substr(epos + 1)));
    std::string sign;
    if (!mant.empty() && mant.front() == '-') {
        sign = "-";
        mant.remove_prefix(1);
    }
    std::string digits;
    for (char c : mant) {
        if (c != '.') digits += c;
    }
    exp -= shift;
    const int point = exp + 1;  // digits before the decimal point
    const int nd = static_cast<int>(digits.size());
    if (point > 0 && point <= 21) {
        if (point >= nd) return sign + digits + std::string(static_cast<std::size_t>(point - nd), '0');
        return sign + digits.substr(0, static_cast<std::size_t>(point)) + "." +
               digits.substr(static_cast<std::size_t>(point));
    }
    if (point <= 0 && point > -6) {
        return sign + "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
    }
    std::string out = sign + digits.substr(0, 1);
    if (nd > 1) out += "." + digits.substr(1);
    return out + "e" + std::to_string(exp);
}

inline std::string iso8601_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace detail

inline Dataset parse_touchstone(std::string_view text) {
    FrequencyUnit unit = FrequencyUnit::GHz;
    DataFormat format = DataFormat::MA;
    double resistance = 50.0;
    bool seen_option = false;
    std::vector<Row> rows;
    std::size_t line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto bang = line.find('!'); bang != std::string_view::npos) line = line.substr(0, bang);
        auto tokens = detail::split_ws(line);
        if (tokens.empty()) {
            if (end == text.size()) break;
            continue;
        }

        if (tokens.front().front() == '[') {
            throw ParseError(ParseErrorKind::UnsupportedVersion, line_no,
                             "Touchstone 2.0 keyword '" + std::string(tokens.front()) + "' is not supported");
        }

        if (tokens.front().front() == '#') {
            if (seen_option) throw ParseError(ParseErrorKind::MalformedOptionLine, line_no, "duplicate option line");
            if (!rows.empty()) {
                throw ParseError(ParseErrorKind::MalformedOptionLine, line_no, "option line after data");
            }
            seen_option = true;
            std::vector<std::string> opts;
            if (tokens.front().size() > 1) opts.push_back(detail::lower(tokens.front().substr(1)));
            for (std::size_t i = 1; i < tokens.size(); ++i) opts.push_back(detail::lower(tokens[i]));
            for (std::size_t i = 0; i < opts.size(); ++i) {
                const std::string& o = opts[i];
                if (o == "hz") unit = FrequencyUnit::Hz;
                else if (o == "khz") unit = FrequencyUnit::kHz;
                else if (o == "mhz") unit = FrequencyUnit::MHz;
                else if (o == "ghz") unit = FrequencyUnit::GHz;
                else if (o == "ri") format = DataFormat::RI;
                else if (o == "ma") format = DataFormat::MA;
                else if (o == "db") format = DataFormat::DB;
                else if (o == "s") continue;
                else if (o == "y" || o == "z" || o == "h" || o == "g") {
                    throw ParseError(ParseErrorKind::MalformedOptionLine, line_no,
                                     "only S-parameter files are supported, got parameter '" + o + "'");
                } else if (o == "r") {
                    if (i + 1 >= opts.size()) {
                        throw ParseError(ParseErrorKind::MalformedOptionLine, line_no, "'R' without a resistance");
                    }
                    const auto r = units::parse_decimal(opts[++i]);
                    if (!r || !(*r > 0.0)) {
                        throw ParseError(ParseErrorKind::MalformedOptionLine, line_no,
                                         "reference resistance must be a positive number, got '" + opts[i] + "'");
                    }
                    resistance = *r;
                } else {
                    throw ParseError(ParseErrorKind::MalformedOptionLine, line_no, "unknown option token '" + o + "'");
                }
            }
            continue;
        }

        if (tokens.size() != 3) {
            throw ParseError(ParseErrorKind::WrongColumnCount, line_no,
                             "expected 3 columns for a one-port file, got " + std::to_string(tokens.size()));
        }
        std::array<double, 3> v{};
        for (std::size_t i = 0; i < 3; ++i) {
            const auto parsed = units::parse_decimal(tokens[i], i == 0 ? unit_exponent(unit) : 0);
            if (!parsed) {
                throw ParseError(ParseErrorKind::NonNumericToken, line_no,
                                 "not a finite number: '" + std::string(tokens[i]) + "'");
            }
            v[i] = *parsed;
        }
        if (!(v[0] > 0.0)) throw ParseError(ParseErrorKind::InvalidValue, line_no, "frequency must be positive");
        if (!rows.empty() && !(v[0] > rows.back().frequency_hz)) {
            throw ParseError(ParseErrorKind::NonMonotonicFrequency, line_no, "frequency not strictly increasing");
        }
        Complex g;
        switch (format) {
            case DataFormat::RI: g = {v[1], v[2]}; break;
            case DataFormat::MA: g = v[1] * detail::unit_phasor_deg(v[2]); break;
            case DataFormat::DB: g = std::pow(10.0, v[1] / 20.0) * detail::unit_phasor_deg(v[2]); break;
        }
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) {
            throw ParseError(ParseErrorKind::InvalidValue, line_no, "S11 value overflows");
        }
        rows.push_back({v[0], ReflectionCoefficient::from(g)});
        if (end == text.size()) break;
    }
    if (rows.empty()) throw ParseError(ParseErrorKind::EmptyData, line_no, "no data lines");
    return Dataset(std::move(rows), resistance, unit, format);
}

struct WriteOptions {
    DataFormat format = DataFormat::RI;
    FrequencyUnit unit = FrequencyUnit::GHz;
    /// Emit the "! written by ... at <timestamp>" header. Turn off for
    /// byte-reproducible output.
    bool header_comment = true;
};

/// DB output of |Γ| = 0 is written at this floor since -∞ has no decimal form.
inline constexpr double kDbWriteFloor = -400.0;

inline std::string write_touchstone(const Dataset& d, const WriteOptions& opt = {}) {
    std::string out;
    if (opt.header_comment) out += "! leafmatch touchstone writer " + detail::iso8601_now() + "\n";
    out += "# ";
    out += unit_name(opt.unit);
    out += " S ";
    out += format_name(opt.format);
    out += " R " + detail::shifted_decimal(d.reference_resistance(), 0) + "\n";
    const int shift = unit_exponent(opt.unit);
    for (const Row& r : d.rows()) {
        double a = 0.0, b = 0.0;
        const Complex g = r.s11.complex();
        switch (opt.format) {
            case DataFormat::RI:
                a = g.real();
                b = g.imag();
                break;
            case DataFormat::MA:
                a = std::abs(g);
                b = std::arg(g) * 180.0 / std::numbers::pi;
                break;
            case DataFormat::DB: {
                const double mag = std::abs(g);
                a = mag > 0.0 ? std::max(20.0 * std::log10(mag), kDbWriteFloor) : kDbWriteFloor;
                b = std::arg(g) * 180.0 / std::numbers::pi;
                break;
            }
        }
        out += detail::shifted_decimal(r.frequency_hz, shift);
        out += ' ';
        out += detail::shifted_decimal(a, 0);
        out += ' ';
        out += detail::shifted_decimal(b, 0);
        out += '\n';
    }
    return out;
}

/// Linear interpolation of Γ in the rectangular plane; exact on grid points.
inline ReflectionCoefficient interpolate_gamma(const Dataset& d, const Frequency& f) {
    const auto& rows = d.rows();
    const double hz = f.hertz();
    if (hz < rows.front().frequency_hz || hz > rows.back().frequency_hz) {
        throw RangeError("frequency " + std::to_string(hz) + " Hz outside measured range [" +
                         std::to_string(rows.front().frequency_hz) + ", " + std::to_string(rows.back().frequency_hz) +
                         "] Hz");
    }
    auto it = std::lower_bound(rows.begin(), rows.end(), hz,
                               [](const Row& r, double x) { return r.frequency_hz < x; });
    if (it->frequency_hz == hz) return it->s11;
    const Row& hi = *it;
    const Row& lo = *(it - 1);
    const double t = (hz - lo.frequency_hz) / (hi.frequency_hz - lo.frequency_hz);
    return {lo.s11.re + t * (hi.s11.re - lo.s11.re), lo.s11.im + t * (hi.s11.im - lo.s11.im)};
}

}  // namespace leafmatch::touchstone
