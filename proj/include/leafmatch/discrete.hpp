#pragma once

// E-series catalogs, nearest-value snapping and exhaustive neighborhood search.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leafmatch/errors.hpp"
#include "leafmatch/ladder.hpp"

namespace leafmatch::discrete {

enum class ESeries { E12, E24, E48, E96 };

namespace detail {

// Mantissas in hundredths (1.00 .. 9.76).
inline constexpr std::array<int, 12> kE12 = {100, 120, 150, 180, 220, 270, 330, 390, 470, 560, 680, 820};
inline constexpr std::array<int, 24> kE24 = {100, 110, 120, 130, 150, 160, 180, 200, 220, 240, 270, 300,
                                             330, 360, 390, 430, 470, 510, 560, 620, 680, 750, 820, 910};
inline constexpr std::array<int, 48> kE48 = {100, 105, 110, 115, 121, 127, 133, 140, 147, 154, 162, 169,
                                             178, 187, 196, 205, 215, 226, 237, 249, 261, 274, 287, 301,
                                             316, 332, 348, 365, 383, 402, 422, 442, 464, 487, 511, 536,
                                             562, 590, 619, 649, 681, 715, 750, 787, 825, 866, 909, 953};
inline constexpr std::array<int, 96> kE96 = {
    100, 102, 105, 107, 110, 113, 115, 118, 121, 124, 127, 130, 133, 137, 140, 143, 147, 150, 154, 158,
    162, 165, 169, 174, 178, 182, 187, 191, 196, 200, 205, 210, 215, 221, 226, 232, 237, 243, 249, 255,
    261, 267, 274, 280, 287, 294, 301, 309, 316, 324, 332, 340, 348, 357, 365, 374, 383, 392, 402, 412,
    422, 432, 442, 453, 464, 475, 487, 499, 511, 523, 536, 549, 562, 576, 590, 604, 619, 634, 649, 665,
    681, 698, 715, 732, 750, 768, 787, 806, 825, 845, 866, 887, 909, 931, 953, 976};

/// 10^e as an exactly representable double (|e| ≤ 22).
inline double pow10_exact(int e) {
    double p = 1.0;
    for (int i = 0; i < std::abs(e); ++i) p *= 10.0;
    return p;
}

}  // namespace detail

inline std::span<const int> mantissas_centi(ESeries s) {
    switch (s) {
        case ESeries::E12: return detail::kE12;
        case ESeries::E24: return detail::kE24;
        case ESeries::E48: return detail::kE48;
        case ESeries::E96: return detail::kE96;
    }
    return detail::kE24;
}

/// Per-decade mantissas in [1, 10).
inline std::vector<double> base_values(ESeries s) {
    std::vector<double> out;
    for (int m : mantissas_centi(s)) out.push_back(m / 100.0);
    return out;
}

inline const char* series_name(ESeries s) {
    switch (s) {
        case ESeries::E12: return "E12";
        case ESeries::E24: return "E24";
        case ESeries::E48: return "E48";
        case ESeries::E96: return "E96";
    }
    return "E24";
}

/// Accepts "E24" or "e24".
inline ESeries parse_series(std::string_view text) {
    std::string name(text);
    if (!name.empty() && name[0] == 'e') name[0] = 'E';
    if (name == "E12") return ESeries::E12;
    if (name == "E24") return ESeries::E24;
    if (name == "E48") return ESeries::E48;
    if (name == "E96") return ESeries::E96;
    throw InputError("unknown E-series '" + std::string(text) + "' (expected E12, E24, E48 or E96)");
}

/// A catalog entry: mantissa index within its series and decade exponent,
/// value = mantissa × 10^decade.
class CatalogValue {
public:
    CatalogValue(ESeries series, int index, int decade) : series_(series), index_(index), decade_(decade) {
        const int n = static_cast<int>(mantissas_centi(series).size());
        if (index < 0 || index >= n) throw DomainError("catalog index out of range");
        if (decade < -20 || decade > 20) throw DomainError("catalog decade out of range");
    }

    ESeries series() const noexcept { return series_; }
    int index() const noexcept { return index_; }
    int decade() const noexcept { return decade_; }

    double mantissa() const { return mantissas_centi(series_)[static_cast<std::size_t>(index_)] / 100.0; }

    /// Correctly rounded: 6.8 nH comes out as the same double as 6.8e-9.
    double value() const {
        const int e = decade_ - 2;
        const double m = mantissas_centi(series_)[static_cast<std::size_t>(index_)];
        return e >= 0 ? m * detail::pow10_exact(e) : m / detail::pow10_exact(-e);
    }

    /// Moves `steps` catalog positions, crossing decades as needed.
    CatalogValue step(int steps) const {
        const int n = static_cast<int>(mantissas_centi(series_).size());
        const int flat = decade_ * n + index_ + steps;
        const int decade = flat >= 0 ? flat / n : -((-flat + n - 1) / n);
        return CatalogValue(series_, flat - decade * n, decade);
    }

    bool operator==(const CatalogValue&) const = default;

private:
    ESeries series_;
    int index_;
    int decade_;
};

/// Nearest catalog value by ratio; ties go to the smaller value.
inline CatalogValue snap(double value, ESeries s) {
    if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("snap requires a positive finite value");
    const int n = static_cast<int>(mantissas_centi(s).size());
    const int decade = static_cast<int>(std::floor(std::log10(value)));
    // Candidates straddle the decade estimate so log10 rounding cannot hide the answer.
    std::optional<CatalogValue> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int d = decade - 1; d <= decade + 1; ++d) {
        for (int i = 0; i < n; ++i) {
            const CatalogValue c(s, i, d);
            const double dist = std::fabs(std::log(c.value() / value));
            if (dist < best_dist || (dist == best_dist && best && c.value() < best->value())) {
                best = c;
                best_dist = dist;
            }
        }
    }
    return *best;
}

/// snap(value) plus k catalog steps on either side, ascending.
inline std::vector<CatalogValue> neighborhood(double value, ESeries s, int k) {
    if (k < 0) throw DomainError("neighborhood radius must be non-negative");
    const CatalogValue center = snap(value, s);
    std::vector<CatalogValue> out;
    out.reserve(static_cast<std::size_t>(2 * k + 1));
    for (int j = -k; j <= k; ++j) out.push_back(center.step(j));
    return out;
}

struct Candidate {
    MatchingNetwork network;
    double s11_db = 0.0;  // unfloored
};

struct ToleranceSpec {
    double percent = 5.0;
    int samples = 1000;
    std::uint64_t seed = 1;
};

struct ToleranceReport {
    double worst_s11_db = 0.0;
    double p95_s11_db = 0.0;
    double median_s11_db = 0.0;
    int samples = 0;
};

struct SearchReport {
    MatchingNetwork best_network;
    double best_s11_db = 0.0;
    std::size_t candidates_evaluated = 0;
    std::vector<Candidate> runner_ups;
    std::optional<ToleranceReport> tolerance;
};

struct SearchOptions {
    ESeries series = ESeries::E24;
    int k = 2;
    std::size_t top_k = 5;
    std::size_t candidate_cap = 1'000'000;
    std::optional<ToleranceSpec> tolerance;
};

namespace detail {

inline bool tuple_less(const MatchingNetwork& a, const MatchingNetwork& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.elements()[i].value != b.elements()[i].value) return a.elements()[i].value < b.elements()[i].value;
    }
    return false;
}

inline bool better(const Candidate& a, const Candidate& b) {
    if (a.s11_db != b.s11_db) return a.s11_db < b.s11_db;
    return tuple_less(a.network, b.network);
}

inline double s11_at(const MatchingNetwork& n, const LoadProfile& p, const ReferenceImpedance& z0,
                     const Frequency& f0) {
    return s11_db(reflection_coefficient(input_impedance(n, p, f0), z0));
}

/// Monte-Carlo spread of S11(f₀) with every value drawn uniformly within ±percent.
inline ToleranceReport tolerance_spread(const MatchingNetwork& n, const LoadProfile& p, const ReferenceImpedance& z0,
                                        const Frequency& f0, const ToleranceSpec& spec) {
    if (spec.samples < 1 || !(spec.percent >= 0.0)) throw DomainError("invalid tolerance specification");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> jitter(-spec.percent / 100.0, spec.percent / 100.0);
    std::vector<double> results;
    results.reserve(static_cast<std::size_t>(spec.samples));
    for (int i = 0; i < spec.samples; ++i) {
        std::vector<LadderElement> els = n.elements();
        for (auto& e : els) e.value *= 1.0 + jitter(rng);
        results.push_back(s11_at(MatchingNetwork(std::move(els)), p, z0, f0));
    }
    std::sort(results.begin(), results.end());
    auto quantile = [&](double q) {
        const auto idx = static_cast<std::size_t>(std::ceil(q * results.size())) - 1;
        return results[std::min(idx, results.size() - 1)];
    };
    return {results.back(), quantile(0.95), quantile(0.5), spec.samples};
}

}  // namespace detail

/// Exhaustive search over the Cartesian product of per-element neighborhoods,
/// minimizing S11(f₀). Kind, placement and Q of each element are kept.
inline SearchReport optimize_discrete(const MatchingNetwork& ideal, const LoadProfile& p, const ReferenceImpedance& z0,
                                      const Frequency& f0, const SearchOptions& opt = {}) {
    if (opt.k < 0) throw DomainError("neighborhood radius must be non-negative");
    const std::size_t width = static_cast<std::size_t>(2 * opt.k + 1);
    const double predicted = std::pow(static_cast<double>(width), static_cast<double>(ideal.size()));
    if (predicted > static_cast<double>(opt.candidate_cap)) {
        const auto count = predicted >= 1.8e19 ? std::numeric_limits<std::size_t>::max()
                                                : static_cast<std::size_t>(predicted);
        throw CapacityError("discrete search needs " + std::to_string(count) + " candidates, cap is " +
                                std::to_string(opt.candidate_cap),
                            count);
    }

    std::vector<std::vector<double>> choices;
    for (const auto& e : ideal.elements()) {
        std::vector<double> vals;
        for (const auto& c : neighborhood(e.value, opt.series, opt.k)) vals.push_back(c.value());
        choices.push_back(std::move(vals));
    }

    std::vector<Candidate> ranked;  // best first, at most top_k + 1
    const std::size_t keep = opt.top_k + 1;
    std::vector<std::size_t> digit(ideal.size(), 0);
    std::size_t evaluated = 0;
    for (;;) {
        std::vector<LadderElement> els = ideal.elements();
        for (std::size_t i = 0; i < els.size(); ++i) els[i].value = choices[i][digit[i]];
        Candidate c{MatchingNetwork(std::move(els)), 0.0};
        c.s11_db = detail::s11_at(c.network, p, z0, f0);
        ++evaluated;
        auto pos = std::lower_bound(ranked.begin(), ranked.end(), c, detail::better);
        if (static_cast<std::size_t>(pos - ranked.begin()) < keep) {
            ranked.insert(pos, std::move(c));
            if (ranked.size() > keep) ranked.pop_back();
        }
        // Odometer increment, last element fastest.
        std::size_t i = digit.size();
        while (i > 0) {
            --i;
            if (++digit[i] < width) break;
            digit[i] = 0;
            if (i == 0) { i = std::numeric_limits<std::size_t>::max(); break; }
        }
        if (digit.empty() || i == std::numeric_limits<std::size_t>::max()) break;
    }

    SearchReport report;
    report.best_network = ranked.front().network;
    report.best_s11_db = ranked.front().s11_db;
    report.candidates_evaluated = evaluated;
    report.runner_ups.assign(ranked.begin() + 1, ranked.end());
    if (opt.tolerance) {
        report.tolerance = detail::tolerance_spread(report.best_network, p, z0, f0, *opt.tolerance);
    }
    return report;
}

/// Every element moved to its nearest catalog value.
inline MatchingNetwork snap_network(const MatchingNetwork& n, ESeries s) {
    std::vector<LadderElement> els = n.elements();
    for (auto& e : els) e.value = snap(e.value, s).value();
    return MatchingNetwork(std::move(els));
}

}  // namespace leafmatch::discrete
