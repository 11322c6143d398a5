#pragma once

// Far-field link budget and storage-capacitor charging time.
//
// Received power follows Friis with a receiver mismatch factor:
//   P_r = P_t · g_t · g_r · (λ / 4πd)² · (1 − |Γ|²)
// Charging uses a constant-power energy balance:
//   t = C · (V_th² − V_0²) / (2 · η · P_r)
// These reproduce trends (inverse-square distance law, linear scaling in C
// and 1/η), not the absolute times of any particular rectifier.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leafmatch/errors.hpp"
#include "leafmatch/rfcore.hpp"

namespace leafmatch::linksim {

/// Tabulated rectifier efficiency η(P_in), linearly interpolated and held
/// constant beyond the table ends.
class EfficiencyCurve {
public:
    EfficiencyCurve() = default;
    explicit EfficiencyCurve(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
        if (points_.empty()) throw DomainError("efficiency curve needs at least one point");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto [p, eta] = points_[i];
            if (!(p >= 0.0) || !(eta > 0.0 && eta <= 1.0)) throw DomainError("efficiency curve point out of range");
            if (i > 0 && !(p > points_[i - 1].first)) throw DomainError("efficiency curve powers must increase");
        }
    }

    double at(double power_w) const {
        if (power_w <= points_.front().first) return points_.front().second;
        if (power_w >= points_.back().first) return points_.back().second;
        auto hi = std::upper_bound(points_.begin(), points_.end(), power_w,
                                   [](double x, const auto& pt) { return x < pt.first; });
        auto lo = hi - 1;
        const double t = (power_w - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    }

    const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }

private:
    std::vector<std::pair<double, double>> points_;
};

struct LinkBudget {
    double tx_power_w = 1.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
    double frequency_hz = 915e6;
    ReflectionCoefficient mismatch_gamma{};  // at the receiver port
    double rectifier_efficiency = 0.5;
    std::optional<EfficiencyCurve> efficiency_curve;  // overrides the constant when set

    void validate() const {
        if (!(tx_power_w > 0.0) || !std::isfinite(tx_power_w)) throw DomainError("transmit power must be positive");
        if (!std::isfinite(tx_gain_dbi) || !std::isfinite(rx_gain_dbi)) throw DomainError("antenna gains must be finite");
        (void)Frequency(frequency_hz);
        if (!(rectifier_efficiency > 0.0 && rectifier_efficiency <= 1.0)) {
            throw DomainError("rectifier efficiency must lie in (0, 1]");
        }
        if (mismatch_gamma.magnitude() > 1.0 + 1e-12) throw DomainError("|mismatch gamma| must not exceed 1");
    }

    double wavelength() const { return kSpeedOfLight / frequency_hz; }
    double efficiency_at(double power_w) const {
        return efficiency_curve ? efficiency_curve->at(power_w) : rectifier_efficiency;
    }
};

struct ChargeTank {
    double capacitance_f = 100e-6;
    double threshold_v = 4.0;
    double initial_v = 0.0;

    void validate() const {
        if (!(capacitance_f > 0.0) || !std::isfinite(capacitance_f)) throw DomainError("capacitance must be positive");
        if (!(initial_v >= 0.0) || !(initial_v < threshold_v) || !std::isfinite(threshold_v)) {
            throw DomainError("need 0 <= initial voltage < threshold voltage");
        }
    }
};

struct SweepRow {
    double distance_m = 0.0;
    double received_w = 0.0;
    double charge_s = 0.0;
};

struct DistanceSweepResult {
    std::vector<SweepRow> rows;
};

inline double received_power(const LinkBudget& lb, double distance_m) {
    lb.validate();
    if (!(distance_m > 0.0) || !std::isfinite(distance_m)) throw DomainError("distance must be positive");
    const double lambda = lb.wavelength();
    if (distance_m < lambda) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "distance %.4g m is inside the near field (lambda = %.4g m)", distance_m, lambda);
        throw NearFieldError(buf);
    }
    const double gt = std::pow(10.0, lb.tx_gain_dbi / 10.0);
    const double gr = std::pow(10.0, lb.rx_gain_dbi / 10.0);
    const double path = lambda / (4.0 * std::numbers::pi * distance_m);
    const double g = lb.mismatch_gamma.magnitude();
    const double mismatch = std::max(0.0, 1.0 - g * g);
    return lb.tx_power_w * gt * gr * path * path * mismatch;
}

/// Charging time for a given received power.
inline double charge_time_for_power(const LinkBudget& lb, const ChargeTank& tank, double received_w) {
    tank.validate();
    if (!(received_w > 0.0)) throw ComputeError("received power is zero; the tank never charges");
    const double energy = tank.capacitance_f * (tank.threshold_v * tank.threshold_v - tank.initial_v * tank.initial_v);
    return energy / (2.0 * lb.efficiency_at(received_w) * received_w);
}

inline double charge_time(const LinkBudget& lb, const ChargeTank& tank, double distance_m) {
    return charge_time_for_power(lb, tank, received_power(lb, distance_m));
}

/// Number of rows d_start + i·step ≤ d_stop (with 1e-9 relative slack on the last step).
inline std::size_t sweep_row_count(double d_start, double d_stop, double step) {
    return static_cast<std::size_t>(std::floor((d_stop - d_start) / step + 1e-9)) + 1;
}

inline DistanceSweepResult distance_sweep(const LinkBudget& lb, const ChargeTank& tank, double d_start, double d_stop,
                                          double step) {
    if (!(d_start > 0.0) || !(d_stop > d_start) || !std::isfinite(d_stop)) {
        throw DomainError("distance sweep requires 0 < start < stop");
    }
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("distance step must be positive");
    const std::size_t n = sweep_row_count(d_start, d_stop, step);
    if (n > 1'000'000) throw DomainError("distance sweep would produce more than 10^6 rows");
    DistanceSweepResult out;
    out.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = d_start + static_cast<double>(i) * step;
        const double p = received_power(lb, d);
        out.rows.push_back({d, p, charge_time_for_power(lb, tank, p)});
    }
    return out;
}

/// CSV with header `distance_m,received_w,charge_s`, 6 significant digits, LF endings.
inline std::string to_csv(const DistanceSweepResult& r) {
    std::string out = "distance_m,received_w,charge_s\n";
    char buf[128];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g\n", row.distance_m, row.received_w, row.charge_s);
        out += buf;
    }
    return out;
}

}  // namespace leafmatch::linksim
