#pragma once

// Lumped-element matching networks and their evaluation.
//
// Element order runs from the load toward the source: elements()[0] sits
// directly across/in series with the load, the last element faces the
// generator. Input impedance is computed by folding in that order:
//
//   source ── e[n-1] ── ... ── e[1] ── e[0] ── load
//
// A series element adds its impedance, a shunt element adds its admittance.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "leafmatch/errors.hpp"
#include "leafmatch/rfcore.hpp"
#include "leafmatch/touchstone.hpp"

namespace leafmatch {

enum class ComponentKind { Inductor, Capacitor, Resistor };
enum class Placement { Series, Shunt };

inline const char* kind_name(ComponentKind k) {
    switch (k) {
        case ComponentKind::Inductor: return "inductor";
        case ComponentKind::Capacitor: return "capacitor";
        case ComponentKind::Resistor: return "resistor";
    }
    return "?";
}

inline const char* kind_symbol(ComponentKind k) {
    switch (k) {
        case ComponentKind::Inductor: return "L";
        case ComponentKind::Capacitor: return "C";
        case ComponentKind::Resistor: return "R";
    }
    return "?";
}

inline const char* placement_name(Placement p) { return p == Placement::Series ? "series" : "shunt"; }

/// SI unit symbol of a component's value.
inline const char* value_unit(ComponentKind k) {
    switch (k) {
        case ComponentKind::Inductor: return "H";
        case ComponentKind::Capacitor: return "F";
        case ComponentKind::Resistor: return "ohm";
    }
    return "";
}

struct LadderElement {
    ComponentKind kind = ComponentKind::Inductor;
    Placement placement = Placement::Series;
    double value = 0.0;                     // H, F or Ω
    std::optional<double> quality_factor;   // absent = ideal

    bool operator==(const LadderElement&) const = default;

    /// Throws DomainError unless value > 0 and any Q is > 0.
    void validate() const {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw DomainError(std::string(kind_name(kind)) + " value must be positive and finite");
        }
        if (quality_factor && (!(*quality_factor > 0.0) || !std::isfinite(*quality_factor))) {
            throw DomainError("quality factor must be positive");
        }
    }

    std::string label() const { return std::string(placement_name(placement)) + "-" + kind_symbol(kind); }
};

class MatchingNetwork {
public:
    static constexpr std::size_t kMaxElements = 8;

    MatchingNetwork() = default;
    explicit MatchingNetwork(std::vector<LadderElement> elements) : elements_(std::move(elements)) {
        if (elements_.size() > kMaxElements) {
            throw DomainError("matching network limited to " + std::to_string(kMaxElements) + " elements");
        }
        for (const auto& e : elements_) e.validate();
    }

    const std::vector<LadderElement>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }

    MatchingNetwork with(const LadderElement& e) const {
        auto next = elements_;
        next.push_back(e);
        return MatchingNetwork(std::move(next));
    }

    bool operator==(const MatchingNetwork&) const = default;

private:
    std::vector<LadderElement> elements_;
};

struct ConstantLoad {
    Impedance impedance;
};

/// Series RLC: Z = r + j(ωL − 1/(ωC)).
struct ResonatorLoad {
    double r_series = 0.0;
    double inductance = 0.0;
    double capacitance = 0.0;
};

struct MeasuredLoad {
    std::shared_ptr<const touchstone::Dataset> dataset;
};

class LoadProfile {
public:
    using Variant = std::variant<ConstantLoad, ResonatorLoad, MeasuredLoad>;

    static LoadProfile constant(Impedance z) {
        if (!std::isfinite(z.resistance) || !std::isfinite(z.reactance)) throw DomainError("load must be finite");
        return LoadProfile(ConstantLoad{z});
    }
    static LoadProfile resonator(double r_series, double inductance, double capacitance) {
        if (!(r_series > 0.0) || !(inductance > 0.0) || !(capacitance > 0.0) || !std::isfinite(r_series) ||
            !std::isfinite(inductance) || !std::isfinite(capacitance)) {
            throw DomainError("resonator parameters must be positive");
        }
        return LoadProfile(ResonatorLoad{r_series, inductance, capacitance});
    }
    static LoadProfile measured(touchstone::Dataset dataset) {
        return LoadProfile(MeasuredLoad{std::make_shared<const touchstone::Dataset>(std::move(dataset))});
    }

    /// Stand-in antenna used across tests and the CLI defaults: r = 10 Ω,
    /// L = 18 nH, C = 1.2 pF, about -2 dB unmatched at 915 MHz.
    static LoadProfile resonator_fixture() { return resonator(10.0, 18e-9, 1.2e-12); }

    const Variant& variant() const noexcept { return value_; }

private:
    explicit LoadProfile(Variant v) : value_(std::move(v)) {}
    Variant value_;
};

struct SweepPoint {
    Frequency frequency;
    ReflectionCoefficient gamma;
    double s11_db;  // floored at kS11FloorDb
};

struct SweepResult {
    std::vector<SweepPoint> points;
};

inline Impedance element_impedance(const LadderElement& e, const Frequency& f) {
    const double w = f.omega();
    switch (e.kind) {
        case ComponentKind::Resistor: return {e.value, 0.0};
        case ComponentKind::Inductor: {
            const double x = w * e.value;
            return {e.quality_factor ? std::fabs(x) / *e.quality_factor : 0.0, x};
        }
        case ComponentKind::Capacitor: {
            const double x = -1.0 / (w * e.value);
            return {e.quality_factor ? std::fabs(x) / *e.quality_factor : 0.0, x};
        }
    }
    return {};
}

inline Impedance load_impedance(const LoadProfile& p, const Frequency& f) {
    return std::visit(
        [&](const auto& load) -> Impedance {
            using T = std::decay_t<decltype(load)>;
            if constexpr (std::is_same_v<T, ConstantLoad>) {
                return load.impedance;
            } else if constexpr (std::is_same_v<T, ResonatorLoad>) {
                const double w = f.omega();
                return {load.r_series, w * load.inductance - 1.0 / (w * load.capacitance)};
            } else {
                const auto g = touchstone::interpolate_gamma(*load.dataset, f);
                return impedance_from_gamma(g, ReferenceImpedance(load.dataset->reference_resistance()));
            }
        },
        p.variant());
}

/// Impedance seen after adding one element on the source side of `z`.
/// Shared by the network fold and the Smith arc so both produce identical bits.
inline Impedance attach(const Impedance& z, Placement placement, const Impedance& ze) {
    if (placement == Placement::Series) return z + ze;
    try {
        return admittance_to_impedance(impedance_to_admittance(z) + impedance_to_admittance(ze));
    } catch (const DegenerateError& err) {
        throw DegenerateError(std::string("degenerate network: ") + err.what());
    }
}

inline Impedance input_impedance(const MatchingNetwork& n, const Impedance& load, const Frequency& f) {
    Impedance z = load;
    for (const auto& e : n.elements()) z = attach(z, e.placement, element_impedance(e, f));
    return z;
}

inline Impedance input_impedance(const MatchingNetwork& n, const LoadProfile& p, const Frequency& f) {
    return input_impedance(n, load_impedance(p, f), f);
}

/// Γ and floored S11 of a network over a load profile at one frequency.
inline SweepPoint evaluate_point(const MatchingNetwork& n, const LoadProfile& p, const ReferenceImpedance& z0,
                                 const Frequency& f) {
    const auto g = reflection_coefficient(input_impedance(n, p, f), z0);
    return {f, g, s11_db_floored(s11_db(g))};
}

/// Linear grid from f_start to f_stop inclusive, n_points ≥ 2.
inline SweepResult sweep_s11(const MatchingNetwork& n, const LoadProfile& p, const ReferenceImpedance& z0,
                             const Frequency& f_start, const Frequency& f_stop, int n_points) {
    if (!(f_start < f_stop)) throw DomainError("sweep requires f_start < f_stop");
    if (n_points < 2) throw DomainError("sweep requires at least 2 points");
    SweepResult out;
    out.points.reserve(static_cast<std::size_t>(n_points));
    const double a = f_start.hertz();
    const double b = f_stop.hertz();
    for (int i = 0; i < n_points; ++i) {
        double hz = a + (b - a) * (static_cast<double>(i) / (n_points - 1));
        if (i == n_points - 1) hz = b;
        out.points.push_back(evaluate_point(n, p, z0, Frequency(hz)));
    }
    return out;
}

struct Dip {
    Frequency frequency;
    double s11_db;
};

/// Grid point with the lowest S11; ties go to the lower frequency.
inline Dip find_dip(const SweepResult& s) {
    if (s.points.empty()) throw DomainError("cannot find a dip in an empty sweep");
    const SweepPoint* best = &s.points.front();
    for (const auto& p : s.points) {
        if (p.s11_db < best->s11_db) best = &p;
    }
    return {best->frequency, best->s11_db};
}

}  // namespace leafmatch
