#pragma once

// Complex RF primitives.
//
// Time-harmonic convention throughout the library is e^{+jωt}: an inductor
// has impedance +jωL and a capacitor -j/(ωC). All quantities are SI doubles.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "leafmatch/errors.hpp"

namespace leafmatch {

using Complex = std::complex<double>;

/// Vacuum permeability, fixed at the pre-2019 SI value 4π×10⁻⁷ H/m.
inline constexpr double kMu0 = 4.0 * std::numbers::pi * 1e-7;
inline constexpr double kSpeedOfLight = 299'792'458.0;
/// S11 floor used wherever -∞ dB has to be written out.
inline constexpr double kS11FloorDb = -200.0;

class Frequency {
public:
    explicit Frequency(double hertz) : hertz_(hertz) {
        if (!(hertz > 0.0) || !std::isfinite(hertz)) {
            throw DomainError("frequency must be positive and finite, got " + std::to_string(hertz));
        }
    }
    double hertz() const noexcept { return hertz_; }
    double omega() const noexcept { return 2.0 * std::numbers::pi * hertz_; }
    auto operator<=>(const Frequency&) const = default;

private:
    double hertz_;
};

struct Impedance {
    double resistance = 0.0;  // ohms
    double reactance = 0.0;   // ohms

    static Impedance from(Complex z) { return {z.real(), z.imag()}; }
    Complex complex() const { return {resistance, reactance}; }
    double magnitude() const { return std::hypot(resistance, reactance); }
    bool operator==(const Impedance&) const = default;
    friend Impedance operator+(Impedance a, Impedance b) {
        return {a.resistance + b.resistance, a.reactance + b.reactance};
    }
};

struct Admittance {
    double conductance = 0.0;  // siemens
    double susceptance = 0.0;  // siemens

    static Admittance from(Complex y) { return {y.real(), y.imag()}; }
    Complex complex() const { return {conductance, susceptance}; }
    double magnitude() const { return std::hypot(conductance, susceptance); }
    bool operator==(const Admittance&) const = default;
    friend Admittance operator+(Admittance a, Admittance b) {
        return {a.conductance + b.conductance, a.susceptance + b.susceptance};
    }
};

struct ReflectionCoefficient {
    double re = 0.0;
    double im = 0.0;

    static ReflectionCoefficient from(Complex g) { return {g.real(), g.imag()}; }
    Complex complex() const { return {re, im}; }
    double magnitude() const { return std::hypot(re, im); }
    bool operator==(const ReflectionCoefficient&) const = default;
};

/// Real, positive reference impedance (the matching target).
class ReferenceImpedance {
public:
    explicit ReferenceImpedance(double ohms = 50.0) : ohms_(ohms) {
        if (!(ohms > 0.0) || !std::isfinite(ohms)) {
            throw DomainError("reference impedance must be positive, got " + std::to_string(ohms));
        }
    }
    double ohms() const noexcept { return ohms_; }
    bool operator==(const ReferenceImpedance&) const = default;

private:
    double ohms_;
};

struct MaterialSpec {
    double resistivity = 0.0;            // ohm·m
    double relative_permeability = 1.0;  // dimensionless

    static MaterialSpec copper() { return {1.68e-8, 1.0}; }
};

/// Γ = (Z − Z₀)/(Z + Z₀).
inline ReflectionCoefficient reflection_coefficient(const Impedance& z, const ReferenceImpedance& z0) {
    if (!std::isfinite(z.resistance) || !std::isfinite(z.reactance)) {
        throw DomainError("impedance must be finite");
    }
    const Complex zc = z.complex();
    const Complex den = zc + z0.ohms();
    if (std::abs(den) < 1e-12) {
        throw DegenerateError("reflection coefficient undefined: Z + Z0 vanishes");
    }
    return ReflectionCoefficient::from((zc - z0.ohms()) / den);
}

/// Inverse of reflection_coefficient: Z = Z₀(1 + Γ)/(1 − Γ).
inline Impedance impedance_from_gamma(const ReflectionCoefficient& g, const ReferenceImpedance& z0) {
    const Complex gc = g.complex();
    const Complex den = 1.0 - gc;
    if (std::abs(den) < 1e-15) throw DegenerateError("Γ = 1 corresponds to an open circuit");
    return Impedance::from(z0.ohms() * (1.0 + gc) / den);
}

/// 20·log₁₀|Γ|, i.e. 10·log₁₀(Pr/Pi). A perfect match yields -infinity;
/// use s11_db_floored() for anything that gets serialized.
inline double s11_db(const ReflectionCoefficient& g) {
    const double mag = g.magnitude();
    if (mag == 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(mag);
}

inline double s11_db_floored(double db) { return db < kS11FloorDb ? kS11FloorDb : db; }

/// δ = √(ρ / (π f μ₀ μᵣ)), in meters.
inline double skin_depth(const MaterialSpec& m, const Frequency& f) {
    if (!(m.resistivity > 0.0) || !(m.relative_permeability > 0.0) || !std::isfinite(m.resistivity) ||
        !std::isfinite(m.relative_permeability)) {
        throw DomainError("skin depth requires positive resistivity and permeability");
    }
    return std::sqrt(m.resistivity / (std::numbers::pi * f.hertz() * kMu0 * m.relative_permeability));
}

inline Admittance impedance_to_admittance(const Impedance& z) {
    if (z.resistance == 0.0 && z.reactance == 0.0) {
        throw DegenerateError("cannot invert a zero impedance");
    }
    return Admittance::from(1.0 / z.complex());
}

inline Impedance admittance_to_impedance(const Admittance& y) {
    if (y.conductance == 0.0 && y.susceptance == 0.0) {
        throw DegenerateError("cannot invert a zero admittance");
    }
    return Impedance::from(1.0 / y.complex());
}

}  // namespace leafmatch
