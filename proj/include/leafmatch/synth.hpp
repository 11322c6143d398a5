#pragma once

// Closed-form L-network synthesis and Smith-chart trajectories.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "leafmatch/errors.hpp"
#include "leafmatch/ladder.hpp"
#include "leafmatch/rfcore.hpp"

namespace leafmatch {

struct MatchSolution {
    MatchingNetwork network;
    ReflectionCoefficient achieved_gamma;
    double achieved_s11_db = 0.0;  // unfloored; may be -inf
    std::string topology_label;
};

struct SmithArc {
    std::vector<ReflectionCoefficient> points;
    int element_index = 0;
};

namespace detail {

/// Element realizing a series reactance x at angular frequency w.
inline LadderElement series_reactance(double x, double w) {
    if (x > 0) return {ComponentKind::Inductor, Placement::Series, x / w, std::nullopt};
    return {ComponentKind::Capacitor, Placement::Series, 1.0 / (w * -x), std::nullopt};
}

/// Element realizing a shunt susceptance b at angular frequency w.
inline LadderElement shunt_susceptance(double b, double w) {
    if (b > 0) return {ComponentKind::Capacitor, Placement::Shunt, b / w, std::nullopt};
    return {ComponentKind::Inductor, Placement::Shunt, 1.0 / (w * -b), std::nullopt};
}

inline std::string topology_label(const MatchingNetwork& n) {
    if (n.empty()) return "none";
    std::string out;
    for (const auto& e : n.elements()) {
        if (!out.empty()) out += " then ";
        out += e.label();
    }
    return out;
}

inline bool same_network_shape(const MatchingNetwork& a, const MatchingNetwork& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a.elements()[i];
        const auto& y = b.elements()[i];
        if (x.kind != y.kind || x.placement != y.placement) return false;
        if (std::fabs(x.value - y.value) > 1e-12 * std::max(x.value, y.value)) return false;
    }
    return true;
}

inline void sort_solutions(std::vector<MatchSolution>& sols) {
    std::stable_sort(sols.begin(), sols.end(), [](const MatchSolution& a, const MatchSolution& b) {
        if (a.network.size() != b.network.size()) return a.network.size() < b.network.size();
        const double ga = a.achieved_gamma.magnitude();
        const double gb = b.achieved_gamma.magnitude();
        if (ga != gb) return ga < gb;
        return a.topology_label < b.topology_label;
    });
}

}  // namespace detail

/// Relative tolerance used to treat R_L as equal to Z₀ and to drop
/// vanishing reactances from a solution.
inline constexpr double kMatchTolerance = 1e-9;

/// All L-network matches of `load` to `z0` at `f0`.
///
/// Both topologies are tried (series element next to the load followed by a
/// shunt element, and the reverse); each admits two sign choices. A topology
/// is feasible when the first element can bring the real part onto the Z₀
/// circle: series-first needs R_L ≤ Z₀, shunt-first needs G_L ≤ 1/Z₀.
/// Element kinds follow from the signs of the required reactance or
/// susceptance. A reactance below tolerance is dropped, which turns that
/// solution into a single-element network.
inline std::vector<MatchSolution> l_match_solutions(const Impedance& load, const ReferenceImpedance& z0,
                                                    const Frequency& f0) {
    const double r = load.resistance;
    const double x = load.reactance;
    const double z0o = z0.ohms();
    if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(x)) {
        throw DomainError("L-match needs a load with positive resistance (purely reactive loads cannot be matched)");
    }
    const double w = f0.omega();
    const double tol_x = kMatchTolerance * z0o;

    std::vector<MatchingNetwork> candidates;
    if (std::fabs(r - z0o) <= kMatchTolerance * z0o) {
        if (std::fabs(x) <= tol_x) {
            candidates.emplace_back();
        } else {
            candidates.push_back(MatchingNetwork({detail::series_reactance(-x, w)}));
        }
    } else {
        if (r < z0o) {
            const double xt = std::sqrt(r * (z0o - r));
            for (double sign : {+1.0, -1.0}) {
                const double total = sign * xt;
                const double xs = total - x;
                const double b = total / (r * z0o);
                std::vector<LadderElement> els;
                if (std::fabs(xs) > tol_x) els.push_back(detail::series_reactance(xs, w));
                els.push_back(detail::shunt_susceptance(b, w));
                candidates.emplace_back(std::move(els));
            }
        }
        const double mag2 = r * r + x * x;
        const double g = r / mag2;
        const double bl = -x / mag2;
        const double disc = g / z0o - g * g;
        if (disc >= 0.0) {
            const double bt = std::sqrt(disc);
            for (double sign : {+1.0, -1.0}) {
                const double total = sign * bt;
                const double bp = total - bl;
                const double xs = total * z0o / g;
                std::vector<LadderElement> els;
                if (std::fabs(bp) > kMatchTolerance / z0o) els.push_back(detail::shunt_susceptance(bp, w));
                if (std::fabs(xs) > tol_x) els.push_back(detail::series_reactance(xs, w));
                if (els.empty()) continue;
                candidates.emplace_back(std::move(els));
            }
        }
    }

    std::vector<MatchSolution> out;
    for (auto& net : candidates) {
        bool duplicate = false;
        for (const auto& s : out) duplicate = duplicate || detail::same_network_shape(s.network, net);
        if (duplicate) continue;
        const auto g = reflection_coefficient(input_impedance(net, load, f0), z0);
        out.push_back({net, g, s11_db(g), detail::topology_label(net)});
    }
    if (out.empty()) throw ComputeError("L-match produced no solution for a load with positive resistance");
    detail::sort_solutions(out);
    return out;
}

/// Trajectory of Γ while one element grows from nothing to its full value.
///
/// The element's contribution is scaled linearly: impedance for series
/// placement, admittance for shunt. That is linear in component value for
/// series L/R and shunt C, and keeps series C and shunt L finite along the
/// path (their zero-value limits are open and short circuits).
inline SmithArc smith_arc(const Impedance& start, const LadderElement& e, const Frequency& f0, int steps,
                          const ReferenceImpedance& z0, int element_index = 0) {
    if (steps < 2) throw DomainError("smith arc needs at least 2 steps");
    if (!(e.value >= 0.0) || !std::isfinite(e.value)) throw DomainError("element value must be non-negative");
    SmithArc arc;
    arc.element_index = element_index;
    arc.points.reserve(static_cast<std::size_t>(steps));
    if (e.value == 0.0) {
        const bool vanishing = (e.placement == Placement::Series) ? e.kind != ComponentKind::Capacitor
                                                                  : e.kind == ComponentKind::Capacitor;
        if (!vanishing) throw DegenerateError("zero-value element is an open or short circuit");
        arc.points.assign(static_cast<std::size_t>(steps), reflection_coefficient(start, z0));
        return arc;
    }
    const Impedance ze = element_impedance(e, f0);
    if (e.placement == Placement::Series) {
        for (int i = 0; i < steps; ++i) {
            const double t = (i == steps - 1) ? 1.0 : static_cast<double>(i) / (steps - 1);
            const Impedance part{t * ze.resistance, t * ze.reactance};
            arc.points.push_back(reflection_coefficient(attach(start, Placement::Series, part), z0));
        }
    } else {
        const Admittance y0 = impedance_to_admittance(start);
        const Admittance ye = impedance_to_admittance(ze);
        for (int i = 0; i < steps; ++i) {
            if (i == 0) {
                arc.points.push_back(reflection_coefficient(start, z0));
                continue;
            }
            if (i == steps - 1) {
                arc.points.push_back(reflection_coefficient(attach(start, Placement::Shunt, ze), z0));
                continue;
            }
            const double t = static_cast<double>(i) / (steps - 1);
            const Admittance y{y0.conductance + t * ye.conductance, y0.susceptance + t * ye.susceptance};
            arc.points.push_back(reflection_coefficient(admittance_to_impedance(y), z0));
        }
    }
    return arc;
}

/// Reads the load at f₀, synthesizes every L-match and re-evaluates each
/// network over the full profile.
inline std::vector<MatchSolution> match_and_verify(const LoadProfile& profile, const ReferenceImpedance& z0,
                                                   const Frequency& f0) {
    const Impedance load = load_impedance(profile, f0);
    auto sols = l_match_solutions(load, z0, f0);
    for (auto& s : sols) {
        s.achieved_gamma = reflection_coefficient(input_impedance(s.network, profile, f0), z0);
        s.achieved_s11_db = s11_db(s.achieved_gamma);
    }
    detail::sort_solutions(sols);
    return sols;
}

}  // namespace leafmatch
