#pragma once

// JSON documents shared by the CLI and the session service.
//
// Network:   {"elements": [{"kind": "inductor", "placement": "series",
//                           "value": 6.8e-9, "q": 40}, ...]}
//            element 0 is nearest the load; values are SI; "q" optional.
// Load:      {"type": "constant", "resistance": 25, "reactance": -10}
//            {"type": "resonator", "r_series": 10, "inductance": 1.8e-8, "capacitance": 1.2e-12}
//            {"type": "s1p", "content": "<touchstone text>"}
// S11 values are written floored at -200 dB; Γ as {"re", "im"}.
//
// Numeric value fields also accept unit-suffixed strings ("6.8nH").

#include <string>
#include <string_view>

#include "json.hpp"
#include "leafmatch/discrete.hpp"
#include "leafmatch/ladder.hpp"
#include "leafmatch/leafgeom.hpp"
#include "leafmatch/linksim.hpp"
#include "leafmatch/rfcore.hpp"
#include "leafmatch/synth.hpp"
#include "leafmatch/touchstone.hpp"
#include "leafmatch/units.hpp"

namespace leafmatch::json_io {

using json = nlohmann::json;

namespace detail {

inline const json& require(const json& j, const char* key) {
    if (!j.is_object()) throw InputError("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
    return *it;
}

/// A number, or a string in the unit-suffix grammar for `unit`.
inline double quantity(const json& v, std::string_view unit, const char* field) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return units::parse_quantity(v.get<std::string>(), unit);
    throw InputError(std::string("field '") + field + "' must be a number or a unit string");
}

inline double number(const json& j, const char* key, std::string_view unit = {}) {
    return quantity(require(j, key), unit, key);
}

inline double number_or(const json& j, const char* key, double fallback, std::string_view unit = {}) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return quantity(j.at(key), unit, key);
}

}  // namespace detail

inline json gamma_to_json(const ReflectionCoefficient& g) { return {{"re", g.re}, {"im", g.im}}; }
inline json impedance_to_json(const Impedance& z) { return {{"resistance", z.resistance}, {"reactance", z.reactance}}; }

inline ComponentKind parse_kind(std::string_view s) {
    if (s == "inductor" || s == "L") return ComponentKind::Inductor;
    if (s == "capacitor" || s == "C") return ComponentKind::Capacitor;
    if (s == "resistor" || s == "R") return ComponentKind::Resistor;
    throw InputError("unknown component kind '" + std::string(s) + "'");
}

inline Placement parse_placement(std::string_view s) {
    if (s == "series") return Placement::Series;
    if (s == "shunt") return Placement::Shunt;
    throw InputError("unknown placement '" + std::string(s) + "' (expected series or shunt)");
}

inline json element_to_json(const LadderElement& e) {
    json j = {{"kind", kind_name(e.kind)}, {"placement", placement_name(e.placement)}, {"value", e.value}};
    if (e.quality_factor) j["q"] = *e.quality_factor;
    return j;
}

inline LadderElement element_from_json(const json& j) {
    const json& kind = detail::require(j, "kind");
    const json& placement = detail::require(j, "placement");
    if (!kind.is_string() || !placement.is_string()) throw InputError("kind and placement must be strings");
    LadderElement e;
    e.kind = parse_kind(kind.get<std::string>());
    e.placement = parse_placement(placement.get<std::string>());
    e.value = detail::number(j, "value", value_unit(e.kind));
    if (j.contains("q") && !j.at("q").is_null()) e.quality_factor = detail::quantity(j.at("q"), "", "q");
    e.validate();
    return e;
}

inline json network_to_json(const MatchingNetwork& n) {
    json arr = json::array();
    for (const auto& e : n.elements()) arr.push_back(element_to_json(e));
    return {{"elements", arr}};
}

inline MatchingNetwork network_from_json(const json& j) {
    const json& arr = detail::require(j, "elements");
    if (!arr.is_array()) throw InputError("'elements' must be an array");
    std::vector<LadderElement> els;
    for (const auto& e : arr) els.push_back(element_from_json(e));
    return MatchingNetwork(std::move(els));
}

inline json solution_to_json(const MatchSolution& s) {
    return {{"network", network_to_json(s.network)},
            {"topology", s.topology_label},
            {"gamma", gamma_to_json(s.achieved_gamma)},
            {"s11_db", s11_db_floored(s.achieved_s11_db)}};
}

inline json solutions_to_json(const std::vector<MatchSolution>& sols) {
    json arr = json::array();
    for (const auto& s : sols) arr.push_back(solution_to_json(s));
    return arr;
}

inline json sweep_to_json(const SweepResult& s) {
    json pts = json::array();
    for (const auto& p : s.points) {
        pts.push_back({{"frequency_hz", p.frequency.hertz()}, {"gamma", gamma_to_json(p.gamma)}, {"s11_db", p.s11_db}});
    }
    json out = {{"points", pts}};
    if (!s.points.empty()) {
        const Dip d = find_dip(s);
        out["dip"] = {{"frequency_hz", d.frequency.hertz()}, {"s11_db", d.s11_db}};
    }
    return out;
}

inline json search_report_to_json(const discrete::SearchReport& r) {
    json runners = json::array();
    for (const auto& c : r.runner_ups) {
        runners.push_back({{"network", network_to_json(c.network)}, {"s11_db", s11_db_floored(c.s11_db)}});
    }
    json out = {{"best", {{"network", network_to_json(r.best_network)}, {"s11_db", s11_db_floored(r.best_s11_db)}}},
                {"candidates_evaluated", r.candidates_evaluated},
                {"runner_ups", runners}};
    if (r.tolerance) {
        out["tolerance"] = {{"worst_s11_db", s11_db_floored(r.tolerance->worst_s11_db)},
                            {"p95_s11_db", s11_db_floored(r.tolerance->p95_s11_db)},
                            {"median_s11_db", s11_db_floored(r.tolerance->median_s11_db)},
                            {"samples", r.tolerance->samples}};
    }
    return out;
}

inline LoadProfile load_from_json(const json& j) {
    const json& type = detail::require(j, "type");
    if (!type.is_string()) throw InputError("load 'type' must be a string");
    const std::string t = type.get<std::string>();
    if (t == "constant") {
        return LoadProfile::constant({detail::number(j, "resistance", "ohm"), detail::number(j, "reactance", "ohm")});
    }
    if (t == "resonator") {
        return LoadProfile::resonator(detail::number(j, "r_series", "ohm"), detail::number(j, "inductance", "H"),
                                      detail::number(j, "capacitance", "F"));
    }
    if (t == "s1p") {
        const json& content = detail::require(j, "content");
        if (!content.is_string()) throw InputError("s1p 'content' must be a string");
        return LoadProfile::measured(touchstone::parse_touchstone(content.get<std::string>()));
    }
    throw InputError("unknown load type '" + t + "' (expected constant, resonator or s1p)");
}

inline json leaf_profile_to_json(const leafgeom::LeafProfile& p) {
    json samples = json::array();
    for (const auto& s : p.tip_samples) samples.push_back({s.x, s.y});
    return {{"semi_major_mm", p.semi_major},
            {"semi_minor_mm", p.semi_minor},
            {"tip_samples_mm", samples},
            {"rotation_deg", p.rotation_deg},
            {"mirrored_pair", p.mirrored_pair},
            {"feed_gap_mm", p.feed_gap},
            {"points_per_segment", p.points_per_segment},
            {"envelope_mm", {p.envelope.width, p.envelope.height}}};
}

inline leafgeom::LeafProfile leaf_profile_from_json(const json& j) {
    leafgeom::LeafProfile p;
    p.semi_major = detail::number(j, "semi_major_mm");
    p.semi_minor = detail::number(j, "semi_minor_mm");
    const json& samples = detail::require(j, "tip_samples_mm");
    if (!samples.is_array()) throw InputError("'tip_samples_mm' must be an array of [x, y] pairs");
    for (const auto& s : samples) {
        if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
            throw InputError("each tip sample must be an [x, y] pair of numbers");
        }
        p.tip_samples.push_back({s[0].get<double>(), s[1].get<double>()});
    }
    p.rotation_deg = detail::number_or(j, "rotation_deg", p.rotation_deg);
    if (j.contains("mirrored_pair")) {
        if (!j.at("mirrored_pair").is_boolean()) throw InputError("'mirrored_pair' must be a boolean");
        p.mirrored_pair = j.at("mirrored_pair").get<bool>();
    }
    p.feed_gap = detail::number_or(j, "feed_gap_mm", p.feed_gap);
    if (j.contains("points_per_segment")) {
        if (!j.at("points_per_segment").is_number_integer()) throw InputError("'points_per_segment' must be an integer");
        p.points_per_segment = j.at("points_per_segment").get<int>();
    }
    if (j.contains("envelope_mm")) {
        const json& env = j.at("envelope_mm");
        if (!env.is_array() || env.size() != 2 || !env[0].is_number() || !env[1].is_number()) {
            throw InputError("'envelope_mm' must be [width, height]");
        }
        p.envelope = {env[0].get<double>(), env[1].get<double>()};
    }
    return p;
}

inline json leaf_metrics_to_json(const leafgeom::OutlineMetrics& m) {
    return {{"area_mm2", m.area}, {"perimeter_mm", m.perimeter}, {"bbox_mm", {m.width, m.height}}};
}

/// Budget document; "tank" is optional inside it.
///   {"tx_power_w": 1, "tx_gain_dbi": 6, "rx_gain_dbi": 2, "frequency_hz": 915e6,
///    "mismatch_gamma": {"re": 0.1, "im": 0}, "rectifier_efficiency": 0.5,
///    "efficiency_curve": [[p_w, eta], ...],
///    "tank": {"capacitance_f": 1e-4, "threshold_v": 4, "initial_v": 0}}
inline linksim::LinkBudget link_budget_from_json(const json& j) {
    linksim::LinkBudget lb;
    lb.tx_power_w = detail::number_or(j, "tx_power_w", lb.tx_power_w);
    lb.tx_gain_dbi = detail::number_or(j, "tx_gain_dbi", lb.tx_gain_dbi);
    lb.rx_gain_dbi = detail::number_or(j, "rx_gain_dbi", lb.rx_gain_dbi);
    lb.frequency_hz = detail::number_or(j, "frequency_hz", lb.frequency_hz, "Hz");
    lb.rectifier_efficiency = detail::number_or(j, "rectifier_efficiency", lb.rectifier_efficiency);
    if (j.contains("mismatch_gamma")) {
        const json& g = j.at("mismatch_gamma");
        lb.mismatch_gamma = {detail::number(g, "re"), detail::number(g, "im")};
    }
    if (j.contains("efficiency_curve")) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& pt : j.at("efficiency_curve")) {
            if (!pt.is_array() || pt.size() != 2) throw InputError("efficiency curve points are [power_w, eta]");
            pts.emplace_back(pt[0].get<double>(), pt[1].get<double>());
        }
        lb.efficiency_curve = linksim::EfficiencyCurve(std::move(pts));
    }
    lb.validate();
    return lb;
}

inline linksim::ChargeTank charge_tank_from_json(const json& j) {
    linksim::ChargeTank t;
    t.capacitance_f = detail::number_or(j, "capacitance_f", t.capacitance_f, "F");
    t.threshold_v = detail::number_or(j, "threshold_v", t.threshold_v);
    t.initial_v = detail::number_or(j, "initial_v", t.initial_v);
    t.validate();
    return t;
}

inline json distance_sweep_to_json(const linksim::DistanceSweepResult& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"distance_m", row.distance_m}, {"received_w", row.received_w}, {"charge_s", row.charge_s}});
    }
    return {{"rows", rows}};
}

}  // namespace leafmatch::json_io
