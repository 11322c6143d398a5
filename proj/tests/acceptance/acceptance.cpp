// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "leafmatch/json_io.hpp"
#include "leafmatch/leafmatch.hpp"
#include "leafmatch/serve.hpp"

using namespace leafmatch;
using json = nlohmann::json;

namespace {

// Tolerances.
constexpr double kOracleGamma = 1e-6;
constexpr double kOracleSeconds = 5.0;
constexpr double kThresholdDb = 0.01;
constexpr double kExactDb = 1e-12;
constexpr double kMaxDipShift = 0.05;
constexpr double kRecoveredDb = -15.0;
constexpr double kGoldenTol = 1e-9;
constexpr double kSkinRel = 0.01;
constexpr double kRoundTripGamma = 1e-9;
constexpr double kSemicircleRel = 1e-3;
constexpr double kRatioTol = 1e-9;

// Golden values for the resonator fixture (10 ohm, 18 nH, 1.2 pF) matched at
// 915 MHz, swept 700-1100 MHz over 201 points.
constexpr double kGoldenIdealDipHz = 914e6;
constexpr double kGoldenSnappedDipHz = 910e6;
constexpr double kGoldenK2BestDb = -22.41765519608531;

const Frequency f915(915e6);
const ReferenceImpedance z50(50);

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::complex<double> oracle_fold(const MatchingNetwork& n, std::complex<double> z, double f) {
    const double w = 2.0 * std::numbers::pi * f;
    for (const auto& e : n.elements()) {
        std::complex<double> ze;
        if (e.kind == ComponentKind::Inductor) ze = {0.0, w * e.value};
        else if (e.kind == ComponentKind::Capacitor) ze = {0.0, -1.0 / (w * e.value)};
        else ze = {e.value, 0.0};
        z = e.placement == Placement::Series ? z + ze : 1.0 / (1.0 / z + 1.0 / ze);
    }
    return z;
}

Outcome synthesis_oracle() {
    Outcome o;
    std::mt19937_64 rng(20240915);
    std::uniform_real_distribution<double> rr(0.1, 5000.0), xx(-5000.0, 5000.0);
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t solutions = 0;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Impedance load{rr(rng), xx(rng)};
        const auto sols = l_match_solutions(load, z50, f915);
        o.require(!sols.empty(), "load without a solution");
        for (const auto& s : sols) {
            const auto z = oracle_fold(s.network, load.complex(), f915.hertz());
            worst = std::max(worst, std::abs((z - 50.0) / (z + 50.0)));
            ++solutions;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(worst < kOracleGamma, fmt("worst |G| %.3g", worst));
    o.require(secs < kOracleSeconds, fmt("took %.2f s", secs));
    if (o.pass) o.detail = fmt("%zu solutions, worst |G| %.2e, %.2f s", solutions, worst, secs);
    return o;
}

Outcome threshold_semantics() {
    Outcome o;
    const double a = s11_db(ReflectionCoefficient{0.3162, 0.0});
    const double b = s11_db(ReflectionCoefficient{0.1, 0.0});
    o.require(std::fabs(a + 10.0) <= kThresholdDb, fmt("|G|=0.3162 gives %.5f dB", a));
    o.require(std::fabs(b + 20.0) <= kExactDb, fmt("|G|=0.1 gives %.15f dB", b));
    if (o.pass) o.detail = fmt("%.5f dB, %.5f dB", a, b);
    return o;
}

Outcome snap_example() {
    Outcome o;
    const double s = discrete::snap(7.0e-9, discrete::ESeries::E24).value();
    const auto hood = discrete::neighborhood(7.0e-9, discrete::ESeries::E24, 1);
    o.require(s == 6.8e-9, fmt("snap gave %.6g", s));
    o.require(hood.size() == 3 && hood[0].value() == 6.2e-9 && hood[1].value() == 6.8e-9 && hood[2].value() == 7.5e-9,
              "neighborhood is not [6.2, 6.8, 7.5] nH");
    if (o.pass) o.detail = "7 nH -> 6.8 nH; neighborhood 6.2/6.8/7.5 nH";
    return o;
}

bool golden(double actual, double expected, bool relative) {
    const double scale = relative ? std::fabs(expected) : 1.0;
    return std::fabs(actual - expected) <= kGoldenTol * scale;
}

Outcome dip_shift() {
    Outcome o;
    const auto load = LoadProfile::resonator_fixture();
    const Frequency lo(700e6), hi(1100e6);
    const int points = 201;
    const double step = (hi.hertz() - lo.hertz()) / (points - 1);

    MatchingNetwork ideal;
    for (const auto& s : match_and_verify(load, z50, f915)) {
        if (s.topology_label == "series-L then shunt-C") ideal = s.network;
    }
    o.require(!ideal.empty(), "no series-L then shunt-C solution");
    const Dip d_ideal = find_dip(sweep_s11(ideal, load, z50, lo, hi, points));
    o.require(std::fabs(d_ideal.frequency.hertz() - f915.hertz()) <= step,
              fmt("ideal dip at %.6f MHz", d_ideal.frequency.hertz() / 1e6));

    const auto snapped = discrete::snap_network(ideal, discrete::ESeries::E24);
    const Dip d_snap = find_dip(sweep_s11(snapped, load, z50, lo, hi, points));
    const double shift = std::fabs(d_snap.frequency.hertz() - d_ideal.frequency.hertz()) / f915.hertz();
    o.require(shift > 0.0 && shift < kMaxDipShift, fmt("snapped shift %.4f%%", shift * 100));

    discrete::SearchOptions opt;
    opt.series = discrete::ESeries::E24;
    opt.k = 2;
    const auto report = discrete::optimize_discrete(ideal, load, z50, f915, opt);
    o.require(report.best_s11_db <= kRecoveredDb, fmt("k=2 best %.4f dB", report.best_s11_db));

    o.require(golden(d_ideal.frequency.hertz(), kGoldenIdealDipHz, true), "ideal dip differs from golden");
    o.require(golden(d_snap.frequency.hertz(), kGoldenSnappedDipHz, true), "snapped dip differs from golden");
    o.require(golden(report.best_s11_db, kGoldenK2BestDb, false), "k=2 best differs from golden");
    if (o.pass) {
        o.detail = fmt("ideal %.3f MHz, E24 %.3f MHz (shift %.2f%%), k=2 %.2f dB", d_ideal.frequency.hertz() / 1e6,
                       d_snap.frequency.hertz() / 1e6, shift * 100, report.best_s11_db);
    }
    return o;
}

Outcome skin_depth_check() {
    Outcome o;
    const double d = skin_depth(MaterialSpec::copper(), f915);
    o.require(std::fabs(d - 2.16e-6) <= kSkinRel * 2.16e-6, fmt("copper %.6g m", d));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lf(3.0, 11.0), lr(-9.0, -5.0), mu(1.0, 1000.0);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
        double f1 = std::pow(10.0, lf(rng)), f2 = std::pow(10.0, lf(rng));
        double r1 = std::pow(10.0, lr(rng)), r2 = std::pow(10.0, lr(rng));
        const double m1 = mu(rng), m2 = mu(rng);
        if (f1 > f2) std::swap(f1, f2);
        if (r1 > r2) std::swap(r1, r2);
        const double lo_mu = std::min(m1, m2), hi_mu = std::max(m1, m2);
        const double base = skin_depth({r1, lo_mu}, Frequency(f1));
        if (f1 < f2 && !(skin_depth({r1, lo_mu}, Frequency(f2)) < base)) ++violations;
        if (r1 < r2 && !(skin_depth({r2, lo_mu}, Frequency(f1)) > base)) ++violations;
        if (lo_mu < hi_mu && !(skin_depth({r1, hi_mu}, Frequency(f1)) < base)) ++violations;
    }
    o.require(violations == 0, fmt("%d monotonicity violations", violations));
    if (o.pass) o.detail = fmt("copper at 915 MHz %.4f um; 1000 monotonicity draws", d * 1e6);
    return o;
}

Outcome touchstone_check() {
    using namespace touchstone;
    Outcome o;
    std::mt19937_64 rng(1915);
    std::uniform_real_distribution<double> lf(3.0, 11.0), mag(0.0, 1.0), ang(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> rref(1.0, 500.0);
    std::uniform_int_distribution<int> count(1, 40);
    double worst = 0.0;
    std::size_t files = 0, freq_mismatch = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::set<double> freqs;
        const int n = count(rng);
        while (static_cast<int>(freqs.size()) < n) freqs.insert(std::pow(10.0, lf(rng)));
        std::vector<Row> rows;
        for (double f : freqs) rows.push_back({f, ReflectionCoefficient::from(std::polar(mag(rng), ang(rng)))});
        const Dataset d(rows, trial % 3 == 0 ? 50.0 : rref(rng));
        for (DataFormat fmt_ : {DataFormat::RI, DataFormat::MA, DataFormat::DB}) {
            for (FrequencyUnit u : {FrequencyUnit::Hz, FrequencyUnit::kHz, FrequencyUnit::MHz, FrequencyUnit::GHz}) {
                const auto back = parse_touchstone(write_touchstone(d, {fmt_, u, true}));
                ++files;
                if (back.rows().size() != d.rows().size()) {
                    ++freq_mismatch;
                    continue;
                }
                for (std::size_t i = 0; i < d.rows().size(); ++i) {
                    if (back.rows()[i].frequency_hz != d.rows()[i].frequency_hz) ++freq_mismatch;
                    worst = std::max(worst, std::abs(back.rows()[i].s11.complex() - d.rows()[i].s11.complex()));
                }
            }
        }
    }
    o.require(worst <= kRoundTripGamma, fmt("round-trip error %.3g", worst));
    o.require(freq_mismatch == 0, fmt("%zu frequency mismatches", freq_mismatch));

    const std::string seeds[] = {
        "# MHz S MA R 50\n600 0.8 -40\n605 0.79 -41\n",
        "# MHz S RI R 50\n915 0.1 0.0\n920 0.2 -0.1\n",
        "! c\n# GHz S DB R 75\n0.9 -3.5 45\n1.0 -10 -170\n",
        "0.915 0.5 180\n",
    };
    const std::string alphabet = "0123456789.eE+-#![] \t\r\nRIMADBSGHzkhzriamdbs,;xyz\x80\xff";
    std::size_t crashes = 0, parsed = 0, rejected = 0;
    for (int i = 0; i < 100000; ++i) {
        std::string s = seeds[static_cast<std::size_t>(i) % 4];
        const int edits = 1 + static_cast<int>(rng() % 8);
        for (int e = 0; e < edits; ++e) {
            const std::size_t pos = s.empty() ? 0 : rng() % s.size();
            const char c = alphabet[rng() % alphabet.size()];
            switch (rng() % 5) {
                case 0: if (!s.empty()) s[pos] = c; break;
                case 1: s.insert(s.begin() + static_cast<std::ptrdiff_t>(pos), c); break;
                case 2: if (!s.empty()) s.erase(pos, 1 + rng() % 6); break;
                case 3: s.insert(pos, s.substr(rng() % (s.size() + 1), rng() % 12)); break;
                default: if (!s.empty()) s.resize(rng() % s.size()); break;
            }
        }
        try {
            (void)parse_touchstone(s);
            ++parsed;
        } catch (const ParseError&) {
            ++rejected;
        } catch (...) {
            ++crashes;
        }
    }
    o.require(crashes == 0, fmt("%zu fuzz inputs escaped as non-parse errors", crashes));
    if (o.pass) {
        o.detail = fmt("%zu files, worst |dG| %.2e; fuzz 1e5: %zu parsed, %zu rejected, 0 crashes", files, worst, parsed,
                       rejected);
    }
    return o;
}

Outcome leaf_geometry() {
    using namespace leafgeom;
    Outcome o;
    const auto lp = build_leaf_pair(default_profile());
    o.require(lp.element_b.has_value(), "default profile has no mirrored element");
    if (!lp.element_b) return o;
    const auto& a = lp.element_a.points;
    const auto& b = lp.element_b->points;
    bool mirrored = a.size() == b.size();
    for (std::size_t i = 0; mirrored && i < a.size(); ++i) mirrored = b[i].x == -a[i].x && b[i].y == a[i].y;
    o.require(mirrored, "vertex pairing is not an exact mirror");
    o.require(lp.element_a.closed && lp.element_b->closed, "outline not closed");
    o.require(!find_self_intersection(lp.element_a) && !find_self_intersection(*lp.element_b), "self-intersection");
    const auto m = outline_metrics(lp);
    o.require(m.width <= 100.0 && m.height <= 80.0, fmt("bbox %.3f x %.3f mm", m.width, m.height));
    const double exact = std::numbers::pi * 100.0 / 2.0;
    const double rel = std::fabs(polyline_area(half_ellipse(10.0, 10.0, 512)) - exact) / exact;
    o.require(rel < kSemicircleRel, fmt("semicircle area off by %.4f%%", rel * 100));
    o.require(export_dxf(build_leaf_pair(default_profile())) == export_dxf(build_leaf_pair(default_profile())),
              "DXF differs between runs");
    if (o.pass) {
        o.detail = fmt("%zu vertices per leaf, bbox %.2f x %.2f mm, semicircle error %.4f%%", a.size(), m.width, m.height,
                       rel * 100);
    }
    return o;
}

Outcome link_shape() {
    Outcome o;
    const linksim::LinkBudget lb;
    const linksim::ChargeTank tank;
    const auto r = linksim::distance_sweep(lb, tank, 0.5, 2.0, 0.25);
    o.require(r.rows.size() == 7, fmt("%zu rows", r.rows.size()));
    bool increasing = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i) increasing = increasing && r.rows[i].charge_s > r.rows[i - 1].charge_s;
    o.require(increasing, "charge time not strictly increasing");
    if (r.rows.size() == 7) {
        const double ratio = r.rows.back().charge_s / r.rows.front().charge_s;
        o.require(std::fabs(ratio - 16.0) <= kRatioTol, fmt("t(2.0)/t(0.5) = %.12f", ratio));
        if (o.pass) o.detail = fmt("7 rows, t(2.0)/t(0.5) = %.12f", ratio);
    }
    return o;
}

ReflectionCoefficient gamma_of(const json& g) { return {g.at("re").get<double>(), g.at("im").get<double>()}; }
ReflectionCoefficient point_of(const json& p) { return {p.at(0).get<double>(), p.at(1).get<double>()}; }

void check_state(Outcome& o, const json& state, const LoadProfile& load, const char* step) {
    const auto net = json_io::network_from_json(state);
    const auto g = reflection_coefficient(input_impedance(net, load, f915), z50);
    o.require(gamma_of(state.at("current").at("gamma")) == g, std::string(step) + ": gamma differs from library");
    const auto& arcs = state.at("arcs");
    bool chained = arcs.size() == net.size();
    if (chained && !arcs.empty()) {
        chained = point_of(arcs.front().at("points").front()) == gamma_of(state.at("start").at("gamma")) &&
                  point_of(arcs.back().at("points").back()) == g;
        for (std::size_t i = 1; chained && i < arcs.size(); ++i) {
            chained = point_of(arcs[i].at("points").front()) == point_of(arcs[i - 1].at("points").back());
        }
    }
    o.require(chained, std::string(step) + ": arcs do not chain");
}

Outcome service_contract() {
    Outcome o;
    serve::SessionService svc;
    const auto load = LoadProfile::resonator_fixture();
    auto created = svc.create(
        R"({"z0": 50, "f0": "915MHz", "load": {"type": "resonator", "r_series": 10, "inductance": "18nH", "capacitance": "1.2pF"}})");
    o.require(created.status == 201, fmt("create returned %d", created.status));
    if (!o.pass) return o;
    const std::string id = created.body.at("id").get<std::string>();
    check_state(o, created.body.at("state"), load, "create");

    auto r = svc.push(id, R"({"kind": "inductor", "placement": "series", "value": "10.69nH"})");
    o.require(r.status == 200, "first push failed");
    if (r.status == 200) check_state(o, r.body, load, "push 1");
    r = svc.push(id, R"({"kind": "capacitor", "placement": "shunt", "value": "6.958pF"})");
    o.require(r.status == 200, "second push failed");
    if (r.status == 200) check_state(o, r.body, load, "push 2");

    r = svc.suggest(id);
    o.require(r.status == 200 && r.body.at("solutions").is_array(), "suggest failed");
    r = svc.discretize(id, R"({"series": "E24", "k": 2})");
    o.require(r.status == 200 && r.body.contains("best"), "discretize failed");
    r = svc.sweep(id, "700MHz", "1100MHz", "201");
    o.require(r.status == 200 && r.body.at("points").size() == 201, "sweep failed");
    r = svc.pop(id);
    o.require(r.status == 200, "pop failed");
    if (r.status == 200) check_state(o, r.body, load, "pop");
    if (o.pass) o.detail = "create, push x2, suggest, discretize, sweep, pop; gamma bit-exact, arcs chained";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"synthesis oracle equivalence", synthesis_oracle},
        {"S11 threshold semantics", threshold_semantics},
        {"E24 snap example", snap_example},
        {"dip shift on the resonator fixture", dip_shift},
        {"skin depth", skin_depth_check},
        {"touchstone round-trip and fuzz", touchstone_check},
        {"leaf geometry", leaf_geometry},
        {"link experiment shape", link_shape},
        {"service contract", service_contract},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
