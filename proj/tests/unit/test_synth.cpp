#include <gtest/gtest.h>

#include <chrono>
#include <complex>
#include <random>

#include "leafmatch/synth.hpp"
#include "leafmatch/touchstone.hpp"
#include "test_support.hpp"

using namespace leafmatch;

namespace {

const Frequency f915(915e6);
const ReferenceImpedance z50(50);

/// Independent fold with std::complex only, used as the oracle for synthesis.
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

double oracle_gamma(std::complex<double> z, double z0) { return std::abs((z - z0) / (z + z0)); }

}  // namespace

TEST(LMatch, AlreadyMatchedGivesEmptyNetwork) {
    const auto sols = l_match_solutions({50, 0}, z50, f915);
    ASSERT_EQ(sols.size(), 1u);
    EXPECT_TRUE(sols[0].network.empty());
    EXPECT_EQ(sols[0].topology_label, "none");
}

TEST(LMatch, ResistiveMatchCancelsReactanceWithOneSeriesCapacitor) {
    const auto sols = l_match_solutions({50, 30}, z50, f915);
    ASSERT_EQ(sols.size(), 1u);
    ASSERT_EQ(sols[0].network.size(), 1u);
    const auto& e = sols[0].network.elements()[0];
    EXPECT_EQ(e.kind, ComponentKind::Capacitor);
    EXPECT_EQ(e.placement, Placement::Series);
    EXPECT_NEAR(element_impedance(e, f915).reactance, -30.0, 1e-12);
}

TEST(LMatch, ResistiveMatchWithCapacitiveLoadUsesSeriesInductor) {
    const auto sols = l_match_solutions({50, -20}, z50, f915);
    ASSERT_EQ(sols.size(), 1u);
    EXPECT_EQ(sols[0].network.elements()[0].kind, ComponentKind::Inductor);
}

TEST(LMatch, Load25Minus10jEverySolutionVerifiedByOracle) {
    const auto sols = l_match_solutions({25, -10}, z50, f915);
    EXPECT_GE(sols.size(), 2u);
    for (const auto& s : sols) {
        EXPECT_LT(oracle_gamma(oracle_fold(s.network, {25, -10}, 915e6), 50), 1e-6) << s.topology_label;
        EXPECT_LT(s.achieved_gamma.magnitude(), 1e-6);
    }
}

TEST(LMatch, RejectsPurelyReactiveLoads) {
    EXPECT_THROW(l_match_solutions({0, 30}, z50, f915), DomainError);
    EXPECT_THROW(l_match_solutions({-5, 30}, z50, f915), DomainError);
}

TEST(LMatch, SortedByCountThenGammaThenLabel) {
    const auto sols = l_match_solutions({10, -41.4658}, z50, f915);
    for (std::size_t i = 1; i < sols.size(); ++i) {
        const auto& a = sols[i - 1];
        const auto& b = sols[i];
        ASSERT_LE(a.network.size(), b.network.size());
        if (a.network.size() == b.network.size() && a.achieved_gamma.magnitude() == b.achieved_gamma.magnitude()) {
            EXPECT_LE(a.topology_label, b.topology_label);
        }
    }
}

TEST(LMatch, LabelsNameElementsFromLoadSide) {
    for (const auto& s : l_match_solutions({10, 5}, z50, f915)) {
        std::string expect;
        for (const auto& e : s.network.elements()) expect += (expect.empty() ? "" : " then ") + e.label();
        EXPECT_EQ(s.topology_label, expect);
    }
}

TEST(LMatchProperty, OracleEquivalenceOverRandomLoads) {
    std::mt19937_64 rng(20240915);
    std::uniform_real_distribution<double> rr(0.1, 5000.0), xx(-5000.0, 5000.0);
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const Impedance load{rr(rng), xx(rng)};
        const auto sols = l_match_solutions(load, z50, f915);
        ASSERT_FALSE(sols.empty());
        if (std::fabs(load.resistance - 50.0) > 1e-9 * 50.0) {
            ASSERT_GE(sols.size(), 2u);
        }
        for (const auto& s : sols) {
            for (const auto& e : s.network.elements()) {
                ASSERT_TRUE(e.value > 0.0 && std::isfinite(e.value));
            }
            const double g = oracle_gamma(oracle_fold(s.network, load.complex(), 915e6), 50.0);
            ASSERT_LT(g, 1e-6) << load.resistance << " " << load.reactance << " " << s.topology_label;
            ++checked;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 5.0);
    EXPECT_GE(checked, 20000u);
}

TEST(LMatchProperty, SolutionCountLaws) {
    EXPECT_EQ(l_match_solutions({50, 12}, z50, f915).size(), 1u);
    EXPECT_EQ(l_match_solutions({50 * (1 + 1e-12), 0}, z50, f915).size(), 1u);
    EXPECT_GE(l_match_solutions({20, 0}, z50, f915).size(), 2u);
    EXPECT_GE(l_match_solutions({200, 0}, z50, f915).size(), 2u);
    EXPECT_LE(l_match_solutions({20, 35}, z50, f915).size(), 4u);
}

TEST(SmithArc, SeriesInductorKeepsResistance) {
    const Impedance start{20, -15};
    const LadderElement e{ComponentKind::Inductor, Placement::Series, 8e-9, std::nullopt};
    const auto arc = smith_arc(start, e, f915, 64, z50);
    ASSERT_EQ(arc.points.size(), 64u);
    for (const auto& p : arc.points) {
        const auto z = impedance_from_gamma(p, z50);
        EXPECT_NEAR(z.resistance, 20.0, 1e-9 * 20.0);
        EXPECT_LE(p.magnitude(), 1.0 + 1e-9);
    }
}

TEST(SmithArc, ShuntCapacitorKeepsConductance) {
    const Impedance start{20, -15};
    const double g0 = impedance_to_admittance(start).conductance;
    const LadderElement e{ComponentKind::Capacitor, Placement::Shunt, 3e-12, std::nullopt};
    for (const auto& p : smith_arc(start, e, f915, 64, z50).points) {
        const auto y = impedance_to_admittance(impedance_from_gamma(p, z50));
        EXPECT_NEAR(y.conductance, g0, 1e-9 * g0);
    }
}

TEST(SmithArc, SeriesCapacitorAndShuntInductorStayOnTheirCircles) {
    const Impedance start{30, 40};
    const double g0 = impedance_to_admittance(start).conductance;
    const LadderElement c{ComponentKind::Capacitor, Placement::Series, 2e-12, std::nullopt};
    for (const auto& p : smith_arc(start, c, f915, 32, z50).points) {
        EXPECT_NEAR(impedance_from_gamma(p, z50).resistance, 30.0, 1e-9 * 30.0);
    }
    const LadderElement l{ComponentKind::Inductor, Placement::Shunt, 12e-9, std::nullopt};
    for (const auto& p : smith_arc(start, l, f915, 32, z50).points) {
        EXPECT_NEAR(impedance_to_admittance(impedance_from_gamma(p, z50)).conductance, g0, 1e-9 * g0);
    }
}

TEST(SmithArc, StartsAtStartAndEndsAtSingleElementEvaluation) {
    const Impedance start{25, -10};
    for (const auto& e : {LadderElement{ComponentKind::Inductor, Placement::Series, 6.8e-9, std::nullopt},
                          LadderElement{ComponentKind::Capacitor, Placement::Series, 4.7e-12, std::nullopt},
                          LadderElement{ComponentKind::Capacitor, Placement::Shunt, 2.2e-12, std::nullopt},
                          LadderElement{ComponentKind::Inductor, Placement::Shunt, 15e-9, std::nullopt}}) {
        const auto arc = smith_arc(start, e, f915, 16, z50, 3);
        EXPECT_EQ(arc.element_index, 3);
        const auto g0 = reflection_coefficient(start, z50);
        EXPECT_EQ(arc.points.front().re, g0.re);
        EXPECT_EQ(arc.points.front().im, g0.im);
        const auto g1 = reflection_coefficient(input_impedance(MatchingNetwork({e}), start, f915), z50);
        EXPECT_NEAR(arc.points.back().re, g1.re, 1e-12);
        EXPECT_NEAR(arc.points.back().im, g1.im, 1e-12);
    }
}

TEST(SmithArc, ZeroValueElement) {
    const Impedance start{25, -10};
    const auto g0 = reflection_coefficient(start, z50);
    const LadderElement l0{ComponentKind::Inductor, Placement::Series, 0.0, std::nullopt};
    for (const auto& p : smith_arc(start, l0, f915, 8, z50).points) {
        EXPECT_EQ(p.re, g0.re);
        EXPECT_EQ(p.im, g0.im);
    }
    const LadderElement c0{ComponentKind::Capacitor, Placement::Shunt, 0.0, std::nullopt};
    EXPECT_EQ(smith_arc(start, c0, f915, 8, z50).points.size(), 8u);
    const LadderElement cs0{ComponentKind::Capacitor, Placement::Series, 0.0, std::nullopt};
    EXPECT_THROW(smith_arc(start, cs0, f915, 8, z50), DegenerateError);
}

TEST(SmithArc, RejectsTooFewSteps) {
    const LadderElement e{ComponentKind::Inductor, Placement::Series, 1e-9, std::nullopt};
    EXPECT_THROW(smith_arc({25, 0}, e, f915, 1, z50), DomainError);
}

TEST(MatchAndVerify, ConstantProfileEqualsDirectSynthesis) {
    const auto a = match_and_verify(LoadProfile::constant({25, -10}), z50, f915);
    const auto b = l_match_solutions({25, -10}, z50, f915);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].network, b[i].network);
        EXPECT_EQ(a[i].topology_label, b[i].topology_label);
    }
}

TEST(MatchAndVerify, ResonatorFixtureReachesBelowMinus100dB) {
    const auto sols = match_and_verify(LoadProfile::resonator_fixture(), z50, f915);
    EXPECT_EQ(sols.size(), 4u);
    for (const auto& s : sols) EXPECT_LT(s.achieved_s11_db, -100.0) << s.topology_label;
}

TEST(MatchAndVerify, MeasuredFixtureReachesBelowMinus60dB) {
    const auto ds = touchstone::parse_touchstone(test_support::read_fixture("antenna.s1p"));
    const auto sols = match_and_verify(LoadProfile::measured(ds), z50, f915);
    EXPECT_GE(sols.size(), 2u);
    for (const auto& s : sols) EXPECT_LT(s.achieved_s11_db, -60.0) << s.topology_label;
}
