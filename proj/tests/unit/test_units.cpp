#include <gtest/gtest.h>

#include "leafmatch/units.hpp"

using namespace leafmatch;
using units::parse_quantity;

TEST(ParseQuantity, SiPrefixes) {
    EXPECT_EQ(parse_quantity("915MHz", "Hz"), 9.15e8);
    EXPECT_EQ(parse_quantity("6.8nH", "H"), 6.8e-9);
    EXPECT_EQ(parse_quantity("1.2pF", "F"), 1.2e-12);
    EXPECT_EQ(parse_quantity("100uF", "F"), 100e-6);
    EXPECT_EQ(parse_quantity("100\xC2\xB5" "F", "F"), 100e-6);
    EXPECT_EQ(parse_quantity("2.4G", "Hz"), 2.4e9);
    EXPECT_EQ(parse_quantity("1k", "ohm"), 1000.0);
}

TEST(ParseQuantity, OhmSpellings) {
    EXPECT_EQ(parse_quantity("50ohm", "ohm"), 50.0);
    EXPECT_EQ(parse_quantity("50\xCE\xA9", "ohm"), 50.0);
    EXPECT_EQ(parse_quantity("50", "ohm"), 50.0);
}

TEST(ParseQuantity, PlainAndExponentNumbers) {
    EXPECT_EQ(parse_quantity("9.15e8", "Hz"), 9.15e8);
    EXPECT_EQ(parse_quantity("-3.5", ""), -3.5);
}

TEST(ParseQuantity, PrefixesAreCaseSensitive) {
    EXPECT_EQ(parse_quantity("1mHz", "Hz"), 1e-3);
    EXPECT_EQ(parse_quantity("1MHz", "Hz"), 1e6);
    EXPECT_THROW(parse_quantity("1NH", "H"), InputError);
}

TEST(ParseQuantity, RejectsGarbage) {
    EXPECT_THROW(parse_quantity("", "Hz"), InputError);
    EXPECT_THROW(parse_quantity("MHz", "Hz"), InputError);
    EXPECT_THROW(parse_quantity("915 MHz", "Hz"), InputError);
    EXPECT_THROW(parse_quantity("915MHzz", "Hz"), InputError);
    EXPECT_THROW(parse_quantity("6.8nF", "H"), InputError);
    EXPECT_THROW(parse_quantity("1e999", ""), InputError);
}

TEST(ParseDecimal, ShiftIsExactDecimal) {
    EXPECT_EQ(units::parse_decimal("915", 6), 915e6);
    EXPECT_EQ(units::parse_decimal("0.1", 9), 1e8);
    EXPECT_EQ(units::parse_decimal("1.5e3", -3), 1.5);
    EXPECT_FALSE(units::parse_decimal("abc"));
    EXPECT_FALSE(units::parse_decimal("1.2.3"));
}

TEST(ParseImpedance, Literals) {
    EXPECT_EQ(units::parse_impedance("25-10j"), std::complex<double>(25, -10));
    EXPECT_EQ(units::parse_impedance("50+0j"), std::complex<double>(50, 0));
    EXPECT_EQ(units::parse_impedance("75"), std::complex<double>(75, 0));
    EXPECT_EQ(units::parse_impedance("30j"), std::complex<double>(0, 30));
    EXPECT_EQ(units::parse_impedance("1e2+2.5e1j"), std::complex<double>(100, 25));
}

TEST(ParseImpedance, RejectsMalformed) {
    for (const char* bad : {"", "j", "25-j", "25-10", "25*10j", "25-10jj", "abc", "25+-10j"}) {
        EXPECT_THROW(units::parse_impedance(bad), InputError) << bad;
    }
}

TEST(FormatSi, EngineeringPrefixes) {
    EXPECT_EQ(units::format_si(6.8e-9, "H"), "6.8 nH");
    EXPECT_EQ(units::format_si(915e6, "Hz"), "915 MHz");
    EXPECT_EQ(units::format_si(1.2e-12, "F"), "1.2 pF");
    EXPECT_EQ(units::format_si(50, "ohm"), "50 ohm");
}
