#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pstflow/correction.hpp"
#include "pstflow/error.hpp"

using namespace pstflow;

namespace {
const CorrectionTable kTable = reference_pst_table();
}

TEST(InterpolateFactor, ReferenceTableValues) {
    EXPECT_EQ(interpolate_factor(kTable, 0.0).factor, 0.15);
    EXPECT_EQ(interpolate_factor(kTable, -152.0).factor, 1.0);
    // Halfway between (0, 0.15) and (42, 0.21).
    EXPECT_NEAR(interpolate_factor(kTable, 21.0).factor, 0.18, 1e-15);
    EXPECT_NEAR(interpolate_factor(kTable, 30.0).factor, 0.19285714285714284, 1e-15);
}

TEST(InterpolateFactor, ClampsOutsideRange) {
    const auto hi = interpolate_factor(kTable, 200.0);
    EXPECT_EQ(hi.factor, 1.0);
    EXPECT_TRUE(hi.clamped);
    const auto lo = interpolate_factor(kTable, -180.0);
    EXPECT_EQ(lo.factor, 1.0);
    EXPECT_TRUE(lo.clamped);
    EXPECT_FALSE(interpolate_factor(kTable, 152.0).clamped);
    EXPECT_FALSE(interpolate_factor(kTable, -152.0).clamped);
    EXPECT_FALSE(interpolate_factor(kTable, 5.0).clamped);
}

TEST(InterpolateFactor, ExactAtEveryBreakpoint) {
    for (const auto& p : kTable.points) {
        const auto e = interpolate_factor(kTable, p.angle_deg);
        EXPECT_EQ(e.factor, p.factor) << p.angle_deg;
        EXPECT_EQ(e.angle_deg, p.angle_deg);
    }
}

TEST(InterpolateFactor, SegmentLinearity) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t s = 0; s + 1 < kTable.points.size(); ++s) {
        const auto& a = kTable.points[s];
        const auto& b = kTable.points[s + 1];
        for (int trial = 0; trial < 200; ++trial) {
            const double t = unit(rng);
            const double angle = a.angle_deg + t * (b.angle_deg - a.angle_deg);
            EXPECT_NEAR(interpolate_factor(kTable, angle).factor, a.factor + t * (b.factor - a.factor),
                        1e-12);
        }
    }
}

TEST(InterpolateFactor, MirroredTableIsEven) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> angle(-200.0, 200.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double phi = angle(rng);
        EXPECT_NEAR(interpolate_factor(kTable, phi).factor, interpolate_factor(kTable, -phi).factor,
                    1e-12);
    }
}

TEST(InterpolateFactor, TwoPointTable) {
    const CorrectionTable t{"t", {{-10.0, 2.0}, {10.0, 1.0}}};
    EXPECT_DOUBLE_EQ(interpolate_factor(t, 0.0).factor, 1.5);
    EXPECT_DOUBLE_EQ(interpolate_factor(t, 10.0).factor, 1.0);
}

TEST(IecCorrectionFactor, Values) {
    EXPECT_NEAR(iec_correction_factor(0.1, 1.1), 0.9858490566037734, 1e-12);
    EXPECT_NEAR(iec_correction_factor(0.25, 1.05), 0.8673913043478261, 1e-12);
    EXPECT_DOUBLE_EQ(iec_correction_factor(0.0, 1.1), 0.95 * 1.1);
    EXPECT_DOUBLE_EQ(iec_correction_factor(0.0, 1.0), 0.95);
}

TEST(IecCorrectionFactor, RejectsBadInput) {
    EXPECT_THROW(iec_correction_factor(-0.1, 1.1), InvalidArgument);
    EXPECT_THROW(iec_correction_factor(0.1, 0.0), InvalidArgument);
}

TEST(IecCorrectionFactor, Monotone) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> x(0.0, 2.0);
    std::uniform_real_distribution<double> c(0.5, 1.5);
    for (int trial = 0; trial < 1000; ++trial) {
        double x1 = x(rng), x2 = x(rng);
        double c1 = c(rng), c2 = c(rng);
        if (x1 == x2 || c1 == c2) {
            continue;
        }
        if (x1 > x2) std::swap(x1, x2);
        if (c1 > c2) std::swap(c1, c2);
        EXPECT_GT(iec_correction_factor(x1, c1), iec_correction_factor(x2, c1));
        EXPECT_LT(iec_correction_factor(x1, c1), iec_correction_factor(x1, c2));
    }
}

TEST(PerUnitReactance, Values) {
    EXPECT_NEAR(per_unit_reactance(12.1, 100.0, 110.0), 0.1, 1e-15);
    EXPECT_NEAR(per_unit_reactance(4.84, 50.0, 22.0), 0.5, 1e-15);
    EXPECT_EQ(per_unit_reactance(0.0, 100.0, 110.0), 0.0);
    EXPECT_THROW(per_unit_reactance(1.0, 0.0, 110.0), InvalidArgument);
    EXPECT_THROW(per_unit_reactance(1.0, 100.0, -1.0), InvalidArgument);
}

TEST(CorrectedImpedance, ScalesBothParts) {
    const auto z = corrected_impedance({0.01, 0.10}, 0.15);
    EXPECT_NEAR(z.real(), 0.0015, 1e-15);
    EXPECT_NEAR(z.imag(), 0.015, 1e-15);
    EXPECT_EQ(corrected_impedance({0.3, 0.7}, 1.0), std::complex<double>(0.3, 0.7));
    const auto j = corrected_impedance({0.0, 0.2}, 0.62);
    EXPECT_EQ(j.real(), 0.0);
    EXPECT_NEAR(j.imag(), 0.124, 1e-15);
    EXPECT_THROW(corrected_impedance({0.0, 0.2}, 0.0), InvalidArgument);
    EXPECT_THROW(corrected_impedance({0.0, 0.2}, -1.0), InvalidArgument);
}

TEST(CorrectedImpedance, PreservesAngle) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.001, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::complex<double> z(u(rng), u(rng));
        EXPECT_NEAR(std::arg(corrected_impedance(z, 3.0 * u(rng))), std::arg(z), 1e-14);
    }
}

TEST(ReferenceTable, MatchesPublishedBreakpoints) {
    const std::vector<std::pair<double, double>> expected = {
        {-152, 1.0}, {-121, 0.62}, {-85, 0.37}, {-42, 0.21}, {0, 0.15},
        {42, 0.21},  {85, 0.37},   {121, 0.62}, {152, 1.0}};
    ASSERT_EQ(kTable.points.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(kTable.points[i].angle_deg, expected[i].first);
        EXPECT_EQ(kTable.points[i].factor, expected[i].second);
    }
}
