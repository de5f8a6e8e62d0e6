#include <gtest/gtest.h>

#include <cmath>

#include "ctinv/pipeline.hpp"
#include "fixtures.hpp"

using namespace ctinv;

TEST(Pipeline, ModeStringsRoundTrip) {
    for (auto m : {InvertMode::general, InvertMode::even, InvertMode::odd, InvertMode::approx_a,
                   InvertMode::approx_t, InvertMode::approx_l})
        EXPECT_EQ(invert_mode_from_string(to_string(m)), m);
    EXPECT_THROW(invert_mode_from_string("approx_a"), ParseError);
}

TEST(Pipeline, ZeroScatteringGivesZeroPotential) {
    PhaseShiftSet p(2.0, 1.0, {{0, 0.0, 1.0}, {1, 0.0, 1.0}, {2, 0.0, 1.0}});
    const auto rep = invert(p, InvertMode::general);
    EXPECT_TRUE(rep.tsets.empty());
    for (const auto& q : rep.potential.q) EXPECT_EQ(q, cplx(0.0));
    for (const auto& r : rep.roundtrip) EXPECT_LE(r.delta_diff, 1e-8);
}

TEST(Pipeline, ParityModeKeepsOnlyThatHalf) {
    const auto rep = invert(fixtures::gauss_problem(), InvertMode::odd);
    ASSERT_EQ(rep.input.size(), 5u);
    for (const auto& e : rep.input.entries()) EXPECT_EQ(e.l % 2, 1);
    ASSERT_EQ(rep.tsets.size(), 1u);
    EXPECT_EQ(rep.tsets[0].tag(), TSetTag::odd);
    EXPECT_EQ(rep.roundtrip.size(), 5u);
}

TEST(Pipeline, CarbonGeneralBeatsApproximations) {
    const auto p = fixtures::carbon_problem();
    auto total = [&](InvertMode m) {
        double s = 0.0;
        for (const auto& r : invert(p, m).roundtrip) s += r.delta_diff + r.eta_diff;
        return s;
    };
    const double ct = total(InvertMode::general);
    EXPECT_LT(ct, total(InvertMode::approx_a));
    EXPECT_LT(ct, total(InvertMode::approx_t));
    EXPECT_LT(ct, total(InvertMode::approx_l));
}

TEST(Pipeline, ApproxResidualMeasuresDistanceFromExactSet) {
    const auto p = fixtures::carbon_problem();
    EXPECT_LE(invert(p, InvertMode::general).residual_norm, 1e-12);
    EXPECT_GT(invert(p, InvertMode::approx_l).residual_norm, 1e-3);
}
