#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sincdvr/convergence.hpp"
#include "sincdvr/error.hpp"
#include "extended_oracle.hpp"

using namespace sincdvr;

namespace {

ConvergenceCurve make_curve(std::vector<double> deltas) {
    ConvergenceCurve c;
    for (std::size_t i = 0; i < deltas.size(); ++i) c.sizes.push_back(3 + 2 * static_cast<std::int64_t>(i));
    c.deltas = std::move(deltas);
    return c;
}

}  // namespace

TEST(Convergence, OddSizes) {
    const auto s = odd_sizes(3, 11, 4);
    EXPECT_EQ(s, (std::vector<std::int64_t>{3, 7, 11}));
    EXPECT_THROW((void)odd_sizes(4, 11), ConfigError);
    EXPECT_THROW((void)odd_sizes(3, 11, 3), ConfigError);
}

TEST(Convergence, DecoherenceRIsFirstCrossing) {
    const auto c = make_curve({1e-2, 1e-4, 5e-7, 2e-6, 3e-6, 3e-6});
    ASSERT_TRUE(decoherence_R(c, 1e-6).has_value());
    EXPECT_EQ(*decoherence_R(c, 1e-6), 7);
    EXPECT_FALSE(decoherence_R(c, 1e-7).has_value());
    EXPECT_THROW((void)decoherence_R(c, 0.0), ConfigError);
}

TEST(Convergence, DecoherenceRMonotoneInThreshold) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-12.0, 0.0);
    std::bernoulli_distribution flip(0.3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> d(30);
        for (auto& x : d) x = (flip(rng) ? -1.0 : 1.0) * std::pow(10.0, u(rng));
        const auto c = make_curve(d);
        std::optional<std::int64_t> prev;
        bool seen = false;
        for (double t : {1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 1.0}) {
            const auto r = decoherence_R(c, t);
            if (seen && prev) {
                ASSERT_TRUE(r.has_value());
                EXPECT_LE(*r, *prev);
            }
            if (r) {
                prev = r;
                seen = true;
            }
            if (r) {
                for (std::size_t i = 0; c.sizes[i] < *r; ++i) EXPECT_GE(std::abs(c.deltas[i]), t);
                EXPECT_LT(std::abs(c.deltas[static_cast<std::size_t>((*r - 3) / 2)]), t);
            }
        }
    }
}

TEST(Convergence, SaturationPlateau) {
    const auto flat = make_curve({-1.0, -0.5, -0.3, -0.257, -0.2569, -0.2571});
    const auto s = saturation_P(flat);
    EXPECT_TRUE(s.saturated);
    EXPECT_NEAR(s.P, 0.257, 1e-12);
    EXPECT_EQ(s.sign, -1);

    const auto falling = make_curve({1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7});
    const auto f = saturation_P(falling);
    EXPECT_FALSE(f.saturated);
    EXPECT_DOUBLE_EQ(f.P, 1e-7);
    EXPECT_EQ(f.sign, 1);

    const auto zero = make_curve({0, 0, 0, 0, 0});
    const auto z = saturation_P(zero);
    EXPECT_TRUE(z.saturated);
    EXPECT_EQ(z.P, 0.0);
    EXPECT_EQ(z.sign, 0);

    EXPECT_THROW((void)saturation_P(make_curve({1, 2, 3, 4})), ConfigError);
}

TEST(Convergence, FloorLimitedPlateauHasNoSign) {
    PlateauRule rule;
    rule.floor = 1e-12;
    const auto noisy = make_curve({1e-3, 1e-8, 3e-15, -2e-14, 5e-15, -8e-14});
    const auto s = saturation_P(noisy, rule);
    EXPECT_TRUE(s.saturated);
    EXPECT_EQ(s.sign, 0);
    EXPECT_TRUE(crossed_zero(noisy));
    EXPECT_FALSE(crossed_zero(noisy, rule.floor));
    EXPECT_FALSE(compute_metrics(noisy, 1e-6, rule).crossed_zero);
}

TEST(Convergence, CrossedZero) {
    EXPECT_TRUE(crossed_zero(make_curve({1, 0.5, 0, -0.1, -0.1})));
    EXPECT_FALSE(crossed_zero(make_curve({1, 0.5, 0, 0.1, 0.1})));
    EXPECT_FALSE(crossed_zero(make_curve({-1, -0.5, -0.2, -0.1, -0.1})));
}

TEST(Convergence, LcFlatCurveNeverReachesThreshold) {
    const auto lc = CircuitSpec::lc(1, 1);
    const DvrRepresentation rep{DvrKind::TraditionalCharge, Spacing::make(3, 2), false};
    const auto c = sweep(lc, rep, odd_sizes(3, 101, 2), 0, {CurveScale::LcScaled, 1});
    const double thr = default_threshold(lc, CurveScale::LcScaled);
    EXPECT_FALSE(decoherence_R(c, thr).has_value());
    const auto s = saturation_P(c, plateau_for(lc, CurveScale::LcScaled));
    EXPECT_TRUE(s.saturated);
    EXPECT_GT(s.P, 1e3 * thr);
    EXPECT_EQ(s.sign, -1);
}

TEST(Convergence, LcModerateGridsDescendMonotonically) {
    // Raw E_0(d) is non-increasing above round-off for the moderate charge grids 1/4 and 1/5.
    const auto lc = CircuitSpec::lc(1, 1);
    for (const auto& s : {Spacing::make(1, 4), Spacing::make(1, 5)}) {
        const auto c = sweep(lc, DvrRepresentation{DvrKind::TraditionalCharge, s, false}, odd_sizes(3, 101, 2), 0);
        for (std::size_t i = 1; i < c.deltas.size() && c.deltas[i - 1] > 1e-11; ++i)
            EXPECT_LE(c.deltas[i], c.deltas[i - 1] + 1e-13) << c.sizes[i];
    }
}

TEST(Convergence, ScaledCurveDividesByLcFrequency) {
    const auto lc = CircuitSpec::lc(2.0, 0.5);
    const DvrRepresentation rep{DvrKind::TraditionalPhase, Spacing::make(1, 4, true), false};
    const auto sizes = odd_sizes(3, 21, 2);
    const auto a = sweep(lc, rep, sizes, 0, {CurveScale::Absolute, 1});
    const auto b = sweep(lc, rep, sizes, 0, {CurveScale::LcScaled, 1});
    for (std::size_t i = 0; i < sizes.size(); ++i) EXPECT_NEAR(b.deltas[i] * std::sqrt(8.0), a.deltas[i], 1e-14);
    EXPECT_NEAR(default_threshold(lc, CurveScale::LcScaled), 1e-6 / std::sqrt(8.0), 1e-20);
    EXPECT_THROW((void)sweep(CircuitSpec::transmon(1, 1, 0), ChargeBasisRepresentation{}, sizes, 0,
                             {CurveScale::LcScaled, 1}),
                 ConfigError);
}

TEST(Convergence, ThreadedSweepIsIdentical) {
    const auto fl = CircuitSpec::fluxonium(2.5, 0.5, 10, 0.5);
    const DvrRepresentation rep{DvrKind::TruncatedCharge, Spacing::make(1, 5), false};
    const auto sizes = odd_sizes(9, 61, 2);
    const auto a = sweep_levels(fl, rep, sizes, {0, 2}, {CurveScale::Absolute, 1});
    const auto b = sweep_levels(fl, rep, sizes, {0, 2}, {CurveScale::Absolute, 4});
    ASSERT_EQ(a.size(), 2u);
    for (std::size_t l = 0; l < 2; ++l) EXPECT_EQ(a[l].deltas, b[l].deltas);
}

TEST(Convergence, SweepPreconditions) {
    const auto lc = CircuitSpec::lc(1, 1);
    const DvrRepresentation rep{DvrKind::TraditionalPhase, Spacing::make(1, 4, true), false};
    EXPECT_THROW((void)sweep(lc, rep, {5, 3, 7}, 0), ConfigError);
    EXPECT_THROW((void)sweep(lc, rep, {3, 5, 7}, 3), ConfigError);
    EXPECT_THROW((void)sweep(lc, rep, {3, 6, 7}, 0), ConfigError);
}

TEST(Convergence, TruncatedAndTraditionalSaturateAlike) {
    // Where P sits well above round-off, both kinds plateau within 10%.
    const auto lc = CircuitSpec::lc(1, 1);
    const auto sizes = odd_sizes(3, 121, 2);
    const auto rule = plateau_for(lc, CurveScale::LcScaled);
    const std::pair<DvrKind, DvrKind> pairs[] = {{DvrKind::TraditionalCharge, DvrKind::TruncatedCharge},
                                                 {DvrKind::TraditionalPhase, DvrKind::TruncatedPhase}};
    for (const auto& [trad, trunc] : pairs) {
        const std::vector<Spacing> grids = is_phase(trad) ? std::vector{Spacing::make(5, 12, true), Spacing::make(1, 2, true), Spacing::make(1, 1, true)}
                                                          : std::vector{Spacing::make(1, 2), Spacing::make(3, 4), Spacing::make(3, 2)};
        for (const auto& g : grids) {
            const auto a = saturation_P(sweep(lc, DvrRepresentation{trad, g, false}, sizes, 0, {CurveScale::LcScaled, 1}), rule);
            const auto b = saturation_P(sweep(lc, DvrRepresentation{trunc, g, false}, sizes, 0, {CurveScale::LcScaled, 1}), rule);
            EXPECT_NEAR(a.P / b.P, 1.0, 0.1) << g.to_string();
        }
    }
}

TEST(Convergence, FluxoniumHoDescendsWithoutPlateau) {
    // The HO-basis error shrinks monotonically until it reaches round-off.
    const auto fl = CircuitSpec::fluxonium(2.5, 0.5, 10, 0.5);
    const auto c = sweep(fl, HoRepresentation{LengthScale::LC, 1001}, odd_sizes(3, 301, 2), 0);
    for (std::size_t i = 1; i < c.deltas.size() && std::abs(c.deltas[i]) > 1e-9; ++i)
        EXPECT_LT(std::abs(c.deltas[i]), std::abs(c.deltas[i - 1])) << c.sizes[i];
}

TEST(Convergence, CsvSchemas) {
    auto c = make_curve({-0.5, 0.25, 0.0, 1e-7, -3e-300});
    std::ostringstream os;
    write_curve_csv(os, c);
    EXPECT_EQ(os.str(), "size,delta,abs_delta,sign\n3,-0.5,0.5,-1\n5,0.25,0.25,1\n7,0,0,0\n9,1e-07,1e-07,1\n11,-3e-300,3e-300,-1\n");

    MetricsRecord m = compute_metrics(make_curve({1, 1e-3, 1e-7, 1.05e-7, 1e-7}), 1e-6);
    std::ostringstream ms;
    write_metrics_csv(ms, {{"LC", "TraditionalCharge", Spacing::make(1, 4), 0, m},
                           {"Fluxonium", "HO", std::nullopt, 2, MetricsRecord{}}});
    EXPECT_EQ(ms.str(), std::string(kMetricsCsvHeader) + "\n" +
                            "LC,TraditionalCharge,1,4,false,0,7,1e-07,1,true,false\n"
                            "Fluxonium,HO,,,,2,,0,0,false,false\n");
}

TEST(Convergence, FormatNumberRoundTrips) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-300, 300);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::pow(10.0, u(rng)) * (i % 2 ? -1 : 1);
        EXPECT_EQ(std::strtod(format_number(v).c_str(), nullptr), v);
    }
    EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Convergence, ExtendedPrecisionOracleMatchesDoubleAboveFloor) {
    // Where the converged error is resolvable in double, the library and the quad oracle agree.
    const auto lc = CircuitSpec::lc(1, 1);
    for (const auto& [num, den] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {3, 4}, {3, 2}}) {
        const auto c = sweep(lc, DvrRepresentation{DvrKind::TraditionalCharge, Spacing::make(num, den), false},
                             {41, 61}, 0, {CurveScale::LcScaled, 1});
        const double q = oracle::lc_charge_dvr_scaled_error(1, 1, num, den, 61);
        EXPECT_NEAR(c.deltas.back(), q, 1e-12) << num << "/" << den;
        EXPECT_LT(q, 0.0);
    }
}

TEST(Convergence, QuarterChargeGridConvergesFromBelow) {
    // The converged error lies far under the double floor but is resolvable in quad precision.
    const double e61 = oracle::lc_charge_dvr_scaled_error(1, 1, 1, 4, 61);
    const double e81 = oracle::lc_charge_dvr_scaled_error(1, 1, 1, 4, 81);
    EXPECT_LT(e61, 0.0);
    EXPECT_GT(e61, -1e-20);
    EXPECT_NEAR(e61 / e81, 1.0, 1e-3);
}
