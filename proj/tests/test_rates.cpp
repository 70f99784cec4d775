#include <cmath>

#include <gtest/gtest.h>

#include "growth/forecast.hpp"
#include "growth/rates.hpp"
#include "support/oracles.hpp"

using namespace growth;

namespace {

TimeSeries sampled(double (*f)(double), double lo, double hi, std::size_t n)
{
    std::vector<Observation> pts;
    for (double t : oracle::linspace(lo, hi, n))
        pts.push_back({t, f(t)});
    return TimeSeries(std::move(pts));
}

}  // namespace

TEST(DirectRates, SingleStep)
{
    const auto rs = direct_rates(TimeSeries({{0, 100}, {1, 110}}));
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(rs[0].t, 1.0);
    EXPECT_NEAR(rs[0].rate, 0.1, 1e-15);
    EXPECT_EQ(rs[0].size, 110.0);
    EXPECT_EQ(rs.method(), RateMethod::DIRECT);
}

TEST(DirectRates, ConstantSeries)
{
    const auto rs = direct_rates(TimeSeries({{0, 5}, {1, 5}, {2, 5}}));
    ASSERT_EQ(rs.size(), 2u);
    for (const auto& p : rs.points())
        EXPECT_EQ(p.rate, 0.0);
}

TEST(DirectRates, ExponentialGivesExpMinusOne)
{
    const auto ts = sampled([](double t) { return std::exp(0.02 * t); }, 0, 50, 51);
    const auto rs = direct_rates(ts);
    EXPECT_EQ(rs.size(), 50u);
    for (const auto& p : rs.points())
        EXPECT_NEAR(p.rate, std::expm1(0.02), 1e-12);
    EXPECT_NEAR(std::expm1(0.02), 0.0202013, 1e-7);
}

TEST(DirectRates, ZeroSizeIsDomainError)
{
    EXPECT_THROW(direct_rates(TimeSeries({{0, 1}, {1, 0}, {2, 1}})), DomainError);
}

TEST(DirectRates, ScaleInvariant)
{
    oracle::Draws d(21);
    std::vector<Observation> pts, scaled;
    double s = 10;
    for (int i = 0; i < 40; ++i) {
        s *= 1 + d.uniform(-0.05, 0.1);
        pts.push_back({1950.0 + i, s});
        scaled.push_back({1950.0 + i, 3.7e9 * s});
    }
    const auto a = direct_rates(TimeSeries(pts));
    const auto b = direct_rates(TimeSeries(scaled));
    for (std::size_t i = 0; i < a.size(); ++i)
        EXPECT_NEAR(a[i].rate, b[i].rate, 1e-14);
}

TEST(RefinedRates, ConstantSeries)
{
    std::vector<Observation> pts;
    for (int i = 0; i < 12; ++i)
        pts.push_back({2000.0 + i, 7.0});
    for (auto cfg : {SmoothingConfig{3, 1}, SmoothingConfig{7, 3}, SmoothingConfig{9, 4}}) {
        const auto rs = refined_rates(TimeSeries(pts), cfg);
        EXPECT_EQ(rs.size(), 12u);
        for (const auto& p : rs.points())
            EXPECT_NEAR(p.rate, 0.0, 1e-12);
    }
}

TEST(RefinedRates, ExactForPolynomialOfDegree)
{
    // S(t) = 4 + 0.5 t - 0.02 t^2 + 0.001 t^3, so R = p'/p.
    const std::vector<double> c{4, 0.5, -0.02, 0.001};
    const auto dc = oracle::poly_derivative(c);
    std::vector<Observation> pts;
    for (int i = 0; i < 25; ++i) {
        const double t = 0.5 * i;
        pts.push_back({t, oracle::poly(c, t)});
    }
    const auto rs = refined_rates(TimeSeries(pts), {7, 3});
    ASSERT_EQ(rs.size(), pts.size());
    for (const auto& p : rs.points())
        EXPECT_LE(oracle::rel_err(p.rate, oracle::poly(dc, p.t) / oracle::poly(c, p.t)), 1e-10) << p.t;
}

TEST(RefinedRates, ExponentialWithinSmoothingBias)
{
    const auto ts = sampled([](double t) { return std::exp(0.03 * t); }, 0, 100, 101);
    const auto rs = refined_rates(ts, {7, 3});
    double worst = 0;
    for (const auto& p : rs.points())
        worst = std::max(worst, std::abs(p.rate - 0.03));
    EXPECT_LE(worst, 1e-4);
}

TEST(RefinedRates, DenseExponentialReproducesConstantRate)
{
    // Step 1e-4: the one-sided end windows of the degree-1 smoother err by ~R^2 h / 2.
    const auto ts = sampled([](double t) { return 2.0 * std::exp(0.05 * t); }, 0, 0.1, 1001);
    for (auto cfg : {SmoothingConfig{3, 1}, SmoothingConfig{7, 3}}) {
        const auto rs = refined_rates(ts, cfg);
        for (const auto& p : rs.points())
            EXPECT_NEAR(p.rate, 0.05, 1e-6);
    }
    const auto direct = direct_rates(ts);
    for (const auto& p : direct.points())
        EXPECT_NEAR(p.rate, 0.05, 1e-6);
}

TEST(RefinedRates, ConfigAndSizeErrors)
{
    EXPECT_THROW((SmoothingConfig{2, 1}.validate()), ConfigError);
    EXPECT_THROW((SmoothingConfig{7, 7}.validate()), ConfigError);
    EXPECT_THROW((SmoothingConfig{7, 0}.validate()), ConfigError);
    EXPECT_NO_THROW((SmoothingConfig{3, 2}.validate()));
    EXPECT_THROW(refined_rates(TimeSeries({{0, 1}, {1, 2}, {2, 3}}), {7, 3}), ValidationError);
    EXPECT_THROW(refined_rates(TimeSeries({{0, 1}, {1, 0}, {2, 3}}), {3, 1}), DomainError);
}

TEST(RateOfTransform, LogOfDoubleExponential)
{
    const auto ts = sampled([](double t) { return std::exp(std::exp(0.01 * t)); }, 0, 40, 41);
    const auto rs = rate_of_transform(ts, TransformKind::LOG, RateMethod::DIRECT);
    EXPECT_EQ(rs.transform(), TransformKind::LOG);
    for (const auto& p : rs.points()) {
        EXPECT_NEAR(p.rate, std::expm1(0.01), 1e-12);
        EXPECT_NEAR(p.size, std::exp(0.01 * p.t), 1e-12);
    }
}

TEST(RateOfTransform, ConstantAndZero)
{
    const auto rs = rate_of_transform(TimeSeries({{0, 3}, {1, 3}, {2, 3}}), TransformKind::LOG,
                                      RateMethod::DIRECT);
    for (const auto& p : rs.points())
        EXPECT_EQ(p.rate, 0.0);
    EXPECT_THROW(rate_of_transform(TimeSeries({{0, 3}, {1, 0}, {2, 3}}), TransformKind::RECIPROCAL,
                                   RateMethod::DIRECT),
                 DomainError);
}

TEST(RateSeriesType, Invariants)
{
    EXPECT_THROW(RateSeries({}, "x", RateMethod::DIRECT, std::nullopt, ""), ValidationError);
    EXPECT_THROW(RateSeries({{1, 0.1, 1}, {1, 0.1, 1}}, "x", RateMethod::DIRECT, std::nullopt, ""),
                 ValidationError);
    EXPECT_THROW(RateSeries({{1, NAN, 1}}, "x", RateMethod::DIRECT, std::nullopt, ""), ValidationError);
}

TEST(DirectRates, DiscreteIntegrationInvertsThem)
{
    oracle::Draws d(77);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Observation> pts;
        double t = d.uniform(1800, 2000);
        double s = std::exp(d.uniform(-5, 20));
        for (int i = 0; i < 60; ++i) {
            pts.push_back({t, s});
            t += d.uniform(0.2, 3.0);
            s *= std::exp(d.uniform(-0.1, 0.15));
        }
        const TimeSeries ts(pts);
        const auto back = integrate_discrete(direct_rates(ts), {ts.front().t, ts.front().value});
        ASSERT_EQ(back.size(), ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i)
            EXPECT_LE(oracle::rel_err(back[i].value, ts[i].value), 1e-12);
    }
}
