#include <cmath>

#include <gtest/gtest.h>

#include "growth/lsq.hpp"
#include "growth/models.hpp"
#include "support/catalog.hpp"
#include "support/oracles.hpp"

using namespace growth;

namespace {

Model make(ModelKind k, double a, double b, std::optional<double> literal_c = std::nullopt, double r = 0)
{
    Model m;
    m.kind = k;
    m.params.a = a;
    m.params.b = b;
    m.params.r = r;
    if (literal_c)
        m = m.with_constant(*literal_c);
    return m;
}

}  // namespace

TEST(ModelKindNames, RoundTrip)
{
    for (auto k : kAllModelKinds)
        EXPECT_EQ(model_kind_from_string(to_string(k)), k);
    EXPECT_THROW(model_kind_from_string("LOGISTIC"), ConfigError);
}

TEST(Validate, ParameterInvariants)
{
    EXPECT_THROW(validate(make(ModelKind::HYPERBOLIC, 0, 0)), ValidationError);
    EXPECT_THROW(validate(make(ModelKind::LINEAR_S, 0, 1)), ValidationError);
    EXPECT_THROW(validate(make(ModelKind::EXP_CONST, NAN, 0)), ValidationError);
    EXPECT_NO_THROW(validate(make(ModelKind::LINEAR_S, 1, 0)));
}

TEST(RateAt, Examples)
{
    EXPECT_EQ(rate_at(make(ModelKind::EXP_CONST, 0.02, 0), 1234.5), 0.02);
    EXPECT_NEAR(rate_at(make(ModelKind::LINEAR_S, 8.411e-2, -1.279e-2), 0, 8.411e-2 / 1.279e-2), 0.0,
                1e-16);
    EXPECT_NEAR(rate_at(make(ModelKind::LINEAR_S, 8.411e-2, -1.279e-2), 0, 6.5763), 0.0, 1e-5);
    EXPECT_NEAR(rate_at(make(ModelKind::LINEAR_T, -8.964e-2, 5.459e-5), 2008), 0.01998, 1e-5);
}

TEST(RateAt, SizeDependentNeedsSizeOrNormalization)
{
    EXPECT_THROW(rate_at(make(ModelKind::HYPERBOLIC, 0, 1), 0), ValidationError);
    EXPECT_DOUBLE_EQ(rate_at(make(ModelKind::HYPERBOLIC, 0, 1, 10.0), 0), 0.1);
    EXPECT_EQ(rate_at(make(ModelKind::HYPERBOLIC, 0, 1), 0, 0.5), 0.5);
}

TEST(RateAt, SingularRates)
{
    EXPECT_THROW(rate_at(make(ModelKind::RATE_RECIP_LINEAR, 2, -1), 2), SingularityError);
    EXPECT_THROW(rate_at(make(ModelKind::RATE_SHIFTED_EXP, 2, 2, std::nullopt, 0.5), 0), SingularityError);
}

TEST(RateAt, LogLogUsesChainRule)
{
    // F = ln S; R_S = R_F * F.
    const auto m = make(ModelKind::LOGLOG_T, 0.1, 0.01, 2.0);
    const double f = log_trajectory_at(m, 3.0);
    EXPECT_NEAR(rate_at(m, 3.0), (0.1 + 0.03) * f, 1e-15);
    const auto s = make(ModelKind::LOGLOG_S, 0.3, -0.1);
    EXPECT_NEAR(rate_at(s, 0, std::exp(2.0)), (0.3 - 0.2) * 2.0, 1e-15);
}

TEST(Trajectory, UnitLogistic)
{
    const auto m = make(ModelKind::LINEAR_S, 1, -1, 1.0);
    EXPECT_DOUBLE_EQ(trajectory_at(m, 0), 0.5);
    for (double t : {-3.0, 0.7, 5.0})
        EXPECT_NEAR(trajectory_at(m, t), 1 / (std::exp(-t) + 1), 1e-15);
    EXPECT_NEAR(trajectory_at(m, 40), 1.0, 1e-15);
}

TEST(Trajectory, Hyperbolic)
{
    const auto m = make(ModelKind::HYPERBOLIC, 0, 1, 10.0);
    EXPECT_DOUBLE_EQ(trajectory_at(m, 0), 0.1);
    EXPECT_DOUBLE_EQ(trajectory_at(m, 9), 1.0);
    EXPECT_THROW(trajectory_at(m, 10), SingularityError);
    EXPECT_THROW(trajectory_at(m, 10 + 1e-10), SingularityError);
    EXPECT_THROW(trajectory_at(m, 11), DomainError);
}

TEST(Trajectory, WorldPopulationExpRate)
{
    const auto m = make(ModelKind::RATE_LN_LINEAR, 2.179e10, -1.406e-2, 15.6e9);
    EXPECT_NEAR(trajectory_at(m, 2030) / 8.4e9, 1.0, 0.015);
}

TEST(Trajectory, LogSpaceAvoidsOverflow)
{
    // exp(a t + b t^2 / 2) at calendar years is ~e^265 before normalization.
    const auto m = normalize(make(ModelKind::LINEAR_T, 2.520e-1, -1.197e-4), 2030, 8.4e9);
    EXPECT_TRUE(std::isfinite(trajectory_at(m, 2100)));
    EXPECT_LT(*m.params.c, -200);
    const auto japan = normalize(make(ModelKind::LINEAR_T, 3.452, -1.726e-3), 2000, 5.469);
    EXPECT_NEAR(trajectory_at(japan, 2000), 5.469, 1e-12);
    EXPECT_LT(*japan.params.c, -3000);
}

TEST(Trajectory, NeedsNormalization)
{
    EXPECT_THROW(trajectory_at(make(ModelKind::LINEAR_T, 0.1, 0), 0), ValidationError);
}

TEST(Features, LinearTMaximum)
{
    const auto f = features(normalize(make(ModelKind::LINEAR_T, 2.520e-1, -1.197e-4), 2030, 8.4e9));
    EXPECT_EQ(f.kind, FeatureKind::MAXIMUM);
    EXPECT_NEAR(*f.t_star, 2105.26, 0.01);
    ASSERT_TRUE(f.s_star);
    EXPECT_NEAR(*f.s_star / 11.9e9, 1.0, 0.015);
}

TEST(Features, NoneIsAResult)
{
    EXPECT_EQ(features(make(ModelKind::EXP_CONST, 0.02, 0, 1.0)).kind, FeatureKind::NONE);
    const auto f = features(make(ModelKind::LINEAR_T, 0.01, 0.001, 1.0));
    EXPECT_EQ(f.kind, FeatureKind::NONE);
    EXPECT_FALSE(f.t_star);
}

TEST(Features, PseudoHyperbolicSingularity)
{
    const auto f = features(make(ModelKind::LINEAR_S, 1, 1, 2.0));
    EXPECT_EQ(f.kind, FeatureKind::SINGULARITY);
    EXPECT_NEAR(*f.t_star, std::log(2.0), 1e-15);
    EXPECT_FALSE(f.s_star);
    // C <= b/a: denominator never reaches zero in forward time.
    const auto g = features(make(ModelKind::LINEAR_S, 1, 1, -0.5));
    EXPECT_EQ(g.kind, FeatureKind::NONE);
    EXPECT_FALSE(g.note.empty());
}

TEST(Features, HyperbolicSingularity)
{
    const auto f = features(make(ModelKind::HYPERBOLIC, 0, 1, 10.0));
    EXPECT_EQ(f.kind, FeatureKind::SINGULARITY);
    EXPECT_DOUBLE_EQ(*f.t_star, 10.0);
}

TEST(Features, Asymptotes)
{
    const auto logistic = features(make(ModelKind::LINEAR_S, 8.411e-2, -1.279e-2));
    EXPECT_EQ(logistic.kind, FeatureKind::ASYMPTOTE);
    EXPECT_NEAR(*logistic.s_star, 6.5762, 1e-4);
    EXPECT_FALSE(logistic.t_star);

    const auto world = features(make(ModelKind::RATE_LN_LINEAR, 2.179e10, -1.406e-2, 15.6e9));
    EXPECT_EQ(world.kind, FeatureKind::ASYMPTOTE);
    EXPECT_NEAR(*world.s_star, 15.6e9, 1e-3);

    const auto shifted = features(make(ModelKind::RATE_SHIFTED_EXP, 20, 5, 1.0, 0.1));
    EXPECT_EQ(shifted.kind, FeatureKind::NONE);
    EXPECT_DOUBLE_EQ(*shifted.asymptotic_rate, 1.0 / 20);
}

TEST(Features, RecipLinearSingularity)
{
    const auto f = features(make(ModelKind::RATE_RECIP_LINEAR, 30, -0.5, 1.0));
    EXPECT_EQ(f.kind, FeatureKind::SINGULARITY);
    EXPECT_DOUBLE_EQ(*f.t_star, 60.0);
}

TEST(Normalize, LogisticConstant)
{
    const auto m = normalize(make(ModelKind::LINEAR_S, 1, -1), 0, 0.5);
    EXPECT_DOUBLE_EQ(*m.params.c, 1.0);
}

TEST(Normalize, WorldPopulationRecoversAsymptote)
{
    const auto m = normalize(make(ModelKind::RATE_LN_LINEAR, 2.179e10, -1.406e-2), 2030, 8.37e9);
    EXPECT_NEAR(*m.constant() / 15.6e9, 1.0, 0.01);
}

TEST(Normalize, RejectsNonPositiveAnchor)
{
    EXPECT_THROW(normalize(make(ModelKind::LINEAR_T, 0.1, 0), 0, 0), DomainError);
    EXPECT_THROW(normalize(make(ModelKind::LINEAR_S, 1, -1), 0, -2), DomainError);
}

TEST(Normalize, RoundTripEveryKind)
{
    oracle::Draws d(101);
    for (auto kind : kAllModelKinds) {
        for (int i = 0; i < 20; ++i) {
            Model m = catalog::draw(kind, d);
            const double t0 = d.uniform(catalog::kLo, catalog::kHi);
            const double s0 = trajectory_at(m, t0) * d.uniform(0.8, 1.2);
            m.params.c.reset();
            Model n;
            try {
                n = normalize(m, t0, s0);
            } catch (const DomainError&) {
                continue;  // e.g. LOGLOG_S anchored at ln S = 0
            }
            EXPECT_LE(oracle::rel_err(trajectory_at(n, t0), s0), 1e-12) << to_string(kind);
        }
    }
}

TEST(OdeConsistency, LogDerivativeMatchesRateLaw)
{
    oracle::Draws d(2024);
    for (auto kind : kAllModelKinds) {
        for (int i = 0; i < 50; ++i) {
            const Model m = catalog::draw(kind, d);
            const double t = d.uniform(catalog::kLo, catalog::kHi);
            const double numeric =
                oracle::log_derivative([&](double x) { return log_trajectory_at(m, x); }, t, 1e-4);
            const double s = trajectory_at(m, t);
            EXPECT_LE(oracle::rel_err(numeric, rate_at(m, t, s)), 1e-6) << to_string(kind) << " t=" << t;
        }
    }
}

TEST(Signatures, HyperbolicReciprocalIsAffine)
{
    const auto m = make(ModelKind::HYPERBOLIC, 0, 0.3, 9.0);
    std::vector<double> ts, inv;
    for (int i = 0; i < 25; ++i) {
        ts.push_back(i);
        inv.push_back(1 / trajectory_at(m, i));
    }
    EXPECT_LE(fit_line(ts, inv).rms_residual, 1e-12);
}

TEST(Signatures, PseudoHyperbolicReciprocalIsNotAffine)
{
    // a < 0, b > 0: 1/S = C e^{-a t} - b/a, singular at t = -16.09.
    const auto m = make(ModelKind::LINEAR_S, -0.1, 0.02, -1.0);
    EXPECT_EQ(features(m).kind, FeatureKind::SINGULARITY);
    std::vector<double> ts, inv;
    for (int i = -100; i < -20; ++i) {
        ts.push_back(i);
        inv.push_back(1 / trajectory_at(m, i));
    }
    EXPECT_GT(fit_line(ts, inv).rms_residual, 1e-3);
    EXPECT_NEAR(1 / trajectory_at(m, -400), -0.02 / -0.1, 1e-9);
}

TEST(Signatures, LogisticApproachesLimitFromBelow)
{
    const auto m = normalize(make(ModelKind::LINEAR_S, 0.2, -0.05), 0, 0.5);
    const double limit = 0.2 / 0.05;
    double prev = 0;
    for (int t = 0; t <= 100; ++t) {
        const double s = trajectory_at(m, t);
        EXPECT_GT(s, prev);
        EXPECT_LT(s, limit);
        prev = s;
    }
    EXPECT_LE(oracle::rel_err(trajectory_at(m, 1000), limit), 1e-6);
}

TEST(Signatures, ShiftedRateTendsToReciprocalA)
{
    const auto m = make(ModelKind::RATE_SHIFTED_EXP, 25, 4, 1.0, 0.2);
    EXPECT_LE(oracle::rel_err(rate_at(m, 200), 1.0 / 25), 1e-12);
}

TEST(Signatures, LogLogTIsExpOfLinearT)
{
    const auto lt = make(ModelKind::LINEAR_T, 0.03, -0.002, std::exp(0.7));
    Model ll = make(ModelKind::LOGLOG_T, 0.03, -0.002);
    ll.params.c = std::exp(0.7);  // F(0) equals LINEAR_T's S(0)
    for (double t : {-5.0, 0.0, 3.3, 12.0})
        EXPECT_LE(oracle::rel_err(trajectory_at(ll, t), std::exp(trajectory_at(lt, t))), 1e-13);
}

TEST(IntegrateRational, KnownValue)
{
    EXPECT_NEAR(integrate_rational(1, 1, 0, 1, 1, 2), std::log(4.0 / 3.0), 1e-15);
    const double q = oracle::simpson([](double x) { return 1 / (x * (1 + x)); }, 1, 2, 1e-14);
    EXPECT_NEAR(integrate_rational(1, 1, 0, 1, 1, 2), q, 1e-10);
    EXPECT_NEAR(q, 0.287682, 1e-6);
}

TEST(IntegrateRational, Errors)
{
    EXPECT_THROW(integrate_rational(1, 2, 1, 2, 0, 1), DegenerateError);
    EXPECT_EQ(integrate_rational(1, 1, 0, 1, 3, 3), 0.0);
    EXPECT_THROW(integrate_rational(1, -1, 2, 1, 0, 2), DomainError);
}

TEST(IntegrateRational, ReversedBoundsFlipSign)
{
    EXPECT_NEAR(integrate_rational(1, 1, 0, 1, 2, 1), -std::log(4.0 / 3.0), 1e-15);
}

TEST(IntegrateRational, AgreesWithQuadrature)
{
    oracle::Draws d(25);
    int done = 0;
    while (done < 100) {
        const double a = d.uniform(-5, 5), b = d.uniform(-2, 2), c = d.uniform(-5, 5), e = d.uniform(-2, 2);
        double x1 = d.uniform(-3, 3), x2 = d.uniform(-3, 3);
        if (x1 > x2)
            std::swap(x1, x2);
        auto clear = [&](double k0, double k1) {
            const double lo = k0 + k1 * x1, hi = k0 + k1 * x2;
            return std::min(std::abs(lo), std::abs(hi)) > 0.2 && lo * hi > 0;
        };
        if (!clear(a, b) || !clear(c, e) || std::abs(c * b - a * e) < 0.1)
            continue;
        const double q =
            oracle::simpson([&](double x) { return 1 / ((a + b * x) * (c + e * x)); }, x1, x2, 1e-13);
        EXPECT_NEAR(integrate_rational(a, b, c, e, x1, x2), q, 1e-10);
        ++done;
    }
}
