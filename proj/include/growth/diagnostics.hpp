#pragma once
#ifndef GROWTH_DIAGNOSTICS_HPP
#define GROWTH_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "growth/error.hpp"
#include "growth/fitting.hpp"
#include "growth/models.hpp"
#include "growth/rates.hpp"
#include "growth/timeseries.hpp"

namespace growth {

/// One tested linearization and how straight the data looked under it.
struct Candidate
{
    LinearizationKind linearization = LinearizationKind::R_VS_T;
    ModelKind model_kind = ModelKind::EXP_CONST;
    double r_squared = 0.0;
    double rms_residual = 0.0;
    std::size_t dropped_points = 0;
    FitReport fit;
};

struct IdentificationReport
{
    RateMethod method = RateMethod::DIRECT;
    std::vector<Candidate> ranking;
    std::vector<std::string> notes;

    const Candidate& winner() const
    {
        if (ranking.empty())
            throw DegenerateError("no linearization could be fitted");
        return ranking.front();
    }
};

struct IdentifyOptions
{
    RateMethod method = RateMethod::DIRECT;
    SmoothingConfig smoothing;
    std::optional<double> aux_a;  // enables the shifted-ln candidate
    double tie_tolerance = 1e-12;
};

/// Simplest-first order used to break ties in r^2.
inline int catalog_rank(ModelKind k) noexcept
{
    switch (k) {
    case ModelKind::EXP_CONST: return 0;
    case ModelKind::LINEAR_T: return 1;
    case ModelKind::HYPERBOLIC: return 2;
    case ModelKind::LINEAR_S: return 3;
    case ModelKind::RATE_RECIP_LINEAR: return 4;
    case ModelKind::RATE_LN_LINEAR: return 5;
    case ModelKind::RATE_SHIFTED_EXP: return 6;
    case ModelKind::LOGLOG_T: return 7;
    case ModelKind::LOGLOG_S: return 8;
    }
    return 9;
}

/// Tests every linearization on the series' rates (plus 1/S against t on the
/// series itself) and ranks them by r^2, then fewer dropped points, then
/// catalog order.
///
/// HYPERBOLIC ranks ahead of LINEAR_S: for exact hyperbolic data the direct
/// rates are exactly proportional to S, so R-vs-S ties at r^2 = 1 and only the
/// reciprocal signature tells the two apart.
inline IdentificationReport identify(const TimeSeries& ts, const IdentifyOptions& opts = {})
{
    IdentificationReport rep;
    rep.method = opts.method;
    const RateSeries rs = compute_rates(ts, opts.method, opts.smoothing);
    if (rs.size() < 2)
        throw ValidationError("identification needs at least 2 rate points; series has " +
                              std::to_string(ts.size()) + " points");

    auto add = [&](ModelKind kind, auto&& fit) {
        try {
            FitReport f = fit();
            Candidate c;
            c.linearization = f.linearization.kind;
            c.model_kind = kind;
            c.r_squared = f.line.r_squared;
            c.rms_residual = f.line.rms_residual;
            c.dropped_points = f.line.dropped_points;
            c.fit = std::move(f);
            rep.ranking.push_back(std::move(c));
        } catch (const Error& e) {
            rep.notes.push_back(std::string(to_string(kind)) + " not fitted: " + e.what());
        }
    };
    add(ModelKind::EXP_CONST, [&] { return fit_constant_rate(rs); });
    add(ModelKind::LINEAR_T,
        [&] { return fit_rate_model(rs, {LinearizationKind::R_VS_T, std::nullopt}); });
    add(ModelKind::HYPERBOLIC, [&] { return fit_series_model(ts); });
    add(ModelKind::LINEAR_S,
        [&] { return fit_rate_model(rs, {LinearizationKind::R_VS_S, std::nullopt}); });
    add(ModelKind::RATE_RECIP_LINEAR,
        [&] { return fit_rate_model(rs, {LinearizationKind::RECIP_R_VS_T, std::nullopt}); });
    add(ModelKind::RATE_LN_LINEAR,
        [&] { return fit_rate_model(rs, {LinearizationKind::LN_R_VS_T, std::nullopt}); });
    if (opts.aux_a)
        add(ModelKind::RATE_SHIFTED_EXP,
            [&] { return fit_rate_model(rs, Linearization::shifted(*opts.aux_a)); });
    else
        rep.notes.push_back("shifted-ln candidate skipped (no auxiliary a given)");

    // r^2 values within tie_tolerance share a bucket, keeping the order strict-weak.
    auto bucket = [&](double r2) { return std::llround(r2 / opts.tie_tolerance); };
    std::stable_sort(rep.ranking.begin(), rep.ranking.end(),
                     [&](const Candidate& x, const Candidate& y) {
                         const auto bx = bucket(x.r_squared);
                         const auto by = bucket(y.r_squared);
                         if (bx != by)
                             return bx > by;
                         if (x.dropped_points != y.dropped_points)
                             return x.dropped_points < y.dropped_points;
                         return catalog_rank(x.model_kind) < catalog_rank(y.model_kind);
                     });
    return rep;
}

enum class StabilityStatus
{
    OK,
    LOW_RATE_UNSTABLE
};

struct StabilityFlag
{
    StabilityStatus status = StabilityStatus::OK;
    double threshold = 0.014;
    double recent_rate = 0.0;
};

inline constexpr double kDefaultStabilityThreshold = 0.014;

/// Flags growth whose recent rate (mean of the last `window` points) has
/// dropped below `threshold`.
inline StabilityFlag stability_flag(const RateSeries& rs,
                                    double threshold = kDefaultStabilityThreshold,
                                    std::size_t window = 5)
{
    if (rs.size() == 0)
        throw ValidationError("stability flag needs at least one rate");
    const std::size_t n = std::min(window == 0 ? 1 : window, rs.size());
    double sum = 0.0;
    for (std::size_t i = rs.size() - n; i < rs.size(); ++i)
        sum += rs[i].rate;
    StabilityFlag flag;
    flag.threshold = threshold;
    flag.recent_rate = sum / static_cast<double>(n);
    flag.status = flag.recent_rate < threshold ? StabilityStatus::LOW_RATE_UNSTABLE
                                               : StabilityStatus::OK;
    return flag;
}

}  // namespace growth

#endif  // GROWTH_DIAGNOSTICS_HPP
