#pragma once
#ifndef GROWTH_FORECAST_HPP
#define GROWTH_FORECAST_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "growth/detail/text.hpp"
#include "growth/error.hpp"
#include "growth/lsq.hpp"
#include "growth/models.hpp"
#include "growth/rates.hpp"
#include "growth/timeseries.hpp"

namespace growth {

/// The data point (t0, s0) a trajectory is normalized to.
struct Anchor
{
    double t = 0.0;
    double s = 0.0;
};

/// Evenly spaced times start, start + step, ... up to and including stop.
inline std::vector<double> make_grid(double start, double stop, double step)
{
    if (!(step > 0.0) || !(stop >= start))
        throw ConfigError("grid needs step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = start + step * static_cast<double>(i);
    return grid;
}

/// Rebuilds sizes from discrete rates by the exact inverse of the direct-rate
/// rule: S_{i+1} = S_i (1 + R_{i+1} (t_{i+1} - t_i)), and backwards
/// S_i = S_{i+1} / (1 + R_{i+1} (t_{i+1} - t_i)).
///
/// The anchor either precedes the first rate time (it is then the start of
/// the first interval) or coincides with one of the rate times.
inline TimeSeries integrate_discrete(const RateSeries& rs, Anchor anchor)
{
    if (!(anchor.s > 0.0))
        throw DomainError("anchor size must be positive, got " + detail::format_double(anchor.s));

    const auto pts = rs.points();
    std::vector<Observation> out;
    std::size_t anchor_index = 0;
    const double tol = 1e-9 * std::max(1.0, std::abs(anchor.t));

    // Times of the reconstruction; rate i covers [times[i-1], times[i]].
    std::vector<double> times;
    std::size_t first_rate = 0;  // index in `pts` of the rate for the step ending at times[1]
    if (anchor.t < pts.front().t - tol) {
        times.push_back(anchor.t);
        for (const auto& p : pts)
            times.push_back(p.t);
        anchor_index = 0;
    } else {
        auto it = std::find_if(pts.begin(), pts.end(),
                               [&](const RatePoint& p) { return std::abs(p.t - anchor.t) <= tol; });
        if (it == pts.end())
            throw DomainError("anchor time " + detail::format_double(anchor.t) +
                              " is not a rate-series time");
        for (const auto& p : pts)
            times.push_back(p.t);
        anchor_index = static_cast<std::size_t>(it - pts.begin());
        first_rate = 1;
    }

    std::vector<double> sizes(times.size());
    sizes[anchor_index] = anchor.s;
    auto rate_for_step = [&](std::size_t i) {
        // Step from times[i-1] to times[i].
        return pts[i - 1 + first_rate].rate;
    };
    auto factor = [&](std::size_t i) {
        const double f = 1.0 + rate_for_step(i) * (times[i] - times[i - 1]);
        if (!(f > 0.0))
            throw DomainError("collapse: 1 + R dt <= 0 on the step ending at t=" +
                              detail::format_double(times[i]));
        return f;
    };
    for (std::size_t i = anchor_index + 1; i < times.size(); ++i)
        sizes[i] = sizes[i - 1] * factor(i);
    for (std::size_t i = anchor_index; i-- > 0;)
        sizes[i] = sizes[i + 1] / factor(i + 1);

    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out.push_back({times[i], sizes[i]});
    return TimeSeries(std::move(out), rs.source_label(), rs.unit());
}

/// Closed-form trajectory of a polynomial rate law,
/// S(t) = s0 exp(P(t) - P(t0)) with P the exact antiderivative.
/// Refuses any time outside the polynomial's fitted range.
inline TimeSeries integrate_rate_function(const PolyFit& p, Anchor anchor,
                                          std::span<const double> grid, std::string label = {},
                                          std::string unit = {})
{
    if (!(anchor.s > 0.0))
        throw DomainError("anchor size must be positive, got " + detail::format_double(anchor.s));
    const double tol = 1e-9 * std::max(1.0, p.x_max() - p.x_min());
    auto check = [&](double t) {
        if (t < p.x_min() - tol)
            throw RangeError("t=" + detail::format_double(t) + " is below the fitted range start " +
                             detail::format_double(p.x_min()) +
                             "; polynomial rate laws do not extrapolate");
        if (t > p.x_max() + tol)
            throw RangeError("t=" + detail::format_double(t) + " is above the fitted range end " +
                             detail::format_double(p.x_max()) +
                             "; polynomial rate laws do not extrapolate");
    };
    check(anchor.t);
    std::vector<Observation> out;
    out.reserve(grid.size());
    const double ln_s0 = std::log(anchor.s);
    for (double t : grid) {
        check(t);
        out.push_back({t, std::exp(ln_s0 + p.integral(anchor.t, t))});
    }
    return TimeSeries(std::move(out), std::move(label), std::move(unit));
}

/// A model evaluated on a grid after normalization at its anchor.
struct Projection
{
    TimeSeries series;
    Model model;
    Features features;
    Anchor anchor;
    std::vector<std::string> warnings;
};

/// Normalizes `m` at the anchor (if given; otherwise `m` must already carry
/// C), evaluates the trajectory on the grid and attaches its features. A grid
/// that crosses a singularity is truncated before t* with a warning.
inline Projection project(const Model& m, std::optional<Anchor> anchor, std::span<const double> grid,
                          std::string label = {})
{
    Model model = m;
    if (anchor)
        model = normalize(m, anchor->t, anchor->s);
    else if (!m.normalized())
        throw ValidationError("projection needs an anchor or a normalized model");

    Features feats = features(model);
    std::vector<std::string> warnings;
    std::vector<Observation> pts;
    pts.reserve(grid.size());
    const bool singular = feats.kind == FeatureKind::SINGULARITY && feats.t_star.has_value();
    const double t_star = singular ? *feats.t_star : 0.0;
    for (double t : grid) {
        if (singular && t >= t_star - detail::kSingularityWindow) {
            warnings.push_back("grid truncated at singularity t*=" + detail::format_double(t_star));
            break;
        }
        pts.push_back({t, trajectory_at(model, t)});
    }
    if (pts.size() < 2 && singular)
        throw DomainError("fewer than 2 grid points precede the singularity at t*=" +
                          detail::format_double(t_star));
    if (pts.size() < 2)
        throw ConfigError("projection grid needs at least 2 points");
    if (!anchor)
        anchor = Anchor{pts.front().t, pts.front().value};
    if (label.empty())
        label = std::string(to_string(model.kind));
    return Projection{TimeSeries(std::move(pts), std::move(label), model.unit), std::move(model),
                      std::move(feats), *anchor, std::move(warnings)};
}

/// One report year across all scenarios.
struct ScenarioRow
{
    double year = 0.0;
    std::vector<std::optional<double>> values;  // per scenario; empty past a singularity
    std::optional<double> relative_spread;       // (max - min) / min, with >= 2 values
    std::optional<bool> indistinguishable;
};

struct ScenarioReport
{
    std::vector<std::string> names;
    std::vector<Model> models;
    std::vector<Anchor> anchors;
    std::vector<Features> features;
    std::vector<ScenarioRow> rows;
    double threshold = 0.02;
};

inline constexpr double kDefaultIndistinguishable = 0.02;

/// Tabulates projections at the report years. Years where every pair of
/// scenarios differs by less than `threshold` (relative to the smaller
/// value) are marked indistinguishable.
inline ScenarioReport compare_scenarios(std::span<const Projection> projections,
                                        std::span<const double> report_years,
                                        double threshold = kDefaultIndistinguishable)
{
    if (projections.empty())
        throw ValidationError("no scenarios to compare");
    for (const auto& p : projections)
        if (p.model.unit != projections.front().model.unit)
            throw ValidationError("unit mismatch between scenarios: '" + p.model.unit + "' vs '" +
                                  projections.front().model.unit + "'");

    ScenarioReport rep;
    rep.threshold = threshold;
    for (const auto& p : projections) {
        rep.names.push_back(p.series.label());
        rep.models.push_back(p.model);
        rep.anchors.push_back(p.anchor);
        rep.features.push_back(p.features);
    }
    for (double year : report_years) {
        ScenarioRow row;
        row.year = year;
        for (const auto& p : projections) {
            try {
                row.values.push_back(trajectory_at(p.model, year));
            } catch (const DomainError&) {
                row.values.push_back(std::nullopt);
            }
        }
        std::vector<double> present;
        for (const auto& v : row.values)
            if (v)
                present.push_back(*v);
        if (projections.size() >= 2 && present.size() == row.values.size()) {
            const auto [lo, hi] = std::minmax_element(present.begin(), present.end());
            row.relative_spread = (*hi - *lo) / std::abs(*lo);
            row.indistinguishable = *row.relative_spread < threshold;
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace growth

#endif  // GROWTH_FORECAST_HPP
