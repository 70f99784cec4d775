#pragma once
#ifndef GROWTH_FITTING_HPP
#define GROWTH_FITTING_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "growth/detail/text.hpp"
#include "growth/error.hpp"
#include "growth/lsq.hpp"
#include "growth/models.hpp"
#include "growth/rates.hpp"
#include "growth/timeseries.hpp"

namespace growth {

/// Coordinates under which a model family becomes a straight line.
enum class LinearizationKind
{
    R_VS_T,           // R = a + b t                 -> LINEAR_T
    R_VS_S,           // R = a + b S                 -> LINEAR_S
    RECIP_R_VS_T,     // 1/R = a + b t               -> RATE_RECIP_LINEAR
    LN_R_VS_T,        // ln R = a + b t              -> RATE_LN_LINEAR
    SHIFTED_LN_VS_T,  // ln(a - 1/R) = ln b - r t    -> RATE_SHIFTED_EXP
    RECIP_S_VS_T      // 1/S = C - b t               -> HYPERBOLIC
};

inline std::string_view to_string(LinearizationKind k)
{
    switch (k) {
    case LinearizationKind::R_VS_T: return "r-vs-t";
    case LinearizationKind::R_VS_S: return "r-vs-s";
    case LinearizationKind::RECIP_R_VS_T: return "recip-r-vs-t";
    case LinearizationKind::LN_R_VS_T: return "ln-r-vs-t";
    case LinearizationKind::SHIFTED_LN_VS_T: return "shifted-ln";
    case LinearizationKind::RECIP_S_VS_T: return "recip-s-vs-t";
    }
    return "?";
}

inline LinearizationKind linearization_from_string(std::string_view s)
{
    for (auto k : {LinearizationKind::R_VS_T, LinearizationKind::R_VS_S,
                   LinearizationKind::RECIP_R_VS_T, LinearizationKind::LN_R_VS_T,
                   LinearizationKind::SHIFTED_LN_VS_T, LinearizationKind::RECIP_S_VS_T})
        if (to_string(k) == s)
            return k;
    throw ConfigError("unknown linearization '" + std::string(s) + "'");
}

/// A linearization choice; SHIFTED_LN_VS_T carries the shift a of its rate law.
struct Linearization
{
    LinearizationKind kind = LinearizationKind::R_VS_T;
    std::optional<double> aux_a;

    static Linearization shifted(double a) { return {LinearizationKind::SHIFTED_LN_VS_T, a}; }
};

struct LinearizedData
{
    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t dropped = 0;
    std::vector<std::string> warnings;
};

struct FitOptions
{
    std::optional<std::pair<double, double>> t_range;
    double t_ref = 0.0;
};

struct FitReport
{
    Linearization linearization;
    LineFit line;
    Model model;
    std::vector<std::string> warnings;
};

namespace detail {

inline bool in_range(double t, const FitOptions& opts)
{
    return !opts.t_range || (t >= opts.t_range->first && t <= opts.t_range->second);
}

inline void require_points(const LinearizedData& d, std::string_view what)
{
    if (d.xs.empty())
        throw DegenerateError(std::string(what) + ": every point was dropped by the linearization");
    if (d.xs.size() < 2)
        throw DegenerateError(std::string(what) + ": fewer than 2 points remain after linearization");
}

}  // namespace detail

/// Maps rates to the coordinates of `lin`, dropping points where the transform
/// is undefined (R = 0 under 1/R, R <= 0 under ln R, a - 1/R <= 0).
inline LinearizedData linearize(const RateSeries& rs, const Linearization& lin,
                                const FitOptions& opts = {})
{
    LinearizedData out;
    if (lin.kind == LinearizationKind::RECIP_S_VS_T)
        throw ConfigError("recip-s-vs-t linearizes the size series, not its rates");
    if (lin.kind == LinearizationKind::SHIFTED_LN_VS_T && !lin.aux_a)
        throw ConfigError("shifted-ln linearization needs the auxiliary parameter a");

    for (const auto& p : rs.points()) {
        if (!detail::in_range(p.t, opts))
            continue;
        const double x = p.t - opts.t_ref;
        switch (lin.kind) {
        case LinearizationKind::R_VS_T:
            out.xs.push_back(x);
            out.ys.push_back(p.rate);
            break;
        case LinearizationKind::R_VS_S:
            out.xs.push_back(p.size);
            out.ys.push_back(p.rate);
            break;
        case LinearizationKind::RECIP_R_VS_T:
            if (p.rate == 0.0) {
                ++out.dropped;
                continue;
            }
            out.xs.push_back(x);
            out.ys.push_back(1.0 / p.rate);
            break;
        case LinearizationKind::LN_R_VS_T:
            if (!(p.rate > 0.0)) {
                ++out.dropped;
                continue;
            }
            out.xs.push_back(x);
            out.ys.push_back(std::log(p.rate));
            break;
        case LinearizationKind::SHIFTED_LN_VS_T: {
            const double shifted = p.rate == 0.0 ? 0.0 : *lin.aux_a - 1.0 / p.rate;
            if (p.rate == 0.0 || !(shifted > 0.0)) {
                ++out.dropped;
                continue;
            }
            out.xs.push_back(x);
            out.ys.push_back(std::log(shifted));
            break;
        }
        case LinearizationKind::RECIP_S_VS_T: break;
        }
    }
    if (out.dropped > 0)
        out.warnings.push_back(std::to_string(out.dropped) + " point(s) dropped by " +
                               std::string(to_string(lin.kind)) + " (transform undefined)");
    if (out.xs.empty())
        throw DegenerateError(std::string(to_string(lin.kind)) +
                              ": every point was dropped by the linearization");
    return out;
}

/// Reciprocal of the size against time: the hyperbolic signature.
inline LinearizedData linearize_series(const TimeSeries& ts, const FitOptions& opts = {})
{
    LinearizedData out;
    for (const auto& p : ts.points()) {
        if (!detail::in_range(p.t, opts))
            continue;
        if (p.value == 0.0) {
            ++out.dropped;
            continue;
        }
        out.xs.push_back(p.t - opts.t_ref);
        out.ys.push_back(1.0 / p.value);
    }
    if (out.dropped > 0)
        out.warnings.push_back(std::to_string(out.dropped) + " zero-size point(s) dropped");
    if (out.xs.empty())
        throw DegenerateError("recip-s-vs-t: every point was dropped");
    return out;
}

namespace detail {

inline void extrapolation_warning(const LinearizedData& d, const LineFit& line,
                                  std::vector<std::string>& warnings)
{
    const auto [lo, hi] = std::minmax_element(d.xs.begin(), d.xs.end());
    const double span = *hi - *lo;
    if (std::abs(line.slope) * span > 10.0 * std::abs(line.intercept))
        warnings.push_back("ill-conditioned extrapolation: |slope| * span exceeds 10x |intercept|");
}

inline FitReport finish_report(Linearization lin, const LinearizedData& d, Model model)
{
    FitReport rep;
    rep.linearization = lin;
    rep.line = fit_line(d.xs, d.ys);
    rep.line.dropped_points = d.dropped;
    rep.warnings = d.warnings;
    rep.model = std::move(model);
    extrapolation_warning(d, rep.line, rep.warnings);
    return rep;
}

}  // namespace detail

/// Fits a straight line in the coordinates of `lin` and maps it to the model
/// of the matching family. Rates of ln S (rate_of_transform with LOG) map to
/// the LOGLOG kinds. The model is returned un-normalized, except HYPERBOLIC
/// whose fitted line is the reciprocal trajectory itself.
inline FitReport fit_rate_model(const RateSeries& rs, const Linearization& lin,
                                const FitOptions& opts = {})
{
    const auto data = linearize(rs, lin, opts);
    detail::require_points(data, to_string(lin.kind));
    FitReport rep = detail::finish_report(lin, data, Model{});
    const auto& line = rep.line;

    Model& m = rep.model;
    m.t_ref = opts.t_ref;
    m.unit = rs.unit();
    const bool of_log = rs.transform() == TransformKind::LOG;
    if (rs.transform() == TransformKind::RECIPROCAL)
        rep.warnings.push_back("rates of 1/S have no catalog family; parameters describe 1/S");

    switch (lin.kind) {
    case LinearizationKind::R_VS_T:
        m.kind = of_log ? ModelKind::LOGLOG_T : ModelKind::LINEAR_T;
        m.params.a = line.intercept;
        m.params.b = line.slope;
        break;
    case LinearizationKind::R_VS_S:
        m.kind = of_log ? ModelKind::LOGLOG_S : ModelKind::LINEAR_S;
        m.params.a = line.intercept;
        m.params.b = line.slope;
        if (m.params.a == 0.0)
            throw DegenerateError("r-vs-s fit has zero intercept; use the hyperbolic family");
        break;
    case LinearizationKind::RECIP_R_VS_T:
        m.kind = ModelKind::RATE_RECIP_LINEAR;
        m.params.a = line.intercept;
        m.params.b = line.slope;
        break;
    case LinearizationKind::LN_R_VS_T:
        // ln R = a' + b t  is  R = e^{a'} e^{b t}.
        m.kind = ModelKind::RATE_LN_LINEAR;
        m.params.a = std::exp(line.intercept);
        m.params.b = line.slope;
        rep.warnings.push_back("ln R = " + detail::format_double(line.intercept) +
                               " + b t stored as R = a e^{b t} with a = e^{intercept}");
        break;
    case LinearizationKind::SHIFTED_LN_VS_T:
        m.kind = ModelKind::RATE_SHIFTED_EXP;
        m.params.a = *lin.aux_a;
        m.params.b = std::exp(line.intercept);
        m.params.r = -line.slope;
        break;
    case LinearizationKind::RECIP_S_VS_T: break;
    }
    if (of_log && lin.kind != LinearizationKind::R_VS_T && lin.kind != LinearizationKind::R_VS_S)
        rep.warnings.push_back("rates of ln S only map to LOGLOG kinds under r-vs-t or r-vs-s");
    validate(m);
    return rep;
}

/// Hyperbolic identification: 1/S = C - b t fitted on the series itself.
inline FitReport fit_series_model(const TimeSeries& ts, const FitOptions& opts = {})
{
    const auto data = linearize_series(ts, opts);
    detail::require_points(data, "recip-s-vs-t");
    Model m;
    m.kind = ModelKind::HYPERBOLIC;
    m.t_ref = opts.t_ref;
    m.unit = ts.unit();
    FitReport rep = detail::finish_report({LinearizationKind::RECIP_S_VS_T, std::nullopt}, data, m);
    rep.model.params.c = rep.line.intercept;
    rep.model.params.b = -rep.line.slope;
    validate(rep.model);
    return rep;
}

/// Constant growth rate (EXP_CONST): the mean rate, as a zero-slope line in t.
inline FitReport fit_constant_rate(const RateSeries& rs, const FitOptions& opts = {})
{
    const auto data = linearize(rs, {LinearizationKind::R_VS_T, std::nullopt}, opts);
    FitReport rep;
    rep.linearization = {LinearizationKind::R_VS_T, std::nullopt};
    const double mean = detail::shifted_mean(data.ys);
    double ss_res = 0.0;
    for (double y : data.ys)
        ss_res += (y - mean) * (y - mean);
    rep.line.intercept = mean;
    rep.line.slope = 0.0;
    rep.line.n_points = data.ys.size();
    rep.line.rms_residual = std::sqrt(ss_res / static_cast<double>(data.ys.size()));
    rep.line.r_squared = detail::goodness_of_fit(data.ys, ss_res, mean);
    // A constant explains none of the variance of non-constant data.
    if (rep.line.r_squared < 1.0)
        rep.line.r_squared = 0.0;
    rep.model.kind = ModelKind::EXP_CONST;
    rep.model.params.a = mean;
    rep.model.t_ref = opts.t_ref;
    rep.model.unit = rs.unit();
    return rep;
}

/// Picks the shift a of RATE_SHIFTED_EXP by maximizing r^2 of the shifted-ln
/// line over [lo, hi]: a coarse grid followed by golden-section refinement.
inline double scan_aux_a(const RateSeries& rs, double lo, double hi, const FitOptions& opts = {},
                         int grid = 200)
{
    if (!(lo < hi))
        throw ConfigError("aux-a scan needs lo < hi");
    auto score = [&](double a) {
        try {
            const auto d = linearize(rs, Linearization::shifted(a), opts);
            if (d.xs.size() < 3)
                return -1.0;
            // Dropping points must not buy a better fit.
            const double kept = static_cast<double>(d.xs.size()) /
                                static_cast<double>(d.xs.size() + d.dropped);
            return fit_line(d.xs, d.ys).r_squared * kept;
        } catch (const Error&) {
            return -1.0;
        }
    };
    double best_a = lo;
    double best = -2.0;
    const double step = (hi - lo) / grid;
    for (int i = 0; i <= grid; ++i) {
        const double a = lo + step * i;
        const double s = score(a);
        if (s > best) {
            best = s;
            best_a = a;
        }
    }
    if (best < 0.0)
        throw DegenerateError("aux-a scan found no admissible shift in [" +
                              detail::format_double(lo) + ", " + detail::format_double(hi) + "]");
    double left = std::max(lo, best_a - step);
    double right = std::min(hi, best_a + step);
    constexpr double kInvPhi = 0.6180339887498949;
    for (int it = 0; it < 80 && right - left > 1e-12 * (std::abs(best_a) + 1.0); ++it) {
        const double m1 = right - kInvPhi * (right - left);
        const double m2 = left + kInvPhi * (right - left);
        if (score(m1) >= score(m2))
            right = m2;
        else
            left = m1;
    }
    const double refined = 0.5 * (left + right);
    return score(refined) >= best ? refined : best_a;
}

}  // namespace growth

#endif  // GROWTH_FITTING_HPP
