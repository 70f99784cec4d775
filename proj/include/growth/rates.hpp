#pragma once
#ifndef GROWTH_RATES_HPP
#define GROWTH_RATES_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "growth/detail/text.hpp"
#include "growth/error.hpp"
#include "growth/lsq.hpp"
#include "growth/timeseries.hpp"

namespace growth {

enum class RateMethod
{
    DIRECT,
    REFINED
};

inline std::string_view to_string(RateMethod m)
{
    return m == RateMethod::DIRECT ? "direct" : "refined";
}

/// Empirical growth rate R = (1/S) dS/dt at time t, with the size S there.
struct RatePoint
{
    double t = 0.0;
    double rate = 0.0;
    double size = 0.0;
};

/// Ordered empirical growth rates.
///
/// `transform` records whether the rates are those of S itself or of ln S or
/// 1/S; in the latter case `size` carries F(S), not S.
class RateSeries
{
  public:
    RateSeries(std::vector<RatePoint> points, std::string source_label, RateMethod method,
               std::optional<TransformKind> transform = std::nullopt, std::string unit = {})
        : points_(std::move(points)), label_(std::move(source_label)), method_(method),
          transform_(transform), unit_(std::move(unit))
    {
        if (points_.empty())
            throw ValidationError("rate series is empty");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (!std::isfinite(points_[i].t) || !std::isfinite(points_[i].rate))
                throw ValidationError("non-finite rate at index " + std::to_string(i));
            if (i > 0 && !(points_[i].t > points_[i - 1].t))
                throw ValidationError("rate times not strictly increasing at index " +
                                      std::to_string(i));
        }
    }

    std::span<const RatePoint> points() const& noexcept { return points_; }
    std::span<const RatePoint> points() && = delete;  // would dangle
    std::size_t size() const noexcept { return points_.size(); }
    const RatePoint& operator[](std::size_t i) const { return points_[i]; }
    const RatePoint& front() const { return points_.front(); }
    const RatePoint& back() const { return points_.back(); }
    const std::string& source_label() const noexcept { return label_; }
    RateMethod method() const noexcept { return method_; }
    std::optional<TransformKind> transform() const noexcept { return transform_; }
    const std::string& unit() const noexcept { return unit_; }

  private:
    std::vector<RatePoint> points_;
    std::string label_;
    RateMethod method_;
    std::optional<TransformKind> transform_;
    std::string unit_;
};

/// Local polynomial smoother for gradients: `window` points (odd, >= 3),
/// polynomial `degree` (1 <= degree < window).
struct SmoothingConfig
{
    int window = 7;
    int degree = 3;

    void validate() const
    {
        if (window < 3 || window % 2 == 0)
            throw ConfigError("smoothing window must be an odd integer >= 3, got " +
                              std::to_string(window));
        if (degree < 1 || degree >= window)
            throw ConfigError("smoothing degree must satisfy 1 <= degree < window, got " +
                              std::to_string(degree));
    }
};

namespace detail {

inline RateSeries make_rate_series(std::vector<RatePoint> pts, const TimeSeries& ts,
                                   RateMethod method, std::optional<TransformKind> transform)
{
    return RateSeries(std::move(pts), ts.label(), method, transform, ts.unit());
}

inline std::vector<RatePoint> direct_points(const TimeSeries& ts)
{
    std::vector<RatePoint> out;
    out.reserve(ts.size() - 1);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const auto& cur = ts[i];
        const auto& next = ts[i + 1];
        if (cur.value == 0.0)
            throw DomainError("growth rate divides by S=0 at t=" + format_double(cur.t));
        const double r = (next.value - cur.value) / (cur.value * (next.t - cur.t));
        out.push_back({next.t, r, next.value});
    }
    return out;
}

inline std::vector<RatePoint> refined_points(const TimeSeries& ts, const SmoothingConfig& cfg)
{
    cfg.validate();
    const auto n = ts.size();
    const auto w = static_cast<std::size_t>(cfg.window);
    if (n < w)
        throw ValidationError("refined rates need at least " + std::to_string(w) +
                              " points, got " + std::to_string(n));

    std::vector<RatePoint> out;
    out.reserve(n);
    std::vector<double> xs(w);
    std::vector<double> ys(w);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = ts[i];
        if (p.value == 0.0)
            throw DomainError("growth rate divides by S=0 at t=" + format_double(p.t));
        // Centered window, shifted inward at the ends.
        std::size_t lo = i >= w / 2 ? i - w / 2 : 0;
        lo = std::min(lo, n - w);
        for (std::size_t k = 0; k < w; ++k) {
            xs[k] = ts[lo + k].t;
            ys[k] = ts[lo + k].value;
        }
        const PolyFit local = fit_polynomial(xs, ys, cfg.degree);
        out.push_back({p.t, local.derivative(p.t) / p.value, p.value});
    }
    return out;
}

}  // namespace detail

/// Finite-difference rates: R_{i+1} = (S_{i+1} - S_i) / (S_i (t_{i+1} - t_i)),
/// reported at t_{i+1} together with S_{i+1}.
inline RateSeries direct_rates(const TimeSeries& ts)
{
    return detail::make_rate_series(detail::direct_points(ts), ts, RateMethod::DIRECT,
                                     std::nullopt);
}

/// Rates from smoothed gradients: at every point the gradient is the
/// derivative of a least-squares polynomial over the surrounding window.
inline RateSeries refined_rates(const TimeSeries& ts, const SmoothingConfig& cfg = {})
{
    return detail::make_rate_series(detail::refined_points(ts, cfg), ts, RateMethod::REFINED,
                                    std::nullopt);
}

/// Growth rate of F(S) = ln S or 1/S rather than S itself.
inline RateSeries rate_of_transform(const TimeSeries& ts, TransformKind kind, RateMethod method,
                                    const SmoothingConfig& cfg = {})
{
    const TimeSeries f = transform_series(ts, kind);
    auto pts = method == RateMethod::DIRECT ? detail::direct_points(f)
                                            : detail::refined_points(f, cfg);
    return detail::make_rate_series(std::move(pts), f, method, kind);
}

inline RateSeries compute_rates(const TimeSeries& ts, RateMethod method,
                                const SmoothingConfig& cfg = {})
{
    return method == RateMethod::DIRECT ? direct_rates(ts) : refined_rates(ts, cfg);
}

}  // namespace growth

#endif  // GROWTH_RATES_HPP
