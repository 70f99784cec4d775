#pragma once
#ifndef GROWTH_LSQ_HPP
#define GROWTH_LSQ_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "growth/detail/text.hpp"
#include "growth/error.hpp"

namespace growth {

/// Ordinary least-squares straight line y = intercept + slope * x.
struct LineFit
{
    double intercept = 0.0;
    double slope = 0.0;
    double rms_residual = 0.0;
    double r_squared = 1.0;
    std::size_t n_points = 0;
    std::size_t dropped_points = 0;

    double operator()(double x) const noexcept { return intercept + slope * x; }
};

namespace detail {

// Spread below this fraction of the data magnitude counts as constant data.
inline constexpr double kConstantDataTolerance = 1e-10;

inline double shifted_mean(std::span<const double> v)
{
    // Shifting by the first element keeps exactly-constant data exactly constant.
    const double origin = v.front();
    double sum = 0.0;
    for (double x : v)
        sum += x - origin;
    return origin + sum / static_cast<double>(v.size());
}

inline double goodness_of_fit(std::span<const double> ys, double ss_res, double mean)
{
    double ss_tot = 0.0;
    double scale = 0.0;
    for (double y : ys) {
        ss_tot += (y - mean) * (y - mean);
        scale = std::max(scale, std::abs(y));
    }
    const double floor = static_cast<double>(ys.size()) *
                         std::pow(kConstantDataTolerance * scale, 2);
    if (ss_tot <= floor)
        return 1.0;
    return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

}  // namespace detail

/// Fits a line by the closed-form normal equations on centered sums.
///
/// r_squared is 1 - SSres/SStot; data whose spread is below 1e-10 of its
/// magnitude counts as constant and gets r_squared = 1.
inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size())
        throw DegenerateError("x and y differ in length");
    if (xs.size() < 2)
        throw DegenerateError("line fit needs at least 2 points, got " + std::to_string(xs.size()));

    const double mx = detail::shifted_mean(xs);
    const double my = detail::shifted_mean(ys);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        sxx += dx * dx;
        sxy += dx * (ys[i] - my);
    }
    if (sxx == 0.0)
        throw DegenerateError("line fit needs at least 2 distinct x values");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.n_points = xs.size();

    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        // Residual in centered form avoids cancellation against a large intercept.
        const double r = (ys[i] - my) - fit.slope * (xs[i] - mx);
        ss_res += r * r;
    }
    fit.rms_residual = std::sqrt(ss_res / static_cast<double>(xs.size()));
    fit.r_squared = detail::goodness_of_fit(ys, ss_res, my);
    return fit;
}

/// Least-squares polynomial of fixed degree.
///
/// Internally the abscissa is mapped to u = (x - center) / scale in [-1, 1];
/// the coefficients in u are what gets evaluated and integrated, so a
/// degree-6 law over calendar years stays well conditioned. Raw coefficients
/// in x are available through coefficients().
class PolyFit
{
  public:
    PolyFit() = default;

    PolyFit(std::vector<double> scaled_coefficients, double center, double scale, double x_min,
            double x_max, double rms_residual = 0.0)
        : coef_(std::move(scaled_coefficients)), center_(center), scale_(scale), x_min_(x_min),
          x_max_(x_max), rms_(rms_residual)
    {
        if (coef_.size() < 2)
            throw ValidationError("polynomial needs degree >= 1");
        if (!(scale_ > 0.0))
            throw ValidationError("polynomial scale must be positive");
        if (!(x_min_ <= x_max_))
            throw ValidationError("polynomial range is empty");
    }

    /// Wraps published raw coefficients a_0..a_d, valid on [x_min, x_max].
    static PolyFit from_coefficients(std::vector<double> raw, double x_min, double x_max)
    {
        return PolyFit(std::move(raw), 0.0, 1.0, x_min, x_max);
    }

    int degree() const noexcept { return static_cast<int>(coef_.size()) - 1; }
    double center() const noexcept { return center_; }
    double scale() const noexcept { return scale_; }
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    double rms_residual() const noexcept { return rms_; }
    const std::vector<double>& scaled_coefficients() const noexcept { return coef_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

    double operator()(double x) const noexcept
    {
        const double u = (x - center_) / scale_;
        double acc = 0.0;
        for (auto it = coef_.rbegin(); it != coef_.rend(); ++it)
            acc = acc * u + *it;
        return acc;
    }

    double derivative(double x) const noexcept
    {
        const double u = (x - center_) / scale_;
        double acc = 0.0;
        for (std::size_t k = coef_.size() - 1; k >= 1; --k)
            acc = acc * u + static_cast<double>(k) * coef_[k];
        return acc / scale_;
    }

    /// Exact definite integral of the polynomial from x0 to x1.
    double integral(double x0, double x1) const noexcept
    {
        auto antiderivative = [&](double u) {
            double acc = 0.0;
            for (std::size_t k = coef_.size(); k-- > 0;)
                acc = acc * u + coef_[k] / static_cast<double>(k + 1);
            return acc * u;
        };
        const double u0 = (x0 - center_) / scale_;
        const double u1 = (x1 - center_) / scale_;
        return scale_ * (antiderivative(u1) - antiderivative(u0));
    }

    /// Coefficients a_0..a_d of the same polynomial in the raw variable x.
    std::vector<double> coefficients() const
    {
        const std::size_t n = coef_.size();
        std::vector<double> raw(n, 0.0);
        // ((x - m)/s)^k expanded binomially.
        for (std::size_t k = 0; k < n; ++k) {
            const double ck = coef_[k] / std::pow(scale_, static_cast<double>(k));
            double binom = 1.0;
            for (std::size_t j = 0; j <= k; ++j) {
                raw[j] += ck * binom * std::pow(-center_, static_cast<double>(k - j));
                binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
            }
        }
        return raw;
    }

  private:
    std::vector<double> coef_;
    double center_ = 0.0;
    double scale_ = 1.0;
    double x_min_ = 0.0;
    double x_max_ = 0.0;
    double rms_ = 0.0;
    std::vector<std::string> warnings_;
};

/// Least-squares polynomial fit via Householder QR on the scaled design.
inline PolyFit fit_polynomial(std::span<const double> xs, std::span<const double> ys, int degree)
{
    if (xs.size() != ys.size())
        throw DegenerateError("x and y differ in length");
    if (degree < 1)
        throw DegenerateError("polynomial degree must be >= 1");
    std::vector<double> distinct(xs.begin(), xs.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const auto needed = static_cast<std::size_t>(degree) + 1;
    if (distinct.size() < needed)
        throw DegenerateError("degree " + std::to_string(degree) + " needs " +
                              std::to_string(needed) + " distinct x values, got " +
                              std::to_string(distinct.size()));

    const double lo = distinct.front();
    const double hi = distinct.back();
    const double center = 0.5 * (lo + hi);
    const double scale = 0.5 * (hi - lo);

    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd design(n, degree + 1);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = (xs[i] - center) / scale;
        double p = 1.0;
        for (int k = 0; k <= degree; ++k) {
            design(i, k) = p;
            p *= u;
        }
        rhs(i) = ys[i];
    }
    Eigen::VectorXd c = design.householderQr().solve(rhs);
    const Eigen::VectorXd resid = design * c - rhs;
    const double rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));

    PolyFit fit(std::vector<double>(c.data(), c.data() + c.size()), center, scale, lo, hi, rms);
    if (distinct.size() == needed)
        fit.add_warning("interpolation regime: degree " + std::to_string(degree) +
                        " through " + std::to_string(distinct.size()) + " points");
    if (degree >= 4)
        fit.add_warning("degree " + std::to_string(degree) +
                        " rate laws depend strongly on the data range; integration outside [" +
                        detail::format_double(lo) + ", " + detail::format_double(hi) +
                        "] is refused");
    return fit;
}

}  // namespace growth

#endif  // GROWTH_LSQ_HPP
