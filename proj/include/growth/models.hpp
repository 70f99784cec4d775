#pragma once
#ifndef GROWTH_MODELS_HPP
#define GROWTH_MODELS_HPP

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "growth/detail/text.hpp"
#include "growth/error.hpp"

namespace growth {

// The nine rate laws and their closed-form trajectories. With t' = t - t_ref:
//
//   EXP_CONST          R = a                      S = C e^{a t'}
//   LINEAR_T           R = a + b t'               S = C exp(a t' + b t'^2 / 2)
//   HYPERBOLIC         R = b S                    S = 1 / (C - b t')
//   LINEAR_S           R = a + b S                S = 1 / (C e^{-a t'} - b/a)
//   LOGLOG_T           R_F = a + b t',  F = ln S  F = C exp(a t' + b t'^2 / 2)
//   LOGLOG_S           R_F = a + b F,   F = ln S  F = 1 / (C e^{-a t'} - b/a)
//   RATE_RECIP_LINEAR  1/R = a + b t'             S = C (a + b t')^{1/b}
//   RATE_LN_LINEAR     R = a e^{b t'}             S = C exp((a/b) e^{b t'})
//   RATE_SHIFTED_EXP   R = 1 / (a - b e^{-r t'})  S = C exp(t'/a + ln(a - b e^{-r t'}) / (r a))
enum class ModelKind
{
    EXP_CONST,
    LINEAR_T,
    HYPERBOLIC,
    LINEAR_S,
    LOGLOG_T,
    LOGLOG_S,
    RATE_RECIP_LINEAR,
    RATE_LN_LINEAR,
    RATE_SHIFTED_EXP
};

inline constexpr std::array<ModelKind, 9> kAllModelKinds = {
    ModelKind::EXP_CONST,         ModelKind::LINEAR_T,       ModelKind::HYPERBOLIC,
    ModelKind::LINEAR_S,          ModelKind::LOGLOG_T,       ModelKind::LOGLOG_S,
    ModelKind::RATE_RECIP_LINEAR, ModelKind::RATE_LN_LINEAR, ModelKind::RATE_SHIFTED_EXP};

inline std::string_view to_string(ModelKind k)
{
    switch (k) {
    case ModelKind::EXP_CONST: return "EXP_CONST";
    case ModelKind::LINEAR_T: return "LINEAR_T";
    case ModelKind::HYPERBOLIC: return "HYPERBOLIC";
    case ModelKind::LINEAR_S: return "LINEAR_S";
    case ModelKind::LOGLOG_T: return "LOGLOG_T";
    case ModelKind::LOGLOG_S: return "LOGLOG_S";
    case ModelKind::RATE_RECIP_LINEAR: return "RATE_RECIP_LINEAR";
    case ModelKind::RATE_LN_LINEAR: return "RATE_LN_LINEAR";
    case ModelKind::RATE_SHIFTED_EXP: return "RATE_SHIFTED_EXP";
    }
    return "?";
}

inline ModelKind model_kind_from_string(std::string_view s)
{
    for (auto k : kAllModelKinds)
        if (to_string(k) == s)
            return k;
    throw ConfigError("unknown model kind '" + std::string(s) + "'");
}

/// Kinds whose constant C multiplies S. For these Params::c stores ln C, so
/// anchors in calendar years (C ~ e^{-3000}) stay representable.
constexpr bool has_log_constant(ModelKind k) noexcept
{
    return k == ModelKind::EXP_CONST || k == ModelKind::LINEAR_T ||
           k == ModelKind::RATE_RECIP_LINEAR || k == ModelKind::RATE_LN_LINEAR ||
           k == ModelKind::RATE_SHIFTED_EXP;
}

/// Kinds whose rate law needs the current size (or a normalized model).
constexpr bool rate_needs_size(ModelKind k) noexcept
{
    return k == ModelKind::HYPERBOLIC || k == ModelKind::LINEAR_S || k == ModelKind::LOGLOG_T ||
           k == ModelKind::LOGLOG_S;
}

/// Kinds whose parameters a, b are tied to the unit of S.
constexpr bool is_size_dependent(ModelKind k) noexcept
{
    return k == ModelKind::HYPERBOLIC || k == ModelKind::LINEAR_S || k == ModelKind::LOGLOG_S;
}

struct Params
{
    double a = 0.0;
    double b = 0.0;
    double r = 0.0;  // RATE_SHIFTED_EXP only
    std::optional<double> c;  // normalization constant; ln C when has_log_constant(kind)
};

struct Model
{
    ModelKind kind = ModelKind::EXP_CONST;
    Params params;
    double t_ref = 0.0;
    std::string unit;

    bool normalized() const noexcept { return params.c.has_value(); }

    /// Sets the normalization constant from its literal value C.
    Model with_constant(double literal_c) const
    {
        Model m = *this;
        if (has_log_constant(kind)) {
            if (!(literal_c > 0.0))
                throw DomainError("constant C of " + std::string(to_string(kind)) +
                                  " must be positive");
            m.params.c = std::log(literal_c);
        } else {
            m.params.c = literal_c;
        }
        return m;
    }

    /// Literal C; may under- or overflow for log-constant kinds.
    std::optional<double> constant() const
    {
        if (!params.c)
            return std::nullopt;
        return has_log_constant(kind) ? std::exp(*params.c) : *params.c;
    }
};

inline void validate(const Model& m)
{
    const auto& p = m.params;
    auto need = [&](bool ok, const char* what) {
        if (!ok)
            throw ValidationError(std::string(to_string(m.kind)) + ": " + what);
    };
    need(std::isfinite(p.a) && std::isfinite(p.b) && std::isfinite(p.r), "parameters must be finite");
    need(std::isfinite(m.t_ref), "t_ref must be finite");
    need(!p.c || std::isfinite(*p.c), "C must be finite");
    switch (m.kind) {
    case ModelKind::HYPERBOLIC: need(p.b != 0.0, "b must be nonzero"); break;
    case ModelKind::LINEAR_S:
    case ModelKind::LOGLOG_S: need(p.a != 0.0, "a must be nonzero"); break;
    case ModelKind::RATE_RECIP_LINEAR:
        need(p.b != 0.0 || p.a != 0.0, "a and b cannot both be zero");
        break;
    case ModelKind::RATE_SHIFTED_EXP:
        need(p.a != 0.0, "a must be nonzero");
        need(p.r != 0.0, "r must be nonzero");
        break;
    default: break;
    }
}

enum class FeatureKind
{
    MAXIMUM,
    ASYMPTOTE,
    SINGULARITY,
    NONE
};

inline std::string_view to_string(FeatureKind k)
{
    switch (k) {
    case FeatureKind::MAXIMUM: return "MAXIMUM";
    case FeatureKind::ASYMPTOTE: return "ASYMPTOTE";
    case FeatureKind::SINGULARITY: return "SINGULARITY";
    case FeatureKind::NONE: return "NONE";
    }
    return "?";
}

/// The critical point of a trajectory. MAXIMUM carries t_star and s_star,
/// ASYMPTOTE only s_star, SINGULARITY only t_star.
struct Features
{
    FeatureKind kind = FeatureKind::NONE;
    std::optional<double> t_star;
    std::optional<double> s_star;
    std::optional<double> asymptotic_rate;  // RATE_SHIFTED_EXP
    std::string note;
};

namespace detail {

inline constexpr double kSingularityWindow = 1e-9;

inline std::string kind_name(const Model& m) { return std::string(to_string(m.kind)); }

inline double require_c(const Model& m)
{
    if (!m.params.c)
        throw ValidationError(kind_name(m) + " model is not normalized (C unset)");
    return *m.params.c;
}

// ln D for D = C e^{-a t} + k, the denominator of the LINEAR_S family.
inline double log_logistic_denominator(double c, double a, double k, double t, const Model& m)
{
    if (c == 0.0) {
        if (!(k > 0.0))
            throw DomainError(kind_name(m) + ": trajectory undefined (denominator <= 0)");
        return std::log(k);
    }
    const double lt = std::log(std::abs(c)) - a * t;
    if (lt < 700.0) {
        const double d = std::copysign(std::exp(lt), c) + k;
        if (!(d > 0.0))
            throw DomainError(kind_name(m) + ": trajectory undefined at t'=" + format_double(t) +
                              " (denominator <= 0)");
        return std::log(d);
    }
    if (c < 0.0)
        throw DomainError(kind_name(m) + ": trajectory undefined (denominator <= 0)");
    return lt + std::log1p(k * std::exp(-lt));
}

// Denominator D itself, allowing either sign (LOGLOG_S puts it under F = 1/D).
inline double logistic_denominator(double c, double a, double k, double t)
{
    return c == 0.0 ? k : c * std::exp(-a * t) + k;
}

/// Forward-time singularity of the model in shifted time, when it has one.
inline std::optional<double> singular_tau(const Model& m)
{
    const auto& p = m.params;
    switch (m.kind) {
    case ModelKind::HYPERBOLIC:
        if (p.b > 0.0)
            return require_c(m) / p.b;
        return std::nullopt;
    case ModelKind::LINEAR_S:
    case ModelKind::LOGLOG_S: {
        if (!(p.b > 0.0))
            return std::nullopt;
        const double c = require_c(m);
        if (!(p.a * c > 0.0))
            return std::nullopt;
        return -std::log(p.b / (p.a * c)) / p.a;
    }
    case ModelKind::RATE_RECIP_LINEAR:
        if (p.b < 0.0)
            return -p.a / p.b;
        return std::nullopt;
    case ModelKind::RATE_SHIFTED_EXP:
        if (p.a / p.b > 0.0 && p.r * p.b < 0.0)
            return -std::log(p.a / p.b) / p.r;
        return std::nullopt;
    default: return std::nullopt;
    }
}

inline void check_singularity(const Model& m, double tau)
{
    const auto ts = singular_tau(m);
    if (!ts)
        return;
    if (std::abs(tau - *ts) < kSingularityWindow)
        throw SingularityError(kind_name(m) + ": evaluation at singularity t*=" +
                                   format_double(*ts + m.t_ref),
                               *ts + m.t_ref);
    if (tau > *ts)
        throw DomainError(kind_name(m) + ": t=" + format_double(tau + m.t_ref) +
                          " lies beyond the singularity at t*=" + format_double(*ts + m.t_ref));
}

}  // namespace detail

/// ln S(t) of the closed-form trajectory. Requires a normalized model.
inline double log_trajectory_at(const Model& m, double t)
{
    validate(m);
    const auto& p = m.params;
    const double tau = t - m.t_ref;
    const double c = detail::require_c(m);
    detail::check_singularity(m, tau);

    double ln_s = 0.0;
    switch (m.kind) {
    case ModelKind::EXP_CONST: ln_s = c + p.a * tau; break;
    case ModelKind::LINEAR_T: ln_s = c + tau * (p.a + 0.5 * p.b * tau); break;
    case ModelKind::HYPERBOLIC: {
        const double den = c - p.b * tau;
        if (!(den > 0.0))
            throw DomainError("HYPERBOLIC: trajectory undefined at t=" + detail::format_double(t));
        ln_s = -std::log(den);
        break;
    }
    case ModelKind::LINEAR_S:
        ln_s = -detail::log_logistic_denominator(c, p.a, -p.b / p.a, tau, m);
        break;
    case ModelKind::LOGLOG_T:
        ln_s = c == 0.0 ? 0.0 : c * std::exp(tau * (p.a + 0.5 * p.b * tau));
        break;
    case ModelKind::LOGLOG_S: {
        const double d = detail::logistic_denominator(c, p.a, -p.b / p.a, tau);
        if (d == 0.0)
            throw SingularityError("LOGLOG_S: ln S diverges at t=" + detail::format_double(t), t);
        ln_s = 1.0 / d;
        break;
    }
    case ModelKind::RATE_RECIP_LINEAR: {
        if (p.b == 0.0) {
            ln_s = c + tau / p.a;
            break;
        }
        const double base = p.a + p.b * tau;
        if (!(base > 0.0))
            throw DomainError("RATE_RECIP_LINEAR: a + b t' <= 0 at t=" + detail::format_double(t));
        ln_s = c + std::log(base) / p.b;
        break;
    }
    case ModelKind::RATE_LN_LINEAR:
        ln_s = p.b == 0.0 ? c + p.a * tau : c + (p.a / p.b) * std::exp(p.b * tau);
        break;
    case ModelKind::RATE_SHIFTED_EXP: {
        const double x = p.a - p.b * std::exp(-p.r * tau);
        if (!(x > 0.0))
            throw DomainError("RATE_SHIFTED_EXP: a - b e^{-r t'} <= 0 at t=" +
                              detail::format_double(t));
        ln_s = c + tau / p.a + std::log(x) / (p.r * p.a);
        break;
    }
    }
    if (std::isnan(ln_s))
        throw DomainError(detail::kind_name(m) + ": trajectory undefined at t=" +
                          detail::format_double(t));
    return ln_s;
}

/// S(t); exponentiation happens only here, after the log-space evaluation.
inline double trajectory_at(const Model& m, double t)
{
    const double ln_s = log_trajectory_at(m, t);
    const double s = std::exp(ln_s);
    if (!std::isfinite(s))
        throw DomainError(detail::kind_name(m) + ": S overflows at t=" + detail::format_double(t) +
                          " (ln S = " + detail::format_double(ln_s) + ")");
    return s;
}

/// Growth rate (1/S) dS/dt. Size-dependent kinds use `s` when given and the
/// normalized trajectory otherwise. LOGLOG kinds return the rate of S, i.e.
/// R_F * ln S.
inline double rate_at(const Model& m, double t, std::optional<double> s = std::nullopt)
{
    validate(m);
    const auto& p = m.params;
    const double tau = t - m.t_ref;

    auto size = [&]() {
        if (s)
            return *s;
        if (!m.normalized())
            throw ValidationError(detail::kind_name(m) +
                                  ": rate needs the size S or a normalized model");
        return trajectory_at(m, t);
    };
    auto log_size = [&]() {
        if (s) {
            if (!(*s > 0.0))
                throw DomainError(detail::kind_name(m) + ": S must be positive");
            return std::log(*s);
        }
        if (!m.normalized())
            throw ValidationError(detail::kind_name(m) +
                                  ": rate needs the size S or a normalized model");
        return log_trajectory_at(m, t);
    };
    auto singular_rate = [&](double denom, double scale) {
        if (std::abs(denom) <= 1e-14 * scale)
            throw SingularityError(detail::kind_name(m) + ": rate is singular at t=" +
                                       detail::format_double(t),
                                   t);
    };

    switch (m.kind) {
    case ModelKind::EXP_CONST: return p.a;
    case ModelKind::LINEAR_T: return p.a + p.b * tau;
    case ModelKind::HYPERBOLIC: return p.b * size();
    case ModelKind::LINEAR_S: return p.a + p.b * size();
    case ModelKind::LOGLOG_T: return (p.a + p.b * tau) * log_size();
    case ModelKind::LOGLOG_S: {
        const double f = log_size();
        return (p.a + p.b * f) * f;
    }
    case ModelKind::RATE_RECIP_LINEAR: {
        const double base = p.a + p.b * tau;
        singular_rate(base, std::abs(p.a) + std::abs(p.b * tau));
        return 1.0 / base;
    }
    case ModelKind::RATE_LN_LINEAR: return p.a * std::exp(p.b * tau);
    case ModelKind::RATE_SHIFTED_EXP: {
        const double shifted = p.b * std::exp(-p.r * tau);
        const double x = p.a - shifted;
        singular_rate(x, std::abs(p.a) + std::abs(shifted));
        return 1.0 / x;
    }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

namespace detail {

// S at a maximum; +inf (with a note) when it exceeds the double range.
inline double peak_size(const Model& m, double t, std::string& note)
{
    const double ln_s = log_trajectory_at(m, t);
    const double s = std::exp(ln_s);
    if (!std::isfinite(s))
        note = "S* overflows double precision (ln S* = " + format_double(ln_s) + ")";
    return s;
}

}  // namespace detail

/// The model's maximum, asymptote or singularity (in calendar time).
inline Features features(const Model& m)
{
    validate(m);
    const auto& p = m.params;
    Features f;
    auto at = [&](double tau) { return tau + m.t_ref; };

    switch (m.kind) {
    case ModelKind::EXP_CONST: break;
    case ModelKind::LINEAR_T:
        if (p.b < 0.0) {
            f.kind = FeatureKind::MAXIMUM;
            f.t_star = at(-p.a / p.b);
            f.s_star = detail::peak_size(m, *f.t_star, f.note);
        } else {
            f.note = "rate never returns to zero in forward time";
        }
        break;
    case ModelKind::HYPERBOLIC:
    case ModelKind::RATE_RECIP_LINEAR:
        if (auto ts = detail::singular_tau(m)) {
            f.kind = FeatureKind::SINGULARITY;
            f.t_star = at(*ts);
        }
        break;
    case ModelKind::LINEAR_S:
    case ModelKind::LOGLOG_S:
        if (p.a > 0.0 && p.b < 0.0) {
            f.kind = FeatureKind::ASYMPTOTE;
            const double limit = p.a / std::abs(p.b);
            f.s_star = m.kind == ModelKind::LINEAR_S ? limit : std::exp(limit);
        } else if (p.b > 0.0) {
            if (auto ts = detail::singular_tau(m)) {
                f.kind = FeatureKind::SINGULARITY;
                f.t_star = at(*ts);
            } else {
                f.note = "pseudo-hyperbolic denominator never reaches zero (a*C <= 0)";
            }
        }
        break;
    case ModelKind::LOGLOG_T:
        if (p.b < 0.0 && detail::require_c(m) > 0.0) {
            f.kind = FeatureKind::MAXIMUM;
            f.t_star = at(-p.a / p.b);
            f.s_star = detail::peak_size(m, *f.t_star, f.note);
        }
        break;
    case ModelKind::RATE_LN_LINEAR:
        if (p.b < 0.0) {
            f.kind = FeatureKind::ASYMPTOTE;
            f.s_star = std::exp(detail::require_c(m));
        }
        break;
    case ModelKind::RATE_SHIFTED_EXP:
        if (auto ts = detail::singular_tau(m)) {
            f.kind = FeatureKind::SINGULARITY;
            f.t_star = at(*ts);
        } else if (p.r > 0.0) {
            f.asymptotic_rate = 1.0 / p.a;
            f.note = "approaches exponential growth at rate 1/a";
        }
        break;
    }
    return f;
}

/// Sets C so that the trajectory passes through (t0, s0).
inline Model normalize(const Model& m, double t0, double s0)
{
    validate(m);
    if (!(s0 > 0.0) || !std::isfinite(s0))
        throw DomainError("anchor size must be positive and finite, got " + detail::format_double(s0));
    if (!std::isfinite(t0))
        throw DomainError("anchor time must be finite");

    const auto& p = m.params;
    const double tau = t0 - m.t_ref;
    const double ln_s0 = std::log(s0);
    Model out = m;
    double c = 0.0;

    auto logistic_constant = [&](double inv_size) {
        const double v = (inv_size + p.b / p.a) * std::exp(p.a * tau);
        if (!std::isfinite(v))
            throw DomainError(detail::kind_name(m) + ": normalization constant overflows; set t_ref closer to the data");
        return v;
    };

    switch (m.kind) {
    case ModelKind::EXP_CONST: c = ln_s0 - p.a * tau; break;
    case ModelKind::LINEAR_T: c = ln_s0 - tau * (p.a + 0.5 * p.b * tau); break;
    case ModelKind::HYPERBOLIC: c = 1.0 / s0 + p.b * tau; break;
    case ModelKind::LINEAR_S: c = logistic_constant(1.0 / s0); break;
    case ModelKind::LOGLOG_T:
        c = ln_s0 * std::exp(-tau * (p.a + 0.5 * p.b * tau));
        if (!std::isfinite(c))
            throw DomainError("LOGLOG_T: normalization constant overflows");
        break;
    case ModelKind::LOGLOG_S:
        if (ln_s0 == 0.0)
            throw DomainError("LOGLOG_S: anchor with S0 = 1 gives ln S0 = 0");
        c = logistic_constant(1.0 / ln_s0);
        break;
    case ModelKind::RATE_RECIP_LINEAR:
        if (p.b == 0.0) {
            c = ln_s0 - tau / p.a;
        } else {
            const double base = p.a + p.b * tau;
            if (!(base > 0.0))
                throw DomainError("RATE_RECIP_LINEAR: a + b t' <= 0 at the anchor");
            c = ln_s0 - std::log(base) / p.b;
        }
        break;
    case ModelKind::RATE_LN_LINEAR:
        c = p.b == 0.0 ? ln_s0 - p.a * tau : ln_s0 - (p.a / p.b) * std::exp(p.b * tau);
        break;
    case ModelKind::RATE_SHIFTED_EXP: {
        const double x = p.a - p.b * std::exp(-p.r * tau);
        if (!(x > 0.0))
            throw DomainError("RATE_SHIFTED_EXP: a - b e^{-r t'} <= 0 at the anchor");
        c = ln_s0 - tau / p.a - std::log(x) / (p.r * p.a);
        break;
    }
    }
    if (!std::isfinite(c))
        throw DomainError(detail::kind_name(m) + ": cannot normalize at t0=" + detail::format_double(t0));
    out.params.c = c;
    return out;
}

/// Definite integral of 1 / ((a + b x)(c + e x)) from x1 to x2 by partial
/// fractions: [ln|(a + b x)/(c + e x)|] / (c b - a e).
inline double integrate_rational(double a, double b, double c, double e, double x1, double x2)
{
    const double delta = c * b - a * e;
    if (std::abs(delta) <= 1e-15 * (std::abs(c * b) + std::abs(a * e)))
        throw DegenerateError("linear factors are proportional (c b - a e = 0)");
    if (x1 == x2)
        return 0.0;
    const double lo = std::min(x1, x2);
    const double hi = std::max(x1, x2);
    auto check_root = [&](double k0, double k1, const char* name) {
        if (k1 == 0.0)
            return;
        const double root = -k0 / k1;
        if (root >= lo && root <= hi)
            throw DomainError(std::string("factor ") + name + " vanishes at x=" +
                              detail::format_double(root) + " inside the interval");
    };
    check_root(a, b, "a + b x");
    check_root(c, e, "c + e x");
    const double f_ratio = (a + b * x2) / (a + b * x1);
    const double g_ratio = (c + e * x2) / (c + e * x1);
    return (std::log(f_ratio) - std::log(g_ratio)) / delta;
}

}  // namespace growth

#endif  // GROWTH_MODELS_HPP
