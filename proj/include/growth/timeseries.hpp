#pragma once
#ifndef GROWTH_TIMESERIES_HPP
#define GROWTH_TIMESERIES_HPP

#include <cmath>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "growth/detail/text.hpp"
#include "growth/error.hpp"

namespace growth {

/// One observation of a growing entity: size `value` at calendar time `t`.
struct Observation
{
    double t = 0.0;
    double value = 0.0;
};

/// Ordered observations S(t) of a growing entity.
///
/// Times are real-valued years (fractional allowed) and strictly increasing;
/// at least two points; every value finite. The constructor enforces all of
/// this, so a TimeSeries that exists is valid.
class TimeSeries
{
  public:
    TimeSeries(std::vector<Observation> points, std::string label = {}, std::string unit = {})
        : points_(std::move(points)), label_(std::move(label)), unit_(std::move(unit))
    {
        if (points_.size() < 2)
            throw ValidationError("time series needs at least 2 points, got " +
                                  std::to_string(points_.size()));
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto& p = points_[i];
            if (!std::isfinite(p.t) || !std::isfinite(p.value))
                throw ValidationError("non-finite observation at index " + std::to_string(i));
            if (i > 0 && !(p.t > points_[i - 1].t)) {
                throw ValidationError(
                    (p.t == points_[i - 1].t ? "duplicate time " : "non-increasing time ") +
                    detail::format_double(p.t) + " at index " + std::to_string(i));
            }
        }
    }

    static TimeSeries from_columns(std::span<const double> ts, std::span<const double> values,
                                   std::string label = {}, std::string unit = {})
    {
        if (ts.size() != values.size())
            throw ValidationError("time and value columns differ in length");
        std::vector<Observation> pts(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i)
            pts[i] = {ts[i], values[i]};
        return TimeSeries(std::move(pts), std::move(label), std::move(unit));
    }

    std::span<const Observation> points() const& noexcept { return points_; }
    std::span<const Observation> points() && = delete;  // would dangle
    std::size_t size() const noexcept { return points_.size(); }
    const Observation& operator[](std::size_t i) const { return points_[i]; }
    const Observation& front() const { return points_.front(); }
    const Observation& back() const { return points_.back(); }
    const std::string& label() const noexcept { return label_; }
    const std::string& unit() const noexcept { return unit_; }

    std::vector<double> times() const
    {
        std::vector<double> out;
        out.reserve(points_.size());
        for (const auto& p : points_)
            out.push_back(p.t);
        return out;
    }

    std::vector<double> values() const
    {
        std::vector<double> out;
        out.reserve(points_.size());
        for (const auto& p : points_)
            out.push_back(p.value);
        return out;
    }

  private:
    std::vector<Observation> points_;
    std::string label_;
    std::string unit_;
};

enum class TransformKind
{
    LOG,
    RECIPROCAL
};

inline std::string_view to_string(TransformKind k)
{
    return k == TransformKind::LOG ? "log" : "reciprocal";
}

struct LoadOptions
{
    char delimiter = ',';
};

/// Reads a delimited table with a header row and selects two columns by name.
///
/// Lines starting with '#' before the header are metadata ("# key: value");
/// the keys `label` and `unit` are picked up. Blank lines are ignored. Rows
/// are kept in file order; a non-increasing time is an error, never sorted.
inline TimeSeries load_series(std::istream& in, std::string_view time_column,
                              std::string_view value_column, LoadOptions opts = {})
{
    detail::Metadata meta;
    std::string line;
    std::size_t row = 0;
    std::vector<std::string> header;

    while (std::getline(in, line)) {
        ++row;
        if (detail::parse_metadata_line(line, meta))
            continue;
        if (detail::trim(line).empty())
            continue;
        for (auto cell : detail::split(line, opts.delimiter))
            header.emplace_back(cell);
        break;
    }
    if (header.empty())
        throw ParseError("missing header row", row);

    auto find_column = [&](std::string_view name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw ConfigError("column '" + std::string(name) + "' not found in header");
    };
    const std::size_t tcol = find_column(time_column);
    const std::size_t vcol = find_column(value_column);

    std::vector<Observation> pts;
    while (std::getline(in, line)) {
        ++row;
        auto trimmed = detail::trim(line);
        if (trimmed.empty() || trimmed.front() == '#')
            continue;
        auto cells = detail::split(line, opts.delimiter);
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " cells, got " +
                                 std::to_string(cells.size()),
                             row);
        auto t = detail::parse_double(cells[tcol]);
        if (!t)
            throw ParseError("non-numeric time '" + std::string(cells[tcol]) + "'", row);
        auto v = detail::parse_double(cells[vcol]);
        if (!v)
            throw ParseError("non-numeric value '" + std::string(cells[vcol]) + "'", row);
        if (!pts.empty() && !(*t > pts.back().t))
            throw ValidationError("row " + std::to_string(row) + ": " +
                                  (*t == pts.back().t ? "duplicate" : "non-increasing") +
                                  " time " + detail::format_double(*t));
        pts.push_back({*t, *v});
    }

    std::string label = meta.contains("label") ? meta.find("label")->second : std::string(value_column);
    std::string unit = meta.contains("unit") ? meta.find("unit")->second : std::string();
    return TimeSeries(std::move(pts), std::move(label), std::move(unit));
}

/// Replaces every value by ln(value) or 1/value; times are untouched.
inline TimeSeries transform_series(const TimeSeries& ts, TransformKind kind)
{
    std::vector<Observation> pts(ts.points().begin(), ts.points().end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double& v = pts[i].value;
        if (kind == TransformKind::LOG) {
            if (!(v > 0.0))
                throw DomainError("log transform needs positive values; value " +
                                  detail::format_double(v) + " at t=" +
                                  detail::format_double(pts[i].t));
            v = std::log(v);
        } else {
            if (v == 0.0)
                throw DomainError("reciprocal transform of zero at t=" +
                                  detail::format_double(pts[i].t));
            v = 1.0 / v;
        }
    }
    std::string unit = kind == TransformKind::LOG ? "ln(" + ts.unit() + ")" : "1/(" + ts.unit() + ")";
    return TimeSeries(std::move(pts), ts.label(), std::move(unit));
}

}  // namespace growth

#endif  // GROWTH_TIMESERIES_HPP
