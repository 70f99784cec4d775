#pragma once
#ifndef GROWTH_IO_HPP
#define GROWTH_IO_HPP

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "growth/detail/text.hpp"
#include "growth/diagnostics.hpp"
#include "growth/error.hpp"
#include "growth/fitting.hpp"
#include "growth/forecast.hpp"
#include "growth/models.hpp"
#include "growth/rates.hpp"
#include "growth/timeseries.hpp"

namespace growth::io {

using json = nlohmann::json;

/// A delimited table: '#' metadata lines, one header row, then data rows.
struct Table
{
    detail::Metadata meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    std::optional<std::size_t> column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        return std::nullopt;
    }
};

inline Table read_table(std::istream& in, char delim = ',')
{
    Table t;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const auto trimmed = detail::trim(line);
        if (trimmed.empty())
            continue;
        if (trimmed.front() == '#') {
            if (t.header.empty())
                detail::parse_metadata_line(trimmed, t.meta);
            continue;
        }
        auto cells = detail::split(trimmed, delim);
        if (t.header.empty()) {
            for (auto c : cells)
                t.header.emplace_back(c);
            continue;
        }
        if (cells.size() != t.header.size())
            throw ParseError("expected " + std::to_string(t.header.size()) + " cells, got " +
                                 std::to_string(cells.size()),
                             row);
        t.rows.emplace_back(cells.begin(), cells.end());
        t.line_numbers.push_back(row);
    }
    if (t.header.empty())
        throw ParseError("missing header row", row);
    return t;
}

inline void write_meta(std::ostream& out, std::string_view key, std::string_view value)
{
    if (!value.empty())
        out << "# " << key << ": " << value << '\n';
}

inline void write_series(std::ostream& out, const TimeSeries& ts, std::string_view value_column = "value",
                         char delim = ',')
{
    write_meta(out, "label", ts.label());
    write_meta(out, "unit", ts.unit());
    out << 't' << delim << value_column << '\n';
    for (const auto& p : ts.points())
        out << detail::format_double(p.t) << delim << detail::format_double(p.value) << '\n';
}

inline void write_rates(std::ostream& out, const RateSeries& rs, char delim = ',')
{
    write_meta(out, "label", rs.source_label());
    write_meta(out, "unit", rs.unit());
    write_meta(out, "method", to_string(rs.method()));
    write_meta(out, "transform", rs.transform() ? to_string(*rs.transform()) : "none");
    out << "t" << delim << "rate" << delim << "size" << '\n';
    for (const auto& p : rs.points())
        out << detail::format_double(p.t) << delim << detail::format_double(p.rate) << delim
            << detail::format_double(p.size) << '\n';
}

inline bool is_rate_table(const Table& t)
{
    return t.column("rate").has_value() && t.column("t").has_value();
}

inline RateSeries rates_from_table(const Table& t)
{
    const auto tc = t.column("t");
    const auto rc = t.column("rate");
    const auto sc = t.column("size");
    if (!tc || !rc)
        throw ConfigError("rate table needs columns 't' and 'rate'");
    std::vector<RatePoint> pts;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        auto cell = [&](std::size_t col, const char* what) {
            auto v = detail::parse_double(t.rows[i][col]);
            if (!v)
                throw ParseError(std::string("non-numeric ") + what + " '" + t.rows[i][col] + "'",
                                 t.line_numbers[i]);
            return *v;
        };
        RatePoint p;
        p.t = cell(*tc, "time");
        p.rate = cell(*rc, "rate");
        p.size = sc ? cell(*sc, "size") : 0.0;
        pts.push_back(p);
    }
    auto get = [&](std::string_view key) {
        auto it = t.meta.find(key);
        return it == t.meta.end() ? std::string{} : it->second;
    };
    const std::string method = get("method");
    const std::string transform = get("transform");
    std::optional<TransformKind> tk;
    if (transform == "log")
        tk = TransformKind::LOG;
    else if (transform == "reciprocal")
        tk = TransformKind::RECIPROCAL;
    return RateSeries(std::move(pts), get("label"),
                      method == "refined" ? RateMethod::REFINED : RateMethod::DIRECT, tk, get("unit"));
}

inline RateSeries read_rates(std::istream& in, char delim = ',')
{
    return rates_from_table(read_table(in, delim));
}

// Model files are flat JSON objects {kind, a, b, r, C | ln_C, t_ref, unit}.
// Kinds whose C multiplies S are written with ln_C; on input either spelling
// is accepted.
inline json model_to_json(const Model& m)
{
    json j;
    j["kind"] = std::string(to_string(m.kind));
    j["a"] = m.params.a;
    j["b"] = m.params.b;
    if (m.kind == ModelKind::RATE_SHIFTED_EXP)
        j["r"] = m.params.r;
    if (m.params.c)
        j[has_log_constant(m.kind) ? "ln_C" : "C"] = *m.params.c;
    j["t_ref"] = m.t_ref;
    j["unit"] = m.unit;
    return j;
}

inline Model model_from_json(const json& j)
{
    if (!j.is_object())
        throw ParseError("model file must hold a JSON object", 1);
    auto number = [&](const char* key, std::optional<double> fallback) -> double {
        if (!j.contains(key)) {
            if (fallback)
                return *fallback;
            throw ConfigError(std::string("model file lacks '") + key + "'");
        }
        if (!j[key].is_number())
            throw ConfigError(std::string("model field '") + key + "' must be a number");
        return j[key].get<double>();
    };
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("model file lacks 'kind'");
    Model m;
    m.kind = model_kind_from_string(j["kind"].get<std::string>());
    m.params.a = number("a", std::nullopt);
    m.params.b = number("b", m.kind == ModelKind::EXP_CONST ? std::optional(0.0) : std::nullopt);
    m.params.r = number("r", m.kind == ModelKind::RATE_SHIFTED_EXP ? std::nullopt : std::optional(0.0));
    m.t_ref = number("t_ref", 0.0);
    if (j.contains("unit") && j["unit"].is_string())
        m.unit = j["unit"].get<std::string>();
    if (j.contains("ln_C")) {
        if (!has_log_constant(m.kind))
            throw ConfigError("ln_C is only valid for kinds whose C multiplies S");
        m.params.c = number("ln_C", std::nullopt);
    } else if (j.contains("C")) {
        m = m.with_constant(number("C", std::nullopt));
    }
    validate(m);
    return m;
}

inline Model read_model(std::istream& in)
{
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what(), 1);
    }
    return model_from_json(j);
}

inline json features_to_json(const Features& f)
{
    json j;
    j["kind"] = std::string(to_string(f.kind));
    if (f.t_star)
        j["t_star"] = *f.t_star;
    if (f.s_star)
        j["s_star"] = *f.s_star;
    if (f.asymptotic_rate)
        j["asymptotic_rate"] = *f.asymptotic_rate;
    if (!f.note.empty())
        j["note"] = f.note;
    return j;
}

inline json line_to_json(const LineFit& l)
{
    return json{{"intercept", l.intercept}, {"slope", l.slope},
                {"rms_residual", l.rms_residual}, {"r_squared", l.r_squared},
                {"n_points", l.n_points}, {"dropped_points", l.dropped_points}};
}

inline json fit_report_to_json(const FitReport& rep)
{
    json j;
    j["linearization"] = std::string(to_string(rep.linearization.kind));
    if (rep.linearization.aux_a)
        j["aux_a"] = *rep.linearization.aux_a;
    j["line"] = line_to_json(rep.line);
    j["model"] = model_to_json(rep.model);
    j["warnings"] = rep.warnings;
    return j;
}

inline std::string feature_summary(const Features& f)
{
    std::string s(to_string(f.kind));
    if (f.t_star)
        s += " t*=" + detail::format_fixed(f.t_star.value(), 8);
    if (f.s_star)
        s += " S*=" + detail::format_fixed(f.s_star.value(), 8);
    if (f.asymptotic_rate)
        s += " asymptotic_rate=" + detail::format_fixed(f.asymptotic_rate.value(), 8);
    return s;
}

/// Plot-ready (t, S) columns under a '#' block carrying model, anchor and features.
inline void write_projection(std::ostream& out, const Projection& p, char delim = ',')
{
    write_meta(out, "label", p.series.label());
    write_meta(out, "unit", p.series.unit());
    out << "# model: " << model_to_json(p.model).dump() << '\n';
    out << "# anchor: " << detail::format_double(p.anchor.t) << ':'
        << detail::format_double(p.anchor.s) << '\n';
    out << "# features: " << features_to_json(p.features).dump() << '\n';
    for (const auto& w : p.warnings)
        out << "# warning: " << w << '\n';
    out << "t" << delim << "S" << '\n';
    for (const auto& o : p.series.points())
        out << detail::format_double(o.t) << delim << detail::format_double(o.value) << '\n';
}

inline void write_identification(std::ostream& out, const IdentificationReport& rep)
{
    out << "# method: " << to_string(rep.method) << '\n';
    out << "rank,linearization,model,r_squared,rms_residual,dropped\n";
    for (std::size_t i = 0; i < rep.ranking.size(); ++i) {
        const auto& c = rep.ranking[i];
        out << i + 1 << ',' << (c.model_kind == ModelKind::EXP_CONST ? "const-r" : to_string(c.linearization))
            << ',' << to_string(c.model_kind) << ',' << detail::format_double(c.r_squared) << ','
            << detail::format_double(c.rms_residual) << ',' << c.dropped_points << '\n';
    }
    for (const auto& n : rep.notes)
        out << "# note: " << n << '\n';
}

inline void write_stability(std::ostream& out, const StabilityFlag& f)
{
    out << "# stability: "
        << (f.status == StabilityStatus::OK ? "OK" : "LOW_RATE_UNSTABLE")
        << " recent_rate=" << detail::format_double(f.recent_rate)
        << " threshold=" << detail::format_double(f.threshold) << '\n';
}

inline void write_scenarios(std::ostream& out, const ScenarioReport& rep)
{
    for (std::size_t i = 0; i < rep.names.size(); ++i) {
        out << "# scenario " << i + 1 << ": " << rep.names[i] << " model="
            << model_to_json(rep.models[i]).dump() << " anchor="
            << detail::format_double(rep.anchors[i].t) << ':'
            << detail::format_double(rep.anchors[i].s) << '\n';
        out << "# scenario " << i + 1 << " features: " << feature_summary(rep.features[i]) << '\n';
    }
    out << "# indistinguishable below relative spread " << detail::format_double(rep.threshold) << '\n';
    out << "year";
    for (const auto& n : rep.names)
        out << ',' << n;
    out << ",relative_spread,indistinguishable\n";
    for (const auto& row : rep.rows) {
        out << detail::format_double(row.year);
        for (const auto& v : row.values)
            out << ',' << (v ? detail::format_fixed(*v, 10) : std::string("NA"));
        out << ',' << (row.relative_spread ? detail::format_fixed(*row.relative_spread, 6) : "NA");
        out << ',' << (row.indistinguishable ? (*row.indistinguishable ? "yes" : "no") : "NA") << '\n';
    }
}

}  // namespace growth::io

#endif  // GROWTH_IO_HPP
