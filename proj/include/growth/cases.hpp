#pragma once
#ifndef GROWTH_CASES_HPP
#define GROWTH_CASES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "growth/detail/text.hpp"
#include "growth/error.hpp"
#include "growth/forecast.hpp"
#include "growth/io.hpp"
#include "growth/lsq.hpp"
#include "growth/models.hpp"

namespace growth::cases {

using json = nlohmann::json;

struct Scenario
{
    std::string name;
    Model model;
    std::optional<Anchor> anchor;
};

/// A published number and how closely the computed one must match it.
struct Check
{
    int criterion = 0;
    std::string what;  // value | rate | asymptote | maximum_value | maximum_time | polynomial_route
    std::string scenario;
    std::optional<double> t;
    double expected = 0.0;
    std::optional<double> published;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<std::pair<double, double>> bounds;
    std::string note;
};

struct CaseStudy
{
    std::string name;
    std::string description;
    std::string unit;
    std::vector<Scenario> scenarios;
    std::vector<double> report_years;
    std::optional<std::array<double, 3>> grid;  // start, stop, step
    std::optional<PolyFit> polynomial;
    std::vector<Check> checks;

    const Scenario& scenario(const std::string& n) const
    {
        for (const auto& s : scenarios)
            if (s.name == n)
                return s;
        throw ConfigError("case '" + name + "' has no scenario '" + n + "'");
    }
};

struct CheckResult
{
    Check check;
    double computed = 0.0;
    bool pass = false;
};

struct CaseResult
{
    std::string name;
    std::vector<CheckResult> checks;
    std::vector<Projection> projections;
    std::optional<ScenarioReport> scenarios;
    std::vector<std::string> info;

    bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
    }
};

namespace detail {

inline std::optional<double> opt_number(const json& j, const char* key)
{
    if (!j.contains(key))
        return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace detail

inline std::map<std::string, CaseStudy> parse_cases(const json& root)
{
    if (!root.contains("cases") || !root["cases"].is_object())
        throw ConfigError("case file lacks a 'cases' object");
    std::map<std::string, CaseStudy> out;
    try {
        for (const auto& [name, j] : root["cases"].items()) {
            CaseStudy cs;
            cs.name = name;
            cs.description = j.value("description", "");
            cs.unit = j.value("unit", "");
            for (const auto& s : j.at("scenarios")) {
                Scenario sc;
                sc.name = s.at("name").get<std::string>();
                sc.model = io::model_from_json(s.at("model"));
                if (s.contains("anchor"))
                    sc.anchor = Anchor{s["anchor"].at(0).get<double>(), s["anchor"].at(1).get<double>()};
                cs.scenarios.push_back(std::move(sc));
            }
            if (j.contains("report_years"))
                cs.report_years = j["report_years"].get<std::vector<double>>();
            if (j.contains("grid"))
                cs.grid = j["grid"].get<std::array<double, 3>>();
            if (j.contains("polynomial")) {
                const auto& p = j["polynomial"];
                cs.polynomial = PolyFit::from_coefficients(p.at("coefficients").get<std::vector<double>>(),
                                                           p.at("range").at(0).get<double>(),
                                                           p.at("range").at(1).get<double>());
            }
            for (const auto& c : j.at("checks")) {
                Check ch;
                ch.criterion = c.at("criterion").get<int>();
                ch.what = c.at("what").get<std::string>();
                ch.scenario = c.at("scenario").get<std::string>();
                ch.t = detail::opt_number(c, "t");
                ch.expected = c.at("expected").get<double>();
                ch.published = detail::opt_number(c, "published");
                ch.rel_tol = detail::opt_number(c, "rel_tol");
                ch.abs_tol = detail::opt_number(c, "abs_tol");
                if (c.contains("bounds"))
                    ch.bounds = std::pair{c["bounds"].at(0).get<double>(), c["bounds"].at(1).get<double>()};
                ch.note = c.value("note", "");
                cs.checks.push_back(std::move(ch));
            }
            out.emplace(name, std::move(cs));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed case file: ") + e.what());
    }
    return out;
}

inline std::map<std::string, CaseStudy> load_cases(std::istream& in)
{
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("case file is not valid JSON: ") + e.what(), 1);
    }
    return parse_cases(root);
}

inline bool within_tolerance(const Check& c, double computed)
{
    if (!std::isfinite(computed))
        return false;
    bool ok = true;
    if (c.bounds)
        ok = ok && computed >= c.bounds->first && computed <= c.bounds->second;
    if (c.rel_tol)
        ok = ok && std::abs(computed - c.expected) <= *c.rel_tol * std::abs(c.expected);
    if (c.abs_tol)
        ok = ok && std::abs(computed - c.expected) <= *c.abs_tol;
    return ok;
}

inline Model normalized_model(const Scenario& s)
{
    if (s.anchor)
        return normalize(s.model, s.anchor->t, s.anchor->s);
    return s.model;
}

inline double evaluate_check(const CaseStudy& cs, const Check& c)
{
    const Scenario& s = cs.scenario(c.scenario);
    auto at_time = [&]() {
        if (!c.t)
            throw ConfigError("check '" + c.what + "' needs a time");
        return *c.t;
    };
    if (c.what == "rate")
        return rate_at(s.model, at_time());
    const Model m = normalized_model(s);
    if (c.what == "value")
        return trajectory_at(m, at_time());

    if (c.what == "polynomial_route") {
        if (m.kind != ModelKind::LINEAR_T || m.t_ref != 0.0 || !cs.grid)
            throw ConfigError("polynomial_route needs a LINEAR_T scenario with t_ref 0 and a grid");
        const auto grid = make_grid((*cs.grid)[0], (*cs.grid)[1], (*cs.grid)[2]);
        const auto line = PolyFit::from_coefficients({m.params.a, m.params.b}, grid.front(), grid.back());
        const Anchor anchor = s.anchor.value_or(Anchor{grid.front(), trajectory_at(m, grid.front())});
        const auto numeric = integrate_rate_function(line, anchor, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double closed = trajectory_at(m, grid[i]);
            worst = std::max(worst, std::abs(numeric[i].value - closed) / std::abs(closed));
        }
        return worst;
    }

    const Features f = features(m);
    if (c.what == "asymptote") {
        if (f.kind != FeatureKind::ASYMPTOTE)
            throw DomainError("scenario '" + s.name + "' has no asymptote");
        return *f.s_star;
    }
    if (c.what == "maximum_value" || c.what == "maximum_time") {
        if (f.kind != FeatureKind::MAXIMUM)
            throw DomainError("scenario '" + s.name + "' has no maximum");
        return c.what == "maximum_value" ? *f.s_star : *f.t_star;
    }
    throw ConfigError("unknown check type '" + c.what + "'");
}

/// Evaluates every check of a case and builds its projections and scenario table.
inline CaseResult run_case(const CaseStudy& cs, double spread_threshold = kDefaultIndistinguishable)
{
    CaseResult res;
    res.name = cs.name;
    for (const auto& c : cs.checks) {
        CheckResult r;
        r.check = c;
        try {
            r.computed = evaluate_check(cs, c);
            r.pass = within_tolerance(c, r.computed);
        } catch (const Error& e) {
            r.computed = std::nan("");
            r.pass = false;
            r.check.note += (r.check.note.empty() ? "" : "; ") + std::string("error: ") + e.what();
        }
        res.checks.push_back(std::move(r));
    }

    if (cs.grid) {
        const auto grid = make_grid((*cs.grid)[0], (*cs.grid)[1], (*cs.grid)[2]);
        for (const auto& s : cs.scenarios)
            res.projections.push_back(project(s.model, s.anchor, grid, s.name));
        if (!cs.report_years.empty())
            res.scenarios = compare_scenarios(res.projections, cs.report_years, spread_threshold);
    }
    if (cs.polynomial) {
        const auto& p = *cs.polynomial;
        for (double t : {p.x_min(), p.x_max()})
            res.info.push_back("published degree-" + std::to_string(p.degree()) +
                               " rate law at t=" + growth::detail::format_double(t) + ": " +
                               growth::detail::format_fixed(p(t), 6) +
                               " /yr (coefficients printed to 4 significant figures cannot cancel "
                               "to a ~1-2% rate; descriptive only)");
    }
    return res;
}

inline std::string tolerance_text(const Check& c)
{
    std::string s;
    if (c.bounds)
        s += "in [" + growth::detail::format_double(c.bounds->first) + ", " +
             growth::detail::format_double(c.bounds->second) + "]";
    if (c.rel_tol)
        s += std::string(s.empty() ? "" : " and ") + "rel " + growth::detail::format_double(*c.rel_tol);
    if (c.abs_tol)
        s += std::string(s.empty() ? "" : " and ") + "abs " + growth::detail::format_double(*c.abs_tol);
    return s;
}

inline void write_case_report(std::ostream& out, const CaseStudy& cs, const CaseResult& res)
{
    out << "# case: " << cs.name << '\n';
    if (!cs.description.empty())
        out << "# " << cs.description << '\n';
    out << "criterion,check,scenario,t,computed,expected,published,tolerance,result\n";
    for (const auto& r : res.checks) {
        const auto& c = r.check;
        out << c.criterion << ',' << c.what << ',' << c.scenario << ','
            << (c.t ? growth::detail::format_double(*c.t) : "") << ','
            << growth::detail::format_fixed(r.computed, 10) << ','
            << growth::detail::format_double(c.expected) << ','
            << (c.published ? growth::detail::format_double(*c.published) : "") << ','
            << tolerance_text(c) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
    }
    for (const auto& r : res.checks)
        if (!r.check.note.empty())
            out << "# note (" << r.check.what << ", " << r.check.scenario << "): " << r.check.note << '\n';
    for (const auto& p : res.projections)
        out << "# features " << p.series.label() << ": " << io::feature_summary(p.features) << '\n';
    for (const auto& i : res.info)
        out << "# info: " << i << '\n';
    if (res.scenarios) {
        out << '\n';
        io::write_scenarios(out, *res.scenarios);
    }
}

}  // namespace growth::cases

#endif  // GROWTH_CASES_HPP
