// growthrate: rates, fit, forecast, integrate, diagnose and reproduce from the
// command line. Data goes to --out (or stdout), warnings to stderr.
//
// Exit codes: 0 ok, 1 reproduce checks failed, 2 usage/validation, 3 numeric/domain.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "growth.hpp"

namespace {

using growth::detail::format_double;
using json = nlohmann::json;

constexpr const char* kVersion = "1.0.0";

#ifndef GROWTH_CASES_FILE
#define GROWTH_CASES_FILE "data/cases.json"
#endif

std::vector<double> parse_numbers(const std::string& text, char sep, std::size_t expected,
                                  const std::string& flag)
{
    std::vector<double> out;
    for (auto cell : growth::detail::split(text, sep)) {
        auto v = growth::detail::parse_double(cell);
        if (!v)
            throw growth::ConfigError(flag + ": '" + text + "' is not a number list");
        out.push_back(*v);
    }
    if (expected != 0 && out.size() != expected)
        throw growth::ConfigError(flag + ": expected " + std::to_string(expected) +
                                  " values separated by '" + std::string(1, sep) + "', got '" + text +
                                  "'");
    return out;
}

growth::Anchor parse_anchor(const std::string& s)
{
    const auto v = parse_numbers(s, ':', 2, "--anchor");
    return {v[0], v[1]};
}

std::vector<double> parse_grid(const std::string& s)
{
    const auto v = parse_numbers(s, ':', 3, "--grid");
    return growth::make_grid(v[0], v[1], v[2]);
}

std::pair<double, double> parse_range(const std::string& s, const std::string& flag)
{
    const auto v = parse_numbers(s, ':', 2, flag);
    if (!(v[0] <= v[1]))
        throw growth::ConfigError(flag + " needs t1 <= t2");
    return {v[0], v[1]};
}

// "-" reads stdin. Contents are buffered so a file can be opened twice
// (fit sniffs the header, then reloads).
std::istringstream open_input(const std::string& path)
{
    if (path == "-") {
        static const std::string piped{std::istreambuf_iterator<char>(std::cin), {}};
        return std::istringstream(piped);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw growth::ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::istringstream(buf.str());
}

/// Writes `body` to `path`, or stdout when path is empty or "-". With a real
/// path, a sidecar <path>.meta.json records how the file was produced.
void emit(const std::string& path, const std::string& body, const json& meta)
{
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw growth::ConfigError("cannot write '" + path + "'");
    out << body;
    std::ofstream side(path + ".meta.json", std::ios::binary);
    side << meta.dump(2) << '\n';
}

void warn(const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << '\n';
}

json run_meta(const std::string& command, json args)
{
    return json{{"tool", "growthrate"}, {"version", kVersion}, {"command", command}, {"args", std::move(args)}};
}

struct SeriesInput
{
    std::string path;
    std::string time_col = "t";
    std::string value_col = "value";
    char delimiter = ',';

    void add_options(CLI::App* app)
    {
        app->add_option("input", path, "delimited series file")->required();
        app->add_option("--time-col", time_col, "name of the time column")->capture_default_str();
        app->add_option("--value-col", value_col, "name of the value column")->capture_default_str();
        app->add_option("--delimiter", delimiter, "field separator")->capture_default_str();
    }

    growth::TimeSeries load() const
    {
        auto in = open_input(path);
        return growth::load_series(in, time_col, value_col, {delimiter});
    }
};

struct RateOptions
{
    std::string method = "direct";
    int window = 7;
    int degree = 3;

    void add_options(CLI::App* app)
    {
        app->add_option("--method", method, "direct or refined")
            ->check(CLI::IsMember({"direct", "refined"}))
            ->capture_default_str();
        app->add_option("--window", window, "refined-method window (odd, >= 3)")->capture_default_str();
        app->add_option("--degree", degree, "refined-method polynomial degree")->capture_default_str();
    }

    growth::RateMethod rate_method() const
    {
        return method == "refined" ? growth::RateMethod::REFINED : growth::RateMethod::DIRECT;
    }

    growth::SmoothingConfig smoothing() const
    {
        growth::SmoothingConfig cfg;
        cfg.window = static_cast<std::size_t>(window < 0 ? 0 : window);
        cfg.degree = degree;
        if (window < 0 || degree < 0)
            throw growth::ConfigError("--window and --degree must be non-negative");
        if (rate_method() == growth::RateMethod::REFINED)
            cfg.validate();
        return cfg;
    }
};

// ---- rates -----------------------------------------------------------------

struct RatesCmd
{
    SeriesInput input;
    RateOptions rates;
    std::string transform = "none";
    std::string out;

    void setup(CLI::App& root)
    {
        auto* app = root.add_subcommand("rates", "growth rates of a series");
        input.add_options(app);
        rates.add_options(app);
        app->add_option("--transform", transform, "none, log or reciprocal")
            ->check(CLI::IsMember({"none", "log", "reciprocal"}))
            ->capture_default_str();
        app->add_option("--out", out, "output file (default stdout)");
        app->callback([this] { run(); });
    }

    void run()
    {
        const auto ts = input.load();
        const auto cfg = rates.smoothing();
        growth::RateSeries rs =
            transform == "none"
                ? growth::compute_rates(ts, rates.rate_method(), cfg)
                : growth::rate_of_transform(ts,
                                            transform == "log" ? growth::TransformKind::LOG
                                                               : growth::TransformKind::RECIPROCAL,
                                            rates.rate_method(), cfg);
        std::ostringstream body;
        growth::io::write_rates(body, rs);
        emit(out, body.str(),
             run_meta("rates", {{"input", input.path}, {"method", rates.method}, {"window", rates.window},
                                {"degree", rates.degree}, {"transform", transform}}));
    }
};

// ---- fit -------------------------------------------------------------------

struct FitCmd
{
    std::string path;
    std::string linearization;
    std::string range;
    std::optional<double> aux_a;
    double t_ref = 0.0;
    std::string unit;
    std::string time_col = "t";
    std::string value_col = "value";
    RateOptions rates;
    std::string out;
    std::string report;

    void setup(CLI::App& root)
    {
        auto* app = root.add_subcommand(
            "fit", "fit a model through one linearization of a rate table or series file");
        app->add_option("input", path, "rate table (t, rate, size) or series file")->required();
        app->add_option("--linearization", linearization,
                        "r-vs-t, r-vs-s, recip-r-vs-t, ln-r-vs-t, shifted-ln or recip-s-vs-t")
            ->required();
        app->add_option("--range", range, "restrict to t1:t2 before fitting");
        app->add_option("--aux-a", aux_a, "shift a of the shifted-ln linearization");
        app->add_option("--t-ref", t_ref, "reference time of the fitted model")->capture_default_str();
        app->add_option("--unit", unit, "expected unit of S for size-dependent fits");
        app->add_option("--time-col", time_col, "time column of a series file")->capture_default_str();
        app->add_option("--value-col", value_col, "value column of a series file")->capture_default_str();
        rates.add_options(app);
        app->add_option("--out", out, "model file (JSON); the fit report goes to stdout");
        app->add_option("--report", report, "also write the fit report (JSON) to this file");
        app->callback([this] { run(); });
    }

    void run()
    {
        const auto kind = growth::linearization_from_string(linearization);
        if (kind == growth::LinearizationKind::SHIFTED_LN_VS_T && !aux_a)
            throw growth::ConfigError("--linearization shifted-ln requires --aux-a");

        growth::FitOptions opts;
        opts.t_ref = t_ref;
        if (!range.empty())
            opts.t_range = parse_range(range, "--range");

        auto in = open_input(path);
        const auto table = growth::io::read_table(in);
        std::optional<growth::TimeSeries> series;
        std::optional<growth::RateSeries> rs;
        if (growth::io::is_rate_table(table)) {
            if (kind == growth::LinearizationKind::RECIP_S_VS_T)
                throw growth::ConfigError("recip-s-vs-t needs a series file, not a rate table");
            rs = growth::io::rates_from_table(table);
        } else {
            auto again = open_input(path);
            series = growth::load_series(again, time_col, value_col);
            if (kind != growth::LinearizationKind::RECIP_S_VS_T)
                rs = growth::compute_rates(*series, rates.rate_method(), rates.smoothing());
        }

        const bool size_dependent = kind == growth::LinearizationKind::R_VS_S ||
                                    kind == growth::LinearizationKind::RECIP_S_VS_T;
        const std::string data_unit = series ? series->unit() : rs->unit();
        if (size_dependent && !unit.empty() && !data_unit.empty() && unit != data_unit)
            throw growth::ValidationError("unit mismatch: data is in '" + data_unit +
                                          "' but --unit is '" + unit + "'");

        growth::FitReport rep = kind == growth::LinearizationKind::RECIP_S_VS_T
                                    ? growth::fit_series_model(*series, opts)
                                    : growth::fit_rate_model(*rs, {kind, aux_a}, opts);
        if (rep.model.unit.empty() && !unit.empty())
            rep.model.unit = unit;
        warn(rep.warnings);

        const json args{{"input", path}, {"linearization", linearization}, {"range", range},
                        {"aux_a", aux_a ? json(*aux_a) : json()}, {"t_ref", t_ref}};
        emit(out, growth::io::model_to_json(rep.model).dump(2) + "\n", run_meta("fit", args));
        const std::string rep_text = growth::io::fit_report_to_json(rep).dump(2) + "\n";
        if (!out.empty() && out != "-")
            std::cout << rep_text;
        if (!report.empty())
            emit(report, rep_text, run_meta("fit", args));
    }
};

// ---- forecast --------------------------------------------------------------

struct ForecastCmd
{
    std::string model_path;
    std::string anchor;
    std::string grid;
    std::string unit;
    std::string label;
    std::string out;

    void setup(CLI::App& root)
    {
        auto* app = root.add_subcommand("forecast", "evaluate a model trajectory on a time grid");
        app->add_option("model", model_path, "model file (JSON)")->required();
        app->add_option("--anchor", anchor, "normalize at t0:s0 (required unless the model has C)");
        app->add_option("--grid", grid, "start:stop:step")->required();
        app->add_option("--unit", unit, "unit of S; must match the model for size-dependent kinds");
        app->add_option("--label", label, "label of the projected series");
        app->add_option("--out", out, "output file (default stdout)");
        app->callback([this] { run(); });
    }

    void run()
    {
        auto in = open_input(model_path);
        const growth::Model m = growth::io::read_model(in);
        if (!unit.empty() && growth::is_size_dependent(m.kind) && unit != m.unit)
            throw growth::ValidationError("unit mismatch: model " + std::string(growth::to_string(m.kind)) +
                                          " is in '" + m.unit + "' but --unit is '" + unit + "'");
        std::optional<growth::Anchor> a;
        if (!anchor.empty())
            a = parse_anchor(anchor);
        const auto g = parse_grid(grid);
        const auto p = growth::project(m, a, g, label);
        warn(p.warnings);
        std::ostringstream body;
        growth::io::write_projection(body, p);
        emit(out, body.str(),
             run_meta("forecast", {{"model", model_path}, {"anchor", anchor}, {"grid", grid},
                                   {"warnings", p.warnings}}));
    }
};

// ---- integrate -------------------------------------------------------------

struct IntegrateCmd
{
    std::string path;
    std::string anchor;
    std::string poly;
    std::string range;
    std::string grid;
    std::optional<int> fit_degree;
    std::string out;

    void setup(CLI::App& root)
    {
        auto* app = root.add_subcommand(
            "integrate", "rebuild sizes from rates: discrete, or through a polynomial rate law");
        app->add_option("rates", path, "rate table (t, rate[, size])");
        app->add_option("--anchor", anchor, "t0:s0")->required();
        app->add_option("--poly", poly, "rate-law coefficients a0,a1,... in powers of t");
        app->add_option("--range", range, "validity range t1:t2 of --poly");
        app->add_option("--fit-degree", fit_degree, "fit a polynomial of this degree to the rate table");
        app->add_option("--grid", grid, "start:stop:step for the polynomial routes");
        app->add_option("--out", out, "output file (default stdout)");
        app->callback([this] { run(); });
    }

    void run()
    {
        const auto a = parse_anchor(anchor);
        growth::TimeSeries result = [&] {
            if (!poly.empty()) {
                if (range.empty() || grid.empty())
                    throw growth::ConfigError("--poly needs --range and --grid");
                const auto [lo, hi] = parse_range(range, "--range");
                const auto p = growth::PolyFit::from_coefficients(parse_numbers(poly, ',', 0, "--poly"), lo, hi);
                return growth::integrate_rate_function(p, a, parse_grid(grid), "integrated");
            }
            if (path.empty())
                throw growth::ConfigError("give a rate table or --poly");
            auto in = open_input(path);
            const auto rs = growth::io::read_rates(in);
            if (fit_degree) {
                if (grid.empty())
                    throw growth::ConfigError("--fit-degree needs --grid");
                std::vector<double> ts, rs_values;
                for (const auto& p : rs.points()) {
                    ts.push_back(p.t);
                    rs_values.push_back(p.rate);
                }
                const auto p = growth::fit_polynomial(ts, rs_values, *fit_degree);
                warn(p.warnings());
                return growth::integrate_rate_function(p, a, parse_grid(grid), rs.source_label(), rs.unit());
            }
            return growth::integrate_discrete(rs, a);
        }();
        std::ostringstream body;
        growth::io::write_series(body, result, "S");
        emit(out, body.str(),
             run_meta("integrate", {{"input", path}, {"anchor", anchor}, {"poly", poly}, {"range", range},
                                    {"grid", grid}, {"fit_degree", fit_degree ? json(*fit_degree) : json()}}));
    }
};

// ---- diagnose --------------------------------------------------------------

struct DiagnoseCmd
{
    SeriesInput input;
    RateOptions rates;
    std::optional<double> aux_a;
    double threshold = growth::kDefaultStabilityThreshold;
    std::string out;

    void setup(CLI::App& root)
    {
        auto* app = root.add_subcommand("diagnose", "rank linearizations and flag low-rate instability");
        input.add_options(app);
        rates.add_options(app);
        app->add_option("--aux-a", aux_a, "also test the shifted-ln linearization with this a");
        app->add_option("--threshold", threshold, "stability threshold on the recent rate")
            ->capture_default_str();
        app->add_option("--out", out, "output file (default stdout)");
        app->callback([this] { run(); });
    }

    void run()
    {
        const auto ts = input.load();
        growth::IdentifyOptions opts;
        opts.method = rates.rate_method();
        opts.smoothing = rates.smoothing();
        opts.aux_a = aux_a;
        const auto rep = growth::identify(ts, opts);
        const auto flag = growth::stability_flag(growth::compute_rates(ts, opts.method, opts.smoothing), threshold);
        std::ostringstream body;
        growth::io::write_meta(body, "label", ts.label());
        growth::io::write_meta(body, "unit", ts.unit());
        growth::io::write_stability(body, flag);
        growth::io::write_identification(body, rep);
        emit(out, body.str(),
             run_meta("diagnose", {{"input", input.path}, {"method", rates.method},
                                   {"aux_a", aux_a ? json(*aux_a) : json()}, {"threshold", threshold}}));
    }
};

// ---- reproduce -------------------------------------------------------------

struct ReproduceCmd
{
    std::string case_name;
    std::string out_dir;
    std::string cases_file = GROWTH_CASES_FILE;
    double spread_threshold = growth::kDefaultIndistinguishable;
    int status = 0;

    void setup(CLI::App& root)
    {
        auto* app = root.add_subcommand("reproduce", "recompute a published case study and check it");
        app->add_option("case", case_name, "case name, or 'all'")->required();
        app->add_option("--out", out_dir, "directory for report and projection files");
        app->add_option("--cases", cases_file, "case definition file")->capture_default_str();
        app->add_option("--spread-threshold", spread_threshold,
                        "relative spread below which scenarios are marked indistinguishable")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->callback([this] { run(); });
    }

    void run()
    {
        auto in = open_input(cases_file);
        const auto all = growth::cases::load_cases(in);
        std::vector<const growth::cases::CaseStudy*> selected;
        if (case_name == "all") {
            for (const auto& [_, cs] : all)
                selected.push_back(&cs);
        } else if (auto it = all.find(case_name); it != all.end()) {
            selected.push_back(&it->second);
        } else {
            std::string names;
            for (const auto& [n, _] : all)
                names += (names.empty() ? "" : ", ") + n;
            throw growth::ConfigError("unknown case '" + case_name + "'; valid names: " + names + ", all");
        }

        if (!out_dir.empty())
            std::filesystem::create_directories(out_dir);
        bool all_pass = true;
        for (const auto* cs : selected) {
            const auto res = growth::cases::run_case(*cs, spread_threshold);
            all_pass = all_pass && res.passed();
            std::ostringstream report;
            growth::cases::write_case_report(report, *cs, res);
            if (out_dir.empty()) {
                std::cout << report.str() << '\n';
                continue;
            }
            const std::filesystem::path dir(out_dir);
            const json meta = run_meta("reproduce", {{"case", cs->name}, {"cases_file", cases_file}, {"spread_threshold", spread_threshold}});
            emit((dir / (cs->name + "-report.csv")).string(), report.str(), meta);
            for (const auto& p : res.projections) {
                std::ostringstream body;
                growth::io::write_projection(body, p);
                emit((dir / (cs->name + "-" + p.series.label() + ".csv")).string(), body.str(), meta);
            }
            std::cout << cs->name << ": " << (res.passed() ? "PASS" : "FAIL") << '\n';
        }
        status = all_pass ? 0 : 1;
    }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"growthrate: growth-rate analysis and forecasting"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RatesCmd rates;
    FitCmd fit;
    ForecastCmd forecast;
    IntegrateCmd integrate;
    DiagnoseCmd diagnose;
    ReproduceCmd reproduce;
    rates.setup(app);
    fit.setup(app);
    forecast.setup(app);
    integrate.setup(app);
    diagnose.setup(app);
    reproduce.setup(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const growth::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const growth::NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return reproduce.status;
}
