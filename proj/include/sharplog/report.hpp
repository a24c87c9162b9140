#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sharplog/calibration.hpp"
#include "sharplog/closed_form.hpp"
#include "sharplog/dyadic.hpp"
#include "sharplog/errors.hpp"
#include "sharplog/extremal.hpp"
#include "sharplog/global.hpp"
#include "sharplog/norms.hpp"
#include "sharplog/obstacle.hpp"
#include "sharplog/profile.hpp"
#include "sharplog/tolerances.hpp"

// Experiment runner and artifact emitter: validated configs, assertions tied to
// module invariants, CSV/JSON/SVG outputs written atomically.

namespace sharplog::report {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

inline constexpr const char* tool_version = "0.1.0";
inline constexpr const char* output_root_env = "SHARPLOG_OUTPUT_ROOT";

/// Invalid command-line or suite parameter; `flag` names the offender.
class UsageError : public Error {
public:
    UsageError(std::string flag, std::string message)
        : Error(flag + ": " + message), flag_(std::move(flag)), message_(std::move(message)) {}
    [[nodiscard]] const std::string& flag() const noexcept { return flag_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    std::string flag_, message_;
};

enum class Command { scan, minimizer, extremal, sharpness, solve_obstacle, dyadic, global, report_all };
enum class Format { csv, json, svg };

inline const std::vector<std::pair<Command, std::string>>& command_names() {
    static const std::vector<std::pair<Command, std::string>> names{
        {Command::scan, "scan"},           {Command::minimizer, "minimizer"},
        {Command::extremal, "extremal"},   {Command::sharpness, "sharpness"},
        {Command::solve_obstacle, "solve-obstacle"}, {Command::dyadic, "dyadic"},
        {Command::global, "global"},       {Command::report_all, "report-all"}};
    return names;
}

inline std::string command_name(Command c) {
    for (const auto& [k, v] : command_names())
        if (k == c) return v;
    return "?";
}

inline Command parse_command(const std::string& s) {
    for (const auto& [k, v] : command_names())
        if (v == s) return k;
    throw UsageError("command", "unknown command '" + s + "'");
}

inline std::string format_name(Format f) {
    switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::svg: return "svg";
    }
    return "?";
}

inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "svg") return Format::svg;
    throw UsageError("--format", "unknown format '" + s + "' (expected csv, json or svg)");
}

struct ExperimentConfig {
    Command command = Command::scan;
    std::optional<double> alpha, lambda, mu, x, D, eps;
    std::optional<long long> n;
    int grid_n = 1024;
    int grading = 30;  // geometric levels of the obstacle mesh toward r = 0
    std::vector<double> eps_schedule;
    std::optional<double> tol;
    std::map<std::string, double> tolerances;  // assertion name -> bound override
    std::string output;                        // output root; empty: environment or ./sharplog-out
    std::vector<Format> formats{Format::csv, Format::json, Format::svg};
    std::string suite;                         // report-all only
    std::string id;                            // experiment id; derived from the hash when empty

    [[nodiscard]] bool emits(Format f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }
};

namespace detail {

inline double pi2() { return std::numbers::pi * std::numbers::pi; }

/// JSON number, with non-finite values as strings.
inline json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace detail

/// Parameters that determine the numbers; output location and formats are excluded.
inline json config_json(const ExperimentConfig& c) {
    json j;
    j["command"] = command_name(c.command);
    auto opt = [&](const char* k, const std::optional<double>& v) {
        if (v) j[k] = *v;
    };
    opt("alpha", c.alpha);
    opt("lambda", c.lambda);
    opt("mu", c.mu);
    opt("x", c.x);
    opt("D", c.D);
    opt("eps", c.eps);
    if (c.n) j["n"] = *c.n;
    if (c.command == Command::solve_obstacle) {
        j["grid_n"] = c.grid_n;
        j["grading"] = c.grading;
        if (!c.eps_schedule.empty()) j["eps_schedule"] = c.eps_schedule;
    }
    opt("tol", c.tol);
    if (!c.tolerances.empty()) j["tolerances"] = c.tolerances;
    if (!c.suite.empty()) j["suite"] = c.suite;
    return j;
}

inline std::string config_hash(const ExperimentConfig& c) { return detail::hex64(detail::fnv1a(config_json(c).dump())); }

inline std::string experiment_id(const ExperimentConfig& c) {
    return c.id.empty() ? command_name(c.command) + "-" + config_hash(c).substr(0, 12) : c.id;
}

/// Range checks before dispatch. Throws UsageError naming the flag.
inline void validate(const ExperimentConfig& c) {
    const double pi2 = detail::pi2();
    auto need = [&](const std::optional<double>& v, const char* flag) {
        if (!v) throw UsageError(flag, "required for " + command_name(c.command));
    };
    if (c.alpha && !(*c.alpha > 0.0 && *c.alpha < 1.0)) throw UsageError("--alpha", "must lie in (0, 1)");
    if (c.lambda) {
        if (!(*c.lambda > 0.0)) throw UsageError("--lambda", "must be positive");
        if (c.alpha && !(*c.lambda > 1.0 / (8.0 * pi2 * *c.alpha)))
            throw UsageError("--lambda", "must exceed 1/(8 pi^2 alpha)");
    }
    if (c.mu && !(*c.mu > 0.0 && *c.mu <= 1.0)) throw UsageError("--mu", "must lie in (0, 1]");
    if (c.x && !(*c.x > 0.0 && *c.x < 1.0)) throw UsageError("--x", "must lie in (0, 1)");
    if (c.D && !(*c.D > 1.0)) throw UsageError("--D", "must exceed 1");
    if (c.x && c.D) throw UsageError("--D", "give either --x or --D, not both");
    if (c.eps && !(*c.eps >= tol::eps_floor && *c.eps < std::exp(-1.0)))
        throw UsageError("--eps", "must lie in [1e-12, 1/e)");
    if (c.n && *c.n < 2) throw UsageError("--n", "must be at least 2");
    if (c.grid_n < 2 || c.grid_n > (1 << 20)) throw UsageError("--grid-n", "must lie in [2, 2^20]");
    if (c.grading < 0 || c.grading > 200) throw UsageError("--grading", "must lie in [0, 200]");
    for (std::size_t i = 0; i < c.eps_schedule.size(); ++i) {
        if (!(c.eps_schedule[i] > 0.0)) throw UsageError("--eps-schedule", "entries must be positive");
        if (i > 0 && !(c.eps_schedule[i] < c.eps_schedule[i - 1]))
            throw UsageError("--eps-schedule", "must decrease strictly");
    }
    if (!c.eps_schedule.empty() && !(c.eps_schedule.back() <= 1e-6))
        throw UsageError("--eps-schedule", "must reach 1e-6");
    if (c.tol && !(*c.tol > 0.0)) throw UsageError("--tol", "must be positive");
    for (const auto& [k, v] : c.tolerances)
        if (!std::isfinite(v)) throw UsageError("tolerances." + k, "must be finite");
    if (c.formats.empty()) throw UsageError("--format", "at least one format is needed");
    switch (c.command) {
    case Command::scan:
    case Command::extremal:
    case Command::sharpness: need(c.alpha, "--alpha"); break;
    case Command::solve_obstacle:
        need(c.alpha, "--alpha");
        if (!c.x && !c.D) throw UsageError("--x", "solve-obstacle needs --x or --D");
        break;
    case Command::minimizer:
        if ((c.x || c.D) && !c.alpha) throw UsageError("--alpha", "required with --x or --D");
        break;
    case Command::dyadic:
    case Command::global:
        if (c.x && !c.alpha) throw UsageError("--alpha", "required with --x");
        if (c.D) throw UsageError("--D", "not used by " + command_name(c.command));
        break;
    case Command::report_all: break;
    }
}

/// Reads one suite item. Unknown keys are usage errors.
inline ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw UsageError("suite", "each experiment must be a JSON object");
    ExperimentConfig c;
    if (!j.contains("command")) throw UsageError("command", "missing");
    c.command = parse_command(j.at("command").get<std::string>());
    static const std::set<std::string> known{"command", "alpha", "lambda", "mu",  "x",       "D",
                                             "eps",     "n",     "grid_n", "grading", "eps_schedule", "tol",
                                             "tolerances", "id", "format"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw UsageError(k, "unknown suite key");
    auto num = [&](const char* k) -> std::optional<double> {
        if (!j.contains(k)) return std::nullopt;
        if (!j.at(k).is_number()) throw UsageError(k, "must be a number");
        return j.at(k).get<double>();
    };
    c.alpha = num("alpha");
    c.lambda = num("lambda");
    c.mu = num("mu");
    c.x = num("x");
    c.D = num("D");
    c.eps = num("eps");
    c.tol = num("tol");
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer()) throw UsageError("n", "must be an integer");
        c.n = j.at("n").get<long long>();
    }
    if (j.contains("grid_n")) c.grid_n = j.at("grid_n").get<int>();
    if (j.contains("grading")) c.grading = j.at("grading").get<int>();
    if (j.contains("eps_schedule")) c.eps_schedule = j.at("eps_schedule").get<std::vector<double>>();
    if (j.contains("tolerances")) c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
    if (j.contains("id")) c.id = j.at("id").get<std::string>();
    if (j.contains("format")) {
        c.formats.clear();
        for (const auto& f : j.at("format")) c.formats.push_back(parse_format(f.get<std::string>()));
    }
    if (c.command == Command::report_all) throw UsageError("command", "report-all cannot be nested in a suite");
    return c;
}

// ---------------------------------------------------------------------------
// Profiles in the radial-core JSON schema: {R, h2_zero, continuous, segments: [{lo, hi, kind, params}]}.

inline json profile_to_json(const RadialProfile& p) {
    json segs = json::array();
    for (const auto& s : p.segments()) {
        json params;
        std::visit(
            [&](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, PowerForm>) {
                    params = {{"offset", f.offset}, {"coef", f.coef}, {"exponent", f.exponent}};
                } else if constexpr (std::is_same_v<T, BiharmonicLogForm>) {
                    params = {{"constant", f.constant}, {"r2", f.r2}, {"rm2", f.rm2}, {"log", f.log}};
                } else if constexpr (std::is_same_v<T, PolynomialForm>) {
                    json t = json::array();
                    for (const auto& [k, c] : f.terms) t.push_back(json::array({k, c}));
                    params = {{"terms", t}};
                } else if constexpr (std::is_same_v<T, GaussianForm>) {
                    params = {{"width", f.width}, {"q", f.q}};
                } else {
                    params = {{"r", f.r}, {"value", f.value}, {"slope", f.slope}};
                }
            },
            s.form);
        segs.push_back({{"lo", s.lo}, {"hi", s.hi}, {"kind", kind_name(s.form)}, {"params", params}});
    }
    return {{"R", p.radius()}, {"h2_zero", p.h2_zero()}, {"continuous", p.continuous()}, {"segments", segs}};
}

inline RadialProfile profile_from_json(const json& j) {
    std::vector<Segment> segs;
    for (const auto& s : j.at("segments")) {
        const auto& q = s.at("params");
        const std::string kind = s.at("kind").get<std::string>();
        SegmentForm form;
        if (kind == "power") {
            form = PowerForm{q.at("offset").get<double>(), q.at("coef").get<double>(), q.at("exponent").get<double>()};
        } else if (kind == "biharmonic_log") {
            form = BiharmonicLogForm{q.at("constant").get<double>(), q.at("r2").get<double>(), q.at("rm2").get<double>(),
                                     q.at("log").get<double>()};
        } else if (kind == "polynomial") {
            PolynomialForm f;
            for (const auto& t : q.at("terms")) f.terms.emplace_back(t.at(0).get<int>(), t.at(1).get<double>());
            form = std::move(f);
        } else if (kind == "gaussian") {
            form = GaussianForm{q.at("width").get<double>(), q.at("q").get<std::vector<double>>()};
        } else if (kind == "sampled") {
            form = SampledForm{q.at("r").get<std::vector<double>>(), q.at("value").get<std::vector<double>>(),
                               q.at("slope").get<std::vector<double>>()};
        } else {
            throw DomainError("profile_from_json: unknown segment kind '" + kind + "'");
        }
        segs.push_back(Segment{s.at("lo").get<double>(), s.at("hi").get<double>(), std::move(form)});
    }
    return RadialProfile(std::move(segs), j.value("h2_zero", false), j.value("continuous", true));
}

// ---------------------------------------------------------------------------
// Emitters.

/// Comma-separated, header row, 17 significant digits.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    [[nodiscard]] std::string csv() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ',';
                out += r[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return out;
    }
};

struct Series {
    std::string name;
    std::vector<double> x, y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::optional<double> reference;  // horizontal line
    std::string reference_label;
};

/// Line plot by direct path generation.
inline std::string svg_plot(const PlotSpec& spec, const std::vector<Series>& series) {
    constexpr double W = 720, H = 440, L = 80, R = 180, T = 40, B = 60;
    auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0) && (!spec.log_y || y > 0);
    };
    double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (usable(s.x[i], s.y[i])) {
                x0 = std::min(x0, tx(s.x[i]));
                x1 = std::max(x1, tx(s.x[i]));
                y0 = std::min(y0, ty(s.y[i]));
                y1 = std::max(y1, ty(s.y[i]));
            }
    if (spec.reference && (!spec.log_y || *spec.reference > 0)) {
        y0 = std::min(y0, ty(*spec.reference));
        y1 = std::max(y1, ty(*spec.reference));
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };
    auto f2 = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.2f", v);
        return std::string(b);
    };
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '<') o += "&lt;";
            else if (c == '>') o += "&gt;";
            else if (c == '&') o += "&amp;";
            else o += c;
        }
        return o;
    };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << esc(spec.title) << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        const std::string xl = spec.log_x ? "1e" + detail::fmt_short(xv) : detail::fmt_short(xv);
        const std::string yl = spec.log_y ? "1e" + detail::fmt_short(yv) : detail::fmt_short(yv);
        o << "<text x=\"" << f2(px(xv)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << xl << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << f2(py(yv) + 4) << "\" text-anchor=\"end\">" << yl << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">" << esc(spec.x_label)
      << (spec.log_x ? " (log)" : "") << "</text>\n";
    o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
      << ")\" text-anchor=\"middle\">" << esc(spec.y_label) << (spec.log_y ? " (log)" : "") << "</text>\n";
    if (spec.reference && (!spec.log_y || *spec.reference > 0)) {
        const double yr = py(ty(*spec.reference));
        o << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << f2(yr) << "\" y2=\"" << f2(yr)
          << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
        o << "<text x=\"" << W - R + 8 << "\" y=\"" << f2(yr + 4) << "\">" << esc(spec.reference_label) << "</text>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* col = palette[s % 10];
        std::string d;
        bool pen = false;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (!usable(series[s].x[i], series[s].y[i])) {
                pen = false;
                continue;
            }
            d += (pen ? " L" : (d.empty() ? "M" : " M")) + f2(px(tx(series[s].x[i]))) + " " + f2(py(ty(series[s].y[i])));
            pen = true;
        }
        if (!d.empty())
            o << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\"/>\n";
        const double ly = T + 16 + 18 * static_cast<double>(s);
        o << "<line x1=\"" << W - R + 8 << "\" x2=\"" << W - R + 28 << "\" y1=\"" << ly << "\" y2=\"" << ly
          << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - R + 32 << "\" y=\"" << ly + 4 << "\">" << esc(series[s].name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

/// Writes to a temporary sibling and renames it over the target.
inline void atomic_write(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) throw Error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Records.

struct Assertion {
    std::string name;      // module.invariant
    std::string claim;     // statement the invariant supports
    bool passed = false;
    double value = 0.0;
    std::string relation;  // value <relation> bound
    double bound = 0.0;
    std::string detail;
};

/// A reported number and the module operation that produced it.
struct Value {
    std::string name;
    double value = 0.0;
    std::string source;
};

struct ReportRecord {
    std::string id;
    std::string command;
    std::string config_hash;
    json inputs;
    std::vector<std::string> outputs;  // relative to the output root
    std::vector<Assertion> assertions;
    std::vector<Value> values;
    std::string tool_version = report::tool_version;
    std::string error;                 // module error surfaced verbatim
    double wall_time = 0.0;            // seconds; kept out of the deterministic files

    [[nodiscard]] bool passed() const {
        return error.empty() && std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
    }
    [[nodiscard]] json to_json() const {
        json a = json::array();
        for (const auto& x : assertions)
            a.push_back({{"name", x.name}, {"claim", x.claim}, {"passed", x.passed}, {"value", detail::num(x.value)},
                         {"relation", x.relation}, {"bound", detail::num(x.bound)}, {"detail", x.detail}});
        json v = json::array();
        for (const auto& x : values) v.push_back({{"name", x.name}, {"value", detail::num(x.value)}, {"source", x.source}});
        json j{{"id", id},         {"command", command}, {"config_hash", config_hash}, {"tool_version", tool_version},
               {"inputs", inputs}, {"outputs", outputs}, {"assertions", a},           {"values", v},
               {"passed", passed()}};
        if (!error.empty()) j["error"] = error;
        return j;
    }
};

namespace claims {
inline constexpr const char* closed_form = "closed-form minimizer";
inline constexpr const char* sharp_constant = "sharp double-log constant";
inline constexpr const char* failure = "failure at the sharp constant";
inline constexpr const char* scale_invariant = "scale-invariant log estimate";
inline constexpr const char* dyadic = "dyadic L-infinity bound";
inline constexpr const char* cutoff = "cutoff log estimate";
inline constexpr const char* mu_norm = "mu-norm log estimate";
inline constexpr const char* split = "low/high split bound";
inline constexpr const char* solver = "penalization solver";

inline const std::vector<std::string>& all() {
    static const std::vector<std::string> c{closed_form, sharp_constant, failure, scale_invariant, dyadic,
                                            cutoff,      mu_norm,        split,   solver};
    return c;
}
} // namespace claims

/// Collects assertions and artifacts for one experiment.
class Run {
public:
    Run(const ExperimentConfig& cfg, fs::path root, fs::path dir) : cfg_(cfg), root_(std::move(root)), dir_(std::move(dir)) {
        rec_.id = experiment_id(cfg);
        rec_.command = command_name(cfg.command);
        rec_.config_hash = config_hash(cfg);
        rec_.inputs = config_json(cfg);
    }

    [[nodiscard]] const ExperimentConfig& config() const { return cfg_; }

    /// Bound for an assertion, honouring the config's overrides.
    [[nodiscard]] double bound(const std::string& name, double fallback) const {
        const auto it = cfg_.tolerances.find(name);
        return it == cfg_.tolerances.end() ? fallback : it->second;
    }

    void check(const std::string& name, const std::string& claim, double value, const std::string& rel, double fallback,
               std::string detail = {}) {
        const double b = bound(name, fallback);
        bool ok = false;
        if (rel == "<=") ok = value <= b;
        else if (rel == "<") ok = value < b;
        else if (rel == ">=") ok = value >= b;
        else if (rel == ">") ok = value > b;
        rec_.assertions.push_back({name, claim, ok, value, rel, b, std::move(detail)});
    }
    void flag(const std::string& name, const std::string& claim, bool ok, std::string detail = {}) {
        rec_.assertions.push_back({name, claim, ok, ok ? 1.0 : 0.0, "==", 1.0, std::move(detail)});
    }
    void value(const std::string& name, double v, const std::string& source) { rec_.values.push_back({name, v, source}); }

    void table(const std::string& stem, const Table& t) {
        if (cfg_.emits(Format::csv)) put(stem + ".csv", t.csv());
    }
    void data(const std::string& stem, const json& j) {
        if (cfg_.emits(Format::json)) put(stem + ".json", j.dump(2) + "\n");
    }
    void plot(const std::string& stem, const PlotSpec& s, const std::vector<Series>& series) {
        if (cfg_.emits(Format::svg)) put(stem + ".svg", svg_plot(s, series));
    }

    ReportRecord finish() {
        put("record.json", rec_.to_json().dump(2) + "\n");
        return rec_;
    }
    ReportRecord& record() { return rec_; }

private:
    void put(const std::string& name, const std::string& content) {
        const fs::path p = dir_ / name;
        atomic_write(p, content);
        rec_.outputs.push_back(fs::relative(p, root_).generic_string());
    }

    ExperimentConfig cfg_;
    fs::path root_, dir_;
    ReportRecord rec_;
};

// ---------------------------------------------------------------------------
// Experiments.

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i <= n; ++i) v.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / n));
    return v;
}

/// Deviation sequence strictly decreasing.
inline bool improving(const std::vector<double>& d) {
    for (std::size_t i = 1; i < d.size(); ++i)
        if (!(d[i] < d[i - 1])) return false;
    return true;
}

inline std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
    return s;
}

} // namespace detail

inline void run_scan(Run& run) {
    const auto& c = run.config();
    const double alpha = *c.alpha;
    const ScanResult s = scan_constants(alpha, c.lambda);
    const EnergyCurves curves(alpha);
    Table t{{"x", "D", "g", "F", "H"}, {}};
    Series F{"F at C_alpha", {}, {}};
    for (const auto& r : s.grid) {
        t.add({detail::fmt17(r.x), detail::fmt17(r.D), detail::fmt17(r.g), detail::fmt17(r.F), detail::fmt17(r.H)});
        F.x.push_back(r.x);
        F.y.push_back(r.F);
    }
    run.table("scan", t);
    json j{{"alpha", alpha},
           {"target", s.target},
           {"x_alpha", s.x_alpha},
           {"y_alpha", s.y_alpha},
           {"D_at_x_alpha", s.D_at_x_alpha},
           {"D_inf_alpha", s.D_inf_alpha},
           {"log_C_trial", s.log_C_trial},
           {"log_C_alpha", s.log_C_alpha},
           {"C_alpha", detail::num(s.C_alpha)},
           {"log_C_alpha_formula", s.log_C_alpha_formula},
           {"log_C_alpha_printed", s.log_C_alpha_printed},
           {"infimum_estimate", s.infimum_estimate},
           {"D_monotone", s.D_monotone},
           {"grid_points", s.grid.size()}};
    if (s.lambda) {
        j["lambda"] = *s.lambda;
        if (s.log_C_lambda) j["log_C_lambda"] = *s.log_C_lambda;
        if (s.C_lambda) j["C_lambda"] = detail::num(*s.C_lambda);
        if (s.x_lambda) j["x_lambda"] = *s.x_lambda;
        if (s.min_lambda_H) j["min_lambda_H"] = *s.min_lambda_H;
    }
    run.data("scan", j);
    run.plot("scan", {"F at C_alpha over the contact parameter", "x", "F", true, false, s.target, "8 pi^2 alpha"}, {F});

    run.value("log_C_alpha", s.log_C_alpha, "closed-form-minimizer/scan_constants");
    run.value("infimum_F", s.infimum_estimate, "closed-form-minimizer/scan_constants");
    run.check("closed-form-minimizer.scan.inf_F_at_least_target", claims::sharp_constant, s.infimum_estimate, ">=",
              s.target);
    run.flag("closed-form-minimizer.scan.D_nonincreasing", claims::closed_form, s.D_monotone);

    // asymptotic ratios at three scales, each deviation smaller than the last
    std::vector<double> dg, dd, dF, dh;
    for (double x : {1e-4, 1e-6, 1e-8}) {
        dg.push_back(std::abs(curves.g(x) / curves.g_asymptotic(x) - 1.0));
        dd.push_back(std::abs(curves.D(x) / curves.D_asymptotic(x) - 1.0));
    }
    for (double x : {1e-20, 1e-60, 1e-200}) dF.push_back(std::abs(curves.F(x, 1.0) / s.target - 1.0));
    for (double y : {-1e-2, -1e-3, -1e-4}) dh.push_back(std::abs(curves.h(y) / (4.0 * y * y) - 1.0));
    const double d_near_one = std::abs(curves.D(1.0 - 1e-4) - 1.0);
    run.flag("closed-form-minimizer.asymptotics.g_ratio_improves", claims::closed_form, detail::improving(dg),
             "deviations " + detail::fmt_short(dg[0]) + ", " + detail::fmt_short(dg[1]) + ", " + detail::fmt_short(dg[2]));
    run.flag("closed-form-minimizer.asymptotics.D_ratio_improves", claims::closed_form, detail::improving(dd),
             "deviations " + detail::fmt_short(dd[0]) + ", " + detail::fmt_short(dd[1]) + ", " + detail::fmt_short(dd[2]));
    run.flag("closed-form-minimizer.asymptotics.F_tends_to_target", claims::sharp_constant, detail::improving(dF),
             "deviations " + detail::fmt_short(dF[0]) + ", " + detail::fmt_short(dF[1]) + ", " + detail::fmt_short(dF[2]));
    run.flag("closed-form-minimizer.asymptotics.h_ratio_improves", claims::closed_form, detail::improving(dh),
             "deviations " + detail::fmt_short(dh[0]) + ", " + detail::fmt_short(dh[1]) + ", " + detail::fmt_short(dh[2]));
    run.check("closed-form-minimizer.asymptotics.D_near_one", claims::closed_form, d_near_one, "<=", 1e-2);
}

namespace detail {

struct MinimizerCheck {
    double matching = 0.0, boundary = 0.0, det_error = 0.0, energy_error = 0.0;
    double quadrature = 0.0, closed = 0.0;
};

inline double det_direct(double r) {
    const double a11 = 2 * (r - 1 / r), a12 = 2 / r * (1 - 1 / (r * r));
    const double a21 = 2 * (1 + 1 / (r * r)), a22 = 2 / (r * r) * (3 / (r * r) - 1);
    return a11 * a22 - a12 * a21;
}

inline MinimizerCheck check_minimizer(const MinimizerClosedForm& m, bool with_energy) {
    MinimizerCheck c;
    const auto mr = m.matching_residuals();
    c.matching = *std::max_element(mr.begin(), mr.end());
    const auto br = m.boundary_residuals();
    c.boundary = std::max(br[0], br[1]);
    const double direct = det_direct(m.r0);
    c.det_error = std::abs(det_A(m.r0) - direct) / std::abs(direct);
    if (with_energy) {
        c.closed = m.energy();
        c.quadrature = laplacian_l2_sq(minimizer_profile(m));
        c.energy_error = std::abs(c.quadrature / c.closed - 1.0);
    }
    return c;
}

} // namespace detail

inline void run_minimizer(Run& run) {
    const auto& c = run.config();
    if (c.x || c.D) {
        const double alpha = *c.alpha;
        const double x = c.x ? *c.x : contact_from_gap(alpha, *c.D).x;
        const auto m = coefficients_from_contact(alpha, x);
        const auto p = minimizer_profile(m);
        const auto k = detail::check_minimizer(m, true);
        Table t{{"r", "u", "obstacle", "laplacian"}, {}};
        Series su{"u*", {}, {}}, so{"1 - D r^alpha", {}, {}};
        for (int i = 0; i <= 400; ++i) {
            const double r = i / 400.0;
            const Jet jt = p.jet(r);
            const double psi = 1.0 - m.D * std::pow(r, alpha);
            t.add({detail::fmt17(r), detail::fmt17(jt.f), detail::fmt17(psi),
                   r > 0 ? detail::fmt17(jt.laplacian(r)) : std::string("nan")});
            su.x.push_back(r);
            su.y.push_back(jt.f);
            so.x.push_back(r);
            so.y.push_back(psi);
        }
        run.table("minimizer", t);
        run.data("minimizer", {{"alpha", alpha},
                               {"x", x},
                               {"r0", m.r0},
                               {"D", m.D},
                               {"b", m.b},
                               {"c", m.c},
                               {"g", m.g()},
                               {"energy_closed_form", k.closed},
                               {"energy_quadrature", k.quadrature},
                               {"matching_residual", k.matching},
                               {"boundary_residual", k.boundary},
                               {"det_A", det_A(m.r0)},
                               {"profile", profile_to_json(p)}});
        run.plot("minimizer", {"Minimizer and obstacle", "r", "u", false, false, std::nullopt, ""}, {su, so});
        run.value("D", m.D, "closed-form-minimizer/coefficients_from_contact");
        run.value("energy", k.closed, "closed-form-minimizer/energy");
        run.check("closed-form-minimizer.matching_residual", claims::closed_form, k.matching, "<", tol::matching);
        run.check("closed-form-minimizer.boundary_residual", claims::closed_form, k.boundary, "<", tol::boundary_closed);
        run.check("closed-form-minimizer.det_A_relative", claims::closed_form, k.det_error, "<", tol::det_relative);
        run.check("closed-form-minimizer.energy_identity", claims::closed_form, k.energy_error, "<",
                  tol::energy_identity);
        return;
    }
    // lattice and random pairs
    std::vector<double> alphas = c.alpha ? std::vector<double>{*c.alpha} : std::vector<double>{0.3, 0.5, 0.7};
    Table lat{{"alpha", "x", "D", "g", "energy_closed_form", "energy_quadrature", "relative_error", "matching_residual",
               "boundary_residual"},
              {}};
    double worst_energy = 0.0, worst_match = 0.0, worst_boundary = 0.0;
    std::vector<Series> curves;
    for (double a : alphas) {
        Series s{"alpha=" + detail::fmt_short(a), {}, {}};
        for (double x : {1e-4, 1e-3, 1e-2, 0.1, 0.25, 0.5, 0.75, 0.9}) {
            const auto m = coefficients_from_contact(a, x);
            const auto k = detail::check_minimizer(m, true);
            lat.add({detail::fmt17(a), detail::fmt17(x), detail::fmt17(m.D), detail::fmt17(m.g()), detail::fmt17(k.closed),
                     detail::fmt17(k.quadrature), detail::fmt17(k.energy_error), detail::fmt17(k.matching),
                     detail::fmt17(k.boundary)});
            worst_energy = std::max(worst_energy, k.energy_error);
            worst_match = std::max(worst_match, k.matching);
            worst_boundary = std::max(worst_boundary, k.boundary);
            s.x.push_back(x);
            s.y.push_back(k.closed);
        }
        curves.push_back(std::move(s));
    }
    run.table("energy_lattice", lat);
    run.plot("energy_lattice", {"Minimal energy D(x)^2 g(x)", "x", "energy", true, true, std::nullopt, ""}, curves);

    Table rnd{{"alpha", "r0", "matching_residual", "boundary_residual", "det_A", "det_direct", "det_relative_error"}, {}};
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ua(0.05, 0.95), ur(0.05, 0.98);
    double worst_det = 0.0, rnd_match = 0.0, rnd_boundary = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double a = ua(rng), r0 = ur(rng);
        const auto m = coefficients_from_contact(a, r0 * r0);
        const auto k = detail::check_minimizer(m, false);
        rnd.add({detail::fmt17(a), detail::fmt17(r0), detail::fmt17(k.matching), detail::fmt17(k.boundary),
                 detail::fmt17(det_A(m.r0)), detail::fmt17(detail::det_direct(m.r0)), detail::fmt17(k.det_error)});
        worst_det = std::max(worst_det, k.det_error);
        rnd_match = std::max(rnd_match, k.matching);
        rnd_boundary = std::max(rnd_boundary, k.boundary);
    }
    run.table("random_pairs", rnd);
    run.data("minimizer", {{"lattice_worst_energy_error", worst_energy},
                           {"lattice_worst_matching", worst_match},
                           {"lattice_worst_boundary", worst_boundary},
                           {"random_worst_matching", rnd_match},
                           {"random_worst_boundary", rnd_boundary},
                           {"random_worst_det_error", worst_det},
                           {"det_A_half", det_A(0.5)}});
    run.value("det_A(0.5)", det_A(0.5), "closed-form-minimizer/det_A");
    run.check("closed-form-minimizer.energy_identity", claims::closed_form, worst_energy, "<", tol::energy_identity);
    run.check("closed-form-minimizer.matching_residual", claims::closed_form, std::max(worst_match, rnd_match), "<",
              tol::matching);
    run.check("closed-form-minimizer.boundary_residual", claims::closed_form, std::max(worst_boundary, rnd_boundary), "<",
              tol::boundary_closed);
    run.check("closed-form-minimizer.det_A_relative", claims::closed_form, worst_det, "<", tol::det_relative);
    run.check("closed-form-minimizer.det_A_half", claims::closed_form, std::abs(det_A(0.5) + 144.0), "<=", 1e-12);
}

inline void run_extremal(Run& run) {
    const auto& c = run.config();
    const double alpha = *c.alpha, eps = c.eps.value_or(1e-8);
    const double target = 8.0 * detail::pi2() * alpha;
    std::vector<double> sweep{1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
    if (std::find(sweep.begin(), sweep.end(), eps) == sweep.end()) sweep.push_back(eps);
    std::sort(sweep.begin(), sweep.end(), std::greater<>());
    Table t{{"eps", "L", "sup", "lap_sq", "lipschitz", "holder", "N_alpha", "quotient", "quotient_over_target"}, {}};
    Series q{"quotient", {}, {}};
    LogLogQuotient at{};
    double sup_err = 0.0, lap_err = 0.0;
    for (double e : sweep) {
        const auto ex = build_loglog_extremal(e);
        const auto r = loglog_quotient(e, alpha, 1.0);
        t.add({detail::fmt17(e), detail::fmt17(r.L), detail::fmt17(r.sup), detail::fmt17(r.lap_sq), detail::fmt17(r.lip),
               detail::fmt17(r.holder), detail::fmt17(r.N_alpha), detail::fmt17(r.quotient),
               detail::fmt17(r.quotient / target)});
        q.x.push_back(r.L);
        q.y.push_back(r.quotient);
        sup_err = std::max(sup_err, std::abs(r.sup / ex.sup_closed_form() - 1.0));
        lap_err = std::max(lap_err, std::abs(r.lap_sq / (1.0 + 10.5 / r.L) - 1.0));
        if (e == eps) at = r;
    }
    run.table("extremal", t);
    run.data("extremal", {{"alpha", alpha},
                          {"eps", eps},
                          {"C0", 1.0},
                          {"target", target},
                          {"quotient", at.quotient},
                          {"quotient_over_target", at.quotient / target},
                          {"sup", at.sup},
                          {"lap_sq", at.lap_sq},
                          {"holder", at.holder},
                          {"N_alpha", at.N_alpha}});
    run.plot("extremal", {"Double-log quotient of u_eps", "log(1/eps)", "quotient", false, false, target, "8 pi^2 alpha"},
             {q});
    run.value("quotient", at.quotient, "extremal-families/loglog_quotient");
    run.check("extremal-families.u_eps.sup_closed_form", claims::sharp_constant, sup_err, "<=", 1e-10);
    run.check("extremal-families.u_eps.energy_closed_form", claims::sharp_constant, lap_err, "<=", 1e-8);
    run.check("extremal-families.u_eps.quotient_near_target", claims::sharp_constant, at.quotient, "<=",
              target * (1.0 + tol::quotient_slack), "eps = " + detail::fmt_short(eps));
}

inline void run_sharpness(Run& run) {
    const auto& c = run.config();
    const double alpha = *c.alpha;
    const double target = 8.0 * detail::pi2() * alpha;
    std::vector<long long> ns = c.n ? std::vector<long long>{*c.n}
                                    : std::vector<long long>{100, 1000, 10000, 100000, 1000000};
    Table t{{"n", "x_n", "D_n", "g_n", "H_n", "H_n_measured", "lap_sq", "holder", "sup"}, {}};
    Series h{"H_n", {}, {}};
    std::vector<double> H;
    double worst_norm = 0.0, worst_feas = 0.0, worst_energy = 0.0, max_H = -HUGE_VAL;
    for (long long n : ns) {
        const auto s = sharpness_term(alpha, n);
        t.add({std::to_string(n), detail::fmt17(s.x_n), detail::fmt17(s.D_n), detail::fmt17(s.g_n), detail::fmt17(s.H_n),
               detail::fmt17(s.H_n_measured), detail::fmt17(s.lap_sq), detail::fmt17(s.holder), detail::fmt17(s.sup)});
        h.x.push_back(static_cast<double>(n));
        h.y.push_back(s.H_n);
        H.push_back(s.H_n);
        max_H = std::max(max_H, s.H_n);
        worst_norm = std::max({worst_norm, std::abs(s.u_n(0.0) - 1.0), std::abs(s.sup - 1.0)});
        double gap = 0.0;
        for (int k = 0; k <= 2000; ++k) {
            const double r = k / 2000.0;
            gap = std::min(gap, (s.u_n(r) - (1.0 - s.D_n * std::pow(r, alpha))) / s.D_n);
        }
        worst_feas = std::max(worst_feas, -gap);
        worst_energy = std::max(worst_energy, std::abs(s.lap_sq / (s.D_n * s.D_n * s.g_n) - 1.0));
    }
    run.table("sharpness", t);
    run.data("sharpness", {{"alpha", alpha}, {"target", target}, {"n", ns}, {"H_n", H}});
    run.plot("sharpness", {"H_n below the sharp constant", "n", "H_n", true, false, target, "8 pi^2 alpha"}, {h});
    run.value("max_H_n", max_H, "extremal-families/sharpness_term");
    run.check("extremal-families.sharpness.below_target", claims::failure, max_H, "<", target);
    run.check("extremal-families.sharpness.normalized", claims::failure, worst_norm, "<=", 1e-12);
    run.check("extremal-families.sharpness.feasible", claims::failure, worst_feas, "<=", 1e-12);
    run.check("extremal-families.sharpness.energy", claims::failure, worst_energy, "<=", tol::energy_identity);
    if (ns.size() > 1) {
        std::vector<double> dev;
        for (double v : H) dev.push_back(target - v);
        run.flag("extremal-families.sharpness.monotone_approach", claims::failure, detail::improving(dev));
    }
}

namespace detail {

inline json solve_json(const SolveResult& s) {
    json trace = json::array();
    for (const auto& e : s.trace)
        trace.push_back({{"iteration", e.iteration}, {"eps", e.eps}, {"residual", num(e.residual)},
                         {"energy", num(e.energy)}, {"step", e.step}, {"active", e.active}});
    return {{"method", s.method},
            {"energy", s.energy},
            {"contact_radius", s.contact_radius},
            {"support_radius", s.support_radius},
            {"feasibility_gap", s.feasibility_gap},
            {"kkt_residual", s.kkt_residual},
            {"stage_eps", s.stage_eps},
            {"stage_gap", s.stage_gap},
            {"stage_energy", s.stage_energy},
            {"trace", trace}};
}

/// Randomized properties of the penalty switch: range, monotonicity, Lipschitz
/// constant 1/eps, primitive.
inline double theta_property_violation(std::uint64_t seed, int samples) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t(-2.0, 2.0), le(-8.0, 0.0);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double eps = std::pow(10.0, le(rng));
        const double a = t(rng), b = t(rng);
        const double ta = theta(a, eps), tb = theta(b, eps);
        worst = std::max({worst, -ta, ta - 1.0});
        if (a <= b) worst = std::max(worst, tb - ta);
        worst = std::max(worst, std::abs(ta - tb) - std::abs(a - b) / eps * (1.0 + 1e-12));
        const double s = eps * 0.3;
        worst = std::max(worst, std::abs(theta_primitive(s, eps) - theta_primitive(0.0, eps) - (s - 0.5 * s * s / eps)) - 1e-15);
    }
    return worst;
}

} // namespace detail

inline void run_solve(Run& run) {
    const auto& c = run.config();
    const double alpha = *c.alpha;
    const double x = c.x ? *c.x : contact_from_gap(alpha, *c.D).x;
    PenalizationConfig cfg;
    if (!c.eps_schedule.empty()) cfg.eps_schedule = c.eps_schedule;
    if (c.tol) cfg.inner_tolerance = *c.tol;
    const auto grid = RadialGrid::graded(c.grid_n, c.grading);
    const auto cv = cross_validate(alpha, x, grid, cfg);
    const auto exact = minimizer_profile(coefficients_from_contact(alpha, x));

    Table t{{"r", "u_qp", "u_penalized", "u_closed_form", "obstacle"}, {}};
    Series a{"QP oracle", {}, {}}, b{"penalization", {}, {}}, e{"closed form", {}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.nodes[i];
        t.add({detail::fmt17(r), detail::fmt17(cv.qp.dofs[2 * i]), detail::fmt17(cv.penalized.dofs[2 * i]),
               detail::fmt17(exact(r)), detail::fmt17(1.0 - cv.D * std::pow(r, alpha))});
        a.x.push_back(r);
        a.y.push_back(cv.qp.dofs[2 * i]);
        b.x.push_back(r);
        b.y.push_back(cv.penalized.dofs[2 * i]);
        e.x.push_back(r);
        e.y.push_back(exact(r));
    }
    run.table("solution", t);
    run.data("solve", {{"alpha", alpha},
                       {"x", x},
                       {"D", cv.D},
                       {"grid_n", c.grid_n},
                       {"grading", c.grading},
                       {"closed_form_energy", cv.closed_energy},
                       {"qp_energy_error", cv.qp_energy_error},
                       {"penalized_energy_error", cv.pen_energy_error},
                       {"qp_vs_penalized", cv.qp_vs_pen},
                       {"qp_sup_error", cv.qp_sup_error},
                       {"penalized_sup_error", cv.pen_sup_error},
                       {"qp_contact_cells", cv.qp_contact_cells},
                       {"penalized_contact_cells", cv.pen_contact_cells},
                       {"qp", detail::solve_json(cv.qp)},
                       {"penalized", detail::solve_json(cv.penalized)}});
    run.data("qp_profile", profile_to_json(cv.qp.profile));
    run.data("penalized_profile", profile_to_json(cv.penalized.profile));
    run.plot("solve", {"Obstacle problem solutions", "r", "u", false, false, std::nullopt, ""}, {a, b, e});

    run.value("qp_energy", cv.qp.energy, "obstacle-solver/qp_oracle");
    run.value("penalized_energy", cv.penalized.energy, "obstacle-solver/solve_penalized");
    run.value("closed_form_energy", cv.closed_energy, "closed-form-minimizer/energy");
    run.check("obstacle-solver.qp.energy_vs_closed_form", claims::solver, cv.qp_energy_error, "<=", tol::solver_energy);
    run.check("obstacle-solver.qp.kkt_residual", claims::solver, cv.qp.kkt_residual, "<=", tol::kkt);
    run.check("obstacle-solver.qp.contact_cells", claims::solver, cv.qp_contact_cells, "<=", tol::contact_cells);
    run.check("obstacle-solver.penalization.energy_vs_closed_form", claims::solver, cv.pen_energy_error, "<=",
              tol::solver_energy);
    run.check("obstacle-solver.penalization.agreement_with_qp", claims::solver, cv.qp_vs_pen, "<=",
              tol::solver_agreement);
    run.check("obstacle-solver.penalization.contact_cells", claims::solver, cv.pen_contact_cells, "<=",
              tol::contact_cells);
    const auto& gaps = cv.penalized.stage_gap;
    std::vector<double> g(gaps.begin(), gaps.end());
    run.flag("obstacle-solver.penalization.gap_decreasing", claims::solver, g.size() >= 2 && detail::improving(g));
    run.check("obstacle-solver.penalization.final_gap", claims::solver, g.empty() ? HUGE_VAL : g.back(), "<", 1e-3);
    run.check("obstacle-solver.theta.properties", claims::solver, detail::theta_property_violation(7, 5000), "<=", 0.0);
}

namespace detail {

inline json measurement_json(const calibration::Measurement& m) {
    return {{"id", m.id},
            {"alpha", m.alpha},
            {"lap_ratio", m.lap_ratio},
            {"holder_ratio", m.holder_ratio},
            {"max_bernstein", m.max_bernstein},
            {"reconstruction_error", m.reconstruction_error},
            {"plancherel_error", m.plancherel_error},
            {"tail_energy_fraction", m.tail_energy_fraction},
            {"split_ratio", m.ll.printed.linear_ratio},
            {"squared_ratio", m.ll.printed.squared_ratio},
            {"prop_ratio", m.ll.prop_ratio},
            {"ball_ratio", m.ll.ball_applicable ? json(m.ll.ball_ratio) : json(nullptr)},
            {"low_ratio", m.split.low_ratio},
            {"h1_ratio", m.split.h1_ratio},
            {"fitted_final", m.split.fitted_final}};
}

inline json constants_json(const calibration::Constants& c) {
    return {{"K", c.K},
            {"K_holder", c.K_holder},
            {"split", c.ll.split},
            {"squared", c.ll.squared},
            {"prop", c.ll.prop},
            {"ball", c.ll.ball},
            {"low", c.split.low},
            {"h1", c.split.h1},
            {"final", c.split.final}};
}

inline std::vector<double> constants_vector(const calibration::Constants& c) {
    return {c.K, c.K_holder, c.ll.split, c.ll.squared, c.ll.prop, c.ll.ball, c.split.low, c.split.h1, c.split.final};
}

inline double partition_residual(const DecomposeOptions& o) {
    const auto cp = build_cutoffs(o.cutoffs);
    return std::max(cp.inhomogeneous_residual(o.j_max), cp.homogeneous_residual(o.j_min, o.j_max));
}

} // namespace detail

inline void run_dyadic(Run& run) {
    const auto& c = run.config();
    const DecomposeOptions opt;
    const double partition = detail::partition_residual(opt);
    run.value("partition_residual", partition, "dyadic-analysis/build_cutoffs");
    run.check("dyadic-analysis.partition_of_unity", claims::dyadic, partition, "<", tol::partition);
    const auto frozen = calibration::frozen();

    if (c.x) {
        const double alpha = *c.alpha;
        const auto u = minimizer_profile(coefficients_from_contact(alpha, *c.x));
        const auto d = decompose(u, opt);
        const auto b = besov_functionals(d, alpha);
        const auto ll = verify_ll_estimate(u, alpha, &frozen.ll, &d);
        const double lambda = c.lambda.value_or(calibration::lambda_for(alpha));
        const auto sp = verify_low_high_split(u, alpha, lambda, d, &frozen.split);
        Table t{{"j", "l2", "sup", "bernstein", "holder_weighted_sup"}, {}};
        Series s{"2^{j alpha} sup", {}, {}};
        auto row = [&](const DyadicBlock& blk, int j) {
            t.add({std::to_string(j), detail::fmt17(blk.l2), detail::fmt17(blk.sup), detail::fmt17(blk.bernstein),
                   detail::fmt17(std::exp2(alpha * j) * blk.sup)});
        };
        t.add({"low", detail::fmt17(d.low.l2), detail::fmt17(d.low.sup), detail::fmt17(d.low.bernstein), "nan"});
        for (const auto& blk : d.blocks) {
            row(blk, blk.j);
            s.x.push_back(blk.j);
            s.y.push_back(std::exp2(alpha * blk.j) * blk.sup);
        }
        run.table("blocks", t);
        run.data("dyadic", {{"alpha", alpha},
                            {"x", *c.x},
                            {"reconstruction_error", d.reconstruction_error},
                            {"plancherel_error", d.plancherel_error},
                            {"tail_energy_fraction", d.tail_energy_fraction},
                            {"lap_equiv", b.lap_equiv},
                            {"holder_equiv", b.holder_equiv},
                            {"split_ratio", ll.printed.linear_ratio},
                            {"prop_ratio", ll.prop_ratio},
                            {"ball_ratio", ll.ball_ratio},
                            {"low_ratio", sp.low_ratio},
                            {"h1_ratio", sp.h1_ratio},
                            {"final_rhs", sp.final_rhs},
                            {"sup", sp.sup}});
        run.plot("blocks", {"Weighted block suprema", "j", "2^{j alpha} sup", false, true, std::nullopt, ""}, {s});
        run.check("dyadic-analysis.plancherel", claims::dyadic, d.plancherel_error, "<", tol::plancherel);
        run.check("dyadic-analysis.reconstruction", claims::dyadic, d.reconstruction_error, "<", tol::reconstruction);
        run.flag("dyadic-analysis.ll_estimate", claims::dyadic,
                 ll.split_holds && ll.squared_holds && ll.prop_holds && ll.ball_holds);
        run.flag("global-estimates.low_high_split", claims::split, sp.low_holds && sp.h1_holds && sp.final_holds);
        return;
    }

    // calibration / validation protocol
    std::vector<calibration::Measurement> cal, val;
    for (const auto& e : calibration::calibration_corpus()) cal.push_back(calibration::measure(e, opt));
    for (const auto& e : calibration::validation_corpus()) val.push_back(calibration::measure(e, opt));
    const auto fitted = calibration::fit(cal);
    double drift = 0.0;
    const auto fv = detail::constants_vector(fitted), zv = detail::constants_vector(frozen);
    for (std::size_t i = 0; i < fv.size(); ++i) drift = std::max(drift, std::abs(fv[i] / zv[i] - 1.0));

    Table t{{"set", "id", "alpha", "lap_ratio", "holder_ratio", "max_bernstein", "reconstruction_error",
             "plancherel_error", "split_ratio", "squared_ratio", "prop_ratio", "ball_ratio", "low_ratio", "h1_ratio",
             "fitted_final", "verdict"},
            {}};
    json cal_j = json::array(), val_j = json::array();
    double worst_recon = 0.0, worst_planch = 0.0;
    std::vector<std::string> recon_fail, ll_fail, split_fail;
    auto add = [&](const char* set, const calibration::Measurement& m, bool validated) {
        const auto v = calibration::check(m, frozen);
        t.add({set, m.id, detail::fmt17(m.alpha), detail::fmt17(m.lap_ratio), detail::fmt17(m.holder_ratio),
               detail::fmt17(m.max_bernstein), detail::fmt17(m.reconstruction_error), detail::fmt17(m.plancherel_error),
               detail::fmt17(m.ll.printed.linear_ratio), detail::fmt17(m.ll.printed.squared_ratio),
               detail::fmt17(m.ll.prop_ratio), m.ll.ball_applicable ? detail::fmt17(m.ll.ball_ratio) : "nan",
               detail::fmt17(m.split.low_ratio), detail::fmt17(m.split.h1_ratio), detail::fmt17(m.split.fitted_final),
               v.all() ? "pass" : "fail"});
        worst_recon = std::max(worst_recon, m.reconstruction_error);
        worst_planch = std::max(worst_planch, m.plancherel_error);
        if (!(m.reconstruction_error < run.bound("dyadic-analysis.reconstruction", tol::reconstruction)))
            recon_fail.push_back(m.id + " " + detail::fmt_short(m.reconstruction_error));
        if (validated) {
            if (!(v.lap && v.holder && v.split && v.squared && v.prop && v.ball)) ll_fail.push_back(m.id);
            if (!(v.low && v.h1 && v.final)) split_fail.push_back(m.id);
        }
    };
    for (const auto& m : cal) {
        add("calibration", m, false);
        cal_j.push_back(detail::measurement_json(m));
    }
    for (const auto& m : val) {
        add("validation", m, true);
        val_j.push_back(detail::measurement_json(m));
    }
    run.table("corpus", t);
    run.data("corpus", {{"fit_margin", calibration::fit_margin},
                        {"fitted", detail::constants_json(fitted)},
                        {"frozen", detail::constants_json(frozen)},
                        {"calibration", cal_j},
                        {"validation", val_j}});
    Series sr{"split ratio", {}, {}}, pr{"prop ratio", {}, {}};
    for (std::size_t i = 0; i < val.size(); ++i) {
        sr.x.push_back(static_cast<double>(i));
        sr.y.push_back(val[i].ll.printed.linear_ratio);
        pr.x.push_back(static_cast<double>(i));
        pr.y.push_back(val[i].ll.prop_ratio);
    }
    run.plot("validation", {"Validation ratios against frozen constants", "validation entry", "ratio", false, false,
                            frozen.ll.split, "frozen split constant"},
             {sr, pr});
    const json frozen_j = detail::constants_json(frozen);
    for (const auto& [k, v] : frozen_j.items())
        run.value("frozen." + k, v.get<double>(), "calibration/fit");
    run.check("dyadic-analysis.plancherel", claims::dyadic, worst_planch, "<", tol::plancherel);
    run.check("dyadic-analysis.reconstruction", claims::dyadic, worst_recon, "<", tol::reconstruction,
              detail::join(recon_fail));
    run.check("dyadic-analysis.calibration.frozen_constants", claims::dyadic, drift, "<=", 1e-6);
    run.flag("dyadic-analysis.validation.ll_estimate", claims::dyadic, ll_fail.empty(), detail::join(ll_fail));
    run.flag("global-estimates.validation.low_high_split", claims::split, split_fail.empty(), detail::join(split_fail));
}

/// Profiles for the global estimates: compact ones inside the cutoff plateau
/// and ones whose tails cross the transition annulus.
inline std::vector<calibration::Entry> global_corpus() {
    using calibration::detail::bump;
    std::vector<calibration::Entry> c;
    for (auto [a, x] : {std::pair{0.3, 0.1}, std::pair{0.5, 0.25}, std::pair{0.7, 0.6}})
        c.push_back({"minimizer(alpha=" + detail::fmt_short(a) + ",x=" + detail::fmt_short(x) + ")",
                     minimizer_profile(coefficients_from_contact(a, x)), a});
    c.push_back({"bump(k=2,R=6)", bump(2, 6.0), 0.5});
    c.push_back({"bump(k=2,R=20)", bump(2, 20.0), 0.4});
    c.push_back({"gaussian(w=1,R=10)", gaussian_profile(1.0, {1.0}, 10.0), 0.5});
    c.push_back({"u_eps(1e-06)", build_loglog_extremal(1e-6).u_profile, 0.5});
    return c;
}

inline void run_global(Run& run) {
    const auto& c = run.config();
    const std::vector<double> mus = c.mu ? std::vector<double>{*c.mu} : std::vector<double>{0.25, 0.5, 1.0};

    // cutoff
    Table ct{{"mu", "plateau_radius", "support_radius", "max_gradient", "max_laplacian", "min_value", "max_value"}, {}};
    double worst_grad = 0.0, worst_lap = 0.0, worst_min = 0.0;
    for (double mu : mus) {
        const auto g = build_phi_mu(mu);
        ct.add({detail::fmt17(mu), detail::fmt17(g.plateau_radius()), detail::fmt17(g.support_radius()),
                detail::fmt17(g.max_gradient), detail::fmt17(g.max_laplacian), detail::fmt17(g.min_value),
                detail::fmt17(g.max_value)});
        worst_grad = std::max(worst_grad, g.max_gradient);
        worst_lap = std::max(worst_lap, g.max_laplacian);
        worst_min = std::min(worst_min, g.min_value);
    }
    run.table("cutoff", ct);
    {
        const auto g = build_phi_mu(1.0);
        Series p{"phi", {}, {}}, d{"|phi'|", {}, {}}, l{"|Delta phi|", {}, {}};
        for (int i = 0; i <= 400; ++i) {
            const double r = 4.0 * i / 400.0;
            const Jet jt = g.phi.jet(r);
            p.x.push_back(r);
            p.y.push_back(jt.f);
            d.x.push_back(r);
            d.y.push_back(std::abs(jt.df));
            l.x.push_back(r);
            l.y.push_back(r > 0 ? std::abs(jt.laplacian(r)) : 0.0);
        }
        run.plot("cutoff", {"Cutoff profile", "r", "value", false, false, 1.0, "bound 1"}, {p, d, l});
    }
    run.check("global-estimates.cutoff.gradient", claims::cutoff, worst_grad, "<=", 1.0);
    run.check("global-estimates.cutoff.laplacian", claims::cutoff, worst_lap, "<=", 1.0);
    run.check("global-estimates.cutoff.nonnegative", claims::cutoff, worst_min, ">=", -1e-9);
    const auto coeff = cross_term_coefficients();
    run.flag("global-estimates.cross_terms.coefficients", claims::cutoff, coeff.holds);

    // scaling
    {
        const double a = c.alpha.value_or(0.5);
        const auto u = minimizer_profile(coefficients_from_contact(a, c.x.value_or(0.25)));
        double worst = 0.0, margin_drift = 0.0;
        const auto unit = rescale_check(u, 1.0, a, c.lambda);
        Table st{{"R", "n_ratio", "lap_ratio", "holder_ratio", "log_margin", "loglog_log_margin"}, {}};
        for (double R : {0.3, 2.0, 10.0}) {
            const auto r = rescale_check(u, R, a, c.lambda);
            st.add({detail::fmt17(R), detail::fmt17(r.n_ratio), detail::fmt17(r.lap_ratio), detail::fmt17(r.holder_ratio),
                    detail::fmt17(r.log_margin), detail::fmt17(r.loglog_log_margin)});
            worst = std::max({worst, std::abs(r.n_ratio - 1.0), std::abs(r.lap_ratio - 1.0), std::abs(r.holder_ratio - 1.0)});
            margin_drift = std::max(margin_drift, std::abs(r.log_margin - unit.log_margin));
        }
        run.table("scaling", st);
        run.check("global-estimates.scaling.invariance", claims::scale_invariant, worst, "<=", tol::scaling);
        run.check("global-estimates.scaling.margin_invariance", claims::scale_invariant, margin_drift, "<=", tol::scaling);
        run.flag("global-estimates.scaling.unit_ball_estimate", claims::scale_invariant, unit.holds && unit.loglog_holds);
    }

    // cross terms and the mu-norm estimate
    std::vector<calibration::Entry> corpus;
    if (c.x) corpus.push_back({"minimizer", minimizer_profile(coefficients_from_contact(*c.alpha, *c.x)), *c.alpha});
    else corpus = global_corpus();
    if (c.alpha && !c.x)
        for (auto& e : corpus) e.alpha = *c.alpha;
    Table t{{"id", "alpha", "lambda", "mu", "lhs", "rhs", "margin", "T1", "T2", "T3", "I", "II", "III", "bound_T1",
             "bound_T2", "bound_T3", "bound_I", "bound_II", "bound_III", "expansion_residual"},
            {}};
    std::vector<std::string> cross_fail, est_fail, absorb_fail, mono_fail, pres_fail;
    std::vector<Series> margins;
    double worst_residual = 0.0, min_margin = HUGE_VAL;
    for (const auto& e : corpus) {
        const double lambda = c.lambda.value_or(calibration::lambda_for(e.alpha));
        Series s{e.id, {}, {}};
        for (double mu : mus) {
            const auto r = verify_global_log(e.u, e.alpha, lambda, mu);
            std::vector<std::string> row{e.id, detail::fmt17(e.alpha), detail::fmt17(lambda), detail::fmt17(mu),
                                         detail::fmt17(r.lhs), detail::fmt17(r.rhs), detail::fmt17(r.margin)};
            for (double v : r.terms.values()) row.push_back(detail::fmt17(v));
            for (double v : r.bounds.values()) row.push_back(detail::fmt17(v));
            row.push_back(detail::fmt17(r.expansion_residual));
            t.add(std::move(row));
            const std::string tag = e.id + " mu=" + detail::fmt_short(mu);
            if (!r.cross_bounds_hold) cross_fail.push_back(tag);
            if (!r.holds) est_fail.push_back(tag);
            if (!r.absorbed) absorb_fail.push_back(tag);
            if (!r.monotone) mono_fail.push_back(tag);
            if (!(r.sup_preserved && r.holder_preserved)) pres_fail.push_back(tag);
            worst_residual = std::max(worst_residual, r.expansion_residual);
            min_margin = std::min(min_margin, r.margin);
            s.x.push_back(mu);
            s.y.push_back(r.margin);
        }
        margins.push_back(std::move(s));
    }
    run.table("global", t);
    run.data("global", {{"mu", mus}, {"min_margin", min_margin}, {"worst_expansion_residual", worst_residual}});
    run.plot("global", {"rhs / lhs of the mu-norm estimate", "mu", "margin", false, true, 1.0, "equality"}, margins);
    run.value("min_margin", min_margin, "global-estimates/verify_global_log");
    run.flag("global-estimates.cross_terms.bounds", claims::cutoff, cross_fail.empty(), detail::join(cross_fail));
    run.check("global-estimates.cross_terms.expansion", claims::cutoff, worst_residual, "<=", 1e-8);
    run.flag("global-estimates.cutoff.absorbed", claims::cutoff, absorb_fail.empty(), detail::join(absorb_fail));
    run.flag("global-estimates.cutoff.norms_preserved", claims::cutoff, pres_fail.empty(), detail::join(pres_fail));
    run.flag("global-estimates.mu_norm.estimate", claims::mu_norm, est_fail.empty(), detail::join(est_fail));
    run.flag("global-estimates.mu_norm.monotone", claims::mu_norm, mono_fail.empty(), detail::join(mono_fail));
}

// ---------------------------------------------------------------------------
// Dispatch.

inline fs::path output_root(const ExperimentConfig& c) {
    if (!c.output.empty()) return c.output;
    if (const char* env = std::getenv(output_root_env); env && *env) return env;
    return "sharplog-out";
}

/// Runs one experiment into `dir` (under `root`). Module errors are recorded
/// verbatim in the record and rethrown.
inline ReportRecord run_in(const ExperimentConfig& cfg, const fs::path& root, const fs::path& dir) {
    validate(cfg);
    Run run(cfg, root, dir);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (cfg.command) {
        case Command::scan: run_scan(run); break;
        case Command::minimizer: run_minimizer(run); break;
        case Command::extremal: run_extremal(run); break;
        case Command::sharpness: run_sharpness(run); break;
        case Command::solve_obstacle: run_solve(run); break;
        case Command::dyadic: run_dyadic(run); break;
        case Command::global: run_global(run); break;
        case Command::report_all: throw UsageError("command", "use report_all for suites");
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        run.record().error = e.what();
    }
    auto rec = run.finish();
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

inline ReportRecord run(const ExperimentConfig& cfg) {
    const fs::path root = output_root(cfg);
    return run_in(cfg, root, root / experiment_id(cfg));
}

/// Suite used when report-all is given no file.
inline std::vector<ExperimentConfig> default_suite() {
    std::vector<ExperimentConfig> s;
    auto make = [](Command c) {
        ExperimentConfig e;
        e.command = c;
        return e;
    };
    for (double a : {0.3, 0.5, 0.7}) {
        auto e = make(Command::scan);
        e.alpha = a;
        s.push_back(e);
    }
    for (double a : {0.3, 0.5, 0.7}) {
        auto e = make(Command::extremal);
        e.alpha = a;
        e.eps = 1e-8;
        s.push_back(e);
    }
    {
        auto e = make(Command::sharpness);
        e.alpha = 0.5;
        s.push_back(e);
    }
    s.push_back(make(Command::minimizer));
    {
        auto e = make(Command::solve_obstacle);
        e.alpha = 0.5;
        e.x = 0.25;
        e.grid_n = 1024;
        e.grading = 30;
        s.push_back(e);
    }
    s.push_back(make(Command::dyadic));
    s.push_back(make(Command::global));
    return s;
}

/// Suite file: a JSON array of experiments, or {"experiments": [...]}.
inline std::vector<ExperimentConfig> load_suite(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("suite", "cannot read " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw UsageError("suite", std::string("invalid JSON: ") + e.what());
    }
    const json& items = j.is_object() ? j.at("experiments") : j;
    if (!items.is_array()) throw UsageError("suite", "expected an array of experiments");
    std::vector<ExperimentConfig> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        try {
            out.push_back(config_from_json(items[i]));
            validate(out.back());
        } catch (const UsageError& e) {
            throw UsageError("suite[" + std::to_string(i) + "]." + e.flag(), e.message());
        } catch (const json::exception& e) {
            throw UsageError("suite[" + std::to_string(i) + "]", e.what());
        }
    }
    return out;
}

struct SuiteReport {
    std::vector<ReportRecord> items;
    ReportRecord summary;
    [[nodiscard]] bool internal_error() const {
        return std::any_of(items.begin(), items.end(), [](const ReportRecord& r) { return !r.error.empty(); });
    }
};

/// Runs every item in suite order (item i writes to root/NN-id/), then emits
/// summary.csv / summary.json with one status per claim.
inline SuiteReport report_all(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto items = cfg.suite.empty() ? default_suite() : load_suite(cfg.suite);
    const fs::path root = output_root(cfg);
    const fs::path base = root / "report-all";
    SuiteReport out;
    const auto t0 = std::chrono::steady_clock::now();
    json timing = json::array();
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto item = items[i];
        item.formats = cfg.formats;
        char prefix[16];
        std::snprintf(prefix, sizeof prefix, "%02zu-", i + 1);
        const fs::path dir = base / (prefix + experiment_id(item));
        out.items.push_back(run_in(item, root, dir));
        timing.push_back({{"id", out.items.back().id}, {"seconds", out.items.back().wall_time}});
    }

    Run run(cfg, root, base);
    Table t{{"claim", "status", "assertions", "failed", "experiments", "producers"}, {}};
    json claims_j = json::array();
    for (const auto& claim : claims::all()) {
        int total = 0, failed = 0;
        std::set<std::string> exps, producers;
        json failures = json::array();
        for (const auto& r : out.items)
            for (const auto& a : r.assertions)
                if (a.claim == claim) {
                    ++total;
                    exps.insert(r.id);
                    producers.insert(a.name.substr(0, a.name.find('.')));
                    if (!a.passed) {
                        ++failed;
                        failures.push_back({{"experiment", r.id}, {"assertion", a.name}, {"value", detail::num(a.value)},
                                            {"relation", a.relation}, {"bound", detail::num(a.bound)},
                                            {"detail", a.detail}});
                    }
                }
        if (total == 0) continue;
        const std::string status = failed == 0 ? "verified" : "failed";
        auto joined = [](const std::set<std::string>& s) {
            std::string o;
            for (const auto& x : s) o += (o.empty() ? "" : " ") + x;
            return o;
        };
        t.add({claim, status, std::to_string(total), std::to_string(failed), joined(exps), joined(producers)});
        claims_j.push_back({{"claim", claim}, {"status", status}, {"assertions", total}, {"failed", failed},
                            {"failures", failures}});
        run.flag("report.claim." + claim, claim, failed == 0, std::to_string(failed) + " of " + std::to_string(total) +
                                                                   " assertions failed");
    }
    json errors = json::array();
    for (const auto& r : out.items)
        if (!r.error.empty()) errors.push_back({{"experiment", r.id}, {"error", r.error}});
    json exps = json::array();
    for (const auto& r : out.items) exps.push_back({{"id", r.id}, {"command", r.command}, {"passed", r.passed()},
                                                   {"config_hash", r.config_hash}});
    run.table("summary", t);
    run.data("summary", {{"experiments", exps}, {"claims", claims_j}, {"errors", errors}});
    out.summary = run.finish();
    out.summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& r : out.items)
        if (!r.error.empty()) out.summary.error += (out.summary.error.empty() ? "" : "; ") + r.id + ": " + r.error;
    // wall times are not deterministic and live outside the compared files
    atomic_write(base / "timing.json", json{{"items", timing}, {"total_seconds", out.summary.wall_time}}.dump(2) + "\n");
    return out;
}

} // namespace sharplog::report
