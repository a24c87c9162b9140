#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "sharplog/report.hpp"

// Exit codes: 0 success, 1 assertion failure, 2 usage error, 3 internal error.

namespace rp = sharplog::report;

namespace {

struct Flags {
    double alpha = 0, lambda = 0, mu = 0, x = 0, D = 0, eps = 0, tol = 0;
    long long n = 0;
    int grid_n = 1024, grading = 30;
    std::vector<double> eps_schedule;
    std::string output, suite;
    std::vector<std::string> formats;
};

void add_flags(CLI::App* sub, Flags& f, rp::Command c) {
    using C = rp::Command;
    const bool all = c == C::report_all;
    if (!all) sub->add_option("--alpha", f.alpha, "Holder exponent in (0, 1)");
    if (c == C::scan || c == C::dyadic || c == C::global) sub->add_option("--lambda", f.lambda, "lambda > 1/(8 pi^2 alpha)");
    if (c == C::global) sub->add_option("--mu", f.mu, "cutoff scale in (0, 1]");
    if (c == C::minimizer || c == C::solve_obstacle || c == C::dyadic || c == C::global)
        sub->add_option("--x", f.x, "contact parameter r0^2 in (0, 1)");
    if (c == C::minimizer || c == C::solve_obstacle) sub->add_option("--D", f.D, "obstacle amplitude > 1");
    if (c == C::extremal) sub->add_option("--eps", f.eps, "extremal parameter in [1e-12, 1/e)");
    if (c == C::sharpness) sub->add_option("--n", f.n, "sequence index >= 2");
    if (c == C::solve_obstacle) {
        sub->add_option("--grid-n", f.grid_n, "uniform cells")->capture_default_str();
        sub->add_option("--grading", f.grading, "geometric refinement levels at r = 0")->capture_default_str();
        sub->add_option("--eps-schedule", f.eps_schedule, "decreasing penalty parameters")->delimiter(',');
        sub->add_option("--tol", f.tol, "inner Newton tolerance");
    }
    sub->add_option("--output", f.output, std::string("output root (default $") + rp::output_root_env + " or ./sharplog-out)");
    sub->add_option("--format", f.formats, "csv, json, svg (repeatable or comma-separated)")->delimiter(',');
    if (all) sub->add_option("suite", f.suite, "suite JSON; the built-in suite when omitted");
}

rp::ExperimentConfig to_config(const CLI::App* sub, const Flags& f, rp::Command c) {
    rp::ExperimentConfig cfg;
    cfg.command = c;
    auto set = [&](const char* name, std::optional<double>& dst, double v) {
        if (sub->get_option_no_throw(name) && sub->count(name)) dst = v;
    };
    set("--alpha", cfg.alpha, f.alpha);
    set("--lambda", cfg.lambda, f.lambda);
    set("--mu", cfg.mu, f.mu);
    set("--x", cfg.x, f.x);
    set("--D", cfg.D, f.D);
    set("--eps", cfg.eps, f.eps);
    set("--tol", cfg.tol, f.tol);
    if (sub->get_option_no_throw("--n") && sub->count("--n")) cfg.n = f.n;
    cfg.grid_n = f.grid_n;
    cfg.grading = f.grading;
    cfg.eps_schedule = f.eps_schedule;
    cfg.output = f.output;
    cfg.suite = f.suite;
    if (!f.formats.empty()) {
        cfg.formats.clear();
        for (const auto& s : f.formats) cfg.formats.push_back(rp::parse_format(s));
    }
    return cfg;
}

void print_record(const rp::ReportRecord& r) {
    std::printf("%s  %s  (%.2f s)\n", r.id.c_str(), r.passed() ? "PASS" : "FAIL", r.wall_time);
    for (const auto& a : r.assertions) {
        std::printf("  [%s] %s = %s %s %s", a.passed ? "ok" : "FAIL", a.name.c_str(), rp::detail::fmt_short(a.value).c_str(),
                    a.relation.c_str(), rp::detail::fmt_short(a.bound).c_str());
        if (!a.detail.empty()) std::printf("  (%s)", a.detail.c_str());
        std::printf("\n");
    }
    if (!r.error.empty()) std::printf("  error: %s\n", r.error.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp logarithmic interpolation: experiments and reports"};
    app.require_subcommand(1);
    Flags flags;
    std::vector<std::pair<CLI::App*, rp::Command>> subs;
    for (const auto& [cmd, name] : rp::command_names()) {
        auto* sub = app.add_subcommand(name);
        add_flags(sub, flags, cmd);
        subs.emplace_back(sub, cmd);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        for (const auto& [sub, cmd] : subs) {
            if (!sub->parsed()) continue;
            auto cfg = to_config(sub, flags, cmd);
            if (cmd == rp::Command::report_all) {
                const auto rep = rp::report_all(cfg);
                for (const auto& r : rep.items) print_record(r);
                std::printf("\nsummary\n");
                for (const auto& a : rep.summary.assertions)
                    std::printf("  %-32s %s  %s\n", a.claim.c_str(), a.passed ? "verified" : "FAILED", a.detail.c_str());
                std::printf("total %.1f s\n", rep.summary.wall_time);
                if (rep.internal_error()) return 3;
                return rep.summary.passed() ? 0 : 1;
            }
            const auto rec = rp::run(cfg);
            print_record(rec);
            if (!rec.error.empty()) return 3;
            return rec.passed() ? 0 : 1;
        }
    } catch (const rp::UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 2;
}
