#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sharplog/report.hpp"

using namespace sharplog;
using namespace sharplog::report;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("sharplog-report-test-" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

ExperimentConfig scan_config(const fs::path& out) {
    ExperimentConfig c;
    c.command = Command::scan;
    c.alpha = 0.5;
    c.output = out.string();
    return c;
}

std::string usage_flag(const ExperimentConfig& c) {
    try {
        validate(c);
    } catch (const UsageError& e) {
        return e.flag();
    }
    return "";
}

} // namespace

TEST(ReportProfile, JsonRoundTripPreservesValues) {
    const std::vector<RadialProfile> profiles{
        minimizer_profile(coefficients_from_contact(0.5, 0.25)),
        build_loglog_extremal(1e-4).u_profile,
        gaussian_profile(0.3, {1.0, 0.5}, 3.0),
        RadialProfile({Segment{0.0, 1.0, PolynomialForm{{{0, 1.0}, {2, -2.0}, {4, 1.0}}}}}, true),
    };
    for (const auto& p : profiles) {
        const auto j = profile_to_json(p);
        const auto q = profile_from_json(json::parse(j.dump()));
        EXPECT_EQ(q.segments().size(), p.segments().size());
        EXPECT_EQ(q.h2_zero(), p.h2_zero());
        for (int i = 0; i <= 50; ++i) {
            const double r = p.radius() * i / 50.0;
            EXPECT_EQ(q(r), p(r)) << "r = " << r;
        }
    }
}

TEST(ReportProfile, SampledProfileRoundTrip) {
    const auto cv = qp_oracle(0.5, D_of_x(0.5, 0.25), RadialGrid::uniform(16));
    const auto q = profile_from_json(profile_to_json(cv.profile));
    for (int i = 0; i <= 40; ++i) EXPECT_EQ(q(i / 40.0), cv.profile(i / 40.0));
    EXPECT_THROW(profile_from_json(json::parse(R"({"segments":[{"lo":0,"hi":1,"kind":"spline","params":{}}]})")),
                 DomainError);
}

TEST(ReportTable, CsvUsesSeventeenDigitsAndHeader) {
    Table t{{"a", "b"}, {}};
    t.add({report::detail::fmt17(0.1), report::detail::fmt17(1.0 / 3.0)});
    EXPECT_EQ(t.csv(), "a,b\n0.10000000000000001,0.33333333333333331\n");
    EXPECT_EQ(std::stod(report::detail::fmt17(std::numbers::pi)), std::numbers::pi);
}

TEST(ReportConfig, HashIgnoresOutputAndTracksParameters) {
    auto a = scan_config("x");
    auto b = scan_config("y");
    b.formats = {Format::csv};
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.alpha = 0.5000001;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(experiment_id(a).rfind("scan-", 0), 0u);
    EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(ReportConfig, UsageErrorsNameTheFlag) {
    ExperimentConfig c;
    c.command = Command::scan;
    EXPECT_EQ(usage_flag(c), "--alpha");
    c.alpha = 1.2;
    EXPECT_EQ(usage_flag(c), "--alpha");
    c.alpha = 0.5;
    c.lambda = 1.0 / (8.0 * std::numbers::pi * std::numbers::pi * 0.5);
    EXPECT_EQ(usage_flag(c), "--lambda");
    c.lambda.reset();
    c.mu = 0.0;
    EXPECT_EQ(usage_flag(c), "--mu");
    c.mu.reset();
    c.eps = 1e-13;
    EXPECT_EQ(usage_flag(c), "--eps");
    c.eps.reset();
    c.n = 1;
    EXPECT_EQ(usage_flag(c), "--n");
    c.n.reset();
    c.x = 0.5;
    c.D = 2.0;
    EXPECT_EQ(usage_flag(c), "--D");
    c.D.reset();
    c.eps_schedule = {1e-2, 1e-2, 1e-6};
    EXPECT_EQ(usage_flag(c), "--eps-schedule");
    c.eps_schedule = {1e-2, 1e-3};
    EXPECT_EQ(usage_flag(c), "--eps-schedule");
    c.eps_schedule.clear();
    c.grid_n = 1;
    EXPECT_EQ(usage_flag(c), "--grid-n");
    c.grid_n = 64;
    c.tol = -1.0;
    EXPECT_EQ(usage_flag(c), "--tol");
    c.tol.reset();
    EXPECT_EQ(usage_flag(c), "");
    EXPECT_THROW(parse_format("png"), UsageError);
    EXPECT_THROW(parse_command("plot"), UsageError);
}

TEST(ReportRun, ScanWritesDeterministicArtifactsAtomically) {
    const auto root = scratch("scan");
    const auto a = run(scan_config(root / "a"));
    const auto b = run(scan_config(root / "b"));
    EXPECT_TRUE(a.passed());
    EXPECT_EQ(a.outputs, b.outputs);
    for (const auto& rel : a.outputs) {
        EXPECT_EQ(slurp(root / "a" / rel), slurp(root / "b" / rel)) << rel;
        EXPECT_FALSE(fs::exists(root / "a" / (rel + ".tmp")));
    }
    const auto rec = json::parse(slurp(root / "a" / a.id / "record.json"));
    EXPECT_EQ(rec["config_hash"], a.config_hash);
    EXPECT_FALSE(rec.contains("wall_time"));
    for (const auto& v : rec["values"]) EXPECT_FALSE(v["source"].get<std::string>().empty());
    const std::string csv = slurp(root / "a" / a.id / "scan.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,D,g,F,H");
    const std::string svg = slurp(root / "a" / a.id / "scan.svg");
    EXPECT_NE(svg.find("<path d=\"M"), std::string::npos);
    EXPECT_NE(svg.find("x (log)"), std::string::npos);
    fs::remove_all(root);
}

TEST(ReportRun, FormatSelectionLimitsArtifacts) {
    const auto root = scratch("formats");
    auto c = scan_config(root);
    c.formats = {Format::csv};
    const auto r = run(c);
    ASSERT_EQ(r.outputs.size(), 2u);  // scan.csv and record.json
    EXPECT_NE(r.outputs[0].find("scan.csv"), std::string::npos);
    fs::remove_all(root);
}

TEST(ReportRun, OutputRootFromEnvironment) {
    const auto root = scratch("env");
    ::setenv(output_root_env, root.string().c_str(), 1);
    auto c = scan_config("");
    c.output.clear();
    EXPECT_EQ(output_root(c), root);
    ::unsetenv(output_root_env);
    EXPECT_EQ(output_root(c), fs::path("sharplog-out"));
}

TEST(ReportSuite, EmptySuitePassesWithEmptySummary) {
    const auto root = scratch("empty");
    fs::create_directories(root);
    std::ofstream(root / "suite.json") << "[]";
    ExperimentConfig c;
    c.command = Command::report_all;
    c.suite = (root / "suite.json").string();
    c.output = (root / "out").string();
    const auto rep = report_all(c);
    EXPECT_TRUE(rep.items.empty());
    EXPECT_TRUE(rep.summary.passed());
    EXPECT_FALSE(rep.internal_error());
    EXPECT_EQ(slurp(root / "out" / "report-all" / "summary.csv"),
              "claim,status,assertions,failed,experiments,producers\n");
    fs::remove_all(root);
}

TEST(ReportSuite, InjectedToleranceFailureIsLocalized) {
    const auto root = scratch("inject");
    fs::create_directories(root);
    std::ofstream(root / "suite.json")
        << R"({"experiments": [{"command": "scan", "alpha": 0.5},
                              {"command": "minimizer", "alpha": 0.5, "x": 0.25,
                               "tolerances": {"closed-form-minimizer.energy_identity": 1e-300}}]})";
    ExperimentConfig c;
    c.command = Command::report_all;
    c.suite = (root / "suite.json").string();
    c.output = (root / "out").string();
    const auto rep = report_all(c);
    ASSERT_EQ(rep.items.size(), 2u);
    EXPECT_TRUE(rep.items[0].passed());
    EXPECT_FALSE(rep.items[1].passed());
    EXPECT_FALSE(rep.summary.passed());
    int failing = 0;
    for (const auto& a : rep.items[1].assertions)
        if (!a.passed) {
            ++failing;
            EXPECT_EQ(a.name, "closed-form-minimizer.energy_identity");
        }
    EXPECT_EQ(failing, 1);
    const auto summary = json::parse(slurp(root / "out" / "report-all" / "summary.json"));
    bool found = false;
    for (const auto& cl : summary["claims"])
        if (cl["claim"] == claims::closed_form) {
            EXPECT_EQ(cl["status"], "failed");
            EXPECT_EQ(cl["failures"][0]["assertion"], "closed-form-minimizer.energy_identity");
            found = true;
        }
    EXPECT_TRUE(found);
    fs::remove_all(root);
}

TEST(ReportSuite, MalformedSuiteNamesTheItem) {
    const auto root = scratch("malformed");
    fs::create_directories(root);
    std::ofstream(root / "suite.json") << R"([{"command": "scan", "alpha": 0.5}, {"command": "scan", "alpha": 2}])";
    try {
        load_suite(root / "suite.json");
        FAIL() << "expected a usage error";
    } catch (const UsageError& e) {
        EXPECT_EQ(e.flag(), "suite[1].--alpha");
    }
    std::ofstream(root / "bad.json") << "{";
    EXPECT_THROW(load_suite(root / "bad.json"), UsageError);
    fs::remove_all(root);
}

TEST(ReportSvg, SkipsNonPositiveValuesOnLogAxes) {
    PlotSpec s{"t", "x", "y", true, true, 1.0, "ref"};
    const auto svg = svg_plot(s, {Series{"s", {0.0, 1.0, 10.0, 100.0, 1000.0}, {1.0, 1.0, -1.0, 2.0, 3.0}}});
    EXPECT_EQ(svg.find("nan"), std::string::npos);
    EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
    EXPECT_NE(svg.find(" M"), std::string::npos);  // the path restarts after the gap
}
