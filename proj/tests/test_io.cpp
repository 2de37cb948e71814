#include "sphreg/io.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace sphreg;

namespace {

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(FormatDouble, RoundTrips) {
    testutil::Rng rng(81);
    for (int i = 0; i < 2000; ++i) {
        const double v = testutil::uniform(rng) * std::pow(10.0, testutil::uniform(rng, -300, 300));
        EXPECT_EQ(io::parse_double(io::format_double(v), "x"), v);
    }
    EXPECT_EQ(io::format_double(0.0), "0");
    EXPECT_EQ(io::format_double(0.5), "0.5");
    EXPECT_EQ(io::format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(io::parse_double(io::format_double(std::numeric_limits<double>::max()), "x"),
              std::numeric_limits<double>::max());
}

TEST(Parse, Scalars) {
    EXPECT_EQ(io::parse_double(" 1.5e-3 ", "x"), 1.5e-3);
    EXPECT_THROW(io::parse_double("1.5x", "x"), InvalidInput);
    EXPECT_THROW(io::parse_double("", "x"), InvalidInput);
    EXPECT_EQ(io::parse_integer("42", "x"), 42);
    EXPECT_THROW(io::parse_integer("4.2", "x"), InvalidInput);
    EXPECT_TRUE(io::parse_bool("true", "x"));
    EXPECT_FALSE(io::parse_bool("false", "x"));
    EXPECT_THROW(io::parse_bool("maybe", "x"), InvalidInput);
}

TEST(Coefficients, RoundTrip) {
    testutil::Rng rng(82);
    const auto c = testutil::random_coeffs(7, 2.0, rng);
    const auto back = io::parse_coefficients(io::coefficients_csv(c), 2.0);
    EXPECT_EQ(back.values(), c.values());
    EXPECT_EQ(back.M(), 7);
}

TEST(Coefficients, Errors) {
    EXPECT_NE(message_of([] { io::parse_coefficients("k,j,value\n0,1,1\n1,1,2\n", 1.0); }).find("full triangle"),
              std::string::npos);
    EXPECT_NE(message_of([] { io::parse_coefficients("k,j,value\n0,1,1\n1,1,2\n1,1,3\n1,3,4\n", 1.0); })
                  .find("coefficients:4: duplicate"),
              std::string::npos);
    EXPECT_NE(message_of([] { io::parse_coefficients("k,j,value\n0,1,1\n1,0,2\n1,2,3\n1,3,4\n", 1.0); })
                  .find("coefficients:3"),
              std::string::npos);
    EXPECT_NE(message_of([] { io::parse_coefficients("k,j\n0,1\n", 1.0); }).find("expected header"), std::string::npos);
    EXPECT_NE(message_of([] { io::parse_coefficients("", 1.0); }).find("header required"), std::string::npos);
    EXPECT_NE(message_of([] { io::parse_coefficients("k,j,value\n0,1,abc\n", 1.0); }).find("coefficients:2"),
              std::string::npos);
}

TEST(Samples, RoundTripAndValidation) {
    testutil::Rng rng(83);
    const auto rule = sphere_rule(4, 1.5);
    const auto v = testutil::random_vector(rule.size(), rng);
    const auto text = io::samples_csv(rule, v);
    EXPECT_EQ(io::parse_samples(text, rule), v);

    // Truncated mid-row: the last line has too few fields.
    const auto last = text.rfind('\n', text.size() - 2) + 1;
    const auto cut = text.substr(0, text.find(',', text.find(',', last) + 1));
    const auto msg = message_of([&] { io::parse_samples(cut, rule, "s.csv"); });
    EXPECT_NE(msg.find("s.csv:51:"), std::string::npos) << msg;

    // Truncated at a row boundary: the row count is short.
    const auto lines_cut = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
    const auto msg2 = message_of([&] { io::parse_samples(lines_cut, rule, "s.csv"); });
    EXPECT_NE(msg2.find("s.csv:50:"), std::string::npos) << msg2;

    // Points of a different rule.
    const auto other = io::samples_csv(sphere_rule(4, 1.0), v);
    EXPECT_NE(message_of([&] { io::parse_samples(other, rule); }).find("canonical rule point 0"), std::string::npos);
}

TEST(Rule, Csv) {
    const auto rule = sphere_rule(0, 1.0);
    const auto text = io::rule_csv(rule);
    const auto rows = io::parse_csv(text, {"x", "y", "z", "weight"}, "rule");
    ASSERT_EQ(rows.size(), 2u);
    double s = 0.0;
    for (const auto& r : rows) s += io::parse_double(r.fields[3], "w");
    EXPECT_NEAR(s, four_pi, 1e-12);
}

TEST(Outputs, ResultsAndTrace) {
    std::vector<TrialResult> r{{"fig1a", 0, Method::two_step, 0.25, 1e-3, 0.0},
                               {"fig1a", 0, Method::smoothing_only, 0.5, 0.0, 2.0}};
    EXPECT_EQ(io::results_csv(r),
              "case,trial,method,relative_error,alpha,lambda\n"
              "fig1a,0,two_step,0.25,0.001,0\n"
              "fig1a,0,smoothing_only,0.5,0,2\n");
    std::vector<TwoStepTraceRecord> t{{0.0, 0.5, 1.0, std::numeric_limits<double>::quiet_NaN()}, {1.0, 0.0, 2.0, 3.0}};
    EXPECT_EQ(io::trace_csv(t), "alpha,chosen_lambda,inner_min_diff,outer_diff\n0,0.5,1,nan\n1,0,2,3\n");
    const auto svg = io::strip_plot_svg(r, "fig1a");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("two-step"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Config, FullAndPreset) {
    const auto cfg = io::parse_config(io::read_file(std::string(SPHREG_CONFIG_DIR) + "/fig1c.config"));
    const auto ref = benchmark_case('c');
    EXPECT_EQ(cfg.experiment.name, "fig1c");
    EXPECT_EQ(cfg.experiment.symbol.kind, ref.symbol.kind);
    EXPECT_EQ(cfg.experiment.symbol.param, ref.symbol.param);
    EXPECT_EQ(cfg.experiment.upsilon, ref.upsilon);
    EXPECT_EQ(cfg.experiment.beta.exponent, ref.beta.exponent);
    EXPECT_EQ(cfg.experiment.seed, ref.seed);
    EXPECT_EQ(expand_grid(cfg.experiment.alpha_grid), expand_grid(ref.alpha_grid));
    EXPECT_EQ(cfg.output, "fig1c.csv");

    const auto p = io::parse_config("trials = 3   # fewer\npreset = fig1b\n");
    EXPECT_EQ(p.experiment.trials, 3);
    EXPECT_EQ(p.experiment.upsilon, 5.5);
    EXPECT_EQ(p.output, "results.csv");
    EXPECT_TRUE(p.svg.empty());
}

TEST(Config, Errors) {
    auto msg = [](const std::string& text) { return message_of([&] { io::parse_config(text, "c.cfg"); }); };
    EXPECT_NE(msg("trials = 0\n").find("trials must be >= 1"), std::string::npos);
    EXPECT_NE(msg("M = 4\nM = 5\n").find("c.cfg:2: duplicate key 'M'"), std::string::npos);
    EXPECT_NE(msg("colour = red\n").find("unknown key 'colour'"), std::string::npos);
    EXPECT_NE(msg("just words\n").find("c.cfg:1"), std::string::npos);
    EXPECT_NE(msg("epsilon = lots\n").find("epsilon"), std::string::npos);
    EXPECT_NE(msg("preset = fig1z\n").find("fig1z"), std::string::npos);
    EXPECT_NE(msg("symbol = sst\n").find("invalid preset configuration"), std::string::npos);
    EXPECT_NE(msg("lambda_factor = 1\n").find("factor must be > 1"), std::string::npos);
    EXPECT_NE(msg("output =\n").find("output"), std::string::npos);
}

TEST(Files, MissingAndAtomicWrite) {
    const auto dir = testutil::scratch_dir("io");
    EXPECT_THROW(io::read_file(dir / "nope.txt"), MissingInput);
    io::write_file_atomic(dir / "a.txt", "hello\n");
    EXPECT_EQ(io::read_file(dir / "a.txt"), "hello\n");
    io::write_file_atomic(dir / "a.txt", "bye\n");
    EXPECT_EQ(io::read_file(dir / "a.txt"), "bye\n");
    EXPECT_FALSE(std::filesystem::exists(dir / "a.txt.tmp"));
}
