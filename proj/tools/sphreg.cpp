#include "sphreg/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace sphreg;
    CLI::App app{"Two-parameter regularization of spherical pseudo-differential equations"};
    app.require_subcommand(1);

    cli::ExperimentOptions exp;
    std::string exp_output, exp_svg, exp_summary;
    auto* experiment = app.add_subcommand("experiment", "Run a synthetic experiment described by a config file");
    experiment->add_option("config", exp.config_path, "Experiment config (key = value)")->required();
    experiment->add_option("-o,--output", exp_output, "Results CSV (overrides the config)");
    experiment->add_option("--svg", exp_svg, "Strip plot SVG (overrides the config)");
    experiment->add_option("--summary", exp_summary, "Per-case summary CSV (overrides the config)");

    cli::SolveOptions solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve from samples at the canonical rule points");
    solve_cmd->add_option("samples", solve.samples_path, "Sample CSV with columns x,y,z,value")->required();
    solve_cmd->add_option("-o,--output", solve.output, "Coefficient CSV to write");
    solve_cmd->add_option("--M", solve.M, "Truncation degree");
    solve_cmd->add_option("--R", solve.R, "Solution sphere radius");
    solve_cmd->add_option("--rho", solve.rho, "Data sphere radius");
    solve_cmd->add_option("--symbol", solve.symbol, "sst | sgg | geometric | polynomial");
    solve_cmd->add_option("--symbol-param", solve.symbol_param, "Base q (geometric) or exponent s (polynomial)");
    solve_cmd->add_option("--beta-exponent", solve.beta_exponent, "beta_k^2 = (k+1/2)^s / a_k");
    auto* lambda_opt = solve_cmd->add_option("--lambda", solve.lambda, "Smoothing parameter");
    auto* alpha_opt = solve_cmd->add_option("--alpha", solve.alpha, "Collocation parameter");
    auto* auto_flag = solve_cmd->add_flag("--auto", solve.auto_select, "Choose (alpha, lambda) by quasi-optimality");
    auto_flag->excludes(lambda_opt)->excludes(alpha_opt);
    solve_cmd->add_option("--alpha0", solve.alpha_grid.base, "First positive alpha");
    solve_cmd->add_option("--r", solve.alpha_grid.factor, "alpha grid ratio");
    solve_cmd->add_option("--K", solve.alpha_grid.count, "alpha grid exponent count");
    solve_cmd->add_option("--lambda0", solve.lambda_grid.base, "First positive lambda");
    solve_cmd->add_option("--q", solve.lambda_grid.factor, "lambda grid ratio");
    solve_cmd->add_option("--L", solve.lambda_grid.count, "lambda grid exponent count");
    solve_cmd->add_option("--trace", solve.trace, "Write the selection trace CSV (with --auto)");

    int rule_M = 30;
    double rule_rho = 1.0;
    std::string rule_output = "rule.csv";
    auto* rule = app.add_subcommand("rule", "Write the Gauss-Legendre product rule as CSV");
    rule->add_option("--M", rule_M, "Degree parameter; the rule has 2(M+1)^2 points");
    rule->add_option("--rho", rule_rho, "Sphere radius");
    rule->add_option("-o,--output", rule_output, "CSV to write");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run the built-in invariant checks");
    verify_cmd->add_flag("--quick", verify.quick, "Smaller problem sizes");
    verify_cmd->add_flag("--inject-fault", verify.inject_fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return cli::invalid_input;
    }

    if (*experiment) {
        if (!exp_output.empty()) exp.output = exp_output;
        if (!exp_svg.empty()) exp.svg = exp_svg;
        if (!exp_summary.empty()) exp.summary = exp_summary;
        return cli::cmd_experiment(exp, std::cout, std::cerr);
    }
    if (*solve_cmd) return cli::cmd_solve(solve, std::cout, std::cerr);
    if (*rule) return cli::cmd_rule(rule_M, rule_rho, rule_output, std::cout, std::cerr);
    return cli::cmd_verify(verify, std::cout, std::cerr);
}
