#pragma once

// Subcommand implementations for the `sphreg` tool. Each returns a process
// exit code: 0 ok, 1 verification failure, 2 missing input, 3 invalid input,
// 4 numerical failure. Diagnostics are single lines prefixed "error:".

#include "sphreg/collocation.hpp"
#include "sphreg/errors.hpp"
#include "sphreg/experiments.hpp"
#include "sphreg/io.hpp"
#include "sphreg/operators.hpp"
#include "sphreg/quadrature.hpp"
#include "sphreg/selection.hpp"
#include "sphreg/smoothing.hpp"
#include "sphreg/verify.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>

namespace sphreg::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, missing_input = 2, invalid_input = 3, numerical_failure = 4 };

/// Runs `body`, mapping library exceptions to exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
    auto report = [&](const std::string& msg) {
        std::string line = msg;
        std::replace(line.begin(), line.end(), '\n', ' ');
        err << "error: " << line << "\n";
    };
    try {
        return body();
    } catch (const MissingInput& e) {
        report(e.what());
        return missing_input;
    } catch (const InvalidInput& e) {
        report(e.what());
        return invalid_input;
    } catch (const NumericalError& e) {
        report(e.what());
        return numerical_failure;
    } catch (const std::exception& e) {
        report(e.what());
        return numerical_failure;
    }
}

struct ExperimentOptions {
    std::string config_path;
    std::optional<std::string> output;  // overrides the config's output
    std::optional<std::string> svg;
    std::optional<std::string> summary;
};

inline int cmd_experiment(const ExperimentOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = io::parse_config(io::read_file(opt.config_path), opt.config_path);
        if (opt.output) cfg.output = *opt.output;
        if (opt.svg) cfg.svg = *opt.svg;
        if (opt.summary) cfg.summary = *opt.summary;

        const auto results = run_case(cfg.experiment);
        io::write_file_atomic(cfg.output, io::results_csv(results));
        const auto summary = summarize(results);
        if (!cfg.summary.empty()) io::write_file_atomic(cfg.summary, io::summary_csv({summary}));
        if (!cfg.svg.empty()) io::write_file_atomic(cfg.svg, io::strip_plot_svg(results, cfg.experiment.name));

        out << cfg.experiment.name << ": " << results.size() << " rows written to " << cfg.output << "\n";
        out << "median relative error  two_step " << io::format_double(summary.median_two_step)
            << "  smoothing_only " << io::format_double(summary.median_smoothing_only) << "  collocation_only "
            << io::format_double(summary.median_collocation_only) << "\n";
        return int{ok};
    });
}

struct SolveOptions {
    std::string samples_path;
    std::string output = "solution.csv";
    std::string trace;  // optional trace CSV with --auto
    int M = 30;
    double R = 1.0;
    double rho = 1.0;
    std::string symbol = "geometric";
    double symbol_param = 1.48;
    double beta_exponent = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
    bool auto_select = false;
    ParameterGrid alpha_grid;
    ParameterGrid lambda_grid;
};

inline int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        detail::require(opt.M >= 0, "--M must be >= 0");
        detail::require(opt.lambda >= 0.0 && opt.alpha >= 0.0, "--lambda and --alpha must be >= 0");
        const auto kind = io::parse_symbol_kind(opt.symbol, "--symbol");
        const auto symbol = symbol_preset({kind, opt.symbol_param}, opt.R, opt.rho, opt.M);
        const auto beta = make_penalty(BetaRule{opt.beta_exponent}, symbol);
        const auto rule = sphere_rule(opt.M, opt.rho);
        const auto samples = io::parse_samples(io::read_file(opt.samples_path), rule, opt.samples_path);

        HarmonicCoefficients x(opt.M, opt.R);
        if (opt.auto_select) {
            const auto grid = default_eval_grid(opt.M, opt.R);
            const auto sel = select_two_step(samples, rule, symbol, beta, opt.alpha_grid, opt.lambda_grid, grid);
            x = sel.solution;
            out << "selected alpha " << io::format_double(sel.alpha) << " lambda " << io::format_double(sel.lambda)
                << "\n";
            if (!opt.trace.empty()) io::write_file_atomic(opt.trace, io::trace_csv(sel.trace));
        } else {
            x = two_step_solve(samples, rule, SmoothingParams(opt.lambda, beta), CollocationParams(opt.alpha, symbol));
        }
        io::write_file_atomic(opt.output, io::coefficients_csv(x));
        out << "wrote " << basis_size(opt.M) << " coefficients to " << opt.output << "\n";
        return int{ok};
    });
}

inline int cmd_rule(int M, double rho, const std::string& output, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        detail::require(M >= 0, "--M must be >= 0");
        detail::require(rho > 0.0 && std::isfinite(rho), "--rho must be > 0");
        const auto rule = sphere_rule(M, rho);
        io::write_file_atomic(output, io::rule_csv(rule));
        out << "wrote " << rule.size() << " points to " << output << "\n";
        return int{ok};
    });
}

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto checks = run_verification(opt);
        bool all = true;
        for (const auto& c : checks) {
            out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(32) << c.name << " measured "
                << io::format_double(c.measured) << "  tolerance " << std::setprecision(3) << c.tolerance;
            if (!c.note.empty()) out << "  (" << c.note << ")";
            out << "\n";
            if (!c.passed) {
                err << "error: verification check failed: " << c.name << "\n";
                all = false;
            }
        }
        return all ? int{ok} : int{verification_failed};
    });
}

}  // namespace sphreg::cli
