#pragma once

// Synthetic experiments comparing two-step regularization with its two
// single-parameter special cases (alpha = 0 and lambda = 0).

#include "sphreg/collocation.hpp"
#include "sphreg/errors.hpp"
#include "sphreg/operators.hpp"
#include "sphreg/quadrature.hpp"
#include "sphreg/selection.hpp"
#include "sphreg/smoothing.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace sphreg {

/// beta_k^2 = a_k^{-1} (k + 1/2)^exponent for k >= 1, and beta_0 = beta_1.
struct BetaRule {
    double exponent = 0.0;
};

inline PenaltyWeights make_penalty(const BetaRule& rule, const SphericalSymbol& symbol) {
    const int M = symbol.M();
    std::vector<double> beta_sq(static_cast<std::size_t>(M) + 1);
    for (int k = 1; k <= M; ++k) beta_sq[k] = std::pow(k + 0.5, rule.exponent) / symbol[k];
    beta_sq[0] = (M >= 1) ? beta_sq[1] : 1.0 / symbol[0];
    return PenaltyWeights::from_squared(beta_sq);
}

struct ExperimentCase {
    std::string name = "custom";
    SymbolSpec symbol;
    double R = 1.0;
    double rho = 1.0;
    int M = 30;
    double upsilon = 1.5;
    BetaRule beta;
    double epsilon = 0.05;
    int trials = 10;
    std::uint64_t seed = 20150101;
    ParameterGrid alpha_grid;
    ParameterGrid lambda_grid;
    /// Skip quasi-optimality and solve every method at alpha = lambda = 0.
    bool self_check = false;

    void validate() const {
        detail::require(M >= 0, "M must be >= 0");
        detail::require(R > 0.0 && rho >= R, "radii must satisfy 0 < R <= rho");
        detail::require(upsilon > 0.0, "upsilon must be > 0");
        detail::require(epsilon >= 0.0 && std::isfinite(epsilon), "epsilon must be >= 0");
        detail::require(trials >= 1, "trials must be >= 1");
        alpha_grid.validate();
        lambda_grid.validate();
    }

    SphericalSymbol make_symbol() const { return symbol_preset(symbol, R, rho, M); }
};

/// The five benchmark configurations: (a) geometric symbol
/// 1.48^{-k}, upsilon 3/2, beta^2 = 1/a; (b) same symbol, upsilon 11/2, beta^2 =
/// (k+1/2)^{7/2}/a; (c)-(e) polynomial symbol (k+1)^{-2} with upsilon and beta
/// exponents (3/2, 0), (11/2, 7/2), (11/2, 11/2).
inline ExperimentCase benchmark_case(char which) {
    ExperimentCase c;
    c.name = std::string("fig1") + which;
    switch (which) {
        case 'a': c.symbol = {SymbolKind::geometric, 1.48}; c.upsilon = 1.5; c.beta.exponent = 0.0; break;
        case 'b': c.symbol = {SymbolKind::geometric, 1.48}; c.upsilon = 5.5; c.beta.exponent = 3.5; break;
        case 'c': c.symbol = {SymbolKind::polynomial, 2.0}; c.upsilon = 1.5; c.beta.exponent = 0.0; break;
        case 'd': c.symbol = {SymbolKind::polynomial, 2.0}; c.upsilon = 5.5; c.beta.exponent = 3.5; break;
        case 'e': c.symbol = {SymbolKind::polynomial, 2.0}; c.upsilon = 5.5; c.beta.exponent = 5.5; break;
        default: throw InvalidInput(std::string("unknown benchmark case '") + which + "'");
    }
    return c;
}

/// Platform-stable per-trial seed from (case seed, trial index).
inline std::uint64_t trial_seed(std::uint64_t case_seed, int trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(case_seed & 0xffffffffu), static_cast<std::uint32_t>(case_seed >> 32),
                      static_cast<std::uint32_t>(trial)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct SimulatedProblem {
    HarmonicCoefficients x_true;
    std::vector<double> clean;
    std::vector<double> noisy;
};

/// x_{k,j} = (k + 1/2)^{-upsilon} g_{k,j} with g ~ U[-1, 1] drawn in canonical
/// order, clean = A_M x at the rule's points, noisy = clean + N(0, epsilon^2)
/// i.i.d. per point.
inline SimulatedProblem simulate_problem(const ExperimentCase& c, std::uint64_t seed, const SphericalSymbol& symbol,
                                         const BasisMatrix& data_basis) {
    boost::random::mt19937_64 rng(seed);
    boost::random::uniform_real_distribution<double> unif(-1.0, 1.0);
    HarmonicCoefficients x(c.M, c.R);
    for (int k = 0; k <= c.M; ++k) {
        const double decay = std::pow(k + 0.5, -c.upsilon);
        for (int j = 0; j < 2 * k + 1; ++j) x.degree(k)[j] = decay * unif(rng);
    }
    const Eigen::VectorXd y = data_basis.synthesize(apply_forward(symbol, x));
    SimulatedProblem out{std::move(x), std::vector<double>(y.data(), y.data() + y.size()), {}};
    out.noisy = out.clean;
    if (c.epsilon > 0.0) {
        boost::random::normal_distribution<double> noise(0.0, c.epsilon);
        for (double& v : out.noisy) v += noise(rng);
    }
    return out;
}

inline SimulatedProblem simulate_problem(const ExperimentCase& c, std::uint64_t seed) {
    c.validate();
    const auto symbol = c.make_symbol();
    const auto rule = sphere_rule(c.M, c.rho);
    return simulate_problem(c, seed, symbol, BasisMatrix(c.M, rule.points()));
}

inline double relative_sup_error(const HarmonicCoefficients& x_true, const HarmonicCoefficients& x_approx,
                                 const SupNormEvaluator& norm) {
    const double denom = norm(x_true);
    detail::require(denom > 0.0, "relative_sup_error: true solution has zero norm");
    return norm(x_true - x_approx) / denom;
}

inline double relative_sup_error(const HarmonicCoefficients& x_true, const HarmonicCoefficients& x_approx,
                                 std::span<const SpherePoint> eval_grid) {
    return relative_sup_error(x_true, x_approx, SupNormEvaluator(x_true.M(), eval_grid));
}

enum class Method { two_step, smoothing_only, collocation_only };

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::two_step: return "two_step";
        case Method::smoothing_only: return "smoothing_only";
        case Method::collocation_only: return "collocation_only";
    }
    return "?";
}

inline constexpr Method all_methods[] = {Method::two_step, Method::smoothing_only, Method::collocation_only};

struct TrialResult {
    std::string case_name;
    int trial = 0;
    Method method = Method::two_step;
    double relative_error = 0.0;
    double chosen_alpha = 0.0;
    double chosen_lambda = 0.0;
};

/// Worker count: hardware concurrency capped by SPHERE_REG_THREADS.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPHERE_REG_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

namespace detail {

template <class Fn>
void parallel_for(int count, Fn&& fn) {
    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max(count, 1)));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count && !failed; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Three methods per trial, in trial order then method order, with explicit
/// parameter lists in place of the case's grids. Trials may run on several
/// threads; results do not depend on the thread count.
inline std::vector<TrialResult> run_case(const ExperimentCase& c, std::span<const double> alphas,
                                         std::span<const double> lambdas) {
    c.validate();
    detail::require(!alphas.empty() && !lambdas.empty(), "run_case: empty parameter list");
    const auto symbol = c.make_symbol();
    const auto beta = make_penalty(c.beta, symbol);
    const auto rule = sphere_rule(c.M, c.rho);
    const Analyzer analyzer(rule, c.M);
    const auto grid = default_eval_grid(c.M, c.R);
    const SupNormEvaluator norm(c.M, grid);
    const std::vector<double> zero{0.0};

    std::vector<TrialResult> results(static_cast<std::size_t>(c.trials) * 3);
    detail::parallel_for(c.trials, [&](int t) {
        const auto problem = simulate_problem(c, trial_seed(c.seed, t), symbol, analyzer.basis());
        const auto hyper = analyzer.analyze(problem.noisy);
        for (std::size_t m = 0; m < 3; ++m) {
            const Method method = all_methods[m];
            double alpha = 0.0;
            double lambda = 0.0;
            HarmonicCoefficients sol(c.M, c.R);
            if (c.self_check) {
                sol = two_step_from_hyper(hyper, SmoothingParams(0.0, beta), CollocationParams(0.0, symbol));
            } else {
                const std::span<const double> a = (method == Method::smoothing_only) ? std::span<const double>(zero)
                                                                                      : alphas;
                const std::span<const double> l = (method == Method::collocation_only)
                                                      ? std::span<const double>(zero)
                                                      : lambdas;
                auto sel = select_two_step(hyper, symbol, beta, a, l, norm);
                alpha = sel.alpha;
                lambda = sel.lambda;
                sol = std::move(sel.solution);
            }
            auto& r = results[static_cast<std::size_t>(t) * 3 + m];
            r.case_name = c.name;
            r.trial = t;
            r.method = method;
            r.relative_error = relative_sup_error(problem.x_true, sol, norm);
            r.chosen_alpha = alpha;
            r.chosen_lambda = lambda;
        }
    });
    return results;
}

inline std::vector<TrialResult> run_case(const ExperimentCase& c) {
    c.validate();
    return run_case(c, expand_grid(c.alpha_grid), expand_grid(c.lambda_grid));
}

inline double median(std::vector<double> v) {
    detail::require(!v.empty(), "median: empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct CaseSummary {
    std::string case_name;
    double median_two_step = 0.0;
    double median_smoothing_only = 0.0;
    double median_collocation_only = 0.0;
    /// median two-step error over the better single-method median
    double leader_ratio = 0.0;
    bool follows_leader = false;
};

inline constexpr double leader_tolerance = 1.2;

inline CaseSummary summarize(const std::vector<TrialResult>& results) {
    detail::require(!results.empty(), "summarize: no results");
    std::vector<double> per[3];
    for (const auto& r : results) per[static_cast<int>(r.method)].push_back(r.relative_error);
    CaseSummary s;
    s.case_name = results.front().case_name;
    s.median_two_step = median(per[0]);
    s.median_smoothing_only = median(per[1]);
    s.median_collocation_only = median(per[2]);
    const double leader = std::min(s.median_smoothing_only, s.median_collocation_only);
    s.leader_ratio = s.median_two_step / leader;
    s.follows_leader = s.median_two_step <= leader_tolerance * leader;
    return s;
}

}  // namespace sphreg
