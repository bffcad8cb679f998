#include "scalereg/harness.hpp"
#include "scalereg/errors.hpp"
#include "scalereg/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace scalereg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

IndexFunction phi_from_config(const ExperimentConfig& c) {
    if (c.phi_kind == "hoelder")
        return IndexFunction::hoelder(c.gamma);
    return IndexFunction::logarithmic(c.mu);
}

Vec truth_from_config(const ExperimentConfig& c, const Grid& grid, const SpectralScale& scale) {
    if (c.truth_profile == "constant-one")
        return Vec::Ones(grid.n);
    if (c.truth_profile == "one-plus-half-sine") {
        Vec f(grid.n);
        for (int i = 0; i < grid.n; ++i)
            f[i] = 1.0 + 0.5 * std::sin(2.0 * M_PI * grid.nodes[i] / grid.T);
        return f;
    }
    if (c.truth_profile == "coefficients") {
        Vec f(grid.n);
        for (int i = 0; i < grid.n; ++i)
            f[i] = c.truth_coefficients[i];
        return f;
    }
    // u-smooth: f = L^{-u} w with ||w|| = 1, so ||f||_u = 1 exactly
    Rng rng = Rng::for_stream(c.truth_seed, 0);
    Vec w(grid.n);
    for (int i = 0; i < grid.n; ++i)
        w[i] = rng.uniform(-1.0, 1.0);
    w /= grid.norm(w);
    return scale.apply_power(-c.u, w);
}

XiProfile xi_from_config(const ExperimentConfig& c) {
    return c.xi_profile == "smooth" ? XiProfile::Smooth : XiProfile::Alternating;
}

double median(std::vector<double> v) {
    if (v.empty())
        return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Median err_s per level among converged rows, then OLS of log(err) against
// log(level); defined only for >= 5 usable levels.
SlopeFit fit_report(const std::vector<RateRow>& rows, bool against_sigma, int levels, int reps) {
    std::vector<double> xs, ys;
    for (int l = 0; l < levels; ++l) {
        std::vector<double> errs;
        double level = 0.0;
        for (int p = 0; p < reps; ++p) {
            const RateRow& r = rows[static_cast<std::size_t>(l) * reps + p];
            level = against_sigma ? r.sigma : r.delta;
            if (r.converged && r.err_s > 0.0)
                errs.push_back(r.err_s);
        }
        if (!errs.empty() && level > 0.0) {
            xs.push_back(std::log(level));
            ys.push_back(std::log(median(std::move(errs))));
        }
    }
    if (xs.size() < 5) {
        SlopeFit fit;
        fit.slope = fit.intercept = fit.stderr_slope = kNaN;
        fit.points = static_cast<int>(xs.size());
        return fit;
    }
    return fit_line(xs, ys);
}

void finalize_report(RateReport& report, const Experiment& ex, bool against_sigma, int levels) {
    report.fit = fit_report(report.rows, against_sigma, levels, ex.config.replications);
    const ExperimentConfig& c = ex.config;
    report.theoretical_exponent =
        c.phi_kind == "hoelder" ? c.gamma * (c.u - c.s) / (c.a + c.u) : kNaN;
    report.fitted_gap = report.fit.slope - report.theoretical_exponent;
    report.non_converged = 0;
    for (const RateRow& r : report.rows)
        if (!r.converged)
            ++report.non_converged;
    if (!c.csv_path.empty())
        write_text_file(c.csv_path, report.to_csv());
    if (!c.svg_path.empty())
        write_text_file(c.svg_path, rate_plot_svg(report, against_sigma));
}

} // namespace

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (count <= 0)
        return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

Experiment Experiment::build(const ExperimentConfig& config) {
    config.validate();
    Grid grid = Grid::uniform_midpoint(config.n, config.T);
    ForwardProblem problem = [&]() {
        switch (config.kind) {
        case OperatorKind::LinearIntegration:
            return ForwardProblem::linear_integration(grid);
        case OperatorKind::ExponentialGrowth:
            return ForwardProblem::exponential_growth(grid, config.c0, config.c1);
        case OperatorKind::Autoconvolution:
            return ForwardProblem::autoconvolution(grid);
        }
        throw std::logic_error("unreachable");
    }();
    problem.set_domain(config.domain);
    SpectralScale scale = SpectralScale::from_operator(problem.integration(), grid);
    Vec f_dagger = truth_from_config(config, grid, scale);
    RateFunction rate(phi_from_config(config), config.u, config.s, config.a);
    return Experiment{config, std::move(problem), std::move(scale), std::move(f_dagger),
                      std::move(rate)};
}

SolveConfig Experiment::solver_config(double alpha) const {
    SolveConfig sc;
    sc.alpha = alpha;
    sc.s = config.s;
    sc.max_outer_iterations = config.max_outer_iterations;
    sc.gradient_tolerance = config.gradient_tolerance;
    sc.cg_tolerance = config.cg_tolerance;
    sc.cg_max_iterations = config.cg_max_iterations;
    sc.multistart = config.multistart;
    sc.multistart_seed = config.base_seed ^ 0x5ca1e0ull;
    if (config.initial_guess == "constant")
        sc.initial_guess = Vec::Constant(config.n, config.initial_constant);
    return sc;
}

std::uint64_t Experiment::cell_seed(int cell_index) const {
    return Rng::for_stream(config.base_seed, static_cast<std::uint64_t>(cell_index)).next_u64();
}

namespace {

RateRow run_cell(const Experiment& ex, double delta, double sigma, int rep, int cell_index) {
    const ExperimentConfig& c = ex.config;
    const std::uint64_t seed = ex.cell_seed(cell_index);
    Observation obs =
        make_observation(ex.problem, ex.f_dagger, delta, sigma, xi_from_config(c), seed);

    double alpha;
    if (c.rule == "apriori-stoch")
        alpha = ex.rate.apriori_alpha_stoch(delta, sigma, c.theta);
    else
        alpha = ex.rate.apriori_alpha_det(delta);

    RegularizedSolution sol = solve(ex.problem, ex.scale, obs, ex.solver_config(alpha));

    RateRow row;
    row.delta = delta;
    row.sigma = sigma;
    row.rep = rep;
    row.alpha = alpha;
    const Vec diff = sol.f_hat - ex.f_dagger;
    row.err_s = ex.scale.norm(c.s, diff);
    row.err_neg_a = ex.scale.norm(-c.a, diff);
    row.resid_y = ex.scale.grid().norm(ex.problem.apply(sol.f_hat) - obs.g_dagger);
    row.iters = sol.iterations;
    row.converged = sol.converged;
    row.seed = seed;
    row.z_vprime = ex.scale.norm(-c.v_exponent, obs.z);
    row.f_hat_norm_s = ex.scale.norm(c.s, sol.f_hat);
    row.objective = sol.objective_value;
    row.winning_start = sol.winning_start;
    return row;
}

} // namespace

RateReport run_rate_experiment(const ExperimentConfig& config) {
    if (config.rule == "lepskij")
        throw InvalidParameterError("run_rate_experiment: use run_lepskij_experiment for the "
                                    "balancing rule");
    Experiment ex = Experiment::build(config);
    const int levels = static_cast<int>(config.deltas.size());
    const int reps = config.replications;
    const double sigma = config.sigmas.empty() ? 0.0 : config.sigmas.front();

    RateReport report;
    report.rows.resize(static_cast<std::size_t>(levels) * reps);
    parallel_for(levels * reps, config.threads, [&](int cell) {
        const int level = cell / reps;
        const int rep = cell % reps;
        report.rows[cell] = run_cell(ex, config.deltas[level], sigma, rep, cell);
    });
    finalize_report(report, ex, /*against_sigma=*/false, levels);
    return report;
}

RateReport run_stochastic_experiment(const ExperimentConfig& config) {
    if (config.rule != "apriori-stoch")
        throw InvalidParameterError("run_stochastic_experiment: rule must be apriori-stoch");
    Experiment ex = Experiment::build(config);
    const int levels = static_cast<int>(config.sigmas.size());
    const int reps = config.replications;
    const double delta = config.deltas.front();

    RateReport report;
    report.rows.resize(static_cast<std::size_t>(levels) * reps);
    parallel_for(levels * reps, config.threads, [&](int cell) {
        const int level = cell / reps;
        const int rep = cell % reps;
        report.rows[cell] = run_cell(ex, delta, config.sigmas[level], rep, cell);
    });
    finalize_report(report, ex, /*against_sigma=*/true, levels);
    return report;
}

LepskijReport run_lepskij_experiment(const ExperimentConfig& config) {
    if (config.rule != "lepskij")
        throw InvalidParameterError("run_lepskij_experiment: rule must be lepskij");
    for (double sg : config.sigmas)
        if (sg != 0.0)
            throw InvalidParameterError("run_lepskij_experiment: requires sigma = 0");
    Experiment ex = Experiment::build(config);
    const ExperimentConfig& c = ex.config;
    const int levels = static_cast<int>(c.deltas.size());
    const int reps = c.replications;
    const double r = c.lepskij_r;

    struct Cell {
        std::uint64_t seed = 0;
        Observation obs;
        std::vector<double> alphas;
        std::vector<RegularizedSolution> solutions;
    };
    std::vector<Cell> cells(static_cast<std::size_t>(levels) * reps);

    // flatten (cell, candidate) jobs so the pool stays busy across the grid
    std::vector<std::pair<int, int>> jobs;
    for (int cell = 0; cell < levels * reps; ++cell) {
        const int level = cell / reps;
        Cell& cl = cells[cell];
        cl.seed = ex.cell_seed(cell);
        cl.obs = make_observation(ex.problem, ex.f_dagger, c.deltas[level], 0.0,
                                  xi_from_config(c), cl.seed);
        cl.alphas = lepskij_alpha_grid(c.deltas[level], r);
        cl.solutions.resize(cl.alphas.size());
        for (int j = 0; j < static_cast<int>(cl.alphas.size()); ++j)
            jobs.emplace_back(cell, j);
    }
    parallel_for(static_cast<int>(jobs.size()), c.threads, [&](int k) {
        const auto [cell, j] = jobs[k];
        Cell& cl = cells[cell];
        cl.solutions[j] = solve(ex.problem, ex.scale, cl.obs, ex.solver_config(cl.alphas[j]));
    });

    LepskijReport out;
    out.report.rows.resize(cells.size());
    out.traces.resize(cells.size());
    for (int cell = 0; cell < static_cast<int>(cells.size()); ++cell) {
        const int level = cell / reps;
        const int rep = cell % reps;
        Cell& cl = cells[cell];
        const double delta = c.deltas[level];

        std::vector<Vec> iterates;
        iterates.reserve(cl.solutions.size());
        for (const auto& sol : cl.solutions)
            iterates.push_back(sol.f_hat);
        const int selected = lepskij_select(cl.alphas, iterates, delta, r, ex.scale, c.s);

        LepskijDeltaTrace trace;
        trace.delta = delta;
        trace.rep = rep;
        trace.alphas = cl.alphas;
        trace.errors.resize(cl.alphas.size());
        trace.best = -1;
        for (int j = 0; j < static_cast<int>(cl.alphas.size()); ++j) {
            trace.errors[j] = ex.scale.norm(c.s, cl.solutions[j].f_hat - ex.f_dagger);
            if (cl.solutions[j].converged &&
                (trace.best < 0 || trace.errors[j] < trace.errors[trace.best]))
                trace.best = j;
        }
        if (trace.best < 0)
            trace.best = 0;
        trace.selected = selected;
        trace.selected_err = trace.errors[selected];
        trace.best_err = trace.errors[trace.best];
        out.traces[cell] = std::move(trace);

        const RegularizedSolution& sol = cl.solutions[selected];
        RateRow row;
        row.delta = delta;
        row.sigma = 0.0;
        row.rep = rep;
        row.alpha = cl.alphas[selected];
        const Vec diff = sol.f_hat - ex.f_dagger;
        row.err_s = ex.scale.norm(c.s, diff);
        row.err_neg_a = ex.scale.norm(-c.a, diff);
        row.resid_y = ex.scale.grid().norm(ex.problem.apply(sol.f_hat) - cl.obs.g_dagger);
        row.iters = sol.iterations;
        row.converged = sol.converged;
        row.seed = cl.seed;
        row.z_vprime = ex.scale.norm(-c.v_exponent, cl.obs.z);
        row.f_hat_norm_s = ex.scale.norm(c.s, sol.f_hat);
        row.objective = sol.objective_value;
        out.report.rows[cell] = std::move(row);
    }
    finalize_report(out.report, ex, /*against_sigma=*/false, levels);
    return out;
}

AutoconvStabilityReport verify_autoconvolution_stability(int n, double tau, int num_samples,
                                                         std::uint64_t seed) {
    if (!(tau > 0.0) || !(tau < 2.0))
        throw InvalidParameterError("verify_autoconvolution_stability: need 0 < tau < 2");
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    ForwardProblem problem = ForwardProblem::autoconvolution(grid);
    SpectralScale scale = SpectralScale::from_operator(problem.integration(), grid);
    const Vec f_dagger = Vec::Ones(n);
    const Vec g_dagger = problem.apply(f_dagger);

    AutoconvStabilityReport report;
    report.tau = tau;
    report.bound = 1.0 / (2.0 - tau);
    report.samples = num_samples;

    for (int k = 0; k < num_samples; ++k) {
        Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(k));
        Vec w(n);
        for (int i = 0; i < n; ++i)
            w[i] = rng.uniform(-1.0, 1.0);
        const double smoothness = 1.25 + 1.5 * rng.uniform();
        Vec h = scale.apply_power(-smoothness, w);
        const double h1 = scale.norm(1.0, h);
        h *= tau * rng.uniform() / h1; // ||h||_1 uniform in (0, tau]

        const Vec f = f_dagger + h;
        const double lhs = scale.norm(-1.0, h);
        const double dF = grid.norm(problem.apply(f) - g_dagger);
        const double ratio = dF > 0.0 ? lhs / dF : 0.0;
        report.worst_ratio = std::max(report.worst_ratio, ratio);
        if (ratio > report.bound * (1.0 + 1e-12))
            ++report.violations;

        const double rhs_id = 0.5 * grid.norm(problem.derivative_apply(f_dagger, h));
        const double gap = std::abs(lhs - rhs_id) / std::max(lhs, 1e-300);
        report.worst_identity_gap = std::max(report.worst_identity_gap, gap);
    }
    report.passed = report.violations == 0 && report.worst_identity_gap <= 1e-9;
    return report;
}

ExpStabilityReport verify_exponential_stability(double c0, double c1, int n, double radius,
                                                int num_samples, std::uint64_t seed) {
    if (!(radius > 0.0))
        throw InvalidParameterError("verify_exponential_stability: radius must be positive");
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    ForwardProblem problem = ForwardProblem::exponential_growth(grid, c0, c1);
    SpectralScale scale = SpectralScale::from_operator(problem.integration(), grid);
    const Vec f_dagger = Vec::Ones(n);
    const Vec g_dagger = problem.apply(f_dagger);

    auto sample_h = [&](int k) {
        Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(k));
        Vec w(n);
        for (int i = 0; i < n; ++i)
            w[i] = rng.uniform(-1.0, 1.0);
        // mix rough and smoothed directions
        const double smoothness = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.5, 2.0);
        Vec h = smoothness > 0.0 ? Vec(scale.apply_power(-smoothness, w)) : w;
        h *= radius * rng.uniform() / grid.norm(h); // ||h|| uniform in (0, radius]
        return h;
    };

    ExpStabilityReport report;
    report.radius = radius;
    report.samples = num_samples;

    // stage 1: constants from the first half of the samples
    const int fit_samples = std::max(1, num_samples / 2);
    double c_down = std::numeric_limits<double>::infinity();
    double k_hat = 0.0;
    for (int k = 0; k < fit_samples; ++k) {
        const Vec h = sample_h(k);
        const Vec dlin = problem.derivative_apply(f_dagger, h);
        c_down = std::min(c_down, grid.norm(dlin) / scale.norm(-1.0, h));
        const Vec dF = problem.apply(f_dagger + h) - g_dagger;
        const double denom = grid.norm(dF) * grid.norm(h);
        if (denom > 0.0)
            k_hat = std::max(k_hat, grid.norm(dF - dlin) / denom);
    }
    report.c_down = c_down;
    report.k_hat = k_hat;
    report.r_bound = (k_hat * radius + 1.0) / c_down;

    // stage 2: stability and linearization-consistency ratios on all samples
    for (int k = 0; k < num_samples; ++k) {
        const Vec h = sample_h(k);
        const Vec dF = problem.apply(f_dagger + h) - g_dagger;
        const double dF_norm = grid.norm(dF);
        const double ratio = dF_norm > 0.0 ? scale.norm(-1.0, h) / dF_norm : 0.0;
        report.worst_ratio = std::max(report.worst_ratio, ratio);
        if (ratio > report.r_bound * (1.0 + 1e-9))
            ++report.violations;
        const double lin = grid.norm(problem.derivative_apply(f_dagger, h)) /
                           ((k_hat * grid.norm(h) + 1.0) * std::max(dF_norm, 1e-300));
        report.worst_linearization = std::max(report.worst_linearization, lin);
    }
    report.passed = report.violations == 0 && report.worst_linearization <= 1.0 + 1e-9;
    return report;
}

InterpYReport check_interpolation_Y(const ForwardProblem& problem, const SpectralScale& scale_x,
                                    const SpectralScale& scale_y, const Vec& f_dagger,
                                    double v_exponent, double s, double theta, double rho,
                                    int num_samples, std::uint64_t seed) {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw InvalidParameterError("check_interpolation_Y: theta must be in (0, 1)");
    if (!(rho > 0.0))
        throw InvalidParameterError("check_interpolation_Y: rho must be positive");
    const Grid& grid = problem.grid();
    const Vec g_dagger = problem.apply(f_dagger);

    InterpYReport report;
    report.theta = theta;
    report.rho = rho;

    std::vector<double> reg_x, reg_y;
    for (int k = 0; k < num_samples; ++k) {
        Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(k));
        Vec w(grid.n);
        for (int i = 0; i < grid.n; ++i)
            w[i] = rng.uniform(-1.0, 1.0);
        const double smoothness = rng.uniform(0.0, 2.0);
        Vec h = smoothness > 0.0 ? Vec(scale_x.apply_power(-smoothness, w)) : w;
        const double sn_dir = scale_x.norm(s, h);
        if (sn_dir == 0.0)
            continue;
        const double amplitude = rho * std::pow(10.0, -2.0 * rng.uniform());
        h *= amplitude / sn_dir;

        const Vec res = problem.apply(f_dagger + h) - g_dagger;
        const double vn = scale_y.norm(v_exponent, res);
        const double yn = grid.norm(res);
        const double sn = scale_x.norm(s, h);
        if (vn <= 0.0 || yn <= 0.0 || sn <= 0.0)
            continue;
        ++report.samples;
        report.c_theta =
            std::max(report.c_theta, vn / (std::pow(yn, theta) * std::pow(sn, 1.0 - theta)));
        reg_x.push_back(std::log(yn) - std::log(sn));
        reg_y.push_back(std::log(vn) - std::log(sn));
    }
    report.fitted_theta = fit_line(reg_x, reg_y).slope;
    return report;
}

} // namespace scalereg
