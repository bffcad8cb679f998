#include "scalereg/solver.hpp"
#include "scalereg/errors.hpp"
#include "scalereg/rng.hpp"

#include <cmath>
#include <limits>

namespace scalereg {

namespace {

DataModel resolve_model(DataModel model, const Observation& obs) {
    if (model == DataModel::Auto)
        return obs.sigma > 0.0 ? DataModel::Stochastic : DataModel::Deterministic;
    return model;
}

double objective_of(DataModel model, const ForwardProblem& problem, const SpectralScale& scale,
                    const Observation& obs, const Vec& f, double alpha, double s) {
    return model == DataModel::Deterministic ? objective_det(problem, scale, obs, f, alpha, s)
                                             : objective_stoch(problem, scale, obs, f, alpha, s);
}

struct GnRun {
    Vec f;
    double objective = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// CG on (A*A + 2 alpha I) x = b in the weighted inner product, where
// A v = M L^{-s} v and M is the current derivative matrix.
Vec cg_normal_equations(const Mat& m, const Mat& m_adj, const SpectralScale& scale, double s,
                        double alpha, const Vec& b, double tol, int max_iter) {
    const Grid& grid = scale.grid();
    auto apply = [&](const Vec& v) -> Vec {
        Vec lv = scale.apply_power(-s, v);
        Vec av = m * lv;
        Vec atav = scale.apply_power(-s, m_adj * av);
        return atav + 2.0 * alpha * v;
    };

    Vec x = Vec::Zero(b.size());
    Vec r = b;
    Vec p = r;
    double rr = grid.inner(r, r);
    const double b_norm = std::sqrt(grid.inner(b, b));
    if (b_norm == 0.0)
        return x;
    const double stop = tol * b_norm;
    for (int it = 0; it < max_iter; ++it) {
        if (std::sqrt(rr) <= stop)
            break;
        Vec ap = apply(p);
        const double pap = grid.inner(p, ap);
        if (pap <= 0.0)
            break; // numerical breakdown; x is the best iterate so far
        const double step = rr / pap;
        x += step * p;
        r -= step * ap;
        const double rr_new = grid.inner(r, r);
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }
    return x;
}

GnRun gauss_newton(const ForwardProblem& problem, const SpectralScale& scale,
                   const Observation& obs, const SolveConfig& config, DataModel model,
                   const Vec& start) {
    const Grid& grid = scale.grid();
    const double alpha = config.alpha;
    const double s = config.s;
    const Vec g_data =
        model == DataModel::Deterministic ? obs.g_delta() : obs.data_vector();
    const int cg_max = config.cg_max_iterations > 0 ? config.cg_max_iterations : 4 * grid.n;

    auto objective = [&](const Vec& f) {
        return objective_of(model, problem, scale, obs, f, alpha, s);
    };

    GnRun run;
    run.f = problem.project_domain(start);
    run.objective = objective(run.f);

    for (; run.iterations < config.max_outer_iterations; ++run.iterations) {
        const Vec residual = problem.apply(run.f) - g_data;
        const Vec grad = problem.derivative_adjoint_apply(run.f, residual) +
                         2.0 * alpha * scale.apply_power(2.0 * s, run.f);
        run.gradient_norm = grid.norm(grad);
        if (run.gradient_norm <= config.gradient_tolerance) {
            run.converged = true;
            return run;
        }

        const Mat m = problem.derivative_matrix(run.f);
        const Mat m_adj = weighted_adjoint(m, grid);
        const Vec grad_h = scale.apply_power(-s, grad);
        const Vec step = cg_normal_equations(m, m_adj, scale, s, alpha, -grad_h,
                                             config.cg_tolerance, cg_max);

        const Vec h = scale.apply_power(s, run.f);
        double directional = grid.inner(grad_h, step);
        bool accepted = false;
        if (directional < 0.0) {
            double t = 1.0;
            for (int bt = 0; bt < 40 && !accepted; ++bt, t *= 0.5) {
                Vec cand = problem.project_domain(scale.apply_power(-s, h + t * step));
                const double val = objective(cand);
                if (val <= run.objective + 1e-4 * t * directional) {
                    run.f = cand;
                    run.objective = val;
                    accepted = true;
                }
            }
        }
        if (!accepted) {
            // steepest descent fallback in the original variable
            directional = -grid.inner(grad, grad);
            double t = 1.0 / std::max(1.0, run.gradient_norm);
            for (int bt = 0; bt < 60 && !accepted; ++bt, t *= 0.5) {
                Vec cand = problem.project_domain(run.f - t * grad);
                const double val = objective(cand);
                if (val <= run.objective + 1e-4 * t * directional) {
                    run.f = cand;
                    run.objective = val;
                    accepted = true;
                }
            }
        }
        if (!accepted)
            break; // stalled: no descent found along either direction
    }

    const Vec residual = problem.apply(run.f) - g_data;
    run.gradient_norm = grid.norm(problem.derivative_adjoint_apply(run.f, residual) +
                                  2.0 * alpha * scale.apply_power(2.0 * s, run.f));
    run.converged = run.gradient_norm <= config.gradient_tolerance;
    return run;
}

} // namespace

void SolveConfig::validate() const {
    if (!(alpha > 0.0))
        throw InvalidParameterError("SolveConfig: alpha must be positive");
    if (!(gradient_tolerance > 0.0) || !(cg_tolerance > 0.0))
        throw InvalidParameterError("SolveConfig: tolerances must be positive");
    if (s < 0.0)
        throw InvalidParameterError("SolveConfig: s must be nonnegative");
    if (max_outer_iterations <= 0)
        throw InvalidParameterError("SolveConfig: max_outer_iterations must be positive");
}

double objective_det(const ForwardProblem& problem, const SpectralScale& scale,
                     const Observation& obs, const Vec& f, double alpha, double s) {
    if (obs.sigma > 0.0)
        throw WrongModelError("objective_det: observation carries stochastic noise");
    const Grid& grid = scale.grid();
    const Vec residual = problem.apply(f) - obs.g_delta();
    const double fit = 0.5 * grid.inner(residual, residual);
    const double pen = scale.norm(s, f);
    return fit + alpha * pen * pen;
}

double objective_stoch(const ForwardProblem& problem, const SpectralScale& scale,
                       const Observation& obs, const Vec& f, double alpha, double s) {
    const Grid& grid = scale.grid();
    const Vec gf = problem.apply(f);
    const double pen = scale.norm(s, f);
    return 0.5 * grid.inner(gf, gf) - obs.weak_pair(gf) + alpha * pen * pen;
}

Vec gradient(const ForwardProblem& problem, const SpectralScale& scale, const Observation& obs,
             const Vec& f, double alpha, double s, DataModel model) {
    const DataModel resolved = resolve_model(model, obs);
    const Vec g_data =
        resolved == DataModel::Deterministic ? obs.g_delta() : obs.data_vector();
    const Vec residual = problem.apply(f) - g_data;
    return problem.derivative_adjoint_apply(f, residual) +
           2.0 * alpha * scale.apply_power(2.0 * s, f);
}

RegularizedSolution solve(const ForwardProblem& problem, const SpectralScale& scale,
                          const Observation& obs, const SolveConfig& config) {
    config.validate();
    const DataModel model = resolve_model(config.model, obs);
    if (model == DataModel::Deterministic && obs.sigma > 0.0)
        throw WrongModelError("solve: deterministic model requested for stochastic data");

    const int n = scale.grid().n;
    Vec base = config.initial_guess.size() > 0 ? config.initial_guess : Vec(Vec::Zero(n));
    if (base.size() != n)
        throw InvalidParameterError("solve: initial guess length does not match grid");

    GnRun best = gauss_newton(problem, scale, obs, config, model, base);
    int winner = -1;
    for (int k = 0; k < config.multistart; ++k) {
        Rng rng = Rng::for_stream(config.multistart_seed, static_cast<std::uint64_t>(k));
        Vec w(n);
        for (int i = 0; i < n; ++i)
            w[i] = rng.uniform(-1.0, 1.0);
        Vec start = scale.apply_power(-1.0, w);
        const double norm = scale.grid().norm(start);
        if (norm > 0.0)
            start /= norm;
        GnRun cand = gauss_newton(problem, scale, obs, config, model, start);
        if (cand.objective < best.objective) {
            best = cand;
            winner = k;
        }
    }

    RegularizedSolution sol;
    sol.f_hat = best.f;
    sol.objective_value = best.objective;
    sol.gradient_norm = best.gradient_norm;
    sol.iterations = best.iterations;
    sol.converged = best.converged;
    sol.winning_start = winner;
    if (model == DataModel::Deterministic)
        sol.residual_norm = scale.grid().norm(problem.apply(best.f) - obs.g_delta());
    else
        sol.residual_norm = std::numeric_limits<double>::quiet_NaN();
    return sol;
}

} // namespace scalereg
