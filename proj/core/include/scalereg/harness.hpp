#pragma once

#include "scalereg/config.hpp"
#include "scalereg/noise.hpp"
#include "scalereg/rates.hpp"
#include "scalereg/report.hpp"
#include "scalereg/solver.hpp"

#include <functional>

namespace scalereg {

// Problem, scale, truth and rate function assembled from a config. The scale
// is generated by the integration operator of the problem grid; the data-side
// (Y) scale of the Gelfand surrogate coincides with it on this artifact since
// domain and data space share the grid.
struct Experiment {
    ExperimentConfig config;
    ForwardProblem problem;
    SpectralScale scale;
    Vec f_dagger;
    RateFunction rate;

    static Experiment build(const ExperimentConfig& config);

    SolveConfig solver_config(double alpha) const;
    std::uint64_t cell_seed(int cell_index) const;
};

// Deterministic sweep over the delta grid: per noise level and replication
// build the observation, choose alpha by the configured a priori rule, solve
// and record norms; fits the log-log slope over >= 5 levels. Pure function of
// (config, base seed); writes CSV/SVG when paths are set.
RateReport run_rate_experiment(const ExperimentConfig& config);

struct LepskijDeltaTrace {
    double delta = 0.0;
    int rep = 0;
    std::vector<double> alphas;
    std::vector<double> errors; // ||u_j - f_dagger||_s per candidate
    int selected = 0;           // 0-based index into alphas
    int best = 0;               // argmin of errors among converged candidates
    double selected_err = 0.0;
    double best_err = 0.0;
};

struct LepskijReport {
    RateReport report; // rows of the selected solutions
    std::vector<LepskijDeltaTrace> traces;
};

// Balancing-principle sweep (sigma = 0): solves the whole candidate grid
// alpha_j = delta^2 r^{2j-2} per noise level, selects j_Lep and records the
// selected error next to the best error on the grid.
LepskijReport run_lepskij_experiment(const ExperimentConfig& config);

// Stochastic sweep over the sigma grid with delta fixed at deltas[0]; alpha
// chosen by the stochastic a priori rule; sigma = 0 entries reduce to the
// deterministic pipeline. Rows carry ||Z||_{V'} w.r.t. the configured V-scale.
RateReport run_stochastic_experiment(const ExperimentConfig& config);

struct AutoconvStabilityReport {
    double tau = 0.0;
    double bound = 0.0;       // 1/(2 - tau)
    double worst_ratio = 0.0; // max ||f - f1||_{-1} / ||F(f) - F(f1)||_Y
    double worst_identity_gap = 0.0;
    int samples = 0;
    int violations = 0;
    bool passed = false;
};

// Conditional stability certificate for the autoconvolution operator at
// f_dagger == 1: samples smooth perturbations with ||h||_1 <= tau and checks
// the ratio against 1/(2-tau) together with the exact identity
// ||h||_{-1} = 1/2 ||F'(f_dagger) h||_Y.
AutoconvStabilityReport verify_autoconvolution_stability(int n, double tau, int num_samples,
                                                         std::uint64_t seed);

struct ExpStabilityReport {
    double c_down = 0.0; // empirical min of ||F'(f1) h|| / ||h||_{-1}
    double k_hat = 0.0;  // empirical nonlinearity constant
    double radius = 0.0;
    double r_bound = 0.0;      // (k_hat * radius + 1) / c_down
    double worst_ratio = 0.0;  // max ||f - f1||_{-1} / ||F(f) - F(f1)||_Y
    double worst_linearization = 0.0; // max ||F'(f1)h|| / ((k_hat||h||+1) ||dF||)
    int samples = 0;
    int violations = 0;
    bool passed = false;
};

// Two-stage Monte Carlo certificate for the exponential-growth operator at
// f_dagger == 1: c_down and the nonlinearity constant are estimated on the
// first half of the samples, the stability ratio is then checked on all of
// them over the ball of the given radius.
ExpStabilityReport verify_exponential_stability(double c0, double c1, int n, double radius,
                                                int num_samples, std::uint64_t seed);

struct InterpYReport {
    double theta = 0.0;
    double rho = 0.0;
    double c_theta = 0.0;      // smallest constant over the samples
    double fitted_theta = 0.0; // regression estimate of the exponent
    int samples = 0;
};

// Residual interpolation between the V- and Y-norms on a sampled ball
// ||f - f_dagger||_s <= rho: fits the smallest C with
//   ||F(f) - g||_V <= C ||F(f) - g||_Y^theta ||f - f_dagger||_s^{1-theta}
// and recovers the exponent empirically.
InterpYReport check_interpolation_Y(const ForwardProblem& problem, const SpectralScale& scale_x,
                                    const SpectralScale& scale_y, const Vec& f_dagger,
                                    double v_exponent, double s, double theta, double rho,
                                    int num_samples, std::uint64_t seed);

// Runs fn(0..count-1) on a small worker pool; result collection is the
// caller's responsibility (index-addressed), which keeps reports independent
// of scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

} // namespace scalereg
