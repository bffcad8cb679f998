#pragma once

#include "scalereg/noise.hpp"
#include "scalereg/operators.hpp"
#include "scalereg/scale.hpp"

#include <cstdint>

namespace scalereg {

// Which data-fidelity term the functional uses. Auto picks the stochastic
// form when sigma > 0 and the classical squared residual otherwise.
enum class DataModel { Auto, Deterministic, Stochastic };

struct SolveConfig {
    double alpha = 1e-3;
    double s = 0.0;
    int max_outer_iterations = 50;
    double gradient_tolerance = 1e-9;
    double cg_tolerance = 1e-12;
    int cg_max_iterations = 0; // 0 -> 4n
    DataModel model = DataModel::Auto;
    Vec initial_guess;      // empty -> zero start
    int multistart = 0;     // additional random smooth starts
    std::uint64_t multistart_seed = 1;

    void validate() const;
};

struct RegularizedSolution {
    Vec f_hat;
    double objective_value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    double residual_norm = 0.0; // ||F(f_hat) - g_delta||_Y, deterministic model only (NaN otherwise)
    int winning_start = -1;     // index of the multistart that won, -1 = configured start
};

// 1/2 ||F(f) - g^delta||_Y^2 + alpha ||f||_s^2. Throws WrongModelError when
// the observation carries stochastic noise.
double objective_det(const ForwardProblem& problem, const SpectralScale& scale,
                     const Observation& obs, const Vec& f, double alpha, double s);

// 1/2 ||F(f)||_Y^2 - <F(f), g_obs> + alpha ||f||_s^2 with the weak pairing.
// For sigma = 0 it differs from the deterministic objective exactly by the
// constant 1/2 ||g^delta||_Y^2.
double objective_stoch(const ForwardProblem& problem, const SpectralScale& scale,
                       const Observation& obs, const Vec& f, double alpha, double s);

// Gradient of the selected objective w.r.t. the weighted inner product:
// F'(f)*(F(f) - g_data) + 2 alpha L^{2s} f, where g_data is g^delta for the
// deterministic model and the observation vector for the stochastic one.
Vec gradient(const ForwardProblem& problem, const SpectralScale& scale, const Observation& obs,
             const Vec& f, double alpha, double s, DataModel model = DataModel::Auto);

// Gauss-Newton in the transformed variable h = L^s f (the penalty becomes
// alpha ||h||^2), each step solving the damped normal equations by conjugate
// gradients; falls back to Armijo gradient descent when a step fails to
// decrease the objective. Non-convergence is reported, never thrown.
RegularizedSolution solve(const ForwardProblem& problem, const SpectralScale& scale,
                          const Observation& obs, const SolveConfig& config);

} // namespace scalereg
