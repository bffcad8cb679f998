#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scalereg {

struct RateRow {
    double delta = 0.0;
    double sigma = 0.0;
    int rep = 0;
    double alpha = 0.0;
    double err_s = 0.0;
    double err_neg_a = 0.0;
    double resid_y = 0.0; // ||F(f_hat) - g_dagger||_Y
    int iters = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    // diagnostics outside the CSV contract
    double z_vprime = 0.0;
    double f_hat_norm_s = 0.0;
    double objective = 0.0;
    int winning_start = -1;
};

struct SlopeFit {
    double slope;
    double intercept;
    double stderr_slope;
    int points = 0;
    bool defined() const { return points >= 2; }
};

// Ordinary least squares of y against x. Undefined (NaN fields) for fewer
// than two points.
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct RateReport {
    std::vector<RateRow> rows;
    SlopeFit fit{};                  // log err_s against log noise level
    double theoretical_exponent = 0; // gamma (u-s)/(a+u) for Hoelder phi, NaN otherwise
    double fitted_gap = 0.0;         // fit.slope - theoretical_exponent
    int non_converged = 0;

    // Fixed-header CSV: delta,sigma,rep,alpha,err_s,err_neg_a,resid_Y,
    // iters,converged,seed. Byte-deterministic for a given report.
    std::string to_csv() const;
};

void write_text_file(const std::string& path, const std::string& content);

// Log-log scatter of the report rows with the fitted and theoretical lines.
std::string rate_plot_svg(const RateReport& report, bool against_sigma);

} // namespace scalereg
