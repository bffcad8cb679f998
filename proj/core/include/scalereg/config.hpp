#pragma once

#include "scalereg/operators.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace scalereg {

// Declarative description of one experiment run. Loads from a JSON file of
// nested tables mapping 1:1 onto the fields below; every field has the
// default given here.
struct ExperimentConfig {
    // problem
    OperatorKind kind = OperatorKind::LinearIntegration;
    double c0 = 1.0;
    double c1 = 1.0;
    int n = 256;
    double T = 1.0;
    DomainKind domain = DomainKind::WholeSpace;

    // truth: u-smooth | constant-one | one-plus-half-sine | coefficients
    std::string truth_profile = "u-smooth";
    std::uint64_t truth_seed = 7;
    std::vector<double> truth_coefficients;

    // Hilbert-scale indices
    double a = 1.0;
    double s = 0.0;
    double u = 1.0;

    // index function: hoelder | logarithmic
    std::string phi_kind = "hoelder";
    double gamma = 1.0;
    double mu = 1.0;

    // noise plan
    std::vector<double> deltas = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
    std::vector<double> sigmas = {0.0};
    int replications = 1;
    std::uint64_t base_seed = 20250810;
    std::string xi_profile = "alternating"; // alternating | smooth

    // parameter rule: apriori-det | lepskij | apriori-stoch
    std::string rule = "apriori-det";
    double lepskij_r = 2.0;
    double theta = 0.5;

    // solver
    int max_outer_iterations = 50;
    double gradient_tolerance = 1e-9;
    double cg_tolerance = 1e-12;
    int cg_max_iterations = 0; // 0 -> 4n
    std::string initial_guess = "zero"; // zero | constant
    double initial_constant = 0.5;
    int multistart = 0;

    // Gelfand-triple surrogate V = Y_t over the data-side scale
    double v_exponent = 1.0;

    // execution and output
    int threads = 0; // 0 -> hardware concurrency
    std::string csv_path;
    std::string svg_path;

    // Enforces the index constraints a >= 0, 0 <= s < u <= 2s + a, -a < s
    // and the per-field domains. Throws InvalidParameterError /
    // InvalidIndicesError.
    void validate() const;

    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

} // namespace scalereg
