#pragma once

#include "scalereg/scale.hpp"

#include <vector>

namespace scalereg {

// Concave index function phi: continuous, strictly increasing, phi(0) = 0.
// Built-in kinds are the Hoelder monomial t^gamma and the logarithmic
// family (ln(3 + 1/t))^{-mu}; arbitrary tables are interpolated monotonically
// (Fritsch-Carlson slopes) with the derivative taken from the interpolant.
class IndexFunction {
  public:
    enum class Kind { Hoelder, Logarithmic, Table };

    static IndexFunction hoelder(double gamma);
    static IndexFunction logarithmic(double mu);
    static IndexFunction from_table(std::vector<double> ts, std::vector<double> values);

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    double mu() const { return mu_; }

    double value(double t) const;
    // One-sided at 0 (may be +inf for sublinear kinds).
    double derivative(double t) const;

    // phi(0) = 0, strict increase on a sampled grid, concavity midpoint
    // test. Throws InvalidParameterError on violation. Called automatically
    // for tables.
    void validate(double t_max = 1.0, int samples = 1000) const;

  private:
    IndexFunction() = default;

    Kind kind_ = Kind::Hoelder;
    double gamma_ = 1.0;
    double mu_ = 1.0;
    std::vector<double> ts_, vals_, slopes_;

    int table_interval(double t) const;
};

struct FenchelResult {
    double value = 0.0;
    double maximizer = 0.0;
    bool used_fallback = false; // golden-section path after non-concavity was detected
};

// Rate function psi_{u,s,a}(t) = phi(sqrt t)^{2(u-s)/(a+u)} together with its
// Fenchel machinery and the parameter-choice rules derived from it.
class RateFunction {
  public:
    // Requires a >= 0, 0 <= s < u <= 2s + a and -a < s.
    RateFunction(IndexFunction phi, double u, double s, double a);

    const IndexFunction& phi() const { return phi_; }
    double u() const { return u_; }
    double s() const { return s_; }
    double a() const { return a_; }
    double exponent() const { return exponent_; } // 2(u-s)/(a+u)

    double psi(double t) const;
    double psi_prime(double t) const;

    // phi_app(alpha) = sup_{tau >= 0} [psi(tau) - tau/alpha], nonnegative and
    // nondecreasing in alpha. Solved by bisection on the monotone derivative;
    // falls back to golden section (flagged) if concavity breaks down.
    FenchelResult fenchel_app_full(double alpha) const;
    double fenchel_app(double alpha) const { return fenchel_app_full(alpha).value; }

    // A priori rule alpha* = 1 / psi'(delta^2), the differentiable case of
    // -1/alpha* in the superdifferential of psi at delta^2. Throws
    // DegenerateChoiceError if psi'(delta^2) is zero or not finite.
    double apriori_alpha_det(double delta) const;

    // Sigma(alpha) = sqrt(alpha phi_app(alpha)),
    // SigmaTilde(alpha) = alpha^{1 - theta/2} sqrt(phi_app(alpha)).
    double sigma_fn(double alpha) const;
    double sigma_tilde_fn(double alpha, double theta) const;

    // Sigma^{-1}(delta) + SigmaTilde^{-1}(sigma) by monotone bisection.
    double apriori_alpha_stoch(double delta, double sigma, double theta) const;

    // delta^2/alpha + C phi_app(8 C alpha): the right side of the error
    // estimate for the deterministic model.
    double error_bound_det(double delta, double alpha, double c) const;

  private:
    IndexFunction phi_;
    double u_ = 0.0, s_ = 0.0, a_ = 0.0;
    double exponent_ = 0.0;
};

// Lepskij balancing principle on the candidate grid alpha_1 = delta^2,
// alpha_j = delta^2 r^{2j-2}, m minimal with alpha_m >= 1: returns the
// 0-based index of the largest j with
//   ||u_i - u_j||_s <= 4 r^{1-i}  for all i <= j (1-based i).
// Throws InvalidGridError when the grid does not follow that construction.
int lepskij_select(const std::vector<double>& alphas, const std::vector<Vec>& solutions,
                   double delta, double r, const SpectralScale& scale, double s);

// Same selection on a precomputed symmetric distance matrix (entry (i, j) =
// ||u_i - u_j||_s); no grid validation.
int lepskij_select_distances(const Mat& distances, double r);

// The candidate grid itself (for the experiment driver).
std::vector<double> lepskij_alpha_grid(double delta, double r);

} // namespace scalereg
