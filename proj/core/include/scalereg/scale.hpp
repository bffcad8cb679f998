#pragma once

#include "scalereg/grid.hpp"

namespace scalereg {

struct InterpolationReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// Discretized Hilbert scale {X_nu} generated by a strictly positive operator
// L, held spectrally: eigenvalues (ascending) and eigenvectors orthonormal
// under the weighted inner product. Fractional powers and nu-norms are
// evaluated in the eigenbasis. Immutable after construction.
class SpectralScale {
  public:
    // Scale generated by L = (J*J)^{-1/2} for an injective matrix J, the
    // adjoint taken w.r.t. the weighted inner product. Eigenvalues are the
    // reciprocal singular values of J; m_bound is the least of them.
    // Throws DegenerateGeneratorError if the condition estimate of J
    // exceeds 1e14.
    static SpectralScale from_operator(const Mat& j, const Grid& grid);

    const Grid& grid() const { return grid_; }
    const Vec& eigenvalues() const { return eigenvalues_; }
    const Mat& eigenvectors() const { return eigenvectors_; }
    double m_bound() const { return m_bound_; }
    int size() const { return grid_.n; }

    // Coefficients of f in the eigenbasis: c_i = <v_i, f>.
    Vec to_coefficients(const Vec& f) const;
    Vec from_coefficients(const Vec& c) const;

    // L^nu f = V diag(lambda_i^nu) V* f. nu = 0 is the identity.
    Vec apply_power(double nu, const Vec& f) const;

    // ||f||_nu = ||L^nu f||, evaluated spectrally. nu = 0 is the weighted
    // L2 norm.
    double norm(double nu, const Vec& f) const;

    // Checks ||f||_t <= ||f||_{-a}^{(s-t)/(s+a)} ||f||_s^{(t+a)/(s+a)} for
    // -a < t <= s. Throws InvalidIndicesError on bad index ordering.
    InterpolationReport check_interpolation(double a, double t, double s, const Vec& f) const;

  private:
    SpectralScale() = default;

    Grid grid_;
    Vec eigenvalues_;  // ascending, all >= m_bound_ > 0
    Mat eigenvectors_; // columns weighted-orthonormal
    double m_bound_ = 0.0;
};

} // namespace scalereg
