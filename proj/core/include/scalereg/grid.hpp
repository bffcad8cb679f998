#pragma once

#include <Eigen/Core>

namespace scalereg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Discretization of the interval [0, T]: quadrature nodes and positive
// weights. All L2 inner products downstream are taken against the weights,
//   <u, v> = sum_i w_i u_i v_i.
struct Grid {
    int n = 0;
    double T = 0.0;
    Vec nodes;   // strictly increasing, inside [0, T]
    Vec weights; // positive, sum to T

    // Composite midpoint rule: nodes (i + 1/2) T/n, weights T/n.
    static Grid uniform_midpoint(int n, double T);

    double inner(const Vec& u, const Vec& v) const;
    double norm(const Vec& u) const { return std::sqrt(inner(u, u)); }

    // Throws InvalidParameterError if node/weight invariants are broken.
    void validate() const;
};

// Cumulative quadrature matrix for the Volterra integration operator
//   (J f)(t_i) = \int_0^{t_i} f.
// Lower triangular: full weight for cells left of t_i, half weight at t_i,
// which integrates constants exactly on the midpoint grid.
Mat integration_matrix(const Grid& grid);

// Adjoint of a matrix w.r.t. the weighted inner product: W^{-1} A^T W.
Mat weighted_adjoint(const Mat& a, const Grid& grid);

} // namespace scalereg
