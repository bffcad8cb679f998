#pragma once

#include "scalereg/grid.hpp"

namespace scalereg {

enum class OperatorKind { LinearIntegration, ExponentialGrowth, Autoconvolution };
enum class DomainKind { WholeSpace, Nonnegative };

// Forward operator F on the discretized grid with evaluation, Frechet
// derivative action, adjoint-derivative action (weighted inner products)
// and domain projection. Immutable and reentrant.
class ForwardProblem {
  public:
    static ForwardProblem linear_integration(const Grid& grid);
    static ForwardProblem exponential_growth(const Grid& grid, double c0, double c1);
    static ForwardProblem autoconvolution(const Grid& grid);

    OperatorKind kind() const { return kind_; }
    const Grid& grid() const { return grid_; }
    double c0() const { return c0_; }
    double c1() const { return c1_; }
    DomainKind domain() const { return domain_; }
    void set_domain(DomainKind d) { domain_ = d; }

    // Cumulative quadrature matrix of the integration operator on this grid.
    const Mat& integration() const { return j_; }

    // F(f). Throws MagnitudeError if the exponential-growth argument
    // exceeds 700.
    Vec apply(const Vec& f) const;

    // F'(f) h.
    Vec derivative_apply(const Vec& f, const Vec& h) const;

    // F'(f)* r w.r.t. the weighted inner products on domain and range.
    Vec derivative_adjoint_apply(const Vec& f, const Vec& r) const;

    // Dense matrix of F'(f); rows/columns in grid coordinates.
    Mat derivative_matrix(const Vec& f) const;

    // Nearest point of the configured domain in the weighted L2 metric
    // (identity for the whole space, pointwise clip for the box).
    Vec project_domain(const Vec& f) const;

  private:
    ForwardProblem(OperatorKind kind, const Grid& grid, double c0, double c1);

    void check_size(const Vec& f) const;

    // Volterra convolution bilinear form: (f, g) -> quadrature of
    // f(s - t) g(t) over [0, s] at each node. F(f) = conv(f, f) and the
    // derivative action is conv(f, h) + conv(h, f), so the second-order
    // Taylor identity F(f+h) - F(f) - F'(f)h = F(h) holds exactly.
    Vec convolve(const Vec& f, const Vec& g) const;

    OperatorKind kind_;
    Grid grid_;
    double c0_ = 0.0;
    double c1_ = 0.0;
    DomainKind domain_ = DomainKind::WholeSpace;
    Mat j_;     // integration matrix
    Mat j_adj_; // its weighted adjoint
};

} // namespace scalereg
