#include "scalereg/operators.hpp"
#include "scalereg/errors.hpp"

#include <cmath>

namespace scalereg {

namespace {

// Value of f at the cell boundary s_i - t_k = (i-k) * h, halfway between the
// midpoint nodes i-k-1 and i-k. Constant extrapolation at the left edge keeps
// the reflected cumulative sum identical to the direct one, so the derivative
// of the discrete autoconvolution at f == 1 is exactly twice the integration
// matrix.
inline double reflected(const Vec& f, int i, int k) {
    const int m = i - k;
    return m == 0 ? f[0] : 0.5 * (f[m - 1] + f[m]);
}

} // namespace

ForwardProblem::ForwardProblem(OperatorKind kind, const Grid& grid, double c0, double c1)
    : kind_(kind), grid_(grid), c0_(c0), c1_(c1) {
    grid_.validate();
    j_ = integration_matrix(grid_);
    j_adj_ = weighted_adjoint(j_, grid_);
}

ForwardProblem ForwardProblem::linear_integration(const Grid& grid) {
    return ForwardProblem(OperatorKind::LinearIntegration, grid, 0.0, 0.0);
}

ForwardProblem ForwardProblem::exponential_growth(const Grid& grid, double c0, double c1) {
    if (c0 <= 0.0 || c1 <= 0.0)
        throw InvalidParameterError("exponential_growth: c0 and c1 must be positive");
    return ForwardProblem(OperatorKind::ExponentialGrowth, grid, c0, c1);
}

ForwardProblem ForwardProblem::autoconvolution(const Grid& grid) {
    return ForwardProblem(OperatorKind::Autoconvolution, grid, 0.0, 0.0);
}

void ForwardProblem::check_size(const Vec& f) const {
    if (f.size() != grid_.n)
        throw InvalidParameterError("ForwardProblem: vector length does not match grid");
}

Vec ForwardProblem::convolve(const Vec& f, const Vec& g) const {
    const int n = grid_.n;
    Vec out(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = 0; k < i; ++k)
            acc += grid_.weights[k] * reflected(f, i, k) * g[k];
        acc += 0.5 * grid_.weights[i] * f[0] * g[i];
        out[i] = acc;
    }
    return out;
}

Vec ForwardProblem::apply(const Vec& f) const {
    check_size(f);
    switch (kind_) {
    case OperatorKind::LinearIntegration:
        return j_ * f;
    case OperatorKind::ExponentialGrowth: {
        Vec arg = c1_ * (j_ * f);
        if ((arg.array() > 700.0).any())
            throw MagnitudeError("exponential_growth: exponent argument exceeds 700");
        return c0_ * arg.array().exp();
    }
    case OperatorKind::Autoconvolution:
        return convolve(f, f);
    }
    throw std::logic_error("unreachable");
}

Vec ForwardProblem::derivative_apply(const Vec& f, const Vec& h) const {
    check_size(f);
    check_size(h);
    switch (kind_) {
    case OperatorKind::LinearIntegration:
        return j_ * h;
    case OperatorKind::ExponentialGrowth:
        return c1_ * apply(f).cwiseProduct(j_ * h);
    case OperatorKind::Autoconvolution:
        return convolve(f, h) + convolve(h, f);
    }
    throw std::logic_error("unreachable");
}

Vec ForwardProblem::derivative_adjoint_apply(const Vec& f, const Vec& r) const {
    check_size(f);
    check_size(r);
    switch (kind_) {
    case OperatorKind::LinearIntegration:
        return j_adj_ * r;
    case OperatorKind::ExponentialGrowth:
        return c1_ * (j_adj_ * apply(f).cwiseProduct(r));
    case OperatorKind::Autoconvolution: {
        Mat m = derivative_matrix(f);
        return weighted_adjoint(m, grid_) * r;
    }
    }
    throw std::logic_error("unreachable");
}

Mat ForwardProblem::derivative_matrix(const Vec& f) const {
    check_size(f);
    const int n = grid_.n;
    switch (kind_) {
    case OperatorKind::LinearIntegration:
        return j_;
    case OperatorKind::ExponentialGrowth:
        return c1_ * apply(f).asDiagonal() * j_;
    case OperatorKind::Autoconvolution: {
        Mat m = Mat::Zero(n, n);
        // d/dh conv(f, h): column k weighted by the reflected kernel of f
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < i; ++k)
                m(i, k) += grid_.weights[k] * reflected(f, i, k);
            m(i, i) += 0.5 * grid_.weights[i] * f[0];
        }
        // d/dh conv(h, f): h enters through the reflected samples
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < i; ++k) {
                const double c = 0.5 * grid_.weights[k] * f[k];
                m(i, i - k - 1) += c;
                m(i, i - k) += c;
            }
            m(i, 0) += 0.5 * grid_.weights[i] * f[i];
        }
        return m;
    }
    }
    throw std::logic_error("unreachable");
}

Vec ForwardProblem::project_domain(const Vec& f) const {
    check_size(f);
    switch (domain_) {
    case DomainKind::WholeSpace:
        return f;
    case DomainKind::Nonnegative:
        return f.cwiseMax(0.0);
    }
    throw std::logic_error("unreachable");
}

} // namespace scalereg
