#include "scalereg/scale.hpp"
#include "scalereg/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace scalereg {

SpectralScale SpectralScale::from_operator(const Mat& j, const Grid& grid) {
    grid.validate();
    const int n = grid.n;
    if (j.rows() != n || j.cols() != n)
        throw InvalidParameterError("SpectralScale: operator size does not match grid");

    // Symmetrize J*J (adjoint in the weighted inner product) by conjugating
    // with W^{1/2}: M = W^{-1/2} J^T W J W^{-1/2}.
    const Vec sqrt_w = grid.weights.cwiseSqrt();
    const Vec inv_sqrt_w = sqrt_w.cwiseInverse();
    Mat m = inv_sqrt_w.asDiagonal() * j.transpose() * grid.weights.asDiagonal() * j *
            inv_sqrt_w.asDiagonal();
    m = 0.5 * (m + m.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Mat> eig(m);
    if (eig.info() != Eigen::Success)
        throw DegenerateGeneratorError("SpectralScale: eigendecomposition failed");

    Vec mu = eig.eigenvalues(); // ascending, = squared singular values of J
    const double mu_max = mu[n - 1];
    if (mu_max <= 0.0 || mu[0] <= 0.0 || std::sqrt(mu_max / mu[0]) > 1e14)
        throw DegenerateGeneratorError("SpectralScale: generator operator is singular or "
                                       "near-singular (condition estimate > 1e14)");
    // guard lambda^nu against overflow for strongly negative powers
    mu = mu.cwiseMax(1e-14 * mu_max);

    SpectralScale scale;
    scale.grid_ = grid;
    scale.eigenvalues_.resize(n);
    scale.eigenvectors_.resize(n, n);
    // lambda_i = mu_i^{-1/2}; reverse so eigenvalues come out ascending
    for (int i = 0; i < n; ++i) {
        scale.eigenvalues_[i] = 1.0 / std::sqrt(mu[n - 1 - i]);
        scale.eigenvectors_.col(i) = inv_sqrt_w.asDiagonal() * eig.eigenvectors().col(n - 1 - i);
    }
    scale.m_bound_ = scale.eigenvalues_[0];
    return scale;
}

Vec SpectralScale::to_coefficients(const Vec& f) const {
    if (f.size() != grid_.n)
        throw InvalidParameterError("SpectralScale: vector length does not match grid");
    return eigenvectors_.transpose() * (grid_.weights.asDiagonal() * f);
}

Vec SpectralScale::from_coefficients(const Vec& c) const {
    if (c.size() != grid_.n)
        throw InvalidParameterError("SpectralScale: coefficient length does not match grid");
    return eigenvectors_ * c;
}

Vec SpectralScale::apply_power(double nu, const Vec& f) const {
    if (nu == 0.0) {
        if (f.size() != grid_.n)
            throw InvalidParameterError("SpectralScale: vector length does not match grid");
        return f;
    }
    Vec c = to_coefficients(f);
    for (int i = 0; i < c.size(); ++i)
        c[i] *= std::pow(eigenvalues_[i], nu);
    return from_coefficients(c);
}

double SpectralScale::norm(double nu, const Vec& f) const {
    Vec c = to_coefficients(f);
    double acc = 0.0;
    for (int i = 0; i < c.size(); ++i) {
        const double scaled = (nu == 0.0) ? c[i] : std::pow(eigenvalues_[i], nu) * c[i];
        acc += scaled * scaled;
    }
    return std::sqrt(acc);
}

InterpolationReport SpectralScale::check_interpolation(double a, double t, double s,
                                                       const Vec& f) const {
    if (!(-a < t && t <= s))
        throw InvalidIndicesError("check_interpolation: requires -a < t <= s");
    const double denom = s + a;
    const double lhs = norm(t, f);
    const double rhs =
        std::pow(norm(-a, f), (s - t) / denom) * std::pow(norm(s, f), (t + a) / denom);
    InterpolationReport report;
    report.lhs = lhs;
    report.rhs = rhs;
    report.holds = lhs <= rhs * (1.0 + 1e-9);
    return report;
}

} // namespace scalereg
