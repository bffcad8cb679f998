#include "scalereg/grid.hpp"
#include "scalereg/errors.hpp"

#include <cmath>

namespace scalereg {

Grid Grid::uniform_midpoint(int n, double T) {
    if (n <= 0 || T <= 0.0)
        throw InvalidParameterError("Grid: n and T must be positive");
    Grid g;
    g.n = n;
    g.T = T;
    const double h = T / n;
    g.nodes = Vec::LinSpaced(n, 0.5 * h, T - 0.5 * h);
    g.weights = Vec::Constant(n, h);
    return g;
}

double Grid::inner(const Vec& u, const Vec& v) const {
    return (weights.array() * u.array() * v.array()).sum();
}

void Grid::validate() const {
    if (n <= 0 || nodes.size() != n || weights.size() != n)
        throw InvalidParameterError("Grid: inconsistent sizes");
    if (T <= 0.0)
        throw InvalidParameterError("Grid: T must be positive");
    if ((weights.array() <= 0.0).any())
        throw InvalidParameterError("Grid: weights must be positive");
    if (std::abs(weights.sum() - T) > 1e-12 * T)
        throw InvalidParameterError("Grid: weights must sum to T");
    for (int i = 1; i < n; ++i)
        if (nodes[i] <= nodes[i - 1])
            throw InvalidParameterError("Grid: nodes must be strictly increasing");
    if (nodes[0] < 0.0 || nodes[n - 1] > T)
        throw InvalidParameterError("Grid: nodes must lie in [0, T]");
}

Mat integration_matrix(const Grid& grid) {
    const int n = grid.n;
    Mat j = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k)
            j(i, k) = grid.weights[k];
        j(i, i) = 0.5 * grid.weights[i];
    }
    return j;
}

Mat weighted_adjoint(const Mat& a, const Grid& grid) {
    const Vec& w = grid.weights;
    return w.cwiseInverse().asDiagonal() * a.transpose() * w.asDiagonal();
}

} // namespace scalereg
