#include "scalereg/noise.hpp"
#include "scalereg/errors.hpp"
#include "scalereg/rng.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace scalereg {

Vec Observation::data_vector() const {
    return g_dagger + sigma * z + delta * xi;
}

Vec Observation::g_delta() const {
    return g_dagger + delta * xi;
}

double Observation::weak_pair(const Vec& g) const {
    if (g.size() != grid.n)
        throw InvalidParameterError("weak_pair: vector length does not match grid");
    return grid.inner(g_dagger, g) + delta * grid.inner(xi, g) + sigma * grid.inner(z, g);
}

Vec sample_white_noise(const Grid& grid, std::uint64_t seed) {
    if ((grid.weights.array() <= 0.0).any())
        throw InvalidParameterError("sample_white_noise: weights must be positive");
    Rng rng(seed);
    Vec z(grid.n);
    for (int i = 0; i < grid.n; ++i)
        z[i] = rng.normal() / std::sqrt(grid.weights[i]);
    return z;
}

Vec make_xi(const Grid& grid, XiProfile profile) {
    Vec v(grid.n);
    switch (profile) {
    case XiProfile::Alternating:
        for (int i = 0; i < grid.n; ++i)
            v[i] = (i % 2 == 0) ? 1.0 : -1.0;
        break;
    case XiProfile::Smooth:
        for (int i = 0; i < grid.n; ++i)
            v[i] = std::sin(M_PI * grid.nodes[i] / grid.T);
        break;
    }
    return v / grid.norm(v);
}

Observation make_observation(const ForwardProblem& problem, const Vec& f_dagger, double delta,
                             double sigma, XiProfile xi_profile, std::uint64_t seed) {
    return make_observation(problem, f_dagger, delta, sigma, make_xi(problem.grid(), xi_profile),
                            seed);
}

Observation make_observation(const ForwardProblem& problem, const Vec& f_dagger, double delta,
                             double sigma, const Vec& xi, std::uint64_t seed) {
    if (delta < 0.0 || sigma < 0.0)
        throw InvalidParameterError("make_observation: delta and sigma must be nonnegative");
    if (xi.size() != problem.grid().n)
        throw InvalidParameterError("make_observation: xi length does not match grid");
    Observation obs;
    obs.grid = problem.grid();
    obs.g_dagger = problem.apply(f_dagger);
    obs.xi = xi;
    const double xi_norm = obs.grid.norm(obs.xi);
    if (xi_norm > 1.0)
        obs.xi /= xi_norm;
    obs.z = sample_white_noise(obs.grid, seed);
    obs.delta = delta;
    obs.sigma = sigma;
    obs.seed = seed;
    return obs;
}

void write_observation_csv(std::ostream& out, const Observation& obs) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%" PRIu64 ",%.17g,%.17g\n", obs.grid.n, obs.grid.T,
                  static_cast<std::uint64_t>(obs.seed), obs.delta, obs.sigma);
    out << "n,T,seed,delta,sigma\n" << buf;
    out << "node,weight,g_dagger,xi,z\n";
    for (int i = 0; i < obs.grid.n; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", obs.grid.nodes[i],
                      obs.grid.weights[i], obs.g_dagger[i], obs.xi[i], obs.z[i]);
        out << buf;
    }
}

Observation read_observation_csv(std::istream& in) {
    auto next_fields = [&in](int expected) {
        std::string line;
        if (!std::getline(in, line))
            throw InvalidParameterError("observation csv: unexpected end of stream");
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ','))
            fields.push_back(item);
        if (static_cast<int>(fields.size()) != expected)
            throw InvalidParameterError("observation csv: malformed row");
        return fields;
    };

    next_fields(5); // header
    auto meta = next_fields(5);
    Observation obs;
    obs.grid.n = std::stoi(meta[0]);
    obs.grid.T = std::stod(meta[1]);
    obs.seed = std::stoull(meta[2]);
    obs.delta = std::stod(meta[3]);
    obs.sigma = std::stod(meta[4]);
    if (obs.grid.n <= 0)
        throw InvalidParameterError("observation csv: bad grid size");

    next_fields(5); // column header
    obs.grid.nodes.resize(obs.grid.n);
    obs.grid.weights.resize(obs.grid.n);
    obs.g_dagger.resize(obs.grid.n);
    obs.xi.resize(obs.grid.n);
    obs.z.resize(obs.grid.n);
    for (int i = 0; i < obs.grid.n; ++i) {
        auto row = next_fields(5);
        obs.grid.nodes[i] = std::stod(row[0]);
        obs.grid.weights[i] = std::stod(row[1]);
        obs.g_dagger[i] = std::stod(row[2]);
        obs.xi[i] = std::stod(row[3]);
        obs.z[i] = std::stod(row[4]);
    }
    obs.grid.validate();
    return obs;
}

} // namespace scalereg
