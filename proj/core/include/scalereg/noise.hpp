#pragma once

#include "scalereg/grid.hpp"
#include "scalereg/operators.hpp"

#include <cstdint>
#include <iosfwd>

namespace scalereg {

// Deterministic perturbation profiles: the default alternating-sign vector is
// a rough worst-case-ish direction; the smooth option is a fixed sine arch.
// Both are normalized to unit weighted norm.
enum class XiProfile { Alternating, Smooth };

// One realization of the mixed data model g_obs = g_dagger + sigma Z + delta xi,
// reproducible from (seed). Immutable.
struct Observation {
    Vec g_dagger;        // exact data F(f_dagger)
    Vec xi;              // deterministic perturbation, ||xi||_Y <= 1
    Vec z;               // white-noise realization, entries N(0,1)/sqrt(w_i)
    double delta = 0.0;  // deterministic noise level
    double sigma = 0.0;  // stochastic noise level
    std::uint64_t seed = 0;
    Grid grid;

    // g_dagger + sigma z + delta xi as a grid vector. For sigma > 0 this is
    // the discrete surrogate of data that only exist in the weak sense.
    Vec data_vector() const;

    // Strong deterministic data g^delta = g_dagger + delta xi.
    Vec g_delta() const;

    // <g_obs, g> = <g_dagger, g> + delta <xi, g> + sigma <Z, g>.
    double weak_pair(const Vec& g) const;
};

// White noise on the grid: z_i = N(0,1)/sqrt(w_i), so <z, g> has variance
// ||g||_Y^2 for every g. The realization leaves any fixed ball as the mesh
// refines (E ||z||_Y^2 = n).
Vec sample_white_noise(const Grid& grid, std::uint64_t seed);

Vec make_xi(const Grid& grid, XiProfile profile);

Observation make_observation(const ForwardProblem& problem, const Vec& f_dagger, double delta,
                             double sigma, XiProfile xi_profile, std::uint64_t seed);

// Same, with a caller-supplied perturbation (rescaled onto the unit ball when
// its weighted norm exceeds 1).
Observation make_observation(const ForwardProblem& problem, const Vec& f_dagger, double delta,
                             double sigma, const Vec& xi, std::uint64_t seed);

// Flat CSV record for experiment resumption: one metadata row, then one row
// per node (node, weight, g_dagger, xi, z). Round-trips exactly.
void write_observation_csv(std::ostream& out, const Observation& obs);
Observation read_observation_csv(std::istream& in);

} // namespace scalereg
