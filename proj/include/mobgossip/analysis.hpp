#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mobgossip/config.hpp"
#include "mobgossip/mobility.hpp"
#include "mobgossip/rng.hpp"

namespace mobgossip {
namespace analysis {

// Finite-state walk description used by the exact and Monte Carlo oracles.
// grid_walk: the mobility walk on the s x s cell grid. relative_plane: the
// difference of two independent walkers, simulated on the unbounded lattice
// with the boundary ring at coordinates +-s/2 tested geometrically (a step
// can jump the ring, so reaching or crossing it counts as a hit).
struct ChainSpec {
    enum class Space { grid_walk, relative_plane };
    Space space = Space::grid_walk;
    int side = 1;
    MobilityMode boundary = MobilityMode::torus_wrap;

    bool on_boundary(long long x, long long y) const {
        const long long half = side / 2;
        return std::abs(x) >= half || std::abs(y) >= half;
    }
};

// Exact one-step distribution of the relative walk on offsets {-2..2}^2:
// per coordinate the convolution of two uniform{-1,0,1} draws, i.e.
// P(0)=1/3, P(+-1)=2/9, P(+-2)=1/9, independent across coordinates.
// Indexed as pmf[a+2][b+2].
std::array<std::array<double, 5>, 5> relative_step_pmf();

// One coordinate step of the relative walk, exact rational sampling.
int relative_step_coord(RngStream& rng);

// Fraction of `trials` relative walks started at (0,0) that reach the
// boundary ring of an s x s torus within `horizon` steps.
double hitting_time_mc(int s, long long horizon, long long trials, RngStream& rng);

// Monte Carlo estimate of the expected number of returns to (0,0) of the
// relative walk within `horizon` steps (walk on the unbounded lattice).
double return_count_mc(long long horizon, long long trials, RngStream& rng);

struct ConcentrationSpec {
    long long balls = 0;
    int bins = 1;
    std::vector<double> bin_probs;  // empty = uniform; entries must lie in
                                    // [2/(3m), 4/(3m)] or the checker refuses
    long long trials = 1;
    int n_for_envelope = 2;         // the n in the b > 32 m log n guarantee
};

struct ConcentrationResult {
    long long violations = 0;       // observations outside [b/6m, 7b/3m]
    long long min_count = 0;
    long long max_count = 0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    bool envelope_guaranteed = true;  // b > 32 m log n held
};

ConcentrationResult concentration_check(const ConcentrationSpec& spec, RngStream& rng);

// Random geometric graph with the paper-style degree-normalized transition
// matrix: P_ij = 1/d_i on edges.
struct RggGraph {
    int n = 0;
    double radius = 0.0;
    std::vector<double> xs, ys;
    std::vector<std::uint32_t> adj;  // bit j of adj[i] set iff i~j
    std::vector<int> degree;

    static RggGraph random(int n, double radius, RngStream& rng);
    static RggGraph cycle(int n);
    static RggGraph complete(int n);
    static RggGraph empty_graph(int n);

    bool connected() const;
    double transition(int i, int j) const;
};

// Exhaustive conductance: min over nonempty B with |B| <= n/2 of
// sum_{i in B, j outside} P_ij / |B|. Requires n <= 20. Disconnected graphs
// yield 0 (returned, not an error).
double conductance_exact(const RggGraph& g);

struct RggScalingRow {
    int n = 0;
    std::uint64_t seed = 0;
    double radius = 0.0;
    double phi = 0.0;
    double ratio = 0.0;  // phi / radius
    bool connected = false;
};

// Phi / r table over small RGG instances at r(n) = sqrt(32 log n / n).
std::vector<RggScalingRow> rgg_conductance_scaling(const std::vector<int>& sizes,
                                                   int seeds_per_size,
                                                   std::uint64_t root_seed);

double rgg_radius(int n);  // sqrt(32 log n / n), capped at sqrt(2)

// Smallest t with worst-start total variation to uniform <= eps, computed two
// independent ways: dense matrix powering with binary lifting, and direct
// step-by-step distribution iteration. Both are exact up to float rounding
// and must agree. Enforces s <= 64.
long long exact_mixing_powering(const MoveKernel& kernel, double eps);
long long exact_mixing_iteration(const MoveKernel& kernel, double eps);

}  // namespace analysis
}  // namespace mobgossip
