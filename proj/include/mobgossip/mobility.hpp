#pragma once

#include <utility>
#include <vector>

#include "mobgossip/config.hpp"
#include "mobgossip/node.hpp"
#include "mobgossip/rng.hpp"

namespace mobgossip {

// One-slot move law on the s x s cell grid: stay or step to one of the eight
// neighbours, each with probability 1/9. Infeasible directions fold into
// "stay" under edge_stay and wrap under torus_wrap; the fixed kernel is the
// identity.
struct MoveKernel {
    int s = 1;
    MobilityMode boundary = MobilityMode::edge_stay;

    std::pair<int, int> step(int row, int col, RngStream& rng) const;

    // Exact row-stochastic m x m matrix, row-major, state index = row*s + col.
    std::vector<double> transition_matrix() const;

    // Probability of ending in `to` after one step from `from` (exact).
    double transition(std::pair<int, int> from, std::pair<int, int> to) const;
};

// Advances every node by one kernel draw and resamples its position uniformly
// inside the (possibly unchanged) cell. Draw order is fixed by node id. The
// fixed kernel leaves states untouched and consumes no draws.
void step_all(std::vector<NodeState>& states, const MoveKernel& kernel, RngStream& rng);

// Runs `trials` independent walks from cell (0,0) for t slots and returns the
// total-variation distance between the empirical cell distribution and the
// uniform distribution on the m cells.
double empirical_tv_to_uniform(const MoveKernel& kernel, long long t, long long trials,
                               RngStream& rng);

// Exact TV to uniform after t steps from a single start cell (sparse kernel
// application, exact up to float rounding).
double exact_tv_to_uniform(const MoveKernel& kernel, long long t,
                           std::pair<int, int> start = {0, 0});

// Exact worst-case (over start cells) TV to uniform after t steps.
double exact_max_tv_to_uniform(const MoveKernel& kernel, long long t);

}  // namespace mobgossip
