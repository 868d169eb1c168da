#include "mobgossip/mobility.hpp"

#include <cmath>
#include <cstdlib>

namespace mobgossip {

namespace {

// Direction d in [0,9): (dr, dc) = (d/3 - 1, d%3 - 1); d = 4 is "stay".
inline std::pair<int, int> direction(int d) {
    return {d / 3 - 1, d % 3 - 1};
}

}  // namespace

std::pair<int, int> MoveKernel::step(int row, int col, RngStream& rng) const {
    if (boundary == MobilityMode::fixed) {
        return {row, col};
    }
    const auto [dr, dc] = direction(static_cast<int>(rng.next_below(9)));
    int r = row + dr;
    int c = col + dc;
    if (boundary == MobilityMode::torus_wrap) {
        r = (r + s) % s;
        c = (c + s) % s;
        return {r, c};
    }
    if (r < 0 || r >= s || c < 0 || c >= s) {
        return {row, col};  // infeasible move folds into stay
    }
    return {r, c};
}

double MoveKernel::transition(std::pair<int, int> from, std::pair<int, int> to) const {
    if (boundary == MobilityMode::fixed) {
        return from == to ? 1.0 : 0.0;
    }
    double p = 0.0;
    for (int d = 0; d < 9; ++d) {
        const auto [dr, dc] = direction(d);
        int r = from.first + dr;
        int c = from.second + dc;
        if (boundary == MobilityMode::torus_wrap) {
            r = (r + s) % s;
            c = (c + s) % s;
        } else if (r < 0 || r >= s || c < 0 || c >= s) {
            r = from.first;
            c = from.second;
        }
        if (r == to.first && c == to.second) {
            p += 1.0 / 9.0;
        }
    }
    return p;
}

std::vector<double> MoveKernel::transition_matrix() const {
    const int m = s * s;
    std::vector<double> mat(static_cast<std::size_t>(m) * m, 0.0);
    for (int row = 0; row < s; ++row) {
        for (int col = 0; col < s; ++col) {
            const int from = row * s + col;
            if (boundary == MobilityMode::fixed) {
                mat[static_cast<std::size_t>(from) * m + from] = 1.0;
                continue;
            }
            for (int d = 0; d < 9; ++d) {
                const auto [dr, dc] = direction(d);
                int r = row + dr;
                int c = col + dc;
                if (boundary == MobilityMode::torus_wrap) {
                    r = (r + s) % s;
                    c = (c + s) % s;
                } else if (r < 0 || r >= s || c < 0 || c >= s) {
                    r = row;
                    c = col;
                }
                mat[static_cast<std::size_t>(from) * m + (r * s + c)] += 1.0 / 9.0;
            }
        }
    }
    return mat;
}

void step_all(std::vector<NodeState>& states, const MoveKernel& kernel, RngStream& rng) {
    if (kernel.boundary == MobilityMode::fixed) {
        return;
    }
    const double side = 1.0 / static_cast<double>(kernel.s);
    for (auto& node : states) {
        const auto [r, c] = kernel.step(node.cell_row, node.cell_col, rng);
        node.cell_row = r;
        node.cell_col = c;
        node.x = (static_cast<double>(c) + rng.next_unit()) * side;
        node.y = (static_cast<double>(r) + rng.next_unit()) * side;
    }
}

double empirical_tv_to_uniform(const MoveKernel& kernel, long long t, long long trials,
                               RngStream& rng) {
    const int m = kernel.s * kernel.s;
    std::vector<long long> counts(m, 0);
    for (long long trial = 0; trial < trials; ++trial) {
        int row = 0;
        int col = 0;
        for (long long step = 0; step < t; ++step) {
            const auto [r, c] = kernel.step(row, col, rng);
            row = r;
            col = c;
        }
        ++counts[row * kernel.s + col];
    }
    const double uniform = 1.0 / static_cast<double>(m);
    double tv = 0.0;
    for (int i = 0; i < m; ++i) {
        tv += std::abs(static_cast<double>(counts[i]) / static_cast<double>(trials) - uniform);
    }
    return 0.5 * tv;
}

namespace {

// One sparse kernel application: dist -> dist * P.
void apply_kernel(const MoveKernel& kernel, const std::vector<double>& in,
                  std::vector<double>& out) {
    const int s = kernel.s;
    out.assign(in.size(), 0.0);
    for (int row = 0; row < s; ++row) {
        for (int col = 0; col < s; ++col) {
            const double mass = in[row * s + col];
            if (mass == 0.0) {
                continue;
            }
            for (int d = 0; d < 9; ++d) {
                int r = row + d / 3 - 1;
                int c = col + d % 3 - 1;
                if (kernel.boundary == MobilityMode::torus_wrap) {
                    r = (r + s) % s;
                    c = (c + s) % s;
                } else if (r < 0 || r >= s || c < 0 || c >= s) {
                    r = row;
                    c = col;
                }
                out[r * s + c] += mass / 9.0;
            }
        }
    }
}

double tv_to_uniform(const std::vector<double>& dist) {
    const double uniform = 1.0 / static_cast<double>(dist.size());
    double tv = 0.0;
    for (double p : dist) {
        tv += std::abs(p - uniform);
    }
    return 0.5 * tv;
}

}  // namespace

double exact_tv_to_uniform(const MoveKernel& kernel, long long t, std::pair<int, int> start) {
    const int m = kernel.s * kernel.s;
    if (kernel.boundary == MobilityMode::fixed) {
        return m == 1 ? 0.0 : 1.0 - 1.0 / static_cast<double>(m);
    }
    std::vector<double> dist(m, 0.0);
    dist[start.first * kernel.s + start.second] = 1.0;
    std::vector<double> next(m, 0.0);
    for (long long step = 0; step < t; ++step) {
        apply_kernel(kernel, dist, next);
        dist.swap(next);
    }
    return tv_to_uniform(dist);
}

double exact_max_tv_to_uniform(const MoveKernel& kernel, long long t) {
    double worst = 0.0;
    for (int row = 0; row < kernel.s; ++row) {
        for (int col = 0; col < kernel.s; ++col) {
            worst = std::max(worst, exact_tv_to_uniform(kernel, t, {row, col}));
        }
    }
    return worst;
}

}  // namespace mobgossip
