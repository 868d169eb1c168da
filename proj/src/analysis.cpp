#include "mobgossip/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mobgossip {
namespace analysis {

std::array<std::array<double, 5>, 5> relative_step_pmf() {
    const std::array<double, 5> coord = {1.0 / 9.0, 2.0 / 9.0, 3.0 / 9.0, 2.0 / 9.0, 1.0 / 9.0};
    std::array<std::array<double, 5>, 5> pmf{};
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
            pmf[a][b] = coord[a] * coord[b];
        }
    }
    return pmf;
}

int relative_step_coord(RngStream& rng) {
    // Weights 1,2,3,2,1 over 9 for offsets -2..2.
    const std::uint64_t u = rng.next_below(9);
    if (u < 1) return -2;
    if (u < 3) return -1;
    if (u < 6) return 0;
    if (u < 8) return 1;
    return 2;
}

double hitting_time_mc(int s, long long horizon, long long trials, RngStream& rng) {
    if (s < 2) {
        throw std::invalid_argument("hitting_time_mc needs grid side s >= 2");
    }
    const ChainSpec chain{ChainSpec::Space::relative_plane, s, MobilityMode::torus_wrap};
    long long hits = 0;
    for (long long trial = 0; trial < trials; ++trial) {
        long long x = 0;
        long long y = 0;
        for (long long t = 0; t < horizon; ++t) {
            x += relative_step_coord(rng);
            y += relative_step_coord(rng);
            if (chain.on_boundary(x, y)) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

double return_count_mc(long long horizon, long long trials, RngStream& rng) {
    long long returns = 0;
    for (long long trial = 0; trial < trials; ++trial) {
        long long x = 0;
        long long y = 0;
        for (long long t = 0; t < horizon; ++t) {
            x += relative_step_coord(rng);
            y += relative_step_coord(rng);
            if (x == 0 && y == 0) {
                ++returns;
            }
        }
    }
    return static_cast<double>(returns) / static_cast<double>(trials);
}

ConcentrationResult concentration_check(const ConcentrationSpec& spec, RngStream& rng) {
    const int m = spec.bins;
    if (m < 1) {
        throw std::invalid_argument("concentration_check: bins must be >= 1");
    }
    if (spec.balls < 1 || spec.trials < 1) {
        throw std::invalid_argument("concentration_check: balls and trials must be >= 1");
    }
    std::vector<double> probs = spec.bin_probs;
    if (probs.empty()) {
        probs.assign(m, 1.0 / m);
    }
    if (static_cast<int>(probs.size()) != m) {
        throw std::invalid_argument("concentration_check: bin_probs size must equal bins");
    }
    const double lo_p = 2.0 / (3.0 * m);
    const double hi_p = 4.0 / (3.0 * m);
    for (double p : probs) {
        if (p < lo_p - 1e-15 || p > hi_p + 1e-15) {
            throw std::invalid_argument(
                "concentration_check: bin probability outside the allowed distortion band "
                "[2/(3m), 4/(3m)]");
        }
    }

    ConcentrationResult res;
    res.lower_bound = static_cast<double>(spec.balls) / (6.0 * m);
    res.upper_bound = 7.0 * static_cast<double>(spec.balls) / (3.0 * m);
    res.envelope_guaranteed =
        static_cast<double>(spec.balls) > 32.0 * m * std::log(static_cast<double>(spec.n_for_envelope));

    std::vector<double> cdf(m);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    cdf[m - 1] = 1.0;
    const bool uniform = spec.bin_probs.empty();

    std::vector<long long> counts(m);
    res.min_count = spec.balls;
    res.max_count = 0;
    for (long long trial = 0; trial < spec.trials; ++trial) {
        std::fill(counts.begin(), counts.end(), 0);
        for (long long ball = 0; ball < spec.balls; ++ball) {
            int bin;
            if (uniform) {
                bin = static_cast<int>(rng.next_below(m));
            } else {
                const double u = rng.next_unit();
                bin = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            }
            ++counts[bin];
        }
        for (int i = 0; i < m; ++i) {
            res.min_count = std::min(res.min_count, counts[i]);
            res.max_count = std::max(res.max_count, counts[i]);
            if (static_cast<double>(counts[i]) < res.lower_bound ||
                static_cast<double>(counts[i]) > res.upper_bound) {
                ++res.violations;
            }
        }
    }
    return res;
}

RggGraph RggGraph::random(int n, double radius, RngStream& rng) {
    if (n > 20) {
        throw std::invalid_argument("RggGraph supports n <= 20 (exhaustive conductance)");
    }
    RggGraph g;
    g.n = n;
    g.radius = radius;
    g.xs.resize(n);
    g.ys.resize(n);
    for (int i = 0; i < n; ++i) {
        g.xs[i] = rng.next_unit();
        g.ys[i] = rng.next_unit();
    }
    g.adj.assign(n, 0);
    g.degree.assign(n, 0);
    const double r2 = radius * radius;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = g.xs[i] - g.xs[j];
            const double dy = g.ys[i] - g.ys[j];
            if (dx * dx + dy * dy <= r2) {
                g.adj[i] |= 1u << j;
                g.adj[j] |= 1u << i;
                ++g.degree[i];
                ++g.degree[j];
            }
        }
    }
    return g;
}

namespace {

RggGraph from_adjacency(int n, const std::vector<std::uint32_t>& adj) {
    RggGraph g;
    g.n = n;
    g.adj = adj;
    g.degree.assign(n, 0);
    g.xs.assign(n, 0.0);
    g.ys.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        g.degree[i] = std::popcount(adj[i]);
    }
    return g;
}

}  // namespace

RggGraph RggGraph::cycle(int n) {
    std::vector<std::uint32_t> adj(n, 0);
    for (int i = 0; i < n; ++i) {
        adj[i] |= 1u << ((i + 1) % n);
        adj[i] |= 1u << ((i + n - 1) % n);
    }
    return from_adjacency(n, adj);
}

RggGraph RggGraph::complete(int n) {
    std::vector<std::uint32_t> adj(n, 0);
    const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
    for (int i = 0; i < n; ++i) {
        adj[i] = all & ~(1u << i);
    }
    return from_adjacency(n, adj);
}

RggGraph RggGraph::empty_graph(int n) {
    return from_adjacency(n, std::vector<std::uint32_t>(n, 0));
}

bool RggGraph::connected() const {
    if (n == 0) {
        return true;
    }
    std::uint32_t seen = 1u;
    std::uint32_t frontier = 1u;
    while (frontier != 0) {
        std::uint32_t next = 0;
        for (int i = 0; i < n; ++i) {
            if (frontier & (1u << i)) {
                next |= adj[i];
            }
        }
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == ((n == 32) ? ~0u : ((1u << n) - 1));
}

double RggGraph::transition(int i, int j) const {
    if (i == j || !(adj[i] & (1u << j)) || degree[i] == 0) {
        return 0.0;
    }
    return 1.0 / static_cast<double>(degree[i]);
}

double conductance_exact(const RggGraph& g) {
    if (g.n > 20) {
        throw std::invalid_argument("conductance_exact requires n <= 20");
    }
    if (g.n < 2) {
        return 0.0;
    }
    const std::uint32_t full = (1u << g.n) - 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t subset = 1; subset < full; ++subset) {
        const int size = std::popcount(subset);
        if (2 * size > g.n) {
            continue;
        }
        double flow = 0.0;
        for (int i = 0; i < g.n; ++i) {
            if ((subset & (1u << i)) && g.degree[i] > 0) {
                flow += static_cast<double>(std::popcount(g.adj[i] & ~subset)) /
                        static_cast<double>(g.degree[i]);
            }
        }
        best = std::min(best, flow / static_cast<double>(size));
    }
    return best;
}

double rgg_radius(int n) {
    const double r = std::sqrt(32.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
    return std::min(r, std::sqrt(2.0));
}

std::vector<RggScalingRow> rgg_conductance_scaling(const std::vector<int>& sizes,
                                                   int seeds_per_size,
                                                   std::uint64_t root_seed) {
    std::vector<RggScalingRow> rows;
    for (int n : sizes) {
        const double r = rgg_radius(n);
        for (int srep = 0; srep < seeds_per_size; ++srep) {
            RngStream rng(root_seed,
                          "rgg." + std::to_string(n) + "." + std::to_string(srep));
            const RggGraph g = RggGraph::random(n, r, rng);
            RggScalingRow row;
            row.n = n;
            row.seed = static_cast<std::uint64_t>(srep);
            row.radius = r;
            row.phi = conductance_exact(g);
            row.ratio = row.phi / r;
            row.connected = g.connected();
            rows.push_back(row);
        }
    }
    return rows;
}

namespace {

double max_start_tv(const std::vector<double>& mat, int m) {
    const double uniform = 1.0 / static_cast<double>(m);
    double worst = 0.0;
    for (int row = 0; row < m; ++row) {
        double tv = 0.0;
        for (int col = 0; col < m; ++col) {
            tv += std::abs(mat[static_cast<std::size_t>(row) * m + col] - uniform);
        }
        worst = std::max(worst, 0.5 * tv);
    }
    return worst;
}

std::vector<double> mat_mul(const std::vector<double>& a, const std::vector<double>& b, int m) {
    std::vector<double> c(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int l = 0; l < m; ++l) {
            const double v = a[static_cast<std::size_t>(i) * m + l];
            if (v == 0.0) {
                continue;
            }
            const double* brow = &b[static_cast<std::size_t>(l) * m];
            double* crow = &c[static_cast<std::size_t>(i) * m];
            for (int j = 0; j < m; ++j) {
                crow[j] += v * brow[j];
            }
        }
    }
    return c;
}

void check_side(const MoveKernel& kernel) {
    if (kernel.s < 1 || kernel.s > 64) {
        throw std::invalid_argument("exact mixing supports grid sides 1..64");
    }
}

}  // namespace

long long exact_mixing_powering(const MoveKernel& kernel, double eps) {
    check_side(kernel);
    const int m = kernel.s * kernel.s;
    if (1.0 - 1.0 / static_cast<double>(m) <= eps) {
        return 0;
    }
    const std::vector<double> base = kernel.transition_matrix();

    // Exponential search over binary powers, then lift bit by bit.
    std::vector<std::vector<double>> powers;  // powers[i] = P^(2^i)
    powers.push_back(base);
    while (max_start_tv(powers.back(), m) > eps) {
        if (powers.size() > 60) {
            throw std::runtime_error("exact_mixing_powering: chain does not mix to eps");
        }
        powers.push_back(mat_mul(powers.back(), powers.back(), m));
    }
    if (powers.size() == 1) {
        return 1;
    }
    const int top = static_cast<int>(powers.size()) - 1;
    long long t = 1ll << (top - 1);  // largest known failing step count
    std::vector<double> current = powers[top - 1];
    for (int bit = top - 2; bit >= 0; --bit) {
        std::vector<double> candidate = mat_mul(current, powers[bit], m);
        if (max_start_tv(candidate, m) > eps) {
            current = std::move(candidate);
            t += 1ll << bit;
        }
    }
    return t + 1;
}

long long exact_mixing_iteration(const MoveKernel& kernel, double eps) {
    check_side(kernel);
    const int m = kernel.s * kernel.s;
    if (1.0 - 1.0 / static_cast<double>(m) <= eps) {
        return 0;
    }
    const double uniform = 1.0 / static_cast<double>(m);
    // One distribution per start cell, stepped in lockstep.
    std::vector<std::vector<double>> dists(m, std::vector<double>(m, 0.0));
    for (int start = 0; start < m; ++start) {
        dists[start][start] = 1.0;
    }
    std::vector<double> scratch;
    const long long step_cap = 5'000'000;
    for (long long t = 1; t <= step_cap; ++t) {
        double worst = 0.0;
        for (int start = 0; start < m; ++start) {
            scratch.assign(m, 0.0);
            const auto& in = dists[start];
            for (int row = 0; row < kernel.s; ++row) {
                for (int col = 0; col < kernel.s; ++col) {
                    const double mass = in[row * kernel.s + col];
                    if (mass == 0.0) {
                        continue;
                    }
                    for (int d = 0; d < 9; ++d) {
                        int r = row + d / 3 - 1;
                        int c = col + d % 3 - 1;
                        if (kernel.boundary == MobilityMode::torus_wrap) {
                            r = (r + kernel.s) % kernel.s;
                            c = (c + kernel.s) % kernel.s;
                        } else if (r < 0 || r >= kernel.s || c < 0 || c >= kernel.s) {
                            r = row;
                            c = col;
                        }
                        scratch[r * kernel.s + c] += mass / 9.0;
                    }
                }
            }
            dists[start] = scratch;
            double tv = 0.0;
            for (double p : dists[start]) {
                tv += std::abs(p - uniform);
            }
            worst = std::max(worst, 0.5 * tv);
        }
        if (worst <= eps) {
            return t;
        }
    }
    throw std::runtime_error("exact_mixing_iteration: step cap exceeded");
}

}  // namespace analysis
}  // namespace mobgossip
