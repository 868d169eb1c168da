#include "mobgossip/phy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mobgossip/mobility.hpp"

namespace mobgossip {

std::vector<Role> designate(int n, double theta, RngStream& rng) {
    std::vector<Role> roles(n);
    for (int i = 0; i < n; ++i) {
        roles[i] = rng.next_bernoulli(theta) ? Role::sender : Role::receiver;
    }
    return roles;
}

namespace {

inline double dist2(double ax, double ay, double bx, double by) {
    const double dx = bx - ax;
    const double dy = by - ay;
    return dx * dx + dy * dy;
}

// Receivers bucketed on a uniform grid over the unit square, stored as one
// flat counting-sorted array (begin/end offsets per cell).
struct ReceiverGrid {
    int cells = 1;
    double side = 1.0;
    std::vector<int> offsets;  // cells*cells + 1
    std::vector<int> ids;      // receiver ids grouped by cell, ascending in-cell

    ReceiverGrid(const std::vector<Role>& roles, const std::vector<double>& xs,
                 const std::vector<double>& ys, double cell_side) {
        cells = std::max(1, static_cast<int>(std::floor(1.0 / cell_side)));
        side = 1.0 / static_cast<double>(cells);
        const std::size_t total = static_cast<std::size_t>(cells) * cells;
        offsets.assign(total + 1, 0);
        const int n = static_cast<int>(roles.size());
        for (int i = 0; i < n; ++i) {
            if (roles[i] == Role::receiver) {
                ++offsets[index_of(xs[i], ys[i]) + 1];
            }
        }
        for (std::size_t c = 1; c <= total; ++c) {
            offsets[c] += offsets[c - 1];
        }
        ids.resize(offsets[total]);
        std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
        for (int i = 0; i < n; ++i) {
            if (roles[i] == Role::receiver) {
                ids[cursor[index_of(xs[i], ys[i])]++] = i;
            }
        }
    }

    int clamp_cell(double coord) const {
        int c = static_cast<int>(coord / side);
        return std::min(std::max(c, 0), cells - 1);
    }

    std::size_t index_of(double x, double y) const {
        return static_cast<std::size_t>(clamp_cell(y)) * cells + clamp_cell(x);
    }
};

}  // namespace

std::vector<Pairing> pair_nearest(const std::vector<Role>& roles,
                                  const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  double cell_side) {
    const int n = static_cast<int>(roles.size());
    std::vector<Pairing> pairings;
    bool any_receiver = false;
    for (int i = 0; i < n; ++i) {
        if (roles[i] == Role::receiver) {
            any_receiver = true;
            break;
        }
    }
    if (!any_receiver) {
        return pairings;
    }

    ReceiverGrid grid(roles, xs, ys, cell_side);
    for (int i = 0; i < n; ++i) {
        if (roles[i] != Role::sender) {
            continue;
        }
        const int cr = grid.clamp_cell(ys[i]);
        const int cc = grid.clamp_cell(xs[i]);
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring < 2 * grid.cells; ++ring) {
            // Cells on ring `ring` are at least (ring-1)*side away from any
            // point inside the centre cell; past that, the best cannot improve.
            if (best >= 0) {
                const double reach = static_cast<double>(ring - 1) * grid.side;
                if (reach > 0.0 && reach * reach > best_d2) {
                    break;
                }
            }
            bool ring_in_grid = false;
            for (int r = cr - ring; r <= cr + ring; ++r) {
                if (r < 0 || r >= grid.cells) {
                    continue;
                }
                const bool edge_row = (r == cr - ring || r == cr + ring);
                for (int c = cc - ring; c <= cc + ring; ++c) {
                    if (c < 0 || c >= grid.cells) {
                        continue;
                    }
                    if (!edge_row && c != cc - ring && c != cc + ring) {
                        continue;  // interior of the ring, visited earlier
                    }
                    ring_in_grid = true;
                    const std::size_t cell = static_cast<std::size_t>(r) * grid.cells + c;
                    for (int idx = grid.offsets[cell]; idx < grid.offsets[cell + 1]; ++idx) {
                        const int j = grid.ids[idx];
                        const double d2 = dist2(xs[i], ys[i], xs[j], ys[j]);
                        if (d2 < best_d2 || (d2 == best_d2 && j < best)) {
                            best_d2 = d2;
                            best = j;
                        }
                    }
                }
            }
            if (!ring_in_grid && best >= 0) {
                break;
            }
        }
        pairings.push_back({i, best, std::sqrt(best_d2)});
    }
    return pairings;
}

std::vector<Pairing> pair_nearest_brute(const std::vector<Role>& roles,
                                        const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
    const int n = static_cast<int>(roles.size());
    std::vector<Pairing> pairings;
    for (int i = 0; i < n; ++i) {
        if (roles[i] != Role::sender) {
            continue;
        }
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (roles[j] != Role::receiver) {
                continue;
            }
            const double d2 = dist2(xs[i], ys[i], xs[j], ys[j]);
            if (d2 < best_d2 || (d2 == best_d2 && j < best)) {
                best_d2 = d2;
                best = j;
            }
        }
        if (best >= 0) {
            pairings.push_back({i, best, std::sqrt(best_d2)});
        }
    }
    return pairings;
}

namespace {

inline double path_gain(double dist, double alpha) {
    return std::pow(std::max(dist, kMinPairDistance), -alpha);
}

// Successful pairing indices grouped by receiver id, ascending.
std::vector<int> successful_by_receiver(const std::vector<Pairing>& pairings,
                                        const std::vector<std::uint8_t>& success) {
    std::vector<int> order;
    for (int p = 0; p < static_cast<int>(pairings.size()); ++p) {
        if (success[p]) {
            order.push_back(p);
        }
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return pairings[a].receiver != pairings[b].receiver
                   ? pairings[a].receiver < pairings[b].receiver
                   : a < b;
    });
    return order;
}

// Shared-receiver rule: among successful pairings targeting one receiver,
// keep the one with the highest score (ties toward lower sender id).
void keep_one_per_receiver(const std::vector<Pairing>& pairings,
                           const std::vector<double>& score,
                           std::vector<std::uint8_t>& success) {
    const std::vector<int> order = successful_by_receiver(pairings, success);
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i + 1;
        int winner = order[i];
        while (j < order.size() &&
               pairings[order[j]].receiver == pairings[winner].receiver) {
            const int p = order[j];
            if (score[p] > score[winner] ||
                (score[p] == score[winner] &&
                 pairings[p].sender < pairings[winner].sender)) {
                success[winner] = 0;
                winner = p;
            } else {
                success[p] = 0;
            }
            ++j;
        }
        i = j;
    }
}

}  // namespace

std::vector<double> sinr_values(const std::vector<Pairing>& pairings,
                                const std::vector<double>& xs,
                                const std::vector<double>& ys,
                                const PhyParams& params) {
    std::vector<double> out(pairings.size(), 0.0);
    for (std::size_t p = 0; p < pairings.size(); ++p) {
        const int j = pairings[p].receiver;
        const double signal = params.tx_power * path_gain(pairings[p].dist, params.alpha);
        double interference = 0.0;
        for (std::size_t q = 0; q < pairings.size(); ++q) {
            if (q == p) {
                continue;
            }
            const int k = pairings[q].sender;
            const double d = std::sqrt(dist2(xs[k], ys[k], xs[j], ys[j]));
            interference += params.tx_power * path_gain(d, params.alpha);
        }
        out[p] = signal / (params.noise + interference);
    }
    return out;
}

std::vector<std::uint8_t> resolve_sinr(const std::vector<Pairing>& pairings,
                                       const std::vector<double>& xs,
                                       const std::vector<double>& ys,
                                       const PhyParams& params) {
    const std::vector<double> sinr = sinr_values(pairings, xs, ys, params);
    std::vector<std::uint8_t> success(pairings.size(), 0);
    for (std::size_t p = 0; p < pairings.size(); ++p) {
        success[p] = sinr[p] >= params.beta ? 1 : 0;
    }
    keep_one_per_receiver(pairings, sinr, success);
    return success;
}

std::vector<std::uint8_t> resolve_bernoulli(const std::vector<Pairing>& pairings,
                                            const PhyParams& params, RngStream& rng) {
    std::vector<std::uint8_t> success(pairings.size(), 0);
    for (std::size_t p = 0; p < pairings.size(); ++p) {
        success[p] = rng.next_bernoulli(params.c_success) ? 1 : 0;
    }
    // Uniform survivor per contended receiver; receivers processed in
    // ascending id order so the draw sequence is reproducible.
    const std::vector<int> order = successful_by_receiver(pairings, success);
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i + 1;
        while (j < order.size() &&
               pairings[order[j]].receiver == pairings[order[i]].receiver) {
            ++j;
        }
        const std::size_t group = j - i;
        if (group > 1) {
            const std::size_t keep = rng.next_below(group);
            for (std::size_t idx = 0; idx < group; ++idx) {
                if (idx != keep) {
                    success[order[i + idx]] = 0;
                }
            }
        }
        i = j;
    }
    return success;
}

SuccessEstimate estimate_success_constant(const SimConfig& cfg, long long slots,
                                          RngStream& rng) {
    if (cfg.phy_mode != PhyMode::sinr) {
        throw std::invalid_argument("estimate_success_constant requires phy_mode = sinr");
    }
    const SimConfig c = cfg.validated ? cfg : validate(cfg);
    const PhyParams params = PhyParams::from_config(c);
    const MoveKernel kernel{c.s, c.mobility == MobilityMode::fixed ? MobilityMode::edge_stay
                                                                   : c.mobility};

    std::vector<NodeState> nodes(c.n);
    const double side = c.v;
    for (int i = 0; i < c.n; ++i) {
        nodes[i].id = i;
        nodes[i].cell_row = static_cast<int>(rng.next_below(c.s));
        nodes[i].cell_col = static_cast<int>(rng.next_below(c.s));
        nodes[i].x = (nodes[i].cell_col + rng.next_unit()) * side;
        nodes[i].y = (nodes[i].cell_row + rng.next_unit()) * side;
    }

    std::vector<double> xs(c.n), ys(c.n);
    SuccessEstimate est;
    for (long long slot = 0; slot < slots; ++slot) {
        step_all(nodes, kernel, rng);
        for (int i = 0; i < c.n; ++i) {
            xs[i] = nodes[i].x;
            ys[i] = nodes[i].y;
        }
        const auto roles = designate(c.n, c.theta, rng);
        const double index_side = std::min(c.v, 2.0 / std::sqrt(static_cast<double>(c.n)));
        const auto pairings = pair_nearest(roles, xs, ys, index_side);
        const auto success = resolve_sinr(pairings, xs, ys, params);
        est.pairings += static_cast<long long>(pairings.size());
        for (std::uint8_t ok : success) {
            est.successes += ok;
        }
    }
    est.success_rate = est.pairings == 0
                           ? 0.0
                           : static_cast<double>(est.successes) / static_cast<double>(est.pairings);
    return est;
}

}  // namespace mobgossip
