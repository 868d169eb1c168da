#pragma once

#include <cstdint>
#include <vector>

#include "mobgossip/config.hpp"
#include "mobgossip/rng.hpp"

namespace mobgossip {

enum class Role : std::uint8_t { sender, receiver };

// Sender i paired with its nearest potential receiver; ties on distance break
// toward the lower receiver id.
struct Pairing {
    int sender = -1;
    int receiver = -1;
    double dist = 0.0;
};

struct PhyParams {
    double tx_power = 1.0;
    double noise = 1.0;
    double alpha = 4.0;
    double beta = 2.0;
    double c_success = 0.5;

    static PhyParams from_config(const SimConfig& cfg) {
        return {cfg.tx_power, cfg.noise, cfg.alpha, cfg.beta, cfg.c_success};
    }
};

// Distances below this floor are clamped before r^-alpha so coincident
// points stay finite.
inline constexpr double kMinPairDistance = 1e-6;

// Each node becomes a sender independently with probability theta.
std::vector<Role> designate(int n, double theta, RngStream& rng);

// Pairs every sender with its nearest receiver via a uniform grid index with
// expanding-ring search (cells of side cell_side). Empty when no receiver
// exists. Results are ordered by sender id.
std::vector<Pairing> pair_nearest(const std::vector<Role>& roles,
                                  const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  double cell_side);

// Exhaustive reference pairing, same tie rule; used as an oracle.
std::vector<Pairing> pair_nearest_brute(const std::vector<Role>& roles,
                                        const std::vector<double>& xs,
                                        const std::vector<double>& ys);

// Per-pairing success under the SINR reception rule. The transmitter set is
// exactly the senders of `pairings`; every other transmitter interferes.
// When several successful senders target one receiver only the highest-SINR
// one delivers (ties toward the lower sender id) -- a node can receive at
// most one message per slot.
std::vector<std::uint8_t> resolve_sinr(const std::vector<Pairing>& pairings,
                                       const std::vector<double>& xs,
                                       const std::vector<double>& ys,
                                       const PhyParams& params);

// SINR values per pairing (before the shared-receiver rule); exposed for the
// oracle tests.
std::vector<double> sinr_values(const std::vector<Pairing>& pairings,
                                const std::vector<double>& xs,
                                const std::vector<double>& ys,
                                const PhyParams& params);

// Constant-probability abstraction: each pairing succeeds independently with
// probability c_success; among successful pairings sharing a receiver one
// survivor is kept uniformly at random.
std::vector<std::uint8_t> resolve_bernoulli(const std::vector<Pairing>& pairings,
                                            const PhyParams& params, RngStream& rng);

// Empirical per-pair success probability of the SINR model under the full
// designate/pair/resolve pipeline over a mobile population. Used to calibrate
// c_success so bernoulli mode matches sinr mode.
struct SuccessEstimate {
    double success_rate = 0.0;
    long long pairings = 0;
    long long successes = 0;
};
SuccessEstimate estimate_success_constant(const SimConfig& cfg, long long slots,
                                          RngStream& rng);

}  // namespace mobgossip
