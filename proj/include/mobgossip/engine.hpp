#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mobgossip/config.hpp"
#include "mobgossip/mobility.hpp"
#include "mobgossip/node.hpp"
#include "mobgossip/phy.hpp"
#include "mobgossip/rng.hpp"

namespace mobgossip {

struct StopCondition {
    enum class Kind { all_complete, message_complete, slot_budget };
    Kind kind = Kind::all_complete;
    int message = -1;  // for message_complete
};

struct Delivery {
    int receiver = -1;
    int msg = -1;
    bool was_new = false;
};

// Record of one slot: every pairing, the message each sender picked (-1 =
// silent), the per-pairing success flag after the one-message-per-receiver
// rule, and the deliveries that actually landed.
struct SlotOutcome {
    long long slot = 0;  // 1-based
    std::vector<Pairing> pairings;
    std::vector<int> selections;
    std::vector<std::uint8_t> success;
    std::vector<Delivery> deliveries;
};

struct MetricsSeries {
    int n = 0;
    int k = 0;
    long long stride = 1;
    long long total_slots = 0;
    bool incomplete = false;
    int probe_msg = 0;
    int strip_count = 0;

    std::vector<long long> sample_slots;
    std::vector<std::vector<long long>> n_series;  // [msg][sample]
    std::vector<std::vector<long long>> f_series;  // [msg][sample]
    std::vector<long long> inject_slot;            // per msg, -1 = never injected
    std::vector<long long> complete_slot;          // per msg, -1 = incomplete
    std::vector<long long> throughput;             // deliveries per slot
    std::vector<std::vector<long long>> probe_cell_counts;   // [sample][m], mobile runs
    std::vector<std::vector<long long>> probe_strip_counts;  // [sample][strips], static runs

    // Spreading time measured from the message's own injection slot;
    // -1 while unfinished or never injected.
    long long completion_time(int msg) const {
        if (complete_slot[msg] < 0 || inject_slot[msg] < 0) {
            return -1;
        }
        return complete_slot[msg] - inject_slot[msg];
    }
};

// Deterministic text form; byte-compares equal across runs of the same
// validated config.
std::string serialize_metrics(const MetricsSeries& series);

// Vertical-strip geometry for static runs: strips of width sqrt(32 ln n / n)
// spanning the unit square.
double strip_width(int n);
int strip_count_for(int n);

// Live simulation state. Construct from a validated config, then call
// run_slot() repeatedly, or use run() for the whole loop.
struct World {
    explicit World(const SimConfig& cfg);

    SlotOutcome run_slot();

    // Folded strip profile of the probe message: strips at equal horizontal
    // distance either side of the source strip are combined, so index 0 is
    // the source strip itself. Static mode only.
    std::vector<long long> strip_profile() const;

    std::vector<long long> cell_counts(int msg) const;  // probe holders per subsquare

    bool all_injected() const;
    bool all_complete() const;

    SimConfig cfg;
    MoveKernel kernel;
    MessageBook book;
    std::vector<NodeState> nodes;
    std::vector<double> xs, ys;
    long long slots_done = 0;
    int probe_msg = 0;
    int late_msg = -1;  // message waiting on the late_star trigger, -1 if none

    std::vector<long long> n_count;
    std::vector<long long> f_count;
    std::vector<long long> inject_slot;
    std::vector<long long> complete_slot;

    RngStream rs_mobility, rs_designate, rs_select, rs_resolve;

private:
    void inject(int msg);
    void maybe_inject_late();
    void refresh_positions();
};

MetricsSeries run(const SimConfig& cfg, StopCondition stop = {});

}  // namespace mobgossip
