#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mobgossip/config.hpp"
#include "mobgossip/engine.hpp"

namespace mobgossip {

// One output row per (sweep point, replicate). Column set is frozen per
// schema version and golden-tested; wall_clock_ms is the only
// nondeterministic column.
struct ResultRow {
    int point = 0;
    int replicate = 0;
    SimConfig cfg;
    double t_median = -1.0;     // median completion time over messages
    long long t_max = -1;       // max completion time, -1 if any incomplete
    long long t_probe = -1;     // completion time of the probe message
    long long f_total = 0;      // total wasted transmissions
    bool incomplete = false;
    long long total_slots = 0;
    long long wall_clock_ms = 0;
};

inline constexpr const char* kResultSchema = "mobgossip.result.v1";

std::vector<std::string> result_header();
std::vector<std::string> result_fields(const ResultRow& row);

// Runs one validated config to its stop condition and summarizes.
ResultRow run_one(const SimConfig& cfg, StopCondition stop, int point, int replicate);

// Cross-product experiment: axes override the base config field-wise.
struct ExperimentSpec {
    SimConfig base;
    std::vector<int> ns;
    std::vector<int> ks;
    std::vector<double> vs;
    std::vector<Protocol> protocols;
    std::vector<PhyMode> phy_modes;
    std::vector<MobilityMode> mobilities;
    int replicates = 1;
    std::string out_dir = ".";
};

ExperimentSpec experiment_from_json_text(const std::string& text);

// All sweep points, validated; throws before any run if one is invalid.
std::vector<SimConfig> expand_points(const ExperimentSpec& spec);

// Per-replicate seed: first draw of the stream labelled
// "point.<p>.rep.<r>" derived from the base seed.
std::uint64_t replicate_seed(std::uint64_t root, int point, int replicate);

// Runs the whole cross-product with up to `jobs` worker threads; rows come
// back sorted by (point, replicate) regardless of scheduling.
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, int jobs, StopCondition stop = {});

std::string rows_to_csv(const std::vector<ResultRow>& rows);

}  // namespace mobgossip
