#pragma once

#include <cstdint>
#include <string>

namespace mobgossip {

enum class PhyMode { sinr, bernoulli };
enum class Protocol { random_push, mobile_push };
enum class MobilityMode { edge_stay, torus_wrap, fixed };  // "fixed" = static positions

struct InjectionSchedule {
    enum class Kind { simultaneous, late_star };
    Kind kind = Kind::simultaneous;
    int w = 0;  // late_star threshold: the straggler message activates once
                // every node holds at least w distinct messages
};

// Full experiment description. validate() snaps v onto an exact grid
// (s = round(1/v), v_eff = 1/s) and fills in derived/calibrated fields;
// everything downstream consumes only validated configs.
struct SimConfig {
    int n = 256;                 // node count
    int k = 1;                   // distinct message count, 1 <= k <= n
    double v = 1.0 / 3.0;        // velocity in (0, 1/3]; snapped to 1/s
    int s = 0;                   // grid side, derived
    int m = 0;                   // subsquare count s*s, derived
    double theta = 0.3;          // sender-designation probability, in (0, 0.5)
    PhyMode phy_mode = PhyMode::bernoulli;
    double tx_power = 0.0;       // P; <= 0 requests the calibrated default
    double noise = 1.0;          // eta
    double alpha = 4.0;          // path-loss exponent, > 2
    double beta = 2.0;           // SINR threshold, > 0
    double c_success = 0.5;      // bernoulli-mode per-pair success probability
    Protocol protocol = Protocol::random_push;
    MobilityMode mobility = MobilityMode::edge_stay;
    InjectionSchedule injection;
    std::uint64_t seed = 0;
    long long max_slots = 200000;
    int sample_points = 2048;    // target number of metric sample slots
    bool validated = false;
};

std::string to_string(PhyMode m);
std::string to_string(Protocol p);
std::string to_string(MobilityMode m);
std::string to_string(const InjectionSchedule& inj);

PhyMode phy_mode_from_string(const std::string& s);
Protocol protocol_from_string(const std::string& s);
MobilityMode mobility_from_string(const std::string& s);
InjectionSchedule injection_from_string(const std::string& s);  // "simultaneous" | "late:<w>"

// Range-checks every field and returns the normalized config (v snapped,
// m = s^2, transmit power calibrated when unset). Throws std::invalid_argument
// naming the offending field. Validating a validated config is the identity.
SimConfig validate(SimConfig cfg);

// Default transmit power: a lone pair at the typical nearest-receiver
// distance sqrt(1/(theta*n)) sees SINR = 10*beta, so noise never binds and
// interference dominates.
double calibrated_tx_power(int n, double theta, double noise, double alpha, double beta);

SimConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const SimConfig& cfg);

}  // namespace mobgossip
