#include "mobgossip/config.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace mobgossip {

namespace {

[[noreturn]] void reject(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
}

}  // namespace

std::string to_string(PhyMode m) {
    return m == PhyMode::sinr ? "sinr" : "bernoulli";
}

std::string to_string(Protocol p) {
    return p == Protocol::random_push ? "random_push" : "mobile_push";
}

std::string to_string(MobilityMode m) {
    switch (m) {
        case MobilityMode::edge_stay: return "edge_stay";
        case MobilityMode::torus_wrap: return "torus_wrap";
        case MobilityMode::fixed: return "static";
    }
    return "edge_stay";
}

std::string to_string(const InjectionSchedule& inj) {
    if (inj.kind == InjectionSchedule::Kind::simultaneous) {
        return "simultaneous";
    }
    return "late:" + std::to_string(inj.w);
}

PhyMode phy_mode_from_string(const std::string& s) {
    if (s == "sinr") return PhyMode::sinr;
    if (s == "bernoulli") return PhyMode::bernoulli;
    reject("phy_mode", "expected 'sinr' or 'bernoulli', got '" + s + "'");
}

Protocol protocol_from_string(const std::string& s) {
    if (s == "random_push") return Protocol::random_push;
    if (s == "mobile_push") return Protocol::mobile_push;
    reject("protocol", "expected 'random_push' or 'mobile_push', got '" + s + "'");
}

MobilityMode mobility_from_string(const std::string& s) {
    if (s == "edge_stay") return MobilityMode::edge_stay;
    if (s == "torus_wrap") return MobilityMode::torus_wrap;
    if (s == "static") return MobilityMode::fixed;
    reject("mobility", "expected 'edge_stay', 'torus_wrap' or 'static', got '" + s + "'");
}

InjectionSchedule injection_from_string(const std::string& s) {
    InjectionSchedule inj;
    if (s == "simultaneous") {
        return inj;
    }
    if (s.rfind("late:", 0) == 0) {
        inj.kind = InjectionSchedule::Kind::late_star;
        try {
            inj.w = std::stoi(s.substr(5));
        } catch (const std::exception&) {
            reject("injection", "could not parse threshold in '" + s + "'");
        }
        return inj;
    }
    reject("injection", "expected 'simultaneous' or 'late:<w>', got '" + s + "'");
}

double calibrated_tx_power(int n, double theta, double noise, double alpha, double beta) {
    const double d_typ = std::sqrt(1.0 / (theta * static_cast<double>(n)));
    return 10.0 * beta * noise * std::pow(d_typ, alpha);
}

SimConfig validate(SimConfig cfg) {
    if (cfg.n < 1) reject("n", "node count must be >= 1");
    if (cfg.k < 1) reject("k", "message count must be >= 1");
    if (cfg.k > cfg.n) reject("k", "message count must be <= n");
    if (!(cfg.v > 0.0) || cfg.v > 1.0 / 3.0 + 1e-12) {
        reject("v", "velocity must lie in (0, 1/3]");
    }
    if (!(cfg.theta > 0.0) || !(cfg.theta < 0.5)) {
        reject("theta", "sender probability must lie in (0, 0.5)");
    }
    if (!(cfg.alpha > 2.0)) reject("alpha", "path-loss exponent must be > 2");
    if (!(cfg.beta > 0.0)) reject("beta", "SINR threshold must be > 0");
    if (!(cfg.c_success > 0.0) || !(cfg.c_success < 1.0)) {
        reject("c_success", "bernoulli success probability must lie in (0, 1)");
    }
    if (!(cfg.noise > 0.0)) reject("eta", "noise power must be > 0");
    if (cfg.max_slots < 1) reject("max_slots", "slot budget must be >= 1");
    if (cfg.sample_points < 1) reject("sample_points", "must be >= 1");
    if (cfg.injection.kind == InjectionSchedule::Kind::late_star) {
        if (cfg.injection.w < 1) reject("injection", "late_star threshold w must be >= 1");
        if (cfg.k < 2) reject("injection", "late_star requires k >= 2");
    }

    const long s = std::lround(1.0 / cfg.v);
    if (s < 1) reject("v", "grid side round(1/v) must be >= 1");
    cfg.s = static_cast<int>(s);
    cfg.m = cfg.s * cfg.s;
    cfg.v = 1.0 / static_cast<double>(cfg.s);  // v_eff, used everywhere downstream

    if (cfg.tx_power <= 0.0) {
        cfg.tx_power = calibrated_tx_power(cfg.n, cfg.theta, cfg.noise, cfg.alpha, cfg.beta);
    }
    cfg.validated = true;
    return cfg;
}

SimConfig config_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config JSON parse error: ") + e.what());
    }
    SimConfig cfg;
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("k")) cfg.k = j.at("k").get<int>();
    if (j.contains("v")) cfg.v = j.at("v").get<double>();
    if (j.contains("theta")) cfg.theta = j.at("theta").get<double>();
    if (j.contains("phy_mode")) cfg.phy_mode = phy_mode_from_string(j.at("phy_mode").get<std::string>());
    if (j.contains("P")) cfg.tx_power = j.at("P").get<double>();
    if (j.contains("eta")) cfg.noise = j.at("eta").get<double>();
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    if (j.contains("c_success")) cfg.c_success = j.at("c_success").get<double>();
    if (j.contains("protocol")) cfg.protocol = protocol_from_string(j.at("protocol").get<std::string>());
    if (j.contains("mobility")) cfg.mobility = mobility_from_string(j.at("mobility").get<std::string>());
    if (j.contains("injection")) cfg.injection = injection_from_string(j.at("injection").get<std::string>());
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_slots")) cfg.max_slots = j.at("max_slots").get<long long>();
    if (j.contains("sample_points")) cfg.sample_points = j.at("sample_points").get<int>();
    return cfg;
}

std::string config_to_json_text(const SimConfig& cfg) {
    nlohmann::json j;
    j["n"] = cfg.n;
    j["k"] = cfg.k;
    j["v"] = cfg.v;
    j["theta"] = cfg.theta;
    j["phy_mode"] = to_string(cfg.phy_mode);
    j["P"] = cfg.tx_power;
    j["eta"] = cfg.noise;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["c_success"] = cfg.c_success;
    j["protocol"] = to_string(cfg.protocol);
    j["mobility"] = to_string(cfg.mobility);
    j["injection"] = to_string(cfg.injection);
    j["seed"] = cfg.seed;
    j["max_slots"] = cfg.max_slots;
    j["sample_points"] = cfg.sample_points;
    return j.dump(2);
}

}  // namespace mobgossip
