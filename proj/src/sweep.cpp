#include "mobgossip/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mobgossip/csv.hpp"

namespace mobgossip {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double median_of(std::vector<long long> values) {
    if (values.empty()) {
        return -1.0;
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return static_cast<double>(values[mid]);
    }
    return (static_cast<double>(values[mid - 1]) + static_cast<double>(values[mid])) / 2.0;
}

}  // namespace

std::vector<std::string> result_header() {
    return {"schema",    "point",     "replicate", "n",         "k",
            "v",         "s",         "m",         "theta",     "phy",
            "P",         "eta",       "alpha",     "beta",      "c_success",
            "protocol",  "mobility",  "injection", "seed",      "max_slots",
            "t_median",  "t_max",     "t_probe",   "f_total",   "incomplete",
            "total_slots", "wall_clock_ms"};
}

std::vector<std::string> result_fields(const ResultRow& row) {
    const SimConfig& c = row.cfg;
    return {kResultSchema,
            std::to_string(row.point),
            std::to_string(row.replicate),
            std::to_string(c.n),
            std::to_string(c.k),
            fmt_double(c.v),
            std::to_string(c.s),
            std::to_string(c.m),
            fmt_double(c.theta),
            to_string(c.phy_mode),
            fmt_double(c.tx_power),
            fmt_double(c.noise),
            fmt_double(c.alpha),
            fmt_double(c.beta),
            fmt_double(c.c_success),
            to_string(c.protocol),
            to_string(c.mobility),
            to_string(c.injection),
            std::to_string(c.seed),
            std::to_string(c.max_slots),
            fmt_double(row.t_median),
            std::to_string(row.t_max),
            std::to_string(row.t_probe),
            std::to_string(row.f_total),
            row.incomplete ? "1" : "0",
            std::to_string(row.total_slots),
            std::to_string(row.wall_clock_ms)};
}

ResultRow run_one(const SimConfig& cfg, StopCondition stop, int point, int replicate) {
    ResultRow row;
    row.point = point;
    row.replicate = replicate;
    row.cfg = cfg.validated ? cfg : validate(cfg);

    const auto start = std::chrono::steady_clock::now();
    const MetricsSeries series = run(row.cfg, stop);
    const auto end = std::chrono::steady_clock::now();
    row.wall_clock_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();

    std::vector<long long> completions;
    bool any_open = false;
    for (int msg = 0; msg < row.cfg.k; ++msg) {
        const long long t = series.completion_time(msg);
        if (t >= 0) {
            completions.push_back(t);
        } else {
            any_open = true;
        }
    }
    row.t_median = median_of(completions);
    row.t_max = -1;
    if (!any_open && !completions.empty()) {
        row.t_max = *std::max_element(completions.begin(), completions.end());
    }
    row.t_probe = series.completion_time(series.probe_msg);
    for (int msg = 0; msg < row.cfg.k; ++msg) {
        row.f_total += series.f_series[msg].back();
    }
    row.incomplete = series.incomplete;
    row.total_slots = series.total_slots;
    return row;
}

ExperimentSpec experiment_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("experiment JSON parse error: ") + e.what());
    }
    ExperimentSpec spec;
    if (j.contains("base")) {
        spec.base = config_from_json_text(j.at("base").dump());
    }
    if (j.contains("replicates")) {
        spec.replicates = j.at("replicates").get<int>();
    }
    if (j.contains("out_dir")) {
        spec.out_dir = j.at("out_dir").get<std::string>();
    }
    if (j.contains("axes")) {
        const auto& axes = j.at("axes");
        if (axes.contains("n")) spec.ns = axes.at("n").get<std::vector<int>>();
        if (axes.contains("k")) spec.ks = axes.at("k").get<std::vector<int>>();
        if (axes.contains("v")) spec.vs = axes.at("v").get<std::vector<double>>();
        if (axes.contains("protocol")) {
            for (const auto& s : axes.at("protocol")) {
                spec.protocols.push_back(protocol_from_string(s.get<std::string>()));
            }
        }
        if (axes.contains("phy_mode")) {
            for (const auto& s : axes.at("phy_mode")) {
                spec.phy_modes.push_back(phy_mode_from_string(s.get<std::string>()));
            }
        }
        if (axes.contains("mobility")) {
            for (const auto& s : axes.at("mobility")) {
                spec.mobilities.push_back(mobility_from_string(s.get<std::string>()));
            }
        }
    }
    if (spec.replicates < 1) {
        throw std::invalid_argument("experiment field 'replicates': must be >= 1");
    }
    return spec;
}

std::vector<SimConfig> expand_points(const ExperimentSpec& spec) {
    const std::vector<int> ns = spec.ns.empty() ? std::vector<int>{spec.base.n} : spec.ns;
    const std::vector<int> ks = spec.ks.empty() ? std::vector<int>{spec.base.k} : spec.ks;
    const std::vector<double> vs = spec.vs.empty() ? std::vector<double>{spec.base.v} : spec.vs;
    const std::vector<Protocol> prots =
        spec.protocols.empty() ? std::vector<Protocol>{spec.base.protocol} : spec.protocols;
    const std::vector<PhyMode> phys =
        spec.phy_modes.empty() ? std::vector<PhyMode>{spec.base.phy_mode} : spec.phy_modes;
    const std::vector<MobilityMode> mobs =
        spec.mobilities.empty() ? std::vector<MobilityMode>{spec.base.mobility} : spec.mobilities;

    std::vector<SimConfig> points;
    for (int n : ns) {
        for (int k : ks) {
            for (double v : vs) {
                for (Protocol prot : prots) {
                    for (PhyMode phy : phys) {
                        for (MobilityMode mob : mobs) {
                            SimConfig cfg = spec.base;
                            cfg.n = n;
                            cfg.k = k;
                            cfg.v = v;
                            cfg.protocol = prot;
                            cfg.phy_mode = phy;
                            cfg.mobility = mob;
                            cfg.validated = false;
                            cfg.s = 0;
                            cfg.m = 0;
                            points.push_back(validate(cfg));  // abort before any run
                        }
                    }
                }
            }
        }
    }
    return points;
}

std::uint64_t replicate_seed(std::uint64_t root, int point, int replicate) {
    return RngStream(root, "point." + std::to_string(point) + ".rep." +
                               std::to_string(replicate))
        .next_u64();
}

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec, int jobs, StopCondition stop) {
    const std::vector<SimConfig> points = expand_points(spec);
    const int total = static_cast<int>(points.size()) * spec.replicates;
    std::vector<ResultRow> rows(total);

    std::atomic<int> next{0};
    const auto worker = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= total) {
                return;
            }
            const int point = idx / spec.replicates;
            const int rep = idx % spec.replicates;
            SimConfig cfg = points[point];
            cfg.seed = replicate_seed(spec.base.seed, point, rep);
            rows[idx] = run_one(cfg, stop, point, rep);
        }
    };

    const int workers = std::max(1, std::min(jobs, total));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return a.point != b.point ? a.point < b.point : a.replicate < b.replicate;
    });
    return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    write_csv_row(os, result_header());
    for (const auto& row : rows) {
        write_csv_row(os, result_fields(row));
    }
    return os.str();
}

}  // namespace mobgossip
