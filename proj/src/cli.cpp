#include "mobgossip/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "mobgossip/analysis.hpp"
#include "mobgossip/config.hpp"
#include "mobgossip/engine.hpp"
#include "mobgossip/phy.hpp"
#include "mobgossip/svg.hpp"
#include "mobgossip/sweep.hpp"

namespace mobgossip {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::invalid_argument("cannot open file: " + path);
    }
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::invalid_argument("cannot write file: " + path);
    }
    f << content;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
    } else {
        write_file(out_path, content);
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

struct RunFlags {
    std::string config_path;
    SimConfig cfg;
    bool seed_given = false;
    std::string protocol = "random_push";
    std::string phy = "bernoulli";
    std::string mobility = "edge_stay";
    std::string injection = "simultaneous";
    std::string stop = "all_complete";
    int replicates = 1;
    int jobs = 1;
    std::string out_path;
    std::string series_path;
};

void add_run_flags(CLI::App* app, RunFlags& rf) {
    app->add_option("--config", rf.config_path, "JSON config file (flags override)");
    app->add_option("--n", rf.cfg.n, "node count");
    app->add_option("--k", rf.cfg.k, "distinct message count");
    app->add_option("--v", rf.cfg.v, "velocity in (0, 1/3]");
    app->add_option("--theta", rf.cfg.theta, "sender-designation probability");
    app->add_option("--protocol", rf.protocol, "random_push | mobile_push");
    app->add_option("--phy", rf.phy, "sinr | bernoulli");
    app->add_option("--mobility", rf.mobility, "edge_stay | torus_wrap | static");
    app->add_option("--injection", rf.injection, "simultaneous | late:<w>");
    app->add_option("--alpha", rf.cfg.alpha, "path-loss exponent");
    app->add_option("--beta", rf.cfg.beta, "SINR threshold");
    app->add_option("--eta", rf.cfg.noise, "noise power");
    app->add_option("--power", rf.cfg.tx_power, "transmit power (default: calibrated)");
    app->add_option("--c-success", rf.cfg.c_success, "bernoulli success probability");
    app->add_option("--seed", rf.cfg.seed, "root seed")->trigger_on_parse();
    app->add_option("--max-slots", rf.cfg.max_slots, "slot budget");
    app->add_option("--sample-points", rf.cfg.sample_points, "metric samples target");
    app->add_option("--replicates", rf.replicates, "replicate count");
    app->add_option("--jobs", rf.jobs, "parallel workers");
    app->add_option("--out", rf.out_path, "output CSV path ('-' = stdout)");
    app->add_option("--series", rf.series_path, "write replicate-0 metrics series here");
    app->add_option("--stop", rf.stop, "all_complete | probe_complete | slot_budget");
}

SimConfig assemble_config(const RunFlags& rf, const CLI::App* app) {
    SimConfig cfg;
    bool seed_from_file = false;
    if (!rf.config_path.empty()) {
        const std::string text = read_file(rf.config_path);
        cfg = config_from_json_text(text);
        seed_from_file = nlohmann::json::parse(text).contains("seed");
    }
    const auto given = [&](const char* name) { return app->count(name) > 0; };
    if (given("--n")) cfg.n = rf.cfg.n;
    if (given("--k")) cfg.k = rf.cfg.k;
    if (given("--v")) cfg.v = rf.cfg.v;
    if (given("--theta")) cfg.theta = rf.cfg.theta;
    if (given("--alpha")) cfg.alpha = rf.cfg.alpha;
    if (given("--beta")) cfg.beta = rf.cfg.beta;
    if (given("--eta")) cfg.noise = rf.cfg.noise;
    if (given("--power")) cfg.tx_power = rf.cfg.tx_power;
    if (given("--c-success")) cfg.c_success = rf.cfg.c_success;
    if (given("--max-slots")) cfg.max_slots = rf.cfg.max_slots;
    if (given("--sample-points")) cfg.sample_points = rf.cfg.sample_points;
    if (given("--protocol")) cfg.protocol = protocol_from_string(rf.protocol);
    if (given("--phy")) cfg.phy_mode = phy_mode_from_string(rf.phy);
    if (given("--mobility")) cfg.mobility = mobility_from_string(rf.mobility);
    if (given("--injection")) cfg.injection = injection_from_string(rf.injection);
    // Seed precedence: flag, then config file, then MOBGOSSIP_SEED, then 0.
    if (given("--seed")) {
        cfg.seed = rf.cfg.seed;
    } else if (!seed_from_file) {
        if (const char* env = std::getenv("MOBGOSSIP_SEED")) {
            cfg.seed = std::strtoull(env, nullptr, 10);
        }
    }
    return validate(cfg);
}

StopCondition parse_stop(const std::string& name, const SimConfig& cfg) {
    StopCondition stop;
    if (name == "all_complete") {
        stop.kind = StopCondition::Kind::all_complete;
    } else if (name == "probe_complete") {
        stop.kind = StopCondition::Kind::message_complete;
        stop.message = cfg.injection.kind == InjectionSchedule::Kind::late_star ? cfg.k - 1 : 0;
    } else if (name == "slot_budget") {
        stop.kind = StopCondition::Kind::slot_budget;
    } else {
        throw std::invalid_argument("unknown stop condition '" + name + "'");
    }
    return stop;
}

int cmd_run(const RunFlags& rf, const CLI::App* app) {
    const SimConfig cfg = assemble_config(rf, app);
    const StopCondition stop = parse_stop(rf.stop, cfg);

    ExperimentSpec spec;
    spec.base = cfg;
    spec.replicates = rf.replicates;
    const std::vector<ResultRow> rows = run_sweep(spec, rf.jobs, stop);
    emit(rf.out_path, rows_to_csv(rows));

    if (!rf.series_path.empty()) {
        SimConfig c0 = cfg;
        c0.seed = replicate_seed(cfg.seed, 0, 0);
        write_file(rf.series_path, serialize_metrics(run(c0, stop)));
    }
    for (const auto& row : rows) {
        if (row.incomplete) {
            return 3;
        }
    }
    return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_path, int jobs,
              const std::string& stop_name) {
    const ExperimentSpec spec = experiment_from_json_text(read_file(spec_path));
    const StopCondition stop = parse_stop(stop_name, spec.base);
    const std::vector<ResultRow> rows = run_sweep(spec, jobs, stop);
    emit(out_path, rows_to_csv(rows));
    for (const auto& row : rows) {
        if (row.incomplete) {
            return 3;
        }
    }
    return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& x_field,
             const std::string& y_field, const std::string& normalize, bool log_log,
             const std::string& out_path) {
    const CsvTable table = parse_csv(read_file(csv_path));
    PlotSpec plot;
    plot.x_label = x_field;
    plot.y_label = normalize == "1" ? y_field : y_field + " / (" + normalize + ")";
    plot.log_x = log_log;
    plot.log_y = log_log;
    plot.title = csv_path;

    if (!table.rows.empty()) {
        const int xi = table.column(x_field);
        if (xi < 0) {
            throw std::invalid_argument("plot: CSV has no column '" + x_field + "'");
        }
        const int yi = table.column(y_field);
        if (yi < 0) {
            throw std::invalid_argument("plot: CSV has no column '" + y_field + "'");
        }
        const Normalizer norm = Normalizer::parse(normalize);
        for (const auto& row : table.rows) {
            const double x = std::strtod(row[xi].c_str(), nullptr);
            const double y = std::strtod(row[yi].c_str(), nullptr);
            plot.points.emplace_back(x, y / norm.eval(table, row));
        }
    }
    emit(out_path, render_svg(plot));
    return 0;
}

struct OracleFlags {
    std::string name;
    int s = 32;
    int n = 0;  // 0 = derive from s
    double eps = -1.0;
    double c_h = 8.0;
    long long horizon = 0;  // 0 = derive
    long long trials = 100000;
    long long balls = 0;
    int bins = 64;
    std::string graph = "cycle4";
    int seeds = 10;
    std::uint64_t seed = 0;
    long long slots = 200;
    double theta = 0.3;
    int k = 64;
    int w = 32;
    long long max_slots = 200000;
    long long at_slot = -1;
    std::string mobility = "torus_wrap";
    std::string out_path;
};

int cmd_oracle(const OracleFlags& of) {
    std::ostringstream os;
    if (of.name == "mixing") {
        const MoveKernel kernel{of.s, mobility_from_string(of.mobility)};
        const int n = of.n > 0 ? of.n : of.s * of.s;
        std::vector<double> eps_list;
        if (of.eps > 0.0) {
            eps_list.push_back(of.eps);
        } else {
            eps_list.push_back(0.25);
            eps_list.push_back(std::max(std::pow(n, -10.0), 1e-12));
        }
        write_csv_row(os, {"s", "mobility", "eps", "t_mix_powering", "t_mix_iteration"});
        for (double eps : eps_list) {
            const long long tp = analysis::exact_mixing_powering(kernel, eps);
            const long long ti = analysis::exact_mixing_iteration(kernel, eps);
            write_csv_row(os, {std::to_string(of.s), of.mobility, fmt(eps),
                               std::to_string(tp), std::to_string(ti)});
        }
    } else if (of.name == "hitting") {
        const int n = of.n > 0 ? of.n : of.s * of.s;
        const long long m = static_cast<long long>(of.s) * of.s;
        const long long horizon =
            of.horizon > 0
                ? of.horizon
                : static_cast<long long>(static_cast<double>(m) / (of.c_h * std::log(n)));
        RngStream rng(of.seed, "oracle.hitting");
        const double est = analysis::hitting_time_mc(of.s, horizon, of.trials, rng);
        write_csv_row(os, {"s", "horizon", "trials", "c_h", "estimate"});
        write_csv_row(os, {std::to_string(of.s), std::to_string(horizon),
                           std::to_string(of.trials), fmt(of.c_h), fmt(est)});
    } else if (of.name == "returns") {
        const long long horizon = of.horizon > 0 ? of.horizon : 1;
        RngStream rng(of.seed, "oracle.returns");
        const double est = analysis::return_count_mc(horizon, of.trials, rng);
        write_csv_row(os, {"horizon", "trials", "estimate", "estimate_over_log"});
        const double denom = horizon > 1 ? std::log(static_cast<double>(horizon)) : 1.0;
        write_csv_row(os, {std::to_string(horizon), std::to_string(of.trials), fmt(est),
                           fmt(est / denom)});
    } else if (of.name == "concentration") {
        analysis::ConcentrationSpec spec;
        spec.bins = of.bins;
        spec.trials = of.trials;
        spec.n_for_envelope = of.n > 0 ? of.n : 4096;
        spec.balls = of.balls > 0
                         ? of.balls
                         : static_cast<long long>(
                               std::ceil(40.0 * spec.bins * std::log(spec.n_for_envelope)));
        RngStream rng(of.seed, "oracle.concentration");
        const auto res = analysis::concentration_check(spec, rng);
        write_csv_row(os, {"balls", "bins", "trials", "violations", "min_count", "max_count",
                           "lower", "upper", "guaranteed"});
        write_csv_row(os, {std::to_string(spec.balls), std::to_string(spec.bins),
                           std::to_string(spec.trials), std::to_string(res.violations),
                           std::to_string(res.min_count), std::to_string(res.max_count),
                           fmt(res.lower_bound), fmt(res.upper_bound),
                           res.envelope_guaranteed ? "1" : "0"});
    } else if (of.name == "conductance") {
        write_csv_row(os, {"graph", "n", "seed", "radius", "phi", "ratio", "connected"});
        if (of.graph == "rgg") {
            const int n = of.n > 0 ? of.n : 12;
            for (const auto& row :
                 analysis::rgg_conductance_scaling({n}, of.seeds, of.seed)) {
                write_csv_row(os, {"rgg", std::to_string(row.n), std::to_string(row.seed),
                                   fmt(row.radius), fmt(row.phi), fmt(row.ratio),
                                   row.connected ? "1" : "0"});
            }
        } else {
            analysis::RggGraph g;
            if (of.graph == "cycle4") {
                g = analysis::RggGraph::cycle(4);
            } else if (of.graph == "complete4") {
                g = analysis::RggGraph::complete(4);
            } else if (of.graph == "empty4") {
                g = analysis::RggGraph::empty_graph(4);
            } else if (of.graph == "pair") {
                g = analysis::RggGraph::complete(2);
            } else {
                throw std::invalid_argument("oracle conductance: unknown graph '" + of.graph +
                                            "' (cycle4|complete4|empty4|pair|rgg)");
            }
            const double phi = analysis::conductance_exact(g);
            write_csv_row(os, {of.graph, std::to_string(g.n), "0", "0", fmt(phi), "0",
                               g.connected() ? "1" : "0"});
        }
    } else if (of.name == "phy-constant") {
        SimConfig cfg;
        cfg.n = of.n > 0 ? of.n : 256;
        cfg.theta = of.theta;
        cfg.phy_mode = PhyMode::sinr;
        cfg.seed = of.seed;
        const SimConfig vcfg = validate(cfg);
        RngStream rng(of.seed, "oracle.phy");
        const auto est = estimate_success_constant(vcfg, of.slots, rng);
        write_csv_row(os, {"n", "slots", "pairings", "successes", "success_rate"});
        write_csv_row(os, {std::to_string(vcfg.n), std::to_string(of.slots),
                           std::to_string(est.pairings), std::to_string(est.successes),
                           fmt(est.success_rate)});
    } else if (of.name == "strip-profile") {
        SimConfig cfg;
        cfg.n = of.n > 0 ? of.n : 1024;
        cfg.k = of.k;
        cfg.mobility = MobilityMode::fixed;
        cfg.protocol = Protocol::random_push;
        cfg.injection = {InjectionSchedule::Kind::late_star, of.w};
        cfg.seed = of.seed;
        cfg.max_slots = of.max_slots;
        World world(validate(cfg));
        const long long offset =
            of.at_slot >= 0 ? of.at_slot
                            : static_cast<long long>(std::ceil(std::sqrt(of.w)));
        while (world.inject_slot[world.probe_msg] < 0 && world.slots_done < cfg.max_slots) {
            world.run_slot();
        }
        const long long target = world.slots_done + offset;
        while (world.slots_done < target) {
            world.run_slot();
        }
        const auto profile = world.strip_profile();
        write_csv_row(os, {"slot", "strip", "count"});
        for (std::size_t l = 0; l < profile.size(); ++l) {
            write_csv_row(os, {std::to_string(world.slots_done), std::to_string(l + 1),
                               std::to_string(profile[l])});
        }
    } else {
        throw std::invalid_argument(
            "unknown oracle '" + of.name +
            "' (mixing|hitting|returns|concentration|conductance|phy-constant|strip-profile)");
    }
    emit(of.out_path, os.str());
    return 0;
}

}  // namespace

Normalizer Normalizer::parse(const std::string& expr) {
    Normalizer norm;
    std::string token;
    bool divide = false;
    const auto flush = [&]() {
        if (token.empty()) {
            throw std::invalid_argument("normalizer: empty factor in '" + expr + "'");
        }
        Factor f;
        f.divide = divide;
        if (token == "logn") {
            f.kind = Factor::Kind::logn;
        } else if (token == "log2n") {
            f.kind = Factor::Kind::log2n;
        } else {
            char* end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (end && *end == '\0') {
                f.kind = Factor::Kind::number;
                f.value = v;
            } else {
                f.kind = Factor::Kind::column;
                f.column = token;
            }
        }
        norm.factors.push_back(f);
        token.clear();
    };
    for (char c : expr) {
        if (c == '*' || c == '/') {
            flush();
            divide = c == '/';
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            token += c;
        }
    }
    flush();
    return norm;
}

double Normalizer::eval(const CsvTable& table, const std::vector<std::string>& row) const {
    double result = 1.0;
    for (const auto& f : factors) {
        double v = 1.0;
        switch (f.kind) {
            case Factor::Kind::number:
                v = f.value;
                break;
            case Factor::Kind::column: {
                const int c = table.column(f.column);
                if (c < 0) {
                    throw std::invalid_argument("normalizer: CSV has no column '" + f.column +
                                                "'");
                }
                v = std::strtod(row[c].c_str(), nullptr);
                break;
            }
            case Factor::Kind::logn:
            case Factor::Kind::log2n: {
                const int c = table.column("n");
                if (c < 0) {
                    throw std::invalid_argument("normalizer: CSV has no column 'n'");
                }
                const double n = std::strtod(row[c].c_str(), nullptr);
                v = std::log(n);
                if (f.kind == Factor::Kind::log2n) {
                    v *= v;
                }
                break;
            }
        }
        result = f.divide ? result / v : result * v;
    }
    return result;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"gossip dissemination simulator and analysis toolkit"};
    app.require_subcommand(1);

    RunFlags rf;
    CLI::App* run_cmd = app.add_subcommand("run", "run one configuration");
    add_run_flags(run_cmd, rf);

    std::string sweep_spec, sweep_out, sweep_stop = "all_complete";
    int sweep_jobs = 1;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run an experiment cross-product");
    sweep_cmd->add_option("--spec", sweep_spec, "experiment JSON")->required();
    sweep_cmd->add_option("--out", sweep_out, "output CSV path");
    sweep_cmd->add_option("--jobs", sweep_jobs, "parallel workers");
    sweep_cmd->add_option("--stop", sweep_stop, "stop condition");

    std::string plot_csv, plot_x, plot_y, plot_norm = "1", plot_out;
    bool plot_loglog = false;
    CLI::App* plot_cmd = app.add_subcommand("plot", "render an SVG scatter from a CSV");
    plot_cmd->add_option("--csv", plot_csv, "input CSV")->required();
    plot_cmd->add_option("--x", plot_x, "x column")->required();
    plot_cmd->add_option("--y", plot_y, "y column")->required();
    plot_cmd->add_option("--normalize", plot_norm, "divide y by this expression");
    plot_cmd->add_flag("--log-log", plot_loglog, "log-log axes");
    plot_cmd->add_option("--out", plot_out, "output SVG path");

    OracleFlags of;
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "run an analysis oracle");
    oracle_cmd->add_option("name", of.name, "oracle name")->required();
    oracle_cmd->add_option("--s", of.s, "grid side");
    oracle_cmd->add_option("--n", of.n, "population for log factors");
    oracle_cmd->add_option("--eps", of.eps, "mixing tolerance");
    oracle_cmd->add_option("--c-h", of.c_h, "hitting-horizon constant");
    oracle_cmd->add_option("--horizon", of.horizon, "walk horizon");
    oracle_cmd->add_option("--trials", of.trials, "Monte Carlo trials");
    oracle_cmd->add_option("--balls", of.balls, "balls to throw");
    oracle_cmd->add_option("--bins", of.bins, "bins");
    oracle_cmd->add_option("--graph", of.graph, "conductance graph");
    oracle_cmd->add_option("--seeds", of.seeds, "instances per size");
    oracle_cmd->add_option("--seed", of.seed, "root seed");
    oracle_cmd->add_option("--slots", of.slots, "slots for phy estimation");
    oracle_cmd->add_option("--theta", of.theta, "sender probability");
    oracle_cmd->add_option("--k", of.k, "messages for strip profile");
    oracle_cmd->add_option("--w", of.w, "late injection threshold");
    oracle_cmd->add_option("--max-slots", of.max_slots, "slot budget");
    oracle_cmd->add_option("--at-slot", of.at_slot, "profile offset after injection");
    oracle_cmd->add_option("--mobility", of.mobility, "kernel boundary rule");
    oracle_cmd->add_option("--out", of.out_path, "output CSV path");

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) {
            return cmd_run(rf, run_cmd);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(sweep_spec, sweep_out, sweep_jobs, sweep_stop);
        }
        if (plot_cmd->parsed()) {
            return cmd_plot(plot_csv, plot_x, plot_y, plot_norm, plot_loglog, plot_out);
        }
        if (oracle_cmd->parsed()) {
            return cmd_oracle(of);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace mobgossip
