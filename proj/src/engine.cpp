#include "mobgossip/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mobgossip/protocol.hpp"

namespace mobgossip {

double strip_width(int n) {
    const double w = std::sqrt(32.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
    return std::min(w, 1.0);
}

int strip_count_for(int n) {
    return std::max(1, static_cast<int>(std::ceil(1.0 / strip_width(n))));
}

World::World(const SimConfig& config)
    : cfg(config.validated ? config : validate(config)),
      kernel{cfg.s, cfg.mobility},
      book{cfg.k},
      rs_mobility(cfg.seed, "mobility"),
      rs_designate(cfg.seed, "designate"),
      rs_select(cfg.seed, "select"),
      rs_resolve(cfg.seed, "resolve") {
    RngStream rs_init(cfg.seed, "init");
    nodes.resize(cfg.n);
    const double side = cfg.v;
    for (int i = 0; i < cfg.n; ++i) {
        nodes[i].id = i;
        nodes[i].cell_row = static_cast<int>(rs_init.next_below(cfg.s));
        nodes[i].cell_col = static_cast<int>(rs_init.next_below(cfg.s));
        nodes[i].x = (nodes[i].cell_col + rs_init.next_unit()) * side;
        nodes[i].y = (nodes[i].cell_row + rs_init.next_unit()) * side;
        nodes[i].reset_messages(cfg.k);
    }
    xs.resize(cfg.n);
    ys.resize(cfg.n);
    refresh_positions();

    n_count.assign(cfg.k, 0);
    f_count.assign(cfg.k, 0);
    inject_slot.assign(cfg.k, -1);
    complete_slot.assign(cfg.k, -1);

    const bool late = cfg.injection.kind == InjectionSchedule::Kind::late_star;
    late_msg = late ? cfg.k - 1 : -1;
    probe_msg = late ? late_msg : 0;
    for (int msg = 0; msg < cfg.k; ++msg) {
        if (msg != late_msg) {
            inject(msg);
        }
    }
}

void World::inject(int msg) {
    NodeState& src = nodes[book.source_of(msg)];
    src.own_msg = msg;
    src.add(msg);
    n_count[msg] = 1;
    inject_slot[msg] = slots_done;
    if (n_count[msg] == cfg.n) {
        complete_slot[msg] = slots_done;
    }
}

void World::maybe_inject_late() {
    if (late_msg < 0 || inject_slot[late_msg] >= 0) {
        return;
    }
    for (const auto& node : nodes) {
        if (node.message_count() < cfg.injection.w) {
            return;
        }
    }
    inject(late_msg);
}

void World::refresh_positions() {
    for (int i = 0; i < cfg.n; ++i) {
        xs[i] = nodes[i].x;
        ys[i] = nodes[i].y;
    }
}

SlotOutcome World::run_slot() {
    SlotOutcome out;
    out.slot = slots_done + 1;
    const bool odd_slot = (out.slot % 2) == 1;

    maybe_inject_late();

    if (cfg.mobility != MobilityMode::fixed) {
        step_all(nodes, kernel, rs_mobility);
        refresh_positions();
    }

    const auto roles = designate(cfg.n, cfg.theta, rs_designate);
    // Index cell side only affects search cost, never the pairing itself;
    // aim for a few receivers per cell instead of the coarse mobility grid.
    const double index_side = std::min(cfg.v, 2.0 / std::sqrt(static_cast<double>(cfg.n)));
    out.pairings = pair_nearest(roles, xs, ys, index_side);

    out.selections.resize(out.pairings.size(), -1);
    std::vector<Pairing> active;
    std::vector<std::size_t> active_index;
    for (std::size_t p = 0; p < out.pairings.size(); ++p) {
        const NodeState& sender = nodes[out.pairings[p].sender];
        std::optional<int> pick;
        if (cfg.protocol == Protocol::random_push) {
            pick = select_random_push(sender, rs_select);
        } else {
            pick = select_mobile_push(sender, odd_slot, rs_select);
        }
        if (pick) {
            out.selections[p] = *pick;
            active.push_back(out.pairings[p]);
            active_index.push_back(p);
        }
    }

    // Silent senders carry no message and do not transmit, so they neither
    // interfere nor occupy their receiver.
    std::vector<std::uint8_t> active_success;
    if (cfg.phy_mode == PhyMode::sinr) {
        active_success = resolve_sinr(active, xs, ys, PhyParams::from_config(cfg));
    } else {
        active_success = resolve_bernoulli(active, PhyParams::from_config(cfg), rs_resolve);
    }

    out.success.assign(out.pairings.size(), 0);
    for (std::size_t a = 0; a < active.size(); ++a) {
        if (!active_success[a]) {
            continue;
        }
        out.success[active_index[a]] = 1;
        const int msg = out.selections[active_index[a]];
        const int receiver = active[a].receiver;
        const bool was_new = deliver(nodes[receiver], msg);
        out.deliveries.push_back({receiver, msg, was_new});
        if (was_new) {
            ++n_count[msg];
            if (n_count[msg] == cfg.n && complete_slot[msg] < 0) {
                complete_slot[msg] = out.slot;
            }
        } else {
            ++f_count[msg];
        }
    }

    slots_done = out.slot;
    return out;
}

std::vector<long long> World::strip_profile() const {
    if (cfg.mobility != MobilityMode::fixed) {
        throw std::invalid_argument("strip_profile requires static mobility");
    }
    const double width = strip_width(cfg.n);
    const int strips = strip_count_for(cfg.n);
    const int source = book.source_of(probe_msg);
    const auto strip_of = [&](double x) {
        return std::min(static_cast<int>(x / width), strips - 1);
    };
    const int src_strip = strip_of(xs[source]);
    std::vector<long long> profile(strips, 0);
    for (int i = 0; i < cfg.n; ++i) {
        if (nodes[i].has(probe_msg)) {
            ++profile[std::abs(strip_of(xs[i]) - src_strip)];
        }
    }
    return profile;
}

std::vector<long long> World::cell_counts(int msg) const {
    std::vector<long long> counts(cfg.m, 0);
    for (const auto& node : nodes) {
        if (node.has(msg)) {
            ++counts[node.cell_row * cfg.s + node.cell_col];
        }
    }
    return counts;
}

bool World::all_injected() const {
    for (long long s : inject_slot) {
        if (s < 0) {
            return false;
        }
    }
    return true;
}

bool World::all_complete() const {
    if (!all_injected()) {
        return false;
    }
    for (long long s : complete_slot) {
        if (s < 0) {
            return false;
        }
    }
    return true;
}

namespace {

bool stop_satisfied(const World& world, const StopCondition& stop) {
    switch (stop.kind) {
        case StopCondition::Kind::all_complete:
            return world.all_complete();
        case StopCondition::Kind::message_complete:
            return world.complete_slot[stop.message] >= 0;
        case StopCondition::Kind::slot_budget:
            return false;  // runs out the whole budget
    }
    return false;
}

}  // namespace

MetricsSeries run(const SimConfig& config, StopCondition stop) {
    const SimConfig cfg = config.validated ? config : validate(config);
    if (stop.kind == StopCondition::Kind::message_complete &&
        (stop.message < 0 || stop.message >= cfg.k)) {
        throw std::invalid_argument("stop condition names message outside 0..k-1");
    }
    World world(cfg);

    MetricsSeries series;
    series.n = cfg.n;
    series.k = cfg.k;
    series.stride = std::max<long long>(1, cfg.max_slots / cfg.sample_points);
    series.probe_msg = world.probe_msg;
    series.strip_count = cfg.mobility == MobilityMode::fixed ? strip_count_for(cfg.n) : 0;
    series.n_series.resize(cfg.k);
    series.f_series.resize(cfg.k);

    const auto sample = [&]() {
        series.sample_slots.push_back(world.slots_done);
        for (int msg = 0; msg < cfg.k; ++msg) {
            series.n_series[msg].push_back(world.n_count[msg]);
            series.f_series[msg].push_back(world.f_count[msg]);
        }
        if (cfg.mobility == MobilityMode::fixed) {
            series.probe_strip_counts.push_back(world.strip_profile());
        } else {
            series.probe_cell_counts.push_back(world.cell_counts(world.probe_msg));
        }
    };

    sample();  // slot 0
    while (!stop_satisfied(world, stop) && world.slots_done < cfg.max_slots) {
        const SlotOutcome out = world.run_slot();
        series.throughput.push_back(static_cast<long long>(out.deliveries.size()));
        if (world.slots_done % series.stride == 0) {
            sample();
        }
    }
    if (series.sample_slots.back() != world.slots_done) {
        sample();
    }

    series.total_slots = world.slots_done;
    series.inject_slot = world.inject_slot;
    series.complete_slot = world.complete_slot;
    series.incomplete = stop.kind == StopCondition::Kind::message_complete
                            ? world.complete_slot[stop.message] < 0
                            : !world.all_complete();
    return series;
}

std::string serialize_metrics(const MetricsSeries& s) {
    std::ostringstream os;
    os << "mobgossip.metrics.v1\n";
    os << "n " << s.n << " k " << s.k << " stride " << s.stride << " total_slots "
       << s.total_slots << " incomplete " << (s.incomplete ? 1 : 0) << " probe " << s.probe_msg
       << " strips " << s.strip_count << "\n";
    const auto row = [&os](const char* tag, const std::vector<long long>& v) {
        os << tag;
        for (long long x : v) {
            os << ' ' << x;
        }
        os << '\n';
    };
    row("samples", s.sample_slots);
    row("inject", s.inject_slot);
    row("complete", s.complete_slot);
    for (int msg = 0; msg < s.k; ++msg) {
        os << "N " << msg;
        for (long long x : s.n_series[msg]) {
            os << ' ' << x;
        }
        os << '\n';
    }
    for (int msg = 0; msg < s.k; ++msg) {
        os << "F " << msg;
        for (long long x : s.f_series[msg]) {
            os << ' ' << x;
        }
        os << '\n';
    }
    for (std::size_t i = 0; i < s.probe_cell_counts.size(); ++i) {
        os << "cells " << i;
        for (long long x : s.probe_cell_counts[i]) {
            os << ' ' << x;
        }
        os << '\n';
    }
    for (std::size_t i = 0; i < s.probe_strip_counts.size(); ++i) {
        os << "strips " << i;
        for (long long x : s.probe_strip_counts[i]) {
            os << ' ' << x;
        }
        os << '\n';
    }
    row("throughput", s.throughput);
    return os.str();
}

}  // namespace mobgossip
