#pragma once

#include <cstdint>
#include <vector>

namespace mobgossip {

// Messages are numbered 0..k-1 and message i originates at source node i.
// The bijection is positional, so a thin helper is all that's needed.
struct MessageBook {
    int k = 0;
    int source_of(int msg) const { return msg; }
    int message_of_source(int node) const { return node < k ? node : -1; }
};

// One node: its mobility cell, continuous position inside that cell, the
// message it originates (if any, once injected), and the set of messages it
// holds. The set only ever grows; `order` keeps insertion order for uniform
// sampling while `bits` answers membership.
struct NodeState {
    int id = 0;
    int cell_row = 0;
    int cell_col = 0;
    double x = 0.0;
    double y = 0.0;
    int own_msg = -1;  // -1 until this node's message is injected

    std::vector<int> order;
    std::vector<std::uint64_t> bits;

    void reset_messages(int k) {
        order.clear();
        bits.assign((static_cast<std::size_t>(k) + 63) / 64, 0);
    }

    bool has(int msg) const {
        return (bits[static_cast<std::size_t>(msg) >> 6] >> (msg & 63)) & 1u;
    }

    // Adds msg if absent; returns true when the message is new to this node.
    bool add(int msg) {
        std::uint64_t& word = bits[static_cast<std::size_t>(msg) >> 6];
        const std::uint64_t mask = 1ull << (msg & 63);
        if (word & mask) {
            return false;
        }
        word |= mask;
        order.push_back(msg);
        return true;
    }

    int message_count() const { return static_cast<int>(order.size()); }
};

}  // namespace mobgossip
