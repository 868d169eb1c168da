#include "mobgossip/protocol.hpp"

namespace mobgossip {

std::optional<int> select_random_push(const NodeState& node, RngStream& rng) {
    if (node.order.empty()) {
        return std::nullopt;
    }
    return node.order[rng.next_below(node.order.size())];
}

std::optional<int> select_mobile_push(const NodeState& node, bool odd_slot, RngStream& rng) {
    if (node.order.empty()) {
        return std::nullopt;
    }
    const bool holds_own = node.own_msg >= 0 && node.has(node.own_msg);
    if (odd_slot) {
        if (holds_own) {
            return node.own_msg;
        }
        return node.order[rng.next_below(node.order.size())];
    }
    // Even slot: received messages only. Rejection over the held set is
    // uniform on order \ {own_msg}.
    if (holds_own && node.order.size() == 1) {
        return node.own_msg;  // lone-message source: fall back rather than stay mute
    }
    for (;;) {
        const int msg = node.order[rng.next_below(node.order.size())];
        if (!holds_own || msg != node.own_msg) {
            return msg;
        }
    }
}

bool deliver(NodeState& receiver, int msg) {
    return receiver.add(msg);
}

}  // namespace mobgossip
