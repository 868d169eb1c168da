#pragma once

#include <optional>

#include "mobgossip/node.hpp"
#include "mobgossip/rng.hpp"

namespace mobgossip {

// One-sided selection: both strategies read only the sender's own state (and
// the global slot parity for the alternating one). Slots are 1-indexed and
// slot 1 is odd, so self-promotion comes first.

// Uniform draw over the messages the node holds; empty-handed senders stay
// silent.
std::optional<int> select_random_push(const NodeState& node, RngStream& rng);

// Odd slots: flood the node's own message when it has one, otherwise gossip.
// Even slots: uniform over received messages (own excluded); a source holding
// nothing but its own message falls back to transmitting it.
std::optional<int> select_mobile_push(const NodeState& node, bool odd_slot, RngStream& rng);

// Adds msg to the receiver's set. Returns false when the receiver already
// held it -- the wasted-transmission event tallied by the engine.
bool deliver(NodeState& receiver, int msg);

}  // namespace mobgossip
