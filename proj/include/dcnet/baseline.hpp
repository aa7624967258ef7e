#pragma once

#include <map>
#include <optional>
#include <vector>

#include "dcnet/net_sim.hpp"

namespace dcnet {

// Fixed-length k-anonymous transmission: 2k slots of (message, target group),
// each slot padded to whole 31-byte blocks. Target group 0 marks an empty slot.
struct FixedSlot {
    Bytes message;
    std::uint16_t target = 0;
    bool corrupted = false;  // a block did not extract, e.g. after a collision

    bool empty() const { return target == 0 || corrupted; }
    bool operator==(const FixedSlot&) const = default;
};

std::size_t baseline_slot_blocks(std::size_t l_fix);
std::size_t baseline_vector_blocks(std::size_t k, std::size_t l_fix);

struct BaselinePreparation {
    std::optional<std::size_t> slot;
    Payload payload;
    SliceMatrix slices;
    std::optional<CommitmentMatrix> commitments;  // present iff ops was given
};

// Messages shorter than l_fix are zero-padded. Throws LengthCapError for an
// oversize message and InvalidArgument for a message addressed to group 0.
BaselinePreparation prepare_baseline(const std::optional<Bytes>& m, std::uint16_t target, std::size_t k,
                                     std::size_t l_fix, Rng& rng, CryptoOps* ops);

std::vector<FixedSlot> decode_baseline(const Payload& result, std::size_t k, std::size_t l_fix);

// Slot wire layout: message (l_fix bytes) then group id (2 bytes, big endian).
Bytes encode_fixed_slot(const FixedSlot& s, std::size_t l_fix);

struct Unicast {
    std::uint16_t group = 0;
    std::size_t member = 0;
    Bytes frame;  // encoded slot
};

struct TransmitSchedule {
    std::vector<Unicast> sends;
    std::vector<std::uint16_t> unknown_groups;
};

// Every local member sends each occupied slot to every member of its target
// group. Slots addressed to groups missing from group_sizes are skipped.
TransmitSchedule transmit_to_target(const std::vector<FixedSlot>& slots, std::size_t l_fix,
                                    const std::map<std::uint16_t, std::size_t>& group_sizes);

inline constexpr std::uint16_t kBaselineTargetGroup = 1;

struct BaselineScenario {
    std::size_t k = 4;
    std::size_t l_fix = 512;
    std::size_t target_size = 0;  // 0 means k
    NetConfig net;
    CryptoExecution crypto = CryptoExecution::Real;
    ComputeCosts costs;
    std::map<std::size_t, Bytes> messages;  // by node id, one per sender
    std::uint64_t seed = 0;
};

struct BaselineResult {
    SimTime runtime = 0;
    std::uint64_t bytes_total = 0;
    std::uint64_t bytes_transmit = 0;  // inter-group step only
    OpCounters ops;
    std::vector<std::vector<FixedSlot>> decoded;  // per source node
    std::vector<std::vector<Bytes>> received;     // per target member
};

// One baseline instance: the source group runs the secured DC round, then
// forwards every occupied slot to a simulated target group.
BaselineResult run_baseline(const BaselineScenario& sc);

}  // namespace dcnet
