#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <vector>

#include "dcnet/blame.hpp"

namespace dcnet {

enum class Phase : std::uint8_t { GroupInit, Idle, InitialRound, FinalRound, Excluding };
enum class ModePolicy : std::uint8_t { Auto, FixedSecured, FixedUnsecured };

const char* to_string(Phase p);
const char* to_string(ModePolicy p);

// Common knowledge about one finished round: every honest member derives the
// same summary from the same decoded result.
struct RoundSummary {
    bool final = false;
    std::size_t occupied = 0;
    std::size_t collisions = 0;
    std::size_t malformed = 0;
    bool garbage = false;
    std::size_t blames = 0;
    std::size_t reserved_bytes = 0;
};

struct MachineConfig {
    ModePolicy policy = ModePolicy::Auto;
    std::size_t clean_window = 3;         // W
    std::size_t collision_threshold = 2;  // T_c
};

bool detect_attack(const RoundSummary& s, std::size_t k, std::size_t collision_threshold);

enum class EventKind : std::uint8_t { GroupReady, RoundComplete, BlameVerdict, Timer };

const char* to_string(EventKind e);

struct Event {
    EventKind kind = EventKind::Timer;
    RoundSummary summary;  // RoundComplete
    Verdict verdict;       // BlameVerdict
    PublicKey accused;     // BlameVerdict

    static Event group_ready() { return {EventKind::GroupReady, {}, {}, {}}; }
    static Event timer() { return {EventKind::Timer, {}, {}, {}}; }
    static Event round_complete(RoundSummary s) { return {EventKind::RoundComplete, s, {}, {}}; }
    static Event blame_verdict(Verdict v, PublicKey accused) { return {EventKind::BlameVerdict, {}, v, accused}; }
};

enum class ActionKind : std::uint8_t {
    StartInitialRound,
    StartFinalRound,
    CompleteInstance,
    SwitchMode,
    ExcludePeer,
    ReinitGroup,
};

const char* to_string(ActionKind a);

struct Action {
    ActionKind kind;
    RoundMode mode = RoundMode::Secured;  // StartInitialRound, StartFinalRound, SwitchMode
    PublicKey peer;                       // ExcludePeer
    bool operator==(const Action&) const = default;
};

struct NodeState {
    PublicKey key;
    std::size_t self = 0;  // position of key in roster
    Phase phase = Phase::GroupInit;
    RoundMode mode = RoundMode::Unsecured;
    std::vector<PublicKey> roster;  // sorted by public key
    std::deque<BlameMessage> pending_blames;
    std::set<PublicKey> excluded;
    std::uint32_t instance = 0;
    std::size_t clean_secured = 0;
    bool attack_this_instance = false;
};

// Sorts the roster and picks the policy's starting mode.
NodeState initial_state(const PublicKey& self, std::vector<PublicKey> roster, const MachineConfig& cfg);

struct StepResult {
    NodeState state;
    std::vector<Action> actions;
};

// Throws ProtocolLogicFault on an event the current phase does not accept.
StepResult step(const NodeState& s, const Event& e, const MachineConfig& cfg);

// round=<n> node=<i> phase=<p> mode=<m> event=<e>
std::string log_line(const NodeState& s, EventKind e);
std::string log_line(const NodeState& s, EventKind e, std::size_t node);

}  // namespace dcnet
