#include "dcnet/state_machine.hpp"

#include <algorithm>

#include "dcnet/error.hpp"

namespace dcnet {

const char* to_string(Phase p) {
    switch (p) {
        case Phase::GroupInit: return "GROUP_INIT";
        case Phase::Idle: return "IDLE";
        case Phase::InitialRound: return "INITIAL_ROUND";
        case Phase::FinalRound: return "FINAL_ROUND";
        case Phase::Excluding: return "EXCLUDING";
    }
    return "?";
}

const char* to_string(ModePolicy p) {
    switch (p) {
        case ModePolicy::Auto: return "auto";
        case ModePolicy::FixedSecured: return "secured";
        case ModePolicy::FixedUnsecured: return "unsecured";
    }
    return "?";
}

const char* to_string(EventKind e) {
    switch (e) {
        case EventKind::GroupReady: return "GROUP_READY";
        case EventKind::RoundComplete: return "ROUND_COMPLETE";
        case EventKind::BlameVerdict: return "BLAME_VERDICT";
        case EventKind::Timer: return "TIMER";
    }
    return "?";
}

const char* to_string(ActionKind a) {
    switch (a) {
        case ActionKind::StartInitialRound: return "START_INITIAL_ROUND";
        case ActionKind::StartFinalRound: return "START_FINAL_ROUND";
        case ActionKind::CompleteInstance: return "COMPLETE_INSTANCE";
        case ActionKind::SwitchMode: return "SWITCH_MODE";
        case ActionKind::ExcludePeer: return "EXCLUDE_PEER";
        case ActionKind::ReinitGroup: return "REINIT_GROUP";
    }
    return "?";
}

bool detect_attack(const RoundSummary& s, std::size_t k, std::size_t collision_threshold) {
    return s.occupied > k || s.collisions >= collision_threshold || s.garbage;
}

namespace {

void locate_self(NodeState& s) {
    auto it = std::find(s.roster.begin(), s.roster.end(), s.key);
    s.self = static_cast<std::size_t>(it - s.roster.begin());
}

[[noreturn]] void undefined(const NodeState& s, const Event& e) {
    throw ProtocolLogicFault(std::string("event ") + to_string(e.kind) + " is undefined in phase " +
                             to_string(s.phase));
}

void finish_instance(NodeState& s, const RoundSummary& summary, const MachineConfig& cfg,
                     std::vector<Action>& actions) {
    if (s.mode == RoundMode::Secured) {
        if (s.attack_this_instance || summary.blames > 0) {
            s.clean_secured = 0;
        } else if (++s.clean_secured >= cfg.clean_window && cfg.policy == ModePolicy::Auto) {
            s.mode = RoundMode::Unsecured;
            s.clean_secured = 0;
            actions.push_back({ActionKind::SwitchMode, s.mode, {}});
        }
    }
    actions.push_back({ActionKind::CompleteInstance, s.mode, {}});
    s.phase = Phase::Idle;
    s.attack_this_instance = false;
    ++s.instance;
}

bool escalate(NodeState& s, const MachineConfig& cfg, std::vector<Action>& actions) {
    if (s.mode != RoundMode::Unsecured || cfg.policy != ModePolicy::Auto) return false;
    s.mode = RoundMode::Secured;
    s.clean_secured = 0;
    actions.push_back({ActionKind::SwitchMode, s.mode, {}});
    return true;
}

}  // namespace

NodeState initial_state(const PublicKey& self, std::vector<PublicKey> roster, const MachineConfig& cfg) {
    NodeState s;
    s.key = self;
    s.roster = std::move(roster);
    std::sort(s.roster.begin(), s.roster.end());
    locate_self(s);
    if (s.self == s.roster.size()) throw InvalidArgument("own key is not part of the roster");
    s.mode = cfg.policy == ModePolicy::FixedSecured ? RoundMode::Secured : RoundMode::Unsecured;
    return s;
}

StepResult step(const NodeState& in, const Event& e, const MachineConfig& cfg) {
    StepResult r{in, {}};
    NodeState& s = r.state;
    auto& actions = r.actions;

    switch (s.phase) {
        case Phase::GroupInit:
            if (e.kind == EventKind::Timer) break;
            if (e.kind != EventKind::GroupReady) undefined(in, e);
            s.phase = Phase::Idle;
            break;

        case Phase::Idle:
            if (e.kind == EventKind::Timer) {
                s.phase = Phase::InitialRound;
                actions.push_back({ActionKind::StartInitialRound, s.mode, {}});
                break;
            }
            if (e.kind != EventKind::BlameVerdict) undefined(in, e);
            [[fallthrough]];

        case Phase::InitialRound:
            if (e.kind == EventKind::Timer) break;
            if (e.kind == EventKind::BlameVerdict) {
                if (e.verdict.outcome != VerdictOutcome::AttackerConfirmed) break;
                if (s.phase == Phase::InitialRound) ++s.instance;
                s.phase = Phase::Excluding;
                s.clean_secured = 0;
                s.attack_this_instance = false;
                s.excluded.insert(e.accused);
                s.roster.erase(std::remove(s.roster.begin(), s.roster.end(), e.accused), s.roster.end());
                locate_self(s);
                actions.push_back({ActionKind::ExcludePeer, s.mode, e.accused});
                break;
            }
            if (e.kind != EventKind::RoundComplete || e.summary.final) undefined(in, e);
            if (e.summary.blames > 0) s.attack_this_instance = true;
            if (detect_attack(e.summary, s.roster.size(), cfg.collision_threshold)) {
                s.attack_this_instance = true;
                s.clean_secured = 0;
                if (escalate(s, cfg, actions)) {
                    actions.push_back({ActionKind::CompleteInstance, s.mode, {}});
                    s.phase = Phase::Idle;
                    s.attack_this_instance = false;
                    ++s.instance;
                    break;
                }
            }
            if (e.summary.reserved_bytes > 0) {
                s.phase = Phase::FinalRound;
                actions.push_back({ActionKind::StartFinalRound, s.mode, {}});
            } else {
                finish_instance(s, e.summary, cfg, actions);
            }
            break;

        case Phase::FinalRound:
            if (e.kind == EventKind::Timer) break;
            if (e.kind != EventKind::RoundComplete || !e.summary.final) undefined(in, e);
            if (detect_attack(e.summary, s.roster.size(), cfg.collision_threshold)) {
                s.attack_this_instance = true;
                escalate(s, cfg, actions);
            }
            finish_instance(s, e.summary, cfg, actions);
            break;

        case Phase::Excluding:
            if (e.kind == EventKind::BlameVerdict) {
                if (e.verdict.outcome != VerdictOutcome::AttackerConfirmed) break;
                s.excluded.insert(e.accused);
                s.roster.erase(std::remove(s.roster.begin(), s.roster.end(), e.accused), s.roster.end());
                locate_self(s);
                actions.push_back({ActionKind::ExcludePeer, s.mode, e.accused});
                break;
            }
            if (e.kind != EventKind::Timer) undefined(in, e);
            s.phase = Phase::GroupInit;
            actions.push_back({ActionKind::ReinitGroup, s.mode, {}});
            break;
    }
    return r;
}

std::string log_line(const NodeState& s, EventKind e) { return log_line(s, e, s.self); }

std::string log_line(const NodeState& s, EventKind e, std::size_t node) {
    return "round=" + std::to_string(s.instance) + " node=" + std::to_string(node) + " phase=" + to_string(s.phase) +
           " mode=" + (s.mode == RoundMode::Secured ? "SECURED" : "UNSECURED") + " event=" + to_string(e);
}

}  // namespace dcnet
