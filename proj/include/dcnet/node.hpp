#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcnet/blame.hpp"
#include "dcnet/net_sim.hpp"
#include "dcnet/state_machine.hpp"

namespace dcnet {

// One DC round (secured: commitments, shares, aggregates; unsecured: shares,
// aggregates) from the point of view of one participant.
class DcSession {
public:
    struct Setup {
        std::uint32_t round_id = 0;
        std::size_t k = 0;
        std::size_t self = 0;
        bool deferred = false;  // skip the pairwise and global checks
        SliceMatrix slices;
        std::optional<CommitmentMatrix> commitments;  // present iff secured
    };

    // `to` empty means every peer.
    using Send = std::function<void(std::optional<std::size_t> to, Envelope e)>;

    DcSession(Setup s, CryptoOps& ops, Send send, std::function<void()> settle);

    void start();
    void receive(const Envelope& e);

    bool secured() const { return setup_.commitments.has_value(); }
    bool done() const { return done_; }
    std::uint32_t round_id() const { return setup_.round_id; }
    const RoundTranscript& transcript() const { return transcript_; }
    const VerificationReport& report() const { return report_; }
    std::string describe() const;

private:
    void maybe_send_shares();
    void maybe_aggregate();
    void maybe_finish();
    std::size_t count_commitments() const;

    Setup setup_;
    CryptoOps& ops_;
    Send send_;
    std::function<void()> settle_;
    std::vector<std::optional<CommitmentMatrix>> commitments_;
    std::vector<std::optional<Share>> shares_;
    std::vector<std::optional<Aggregate>> aggregates_;
    bool shares_sent_ = false;
    bool aggregated_ = false;
    bool done_ = false;
    RoundTranscript transcript_;
    VerificationReport report_;
};

struct ProtocolOptions {
    bool deferred_validation = false;
    bool precompute = false;
    bool direct_transmission = false;
    bool fixed_slots = false;  // evaluation only: slot 2 * roster index
    std::size_t length_cap = kDefaultLengthCap;
};

// Fault harness for a participant.
struct Misbehaviour {
    enum class Kind { None, FloodSlots, CorruptFinal };

    Kind kind = Kind::None;
    FaultKind fault = FaultKind::WrongValue;  // CorruptFinal
    std::uint32_t from_instance = 0;
    std::uint32_t times = 1;
};

struct NodeConfig {
    MachineConfig machine;
    ProtocolOptions options;
    CryptoExecution crypto = CryptoExecution::Real;
    ComputeCosts costs;
    Misbehaviour misbehaviour;
};

struct LogRecord {
    SimTime at = 0;
    std::size_t node = 0;  // network id
    std::string line;
};

struct DeliveredMessage {
    std::uint32_t instance = 0;
    std::uint16_t r = 0;
    Bytes bytes;
    bool direct = false;
    bool operator==(const DeliveredMessage&) const = default;
};

using Directory = std::map<PublicKey, std::size_t>;

inline constexpr std::uint64_t kTagGroupReady = 1;
inline constexpr std::uint64_t kTagTick = 2;

class Participant : public Process {
public:
    Participant(std::size_t net_id, KeyPair keys, std::vector<PublicKey> roster, NodeConfig cfg, std::uint64_t seed,
                const Directory& directory);

    void queue_message(Bytes m);

    void on_envelope(Context& ctx, const Envelope& e) override;
    void on_timer(Context& ctx, std::uint64_t tag) override;
    std::string describe() const override;
    bool quiescent() const override;

    std::size_t net_id() const { return net_id_; }
    const PublicKey& key() const { return keys_.pk; }
    const NodeState& state() const { return state_; }
    const OpCounters& counters() const { return ops_.counters(); }
    const std::vector<LogRecord>& log() const { return log_; }
    const std::vector<DeliveredMessage>& delivered() const { return delivered_; }
    std::size_t outbox_size() const { return outbox_.size(); }
    bool has_pending_work() const { return !outbox_.empty() || !pending_blames_.empty(); }
    const std::vector<std::pair<std::uint32_t, SimTime>>& completions() const { return completions_; }
    const TranscriptStore& transcripts() const { return transcripts_; }
    std::size_t collisions_seen() const { return collisions_seen_; }

private:
    struct PendingBlame {
        std::uint32_t instance;
        std::size_t accused;
        std::size_t slot;
        Seed seed;
    };

    void handle(const Event& e);
    void apply(const Action& a);
    void log_line(const std::string& line);
    void settle();
    void send(std::optional<std::size_t> to, Envelope e);
    void open_session(DcSession::Setup setup);
    void pump();

    void start_initial(RoundMode mode);
    InitialPreparation prepare_flood(RoundMode mode);
    void finish_initial();
    void start_final(RoundMode mode);
    void finish_final();
    void refresh_precompute();
    bool misbehaving_now(Misbehaviour::Kind kind) const;

    std::size_t net_id_;
    KeyPair keys_;
    NodeConfig cfg_;
    Rng rng_;
    const Directory& directory_;
    CryptoOps ops_;
    OpCounters settled_;
    NodeState state_;
    Context* ctx_ = nullptr;

    std::deque<Bytes> outbox_;
    std::deque<PendingBlame> pending_blames_;
    std::optional<DcSession> session_;
    std::map<std::uint32_t, std::vector<Envelope>> early_;

    // current instance
    std::optional<InitialPreparation> init_prep_;
    Bytes carried_message_;
    bool carrying_blame_ = false;
    std::vector<LengthAnnouncement> anns_;
    std::optional<Layout> layout_;
    std::optional<OwnMessage> own_message_;
    std::optional<PrecomputedInitial> precomputed_;
    std::uint32_t misbehaved_ = 0;

    InstanceArchive archive_;
    TranscriptStore transcripts_;
    std::vector<LogRecord> log_;
    std::vector<DeliveredMessage> delivered_;
    std::vector<std::pair<std::uint32_t, SimTime>> completions_;
    std::size_t collisions_seen_ = 0;
};

struct Scenario {
    std::size_t k = 4;
    NetConfig net;
    NodeConfig node;
    std::map<std::size_t, Misbehaviour> attackers;          // by node id
    std::map<std::size_t, std::vector<Bytes>> messages;     // by node id
    std::uint32_t max_instances = 1;
    double tick_interval_ms = 1000.0;
    std::uint64_t seed = 0;
};

struct NodeReport {
    std::size_t id = 0;
    PublicKey key;
    bool excluded = false;
    bool attacker = false;
    OpCounters ops;
    std::uint64_t bytes_sent = 0;
    std::vector<DeliveredMessage> delivered;
    std::size_t outbox_remaining = 0;
    Phase phase = Phase::GroupInit;
    RoundMode mode = RoundMode::Unsecured;
};

struct InstanceTiming {
    std::uint32_t instance = 0;
    SimTime start = 0;
    SimTime end = 0;
    SimTime runtime() const { return end - start; }
};

struct RunResult {
    std::vector<LogRecord> log;  // ordered by (time, node)
    std::vector<NodeReport> nodes;
    std::vector<InstanceTiming> instances;
    std::uint32_t exclusions = 0;
    SimTime end = 0;
    std::uint64_t bytes_total = 0;

    std::string log_text() const;
    OpCounters total_ops() const;
};

// Registers the nodes, releases the start barrier and ticks protocol
// instances until every queued message is delivered or max_instances is hit.
// Throws DeadlockError with a dump of all node phases when the event queue
// drains while a node is still inside a round.
RunResult coordinator_run(const Scenario& sc);

}  // namespace dcnet
