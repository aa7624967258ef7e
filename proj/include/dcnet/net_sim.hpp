#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "dcnet/dc_core.hpp"

namespace dcnet {

// Simulated time in nanoseconds.
using SimTime = std::int64_t;

inline constexpr SimTime kMillisecond = 1'000'000;
inline SimTime from_ms(double ms) { return static_cast<SimTime>(ms * 1e6 + (ms >= 0 ? 0.5 : -0.5)); }
inline double to_ms(SimTime t) { return static_cast<double>(t) / 1e6; }

struct NetConfig {
    double latency_ms = 100.0;      // one-way, per link
    double bandwidth_bps = 50e6;    // per sending interface
    std::uint64_t seed = 0;

    void validate() const;
};

enum class EnvelopeKind : std::uint8_t {
    Commitments = 0x01,
    Shares = 0x02,
    Aggregate = 0x03,
    Control = 0x04,
    Transmit = 0x05,  // baseline delivery to the target group
};

const char* to_string(EnvelopeKind k);

using EnvelopeBody = std::variant<CommitmentMatrix, Share, Aggregate, Bytes>;

// Header: kind 1B, round_id 4B, sender 2B, payload length 4B.
struct Envelope {
    static constexpr std::size_t kHeaderBytes = 11;

    EnvelopeKind kind = EnvelopeKind::Control;
    std::uint32_t round_id = 0;
    std::uint16_t sender = 0;
    EnvelopeBody body;

    std::size_t payload_size() const;
    std::size_t wire_size() const { return kHeaderBytes + payload_size(); }
    bool operator==(const Envelope&) const = default;
};

// Commitments: u16 rows, u32 cols, 33-byte points. Shares and aggregates:
// u8 mode, u8 blinded, u32 length, then raw bytes (XOR) or 32-byte scalars
// followed by as many blinding scalars. Control and transmit: raw bytes.
Bytes encode_envelope(const Envelope& e);
Envelope decode_envelope(ByteView wire);

// Sender-side FIFO serialisation followed by constant link latency.
class Network {
public:
    explicit Network(NetConfig cfg, std::size_t nodes);

    const NetConfig& config() const { return cfg_; }
    SimTime latency() const { return latency_; }
    SimTime transmission_time(std::size_t bytes) const;

    // Arrival time of a frame handed to the interface of `from` at `send_time`.
    SimTime schedule(SimTime send_time, std::size_t from, std::size_t bytes);

    std::uint64_t bytes_sent(std::size_t node) const { return bytes_sent_.at(node); }
    std::uint64_t total_bytes() const;

private:
    NetConfig cfg_;
    SimTime latency_;
    std::vector<SimTime> iface_free_;
    std::vector<std::uint64_t> bytes_sent_;
};

struct ComputeCosts {
    double scalar_mul_ms = 0.6698;
    double point_add_ms = 0.0109;
    unsigned threads = 4;

    double commitment_ms() const { return 2 * scalar_mul_ms + point_add_ms; }
    // Precomputed commitments are produced while idle and cost nothing here.
    SimTime charge(const OpCounters& delta) const;
};

class Simulator;

// What a process may do while handling an event. Sends leave at the process's
// current compute cursor.
class Context {
public:
    // The process's compute cursor: event time plus compute charged so far.
    SimTime now() const;
    std::size_t self() const { return self_; }
    void send(std::size_t to, Envelope e);
    // One frame per receiver on the sender's interface, in the given order.
    void broadcast(const std::vector<std::size_t>& to, Envelope e);
    void deliver_local(Envelope e);
    void set_timer(SimTime delay, std::uint64_t tag);
    void charge(SimTime compute);

private:
    friend class Simulator;
    Context(Simulator& sim, std::size_t self) : sim_(sim), self_(self) {}

    Simulator& sim_;
    std::size_t self_;
};

class Process {
public:
    virtual ~Process() = default;
    virtual void on_envelope(Context& ctx, const Envelope& e) = 0;
    virtual void on_timer(Context& ctx, std::uint64_t tag) = 0;
    virtual std::string describe() const = 0;
    virtual bool quiescent() const = 0;
};

// Single-threaded discrete-event loop over a global queue ordered by
// (time, insertion sequence).
class Simulator {
public:
    Simulator(NetConfig cfg, std::size_t nodes);

    void attach(std::size_t node, Process* p);
    void detach(std::size_t node);
    bool attached(std::size_t node) const { return procs_.at(node) != nullptr; }

    void post_timer(std::size_t node, SimTime at, std::uint64_t tag);
    // Runs until the queue is empty. Returns the time of the last event.
    SimTime run();

    SimTime now() const { return now_; }
    SimTime busy_until(std::size_t node) const { return cpu_free_.at(node); }
    Network& network() { return net_; }
    const Network& network() const { return net_; }
    std::size_t nodes() const { return procs_.size(); }
    std::uint64_t events_processed() const { return events_; }

private:
    friend class Context;

    struct Item {
        SimTime at;
        std::uint64_t seq;
        std::size_t node;
        bool is_timer;
        std::uint64_t tag;
        std::shared_ptr<const Envelope> env;

        bool operator>(const Item& o) const { return at != o.at ? at > o.at : seq > o.seq; }
    };

    void push(Item it);
    void dispatch(const Item& it);

    Network net_;
    std::vector<Process*> procs_;
    std::vector<SimTime> cpu_free_;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue_;
    std::uint64_t seq_ = 0;
    std::uint64_t events_ = 0;
    SimTime now_ = 0;
    // cursor of the process currently handling an event
    SimTime cursor_ = 0;
};

}  // namespace dcnet
