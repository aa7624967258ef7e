#include "dcnet/net_sim.hpp"

#include <cmath>
#include <numeric>

#include "dcnet/error.hpp"

namespace dcnet {

void NetConfig::validate() const {
    if (!(latency_ms >= 0.0) || !std::isfinite(latency_ms)) throw InvalidArgument("latency must be >= 0");
    if (!(bandwidth_bps > 0.0) || !std::isfinite(bandwidth_bps)) throw InvalidArgument("bandwidth must be > 0");
}

const char* to_string(EnvelopeKind k) {
    switch (k) {
        case EnvelopeKind::Commitments: return "COMMITMENTS";
        case EnvelopeKind::Shares: return "SHARES";
        case EnvelopeKind::Aggregate: return "AGGREGATE";
        case EnvelopeKind::Control: return "CONTROL";
        case EnvelopeKind::Transmit: return "TRANSMIT";
    }
    return "?";
}

namespace {

std::size_t vector_size(const Payload& p, std::size_t blindings) {
    if (p.mode() == ArithmeticMode::Xor) return 6 + p.size();
    return 6 + (p.size() + blindings) * kScalarBytes;
}

void put_vector(Bytes& out, const Payload& p, const std::vector<Scalar>& blindings) {
    out.push_back(static_cast<std::uint8_t>(p.mode()));
    out.push_back(blindings.empty() ? 0 : 1);
    put_u32(out, static_cast<std::uint32_t>(p.size()));
    if (p.mode() == ArithmeticMode::Xor) {
        append(out, p.bytes());
        return;
    }
    for (const auto& s : p.blocks()) append(out, s.to_bytes());
    for (const auto& s : blindings) append(out, s.to_bytes());
}

std::pair<Payload, std::vector<Scalar>> get_vector(Reader& in) {
    std::uint8_t mode = in.u8();
    std::uint8_t blinded = in.u8();
    std::uint32_t n = in.u32();
    if (mode > 1 || blinded > 1) throw DecodeError("bad vector header");
    if (mode == 0) {
        if (blinded) throw DecodeError("XOR vectors carry no blindings");
        auto raw = in.take(n);
        return {Payload::from_bytes(ArithmeticMode::Xor, raw), {}};
    }
    if (in.remaining() < static_cast<std::size_t>(n) * kScalarBytes * (1 + blinded))
        throw DecodeError("vector truncated");
    std::vector<Scalar> blocks(n), blindings(blinded ? n : 0);
    for (auto& s : blocks) s = Scalar::from_bytes(in.take(kScalarBytes));
    for (auto& s : blindings) s = Scalar::from_bytes(in.take(kScalarBytes));
    return {Payload::from_blocks(std::move(blocks)), std::move(blindings)};
}

}  // namespace

std::size_t Envelope::payload_size() const {
    return std::visit(
        [](const auto& b) -> std::size_t {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, CommitmentMatrix>) return b.wire_size();
            else if constexpr (std::is_same_v<T, Share>) return vector_size(b.slice, b.blindings.size());
            else if constexpr (std::is_same_v<T, Aggregate>) return vector_size(b.sum, b.blindings.size());
            else return b.size();
        },
        body);
}

Bytes encode_envelope(const Envelope& e) {
    Bytes out;
    out.reserve(e.wire_size());
    out.push_back(static_cast<std::uint8_t>(e.kind));
    put_u32(out, e.round_id);
    put_u16(out, e.sender);
    put_u32(out, static_cast<std::uint32_t>(e.payload_size()));
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, CommitmentMatrix>) {
                if (!b.materialised()) throw InvalidArgument("cannot encode a modelled commitment matrix");
                put_u16(out, static_cast<std::uint16_t>(b.rows));
                put_u32(out, static_cast<std::uint32_t>(b.cols));
                for (const auto& c : b.cells) append(out, c.element.encode());
            } else if constexpr (std::is_same_v<T, Share>) {
                put_vector(out, b.slice, b.blindings);
            } else if constexpr (std::is_same_v<T, Aggregate>) {
                put_vector(out, b.sum, b.blindings);
            } else {
                append(out, b);
            }
        },
        e.body);
    return out;
}

Envelope decode_envelope(ByteView wire) {
    Reader in(wire);
    Envelope e;
    std::uint8_t kind = in.u8();
    if (kind < 0x01 || kind > 0x05) throw DecodeError("unknown envelope kind");
    e.kind = static_cast<EnvelopeKind>(kind);
    e.round_id = in.u32();
    e.sender = in.u16();
    std::uint32_t len = in.u32();
    if (in.remaining() != len) throw DecodeError("envelope length field does not match the payload");
    switch (e.kind) {
        case EnvelopeKind::Commitments: {
            CommitmentMatrix m;
            m.rows = in.u16();
            m.cols = in.u32();
            if (in.remaining() != m.rows * m.cols * kPointBytes) throw DecodeError("commitment matrix truncated");
            m.cells.reserve(m.rows * m.cols);
            for (std::size_t i = 0; i < m.rows * m.cols; ++i)
                m.cells.push_back(Commitment{GroupElement::decode(in.take(kPointBytes))});
            e.body = std::move(m);
            break;
        }
        case EnvelopeKind::Shares: {
            auto [p, b] = get_vector(in);
            e.body = Share{std::move(p), std::move(b)};
            break;
        }
        case EnvelopeKind::Aggregate: {
            auto [p, b] = get_vector(in);
            e.body = Aggregate{std::move(p), std::move(b)};
            break;
        }
        default: {
            auto raw = in.take(len);
            e.body = Bytes(raw.begin(), raw.end());
        }
    }
    if (!in.done()) throw DecodeError("trailing bytes after envelope payload");
    return e;
}

Network::Network(NetConfig cfg, std::size_t nodes)
    : cfg_(cfg), latency_(from_ms(cfg.latency_ms)), iface_free_(nodes, 0), bytes_sent_(nodes, 0) {
    cfg_.validate();
}

SimTime Network::transmission_time(std::size_t bytes) const {
    return static_cast<SimTime>(std::llround(static_cast<double>(bytes) * 8.0 / cfg_.bandwidth_bps * 1e9));
}

SimTime Network::schedule(SimTime send_time, std::size_t from, std::size_t bytes) {
    SimTime start = std::max(send_time, iface_free_.at(from));
    SimTime done = start + transmission_time(bytes);
    iface_free_[from] = done;
    bytes_sent_[from] += bytes;
    return done + latency_;
}

std::uint64_t Network::total_bytes() const {
    return std::accumulate(bytes_sent_.begin(), bytes_sent_.end(), std::uint64_t{0});
}

SimTime ComputeCosts::charge(const OpCounters& d) const {
    if (threads == 0) throw InvalidArgument("at least one compute thread is required");
    double ms = static_cast<double>(d.commitments_generated + d.commitments_verified) * commitment_ms() +
                static_cast<double>(d.point_additions) * point_add_ms;
    return from_ms(ms / threads);
}

SimTime Context::now() const { return sim_.cursor_; }

void Context::send(std::size_t to, Envelope e) {
    if (to >= sim_.nodes() || !sim_.attached(to))
        throw RoutingError("send to unknown or excluded node " + std::to_string(to));
    if (to == self_) throw RoutingError("use deliver_local for self-addressed envelopes");
    SimTime arrival = sim_.net_.schedule(sim_.cursor_, self_, e.wire_size());
    sim_.push({arrival, 0, to, false, 0, std::make_shared<const Envelope>(std::move(e))});
}

void Context::broadcast(const std::vector<std::size_t>& to, Envelope e) {
    auto shared = std::make_shared<const Envelope>(std::move(e));
    const std::size_t bytes = shared->wire_size();
    for (std::size_t r : to) {
        if (r >= sim_.nodes() || !sim_.attached(r) || r == self_)
            throw RoutingError("broadcast to unknown or excluded node " + std::to_string(r));
        sim_.push({sim_.net_.schedule(sim_.cursor_, self_, bytes), 0, r, false, 0, shared});
    }
}

void Context::deliver_local(Envelope e) {
    sim_.push({sim_.cursor_, 0, self_, false, 0, std::make_shared<const Envelope>(std::move(e))});
}

void Context::set_timer(SimTime delay, std::uint64_t tag) { sim_.post_timer(self_, sim_.cursor_ + delay, tag); }

void Context::charge(SimTime compute) {
    if (compute < 0) throw InvalidArgument("negative compute charge");
    sim_.cursor_ += compute;
}

Simulator::Simulator(NetConfig cfg, std::size_t nodes) : net_(cfg, nodes), procs_(nodes, nullptr), cpu_free_(nodes, 0) {}

void Simulator::attach(std::size_t node, Process* p) { procs_.at(node) = p; }

void Simulator::detach(std::size_t node) { procs_.at(node) = nullptr; }

void Simulator::post_timer(std::size_t node, SimTime at, std::uint64_t tag) { push({at, 0, node, true, tag, nullptr}); }

void Simulator::push(Item it) {
    it.seq = seq_++;
    queue_.push(std::move(it));
}

void Simulator::dispatch(const Item& it) {
    Process* p = procs_.at(it.node);
    if (!p) return;  // excluded while the frame was in flight
    cursor_ = std::max(it.at, cpu_free_[it.node]);
    Context ctx(*this, it.node);
    if (it.is_timer) p->on_timer(ctx, it.tag);
    else p->on_envelope(ctx, *it.env);
    cpu_free_[it.node] = cursor_;
}

SimTime Simulator::run() {
    while (!queue_.empty()) {
        Item it = queue_.top();
        queue_.pop();
        now_ = it.at;
        ++events_;
        dispatch(it);
    }
    return now_;
}

}  // namespace dcnet
