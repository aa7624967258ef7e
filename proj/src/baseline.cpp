#include "dcnet/baseline.hpp"

#include <algorithm>
#include <memory>

#include "dcnet/error.hpp"
#include "dcnet/node.hpp"

namespace dcnet {

std::size_t baseline_slot_blocks(std::size_t l_fix) { return blocks_for(l_fix + 2); }

std::size_t baseline_vector_blocks(std::size_t k, std::size_t l_fix) { return 2 * k * baseline_slot_blocks(l_fix); }

Bytes encode_fixed_slot(const FixedSlot& s, std::size_t l_fix) {
    if (s.message.size() > l_fix) throw LengthCapError("message exceeds the fixed slot length");
    Bytes out = s.message;
    out.resize(l_fix, 0);
    put_u16(out, s.target);
    return out;
}

BaselinePreparation prepare_baseline(const std::optional<Bytes>& m, std::uint16_t target, std::size_t k,
                                     std::size_t l_fix, Rng& rng, CryptoOps* ops) {
    if (k < 2) throw InvalidArgument("a group needs at least two nodes");
    if (l_fix == 0) throw InvalidArgument("fixed slot length must be positive");
    if (m && m->size() > l_fix) throw LengthCapError("message exceeds the fixed slot length");
    if (m && target == 0) throw InvalidArgument("group id 0 marks an empty slot");

    const std::size_t slot_bytes = baseline_slot_blocks(l_fix) * kBlockBytes;
    Bytes vec(2 * k * slot_bytes, 0);
    BaselinePreparation p;
    if (m) {
        p.slot = rng.uniform(2 * k);
        Bytes enc = encode_fixed_slot(FixedSlot{*m, target}, l_fix);
        std::copy(enc.begin(), enc.end(), vec.begin() + static_cast<std::ptrdiff_t>(*p.slot * slot_bytes));
    }
    p.payload = Payload::from_bytes(ArithmeticMode::ModQBlocks, vec);
    p.slices = split_payload(p.payload, k, rng);
    if (ops) p.commitments = commit_slices(p.slices, *ops);
    return p;
}

std::vector<FixedSlot> decode_baseline(const Payload& result, std::size_t k, std::size_t l_fix) {
    if (result.mode() != ArithmeticMode::ModQBlocks || result.size() != baseline_vector_blocks(k, l_fix))
        throw DecodeError("result does not match the baseline vector shape");
    const std::size_t per_slot = baseline_slot_blocks(l_fix);
    std::vector<FixedSlot> slots(2 * k);
    for (std::size_t s = 0; s < 2 * k; ++s) {
        Bytes raw;
        try {
            for (std::size_t b = 0; b < per_slot; ++b) {
                auto block = extract_block(result.blocks()[s * per_slot + b]);
                raw.insert(raw.end(), block.begin(), block.end());
            }
        } catch (const RangeError&) {
            slots[s].corrupted = true;
            continue;
        }
        slots[s].target = static_cast<std::uint16_t>(raw[l_fix] << 8 | raw[l_fix + 1]);
        if (!slots[s].empty()) slots[s].message.assign(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(l_fix));
    }
    return slots;
}

TransmitSchedule transmit_to_target(const std::vector<FixedSlot>& slots, std::size_t l_fix,
                                    const std::map<std::uint16_t, std::size_t>& group_sizes) {
    TransmitSchedule out;
    for (const auto& s : slots) {
        if (s.empty()) continue;
        auto g = group_sizes.find(s.target);
        if (g == group_sizes.end()) {
            out.unknown_groups.push_back(s.target);
            continue;
        }
        Bytes frame = encode_fixed_slot(s, l_fix);
        for (std::size_t member = 0; member < g->second; ++member) out.sends.push_back({s.target, member, frame});
    }
    return out;
}

namespace {

class Sink : public Process {
public:
    void on_envelope(Context&, const Envelope& e) override { frames.push_back(std::get<Bytes>(e.body)); }
    void on_timer(Context&, std::uint64_t) override {}
    std::string describe() const override { return "target member frames=" + std::to_string(frames.size()); }
    bool quiescent() const override { return true; }

    std::vector<Bytes> frames;
};

class BaselineNode : public Process {
public:
    BaselineNode(std::size_t self, const BaselineScenario& sc, std::size_t target_size, std::uint64_t seed)
        : self_(self), sc_(sc), target_size_(target_size), rng_(seed), ops_(sc.crypto) {
        auto m = sc.messages.find(self);
        if (m != sc.messages.end()) message_ = m->second;
    }

    void on_timer(Context& ctx, std::uint64_t) override {
        ctx_ = &ctx;
        auto prep = prepare_baseline(message_, kBaselineTargetGroup, sc_.k, sc_.l_fix, rng_, &ops_);
        DcSession::Setup setup;
        setup.k = sc_.k;
        setup.self = self_;
        setup.slices = std::move(prep.slices);
        setup.commitments = std::move(prep.commitments);
        session_.emplace(
            std::move(setup), ops_, [this](std::optional<std::size_t> to, Envelope e) { send(to, std::move(e)); },
            [this] { settle(); });
        session_->start();
        ctx_ = nullptr;
    }

    void on_envelope(Context& ctx, const Envelope& e) override {
        ctx_ = &ctx;
        session_->receive(e);
        if (session_->done() && !finished_) finish();
        ctx_ = nullptr;
    }

    std::string describe() const override {
        return "node=" + std::to_string(self_) + " baseline " + (session_ ? session_->describe() : "idle");
    }
    bool quiescent() const override { return finished_; }

    const OpCounters& counters() const { return ops_.counters(); }
    const std::vector<FixedSlot>& decoded() const { return decoded_; }
    std::uint64_t transmit_bytes() const { return transmit_bytes_; }

private:
    void settle() {
        OpCounters d = ops_.counters() - settled_;
        settled_ = ops_.counters();
        ctx_->charge(sc_.costs.charge(d));
    }

    void send(std::optional<std::size_t> to, Envelope e) {
        if (to) {
            ctx_->send(*to, std::move(e));
            return;
        }
        std::vector<std::size_t> ids;
        for (std::size_t j = 0; j < sc_.k; ++j)
            if (j != self_) ids.push_back(j);
        ctx_->broadcast(ids, std::move(e));
    }

    void finish() {
        finished_ = true;
        if (!session_->report().ok()) throw ProtocolLogicFault("baseline round failed verification");
        decoded_ = decode_baseline(session_->transcript().result.sum, sc_.k, sc_.l_fix);
        auto schedule = transmit_to_target(decoded_, sc_.l_fix, {{kBaselineTargetGroup, target_size_}});
        for (auto& u : schedule.sends) {
            Envelope e{EnvelopeKind::Transmit, 0, static_cast<std::uint16_t>(self_), std::move(u.frame)};
            transmit_bytes_ += e.wire_size();
            ctx_->send(sc_.k + u.member, std::move(e));
        }
    }

    std::size_t self_;
    const BaselineScenario& sc_;
    std::size_t target_size_;
    Rng rng_;
    CryptoOps ops_;
    OpCounters settled_;
    std::optional<Bytes> message_;
    std::optional<DcSession> session_;
    Context* ctx_ = nullptr;
    bool finished_ = false;
    std::vector<FixedSlot> decoded_;
    std::uint64_t transmit_bytes_ = 0;
};

}  // namespace

BaselineResult run_baseline(const BaselineScenario& sc) {
    if (sc.k < 2) throw InvalidArgument("a group needs at least two nodes");
    for (const auto& [id, m] : sc.messages) {
        if (id >= sc.k) throw InvalidArgument("message queued for a node outside the group");
        if (m.size() > sc.l_fix) throw LengthCapError("message exceeds the fixed slot length");
    }
    sc.net.validate();
    const std::size_t target = sc.target_size ? sc.target_size : sc.k;

    Rng rng(sc.seed);
    std::vector<std::unique_ptr<BaselineNode>> nodes;
    std::vector<Sink> sinks(target);
    Simulator sim(sc.net, sc.k + target);
    for (std::size_t i = 0; i < sc.k; ++i) {
        nodes.push_back(std::make_unique<BaselineNode>(i, sc, target, rng.next_u64()));
        sim.attach(i, nodes.back().get());
        sim.post_timer(i, 0, kTagTick);
    }
    for (std::size_t t = 0; t < target; ++t) sim.attach(sc.k + t, &sinks[t]);
    sim.run();

    BaselineResult res;
    std::string dump;
    bool stuck = false;
    for (const auto& n : nodes) {
        if (!n->quiescent()) stuck = true;
        dump += n->describe() + "\n";
    }
    if (stuck) throw DeadlockError("baseline round did not complete:\n" + dump);

    res.runtime = sim.now();
    for (std::size_t i = 0; i < sim.nodes(); ++i) res.runtime = std::max(res.runtime, sim.busy_until(i));
    res.bytes_total = sim.network().total_bytes();
    for (const auto& n : nodes) {
        res.ops += n->counters();
        res.bytes_transmit += n->transmit_bytes();
        res.decoded.push_back(n->decoded());
    }
    for (auto& s : sinks) res.received.push_back(std::move(s.frames));
    return res;
}

}  // namespace dcnet
