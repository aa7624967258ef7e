#include <doctest.h>

#include <algorithm>

#include "dcnet/error.hpp"
#include "dcnet/node.hpp"

using namespace dcnet;

namespace {

Bytes text(const std::string& s) { return Bytes(s.begin(), s.end()); }

Scenario base(std::size_t k, ModePolicy policy, CryptoExecution crypto = CryptoExecution::Real) {
    Scenario sc;
    sc.k = k;
    sc.node.machine.policy = policy;
    sc.node.crypto = crypto;
    sc.seed = 11;
    return sc;
}

bool all_delivered(const RunResult& r, const Bytes& m) {
    for (const auto& n : r.nodes) {
        if (n.excluded) continue;
        bool found = std::any_of(n.delivered.begin(), n.delivered.end(),
                                 [&](const DeliveredMessage& d) { return d.bytes == m; });
        if (!found) return false;
    }
    return true;
}

std::size_t first_line(const RunResult& r, const std::string& needle) {
    for (std::size_t i = 0; i < r.log.size(); ++i)
        if (r.log[i].line.find(needle) != std::string::npos) return i;
    return r.log.size();
}

}  // namespace

TEST_CASE("k=4 unsecured: every node receives the message") {
    auto sc = base(4, ModePolicy::Auto);
    sc.messages[2] = {text("hello dc-net")};
    auto r = coordinator_run(sc);
    CHECK(all_delivered(r, text("hello dc-net")));
    CHECK(r.nodes[2].outbox_remaining == 0);
    REQUIRE(r.instances.size() == 1);
    // two rounds of two latency-bound steps each
    CHECK(to_ms(r.instances[0].runtime()) > 400.0);
    CHECK(to_ms(r.instances[0].runtime()) < 500.0);
    for (const auto& n : r.nodes) CHECK(n.mode == RoundMode::Unsecured);
    CHECK(r.log_text().find("phase=FINAL_ROUND mode=UNSECURED") != std::string::npos);
}

TEST_CASE("several senders in one instance, both modes") {
    for (auto policy : {ModePolicy::FixedUnsecured, ModePolicy::FixedSecured}) {
        CAPTURE(to_string(policy));
        auto sc = base(5, policy);
        sc.messages[0] = {text("alpha")};
        sc.messages[3] = {Bytes(300, 0x5a)};
        sc.messages[4] = {text("gamma gamma")};
        sc.max_instances = 6;
        auto r = coordinator_run(sc);
        CHECK(all_delivered(r, text("alpha")));
        CHECK(all_delivered(r, Bytes(300, 0x5a)));
        CHECK(all_delivered(r, text("gamma gamma")));
        for (const auto& n : r.nodes) CHECK(n.outbox_remaining == 0);
    }
}

TEST_CASE("runs are deterministic for a fixed seed") {
    auto sc = base(4, ModePolicy::FixedSecured);
    sc.messages[1] = {text("same")};
    auto a = coordinator_run(sc);
    auto b = coordinator_run(sc);
    CHECK(a.log_text() == b.log_text());
    CHECK(a.end == b.end);
    CHECK(a.bytes_total == b.bytes_total);
}

TEST_CASE("byte accounting is conserved") {
    auto sc = base(4, ModePolicy::FixedSecured);
    sc.messages[1] = {text("bytes")};
    auto r = coordinator_run(sc);
    std::uint64_t sum = 0;
    for (const auto& n : r.nodes) sum += n.bytes_sent;
    CHECK(sum == r.bytes_total);
}

TEST_CASE("secured initial round traffic follows the frame sizes") {
    const std::size_t k = 4;
    auto sc = base(k, ModePolicy::FixedSecured);
    auto r = coordinator_run(sc);  // nobody sends: only the initial round runs
    const std::size_t n = 2 * k * initial_slot_width(k, RoundMode::Secured);
    const std::size_t blocks = (n + kBlockBytes - 1) / kBlockBytes;
    const std::size_t commit = Envelope::kHeaderBytes + 6 + k * blocks * kPointBytes;
    const std::size_t vec = Envelope::kHeaderBytes + 6 + 2 * blocks * kScalarBytes;
    const std::uint64_t per_node = (k - 1) * (commit + 2 * vec);
    CHECK(r.bytes_total == k * per_node);
}

TEST_CASE("direct transmission delivers a short message in the initial round") {
    auto sc = base(4, ModePolicy::FixedSecured);
    sc.node.options.direct_transmission = true;
    sc.messages[3] = {text("tiny")};
    auto r = coordinator_run(sc);
    CHECK(all_delivered(r, text("tiny")));
    for (const auto& n : r.nodes)
        for (const auto& d : n.delivered) CHECK(d.direct);
    CHECK(r.log_text().find("phase=FINAL_ROUND") == std::string::npos);
}

TEST_CASE("deferred validation and precomputation keep the result") {
    auto sc = base(4, ModePolicy::FixedSecured);
    sc.node.options.deferred_validation = true;
    sc.node.options.precompute = true;
    sc.messages[0] = {Bytes(100, 1)};
    auto r = coordinator_run(sc);
    CHECK(all_delivered(r, Bytes(100, 1)));
    CHECK(r.total_ops().commitments_precomputed > 0);

    auto plain = base(4, ModePolicy::FixedSecured);
    plain.messages[0] = {Bytes(100, 1)};
    auto p = coordinator_run(plain);
    CHECK(r.total_ops().commitments_verified * 2 < p.total_ops().commitments_verified + 1);
    CHECK(r.instances[0].runtime() < p.instances[0].runtime());
}

TEST_CASE("slot flooding escalates to secured mode") {
    auto sc = base(4, ModePolicy::Auto);
    sc.attackers[1] = Misbehaviour{Misbehaviour::Kind::FloodSlots};
    sc.messages[0] = {text("after the flood")};
    sc.max_instances = 4;
    auto r = coordinator_run(sc);
    CHECK(all_delivered(r, text("after the flood")));
    std::size_t attack = first_line(r, "mode=SECURED");
    CHECK(attack < r.log.size());
    for (const auto& n : r.nodes) CHECK(n.mode == RoundMode::Secured);
}

TEST_CASE("final round corruption is blamed and the attacker excluded") {
    auto sc = base(4, ModePolicy::FixedSecured);
    sc.attackers[2] = Misbehaviour{Misbehaviour::Kind::CorruptFinal, FaultKind::WrongValue};
    sc.messages[0] = {text("target message")};
    sc.max_instances = 6;
    auto r = coordinator_run(sc);
    CHECK(r.exclusions == 1);
    CHECK(r.nodes[2].excluded);
    CHECK(all_delivered(r, text("target message")));
    std::size_t blame = first_line(r, " blame=");
    std::size_t verdict = first_line(r, "verdict=ATTACKER_CONFIRMED");
    std::size_t excl = first_line(r, "action=EXCLUDE_PEER");
    std::size_t reinit = first_line(r, "action=REINIT_GROUP");
    CHECK(blame < verdict);
    CHECK(verdict < excl);
    CHECK(excl < reinit);
    CHECK(reinit < r.log.size());
}

TEST_CASE("liveness: f attackers are removed within (f+1)*2+f rounds") {
    for (std::size_t f = 1; f <= 2; ++f) {
        CAPTURE(f);
        auto sc = base(6, ModePolicy::FixedSecured);
        for (std::size_t a = 0; a < f; ++a)
            sc.attackers[1 + a] = Misbehaviour{Misbehaviour::Kind::CorruptFinal,
                                               a == 0 ? FaultKind::WrongSlot : FaultKind::WrongValue, 0, 100};
        sc.messages[0] = {text("live")};
        sc.max_instances = 20;
        auto r = coordinator_run(sc);
        CHECK(r.exclusions == f);
        CHECK(all_delivered(r, text("live")));
        CHECK(r.instances.size() + r.exclusions <= (f + 1) * 2 + f);
    }
}

TEST_CASE("a blinding-only fault leaves the message intact and nobody is blamed") {
    auto sc = base(4, ModePolicy::FixedSecured);
    sc.attackers[2] = Misbehaviour{Misbehaviour::Kind::CorruptFinal, FaultKind::WrongBlinding};
    sc.messages[0] = {text("unharmed")};
    auto r = coordinator_run(sc);
    CHECK(all_delivered(r, text("unharmed")));
    CHECK(r.exclusions == 0);
    CHECK(r.log_text().find(" blame=") == std::string::npos);
}

TEST_CASE("modelled crypto matches real crypto on counts and timing") {
    auto real = base(4, ModePolicy::FixedSecured);
    real.messages[1] = {Bytes(64, 3)};
    auto modelled = real;
    modelled.node.crypto = CryptoExecution::Modelled;
    auto a = coordinator_run(real);
    auto b = coordinator_run(modelled);
    CHECK(a.total_ops() == b.total_ops());
    CHECK(a.instances[0].runtime() == b.instances[0].runtime());
}

TEST_CASE("invalid scenarios are rejected") {
    auto sc = base(1, ModePolicy::Auto);
    CHECK_THROWS_AS(coordinator_run(sc), InvalidArgument);
    sc = base(3, ModePolicy::Auto);
    sc.messages[5] = {text("x")};
    CHECK_THROWS_AS(coordinator_run(sc), InvalidArgument);
    sc = base(3, ModePolicy::Auto);
    sc.messages[0] = {Bytes(kDefaultLengthCap + 1, 1)};
    CHECK_THROWS_AS(coordinator_run(sc), LengthCapError);
}

namespace {

struct Silent : Process {
    void on_envelope(Context&, const Envelope&) override {}
    void on_timer(Context&, std::uint64_t) override {}
    std::string describe() const override { return "silent"; }
    bool quiescent() const override { return true; }
};

}  // namespace

TEST_CASE("a silent peer leaves the others stuck in the round") {
    Rng rng(3);
    std::vector<KeyPair> kp;
    std::vector<PublicKey> roster;
    Directory dir;
    for (std::size_t i = 0; i < 3; ++i) {
        kp.push_back(KeyPair::generate(rng));
        roster.push_back(kp[i].pk);
        dir[kp[i].pk] = i;
    }
    Participant a(0, kp[0], roster, NodeConfig{}, 1, dir);
    Participant b(1, kp[1], roster, NodeConfig{}, 2, dir);
    Silent c;
    Simulator sim(NetConfig{}, 3);
    sim.attach(0, &a);
    sim.attach(1, &b);
    sim.attach(2, &c);
    for (std::size_t i = 0; i < 2; ++i) sim.post_timer(i, 0, kTagGroupReady);
    for (std::size_t i = 0; i < 2; ++i) sim.post_timer(i, 1, kTagTick);
    sim.run();
    CHECK_FALSE(a.quiescent());
    CHECK(a.describe().find("phase=INITIAL_ROUND") != std::string::npos);
    CHECK(a.describe().find("shares=2/3") != std::string::npos);
}
