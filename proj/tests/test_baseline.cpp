#include <doctest.h>

#include "dcnet/baseline.hpp"
#include "dcnet/error.hpp"

using namespace dcnet;

TEST_CASE("slot geometry") {
    CHECK(baseline_slot_blocks(512) == 17);   // 514 bytes
    CHECK(baseline_slot_blocks(1024) == 34);  // 1026 bytes
    CHECK(baseline_slot_blocks(29) == 1);
    CHECK(baseline_slot_blocks(30) == 2);
    CHECK(baseline_vector_blocks(4, 512) == 8 * 17);
}

TEST_CASE("non-sender prepares an all-zero vector") {
    Rng rng(1);
    auto p = prepare_baseline(std::nullopt, 0, 4, 512, rng, nullptr);
    CHECK_FALSE(p.slot);
    CHECK(p.payload == Payload::zeros(ArithmeticMode::ModQBlocks, baseline_vector_blocks(4, 512)));
    CHECK(p.slices.sum() == p.payload);
}

TEST_CASE("one sender round-trips through the decoder") {
    Rng rng(2);
    Bytes m(512);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(i * 7);
    auto p = prepare_baseline(m, 9, 3, 512, rng, nullptr);
    auto slots = decode_baseline(p.payload, 3, 512);
    REQUIRE(slots.size() == 6);
    for (std::size_t s = 0; s < 6; ++s) {
        if (s == *p.slot) CHECK(slots[s] == FixedSlot{m, 9});
        else CHECK(slots[s].empty());
    }
}

TEST_CASE("short messages are zero-padded, oversize ones rejected") {
    Rng rng(3);
    auto p = prepare_baseline(Bytes{1, 2, 3}, 1, 2, 40, rng, nullptr);
    auto slots = decode_baseline(p.payload, 2, 40);
    Bytes expected(40, 0);
    expected[0] = 1, expected[1] = 2, expected[2] = 3;
    CHECK(slots[*p.slot].message == expected);
    CHECK_THROWS_AS(prepare_baseline(Bytes(41, 1), 1, 2, 40, rng, nullptr), LengthCapError);
    CHECK_THROWS_AS(prepare_baseline(Bytes(4, 1), 0, 2, 40, rng, nullptr), InvalidArgument);
    CHECK_THROWS_AS(decode_baseline(Payload::zeros(ArithmeticMode::ModQBlocks, 3), 2, 40), DecodeError);
}

TEST_CASE("an out-of-range block marks its slot corrupted and nothing is sent from it") {
    Rng rng(4);
    auto p = prepare_baseline(Bytes{9}, 1, 2, 40, rng, nullptr);
    auto sum = p.payload;
    const std::size_t victim = (*p.slot + 1) % 4;
    sum.blocks()[victim * baseline_slot_blocks(40)] = Scalar{} - Scalar::from_u64(1);
    auto slots = decode_baseline(sum, 2, 40);
    CHECK(slots[victim].corrupted);
    CHECK(slots[victim].empty());
    CHECK(slots[*p.slot].target == 1);
    auto sched = transmit_to_target(slots, 40, {{1, 2}});
    CHECK(sched.sends.size() == 2);
    CHECK(sched.unknown_groups.empty());
}

TEST_CASE("commitment count per node is 2k slots times k rows") {
    Rng rng(4);
    for (std::size_t k : {2, 3, 5}) {
        CryptoOps ops(CryptoExecution::Modelled);
        prepare_baseline(std::nullopt, 0, k, 100, rng, &ops);
        CHECK(ops.counters().commitments_generated == k * baseline_vector_blocks(k, 100));
    }
}

TEST_CASE("transmission schedule") {
    std::vector<FixedSlot> slots(6);
    CHECK(transmit_to_target(slots, 8, {{1, 3}}).sends.empty());
    slots[4] = FixedSlot{Bytes(8, 5), 1};
    auto t = transmit_to_target(slots, 8, {{1, 3}});
    CHECK(t.sends.size() == 3);  // per local member
    for (const auto& u : t.sends) CHECK(u.frame.size() == 10);
    slots[1] = FixedSlot{Bytes(8, 6), 7};
    t = transmit_to_target(slots, 8, {{1, 3}});
    CHECK(t.sends.size() == 3);
    CHECK(t.unknown_groups == std::vector<std::uint16_t>{7});
}

TEST_CASE("one occupied slot between two groups of three makes 9 unicasts") {
    BaselineScenario sc;
    sc.k = 3;
    sc.target_size = 3;
    sc.l_fix = 64;
    sc.messages[1] = Bytes(64, 0x42);
    sc.seed = 5;
    auto r = run_baseline(sc);
    std::size_t frames = 0;
    for (const auto& f : r.received) {
        frames += f.size();
        for (const auto& b : f) CHECK(Bytes(b.begin(), b.begin() + 64) == Bytes(64, 0x42));
    }
    CHECK(frames == 9);
    CHECK(r.bytes_transmit == 9 * (64 + 2 + Envelope::kHeaderBytes));
    for (const auto& d : r.decoded) CHECK(d == r.decoded.front());
}

TEST_CASE("group round bytes follow the frame sizes") {
    BaselineScenario sc;
    sc.k = 4;
    sc.l_fix = 200;
    sc.crypto = CryptoExecution::Modelled;
    sc.messages[0] = Bytes(100, 1);
    auto r = run_baseline(sc);
    const std::size_t b = baseline_vector_blocks(4, 200);
    const std::uint64_t commit = Envelope::kHeaderBytes + 6 + 4 * b * kPointBytes;
    const std::uint64_t vec = Envelope::kHeaderBytes + 6 + 2 * b * kScalarBytes;
    CHECK(r.bytes_total - r.bytes_transmit == 4 * 3 * (commit + 2 * vec));
    CHECK(r.bytes_transmit == 1 * 4 * 4 * (200 + 2 + Envelope::kHeaderBytes));
    CHECK(r.ops.commitments_generated == 4 * 4 * b);
    // pairwise (k-1), all aggregates (k) and the global result (1) per node
    CHECK(r.ops.commitments_verified == 4 * (3 + 4 + 1) * b);
}
