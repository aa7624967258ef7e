#include <doctest.h>

#include "dcnet/blame.hpp"
#include "dcnet/error.hpp"
#include "round_harness.hpp"

using namespace dcnet;

namespace {

// One secured protocol instance with a single sender (participant 0) and an
// optional misbehaving participant tampering with the sender's reservation.
struct Instance {
    std::vector<KeyPair> keys;
    std::vector<PublicKey> roster;
    InitialPreparation sender;
    std::vector<LengthAnnouncement> anns;
    Layout layout;
    std::vector<CommitmentMatrix> commitments;
    Payload result;
    Bytes message;
};

Instance run_instance(std::size_t k, std::size_t msg_len, std::optional<std::size_t> attacker, FaultKind fault,
                      std::size_t fault_offset, Rng& rng, CryptoOps& ops) {
    Instance in;
    for (std::size_t i = 0; i < k; ++i) {
        in.keys.push_back(KeyPair::generate(rng));
        in.roster.push_back(in.keys.back().pk);
    }
    in.message.resize(msg_len);
    rng.fill(in.message);

    std::vector<SliceMatrix> rows;
    for (std::size_t i = 0; i < k; ++i) {
        auto p = prepare_initial(i == 0 ? InitialIntent::announce(msg_len) : InitialIntent::none(), in.roster,
                                 {RoundMode::Secured}, rng, nullptr);
        if (i == 0) in.sender = p;
        rows.push_back(p.slices);
    }
    in.anns = decode_initial_result(dcnet::testing::run_round(rows).result.sum, k, RoundMode::Secured);
    in.layout = *compute_layout(in.anns);

    std::vector<SliceMatrix> finals;
    for (std::size_t i = 0; i < k; ++i) {
        auto opened = open_slot_seeds(in.anns, i, in.keys[i].sk);
        std::optional<OwnMessage> own;
        if (i == 0) own = OwnMessage{in.sender.r, in.message};
        auto prep = prepare_final(own, in.layout, opened, k, RoundMode::Secured, rng, &ops);
        if (attacker && *attacker == i) inject_fault(prep, fault, fault_offset, rng, &ops);
        finals.push_back(prep.slices);
        in.commitments.push_back(*prep.commitments);
    }
    in.result = dcnet::testing::run_round(finals).result.sum;
    return in;
}

InstanceRecord record_of(const Instance& in, std::uint32_t instance) {
    return {instance, in.roster, in.anns, in.layout, in.commitments};
}

}  // namespace

TEST_CASE("blame message encoding") {
    Rng rng(21);
    auto b = build_blame(7, Seed::random(rng), 3, 2);
    auto enc = b.encode();
    CHECK(enc.size() == BlameMessage::kEncodedBytes);
    CHECK(BlameMessage::decode(enc) == b);
    enc.pop_back();
    CHECK_THROWS_AS(BlameMessage::decode(enc), DecodeError);
    CHECK_THROWS_AS(build_blame(1, Seed{}, 0, 0), InvalidArgument);
    CHECK(carrier_capacity(2, RoundMode::Secured) >= BlameMessage::kEncodedBytes);
}

TEST_CASE("fault matrix: the owner names the attacker and the blame is upheld") {
    Rng rng(22);
    CryptoOps ops;
    for (std::size_t k : {3, 4, 6}) {
        for (auto fault : {FaultKind::WrongValue, FaultKind::WrongBlinding, FaultKind::WrongSlot}) {
            for (std::size_t attacker = 1; attacker < k; ++attacker) {
                for (std::size_t offset : {std::size_t{0}, std::size_t{40}}) {
                    auto in = run_instance(k, 62, attacker, fault, offset, rng, ops);
                    auto extracted = extract_messages(in.result, in.layout);
                    if (fault != FaultKind::WrongBlinding) CHECK(detect_collision(in.message, extracted, in.sender.r));

                    auto slot = *in.sender.slot;
                    auto accused = verify_zero_commitments(slot, in.sender.seeds, in.commitments, in.layout, 0, ops);
                    REQUIRE(accused == attacker);

                    InstanceArchive archive;
                    archive.put(record_of(in, 5));
                    auto blame = build_blame(*accused, in.sender.seeds[*accused], slot, 1);
                    auto v = validate_blame(BlameMessage::decode(blame.encode()), 6, archive, ops);
                    CHECK(v == Verdict{VerdictOutcome::AttackerConfirmed, attacker});
                }
            }
        }
    }
}

TEST_CASE("false blames are rejected") {
    Rng rng(23);
    CryptoOps ops;
    auto in = run_instance(4, 100, std::nullopt, FaultKind::None, 0, rng, ops);
    auto slot = *in.sender.slot;
    CHECK_FALSE(verify_zero_commitments(slot, in.sender.seeds, in.commitments, in.layout, 0, ops));

    InstanceArchive archive;
    archive.put(record_of(in, 9));
    // honest peer, correct seed
    auto v = validate_blame(build_blame(2, in.sender.seeds[2], slot, 1), 10, archive, ops);
    CHECK(v.outcome == VerdictOutcome::BlameInvalid);
    // seed that does not match the announced ciphertext
    v = validate_blame(build_blame(2, Seed::random(rng), slot, 1), 10, archive, ops);
    CHECK(v.outcome == VerdictOutcome::BlameInvalid);
    // seed of another peer
    v = validate_blame(build_blame(2, in.sender.seeds[3], slot, 1), 10, archive, ops);
    CHECK(v.outcome == VerdictOutcome::BlameInvalid);
    // slot without a reservation, accused out of range
    v = validate_blame(build_blame(2, in.sender.seeds[2], slot ^ 1, 1), 10, archive, ops);
    CHECK(v.outcome == VerdictOutcome::BlameInvalid);
    v = validate_blame(build_blame(9, in.sender.seeds[2], slot, 1), 10, archive, ops);
    CHECK(v.outcome == VerdictOutcome::BlameInvalid);
}

TEST_CASE("a seed mismatch cannot frame an attacker's victim") {
    Rng rng(24);
    CryptoOps ops;
    auto in = run_instance(3, 50, 1, FaultKind::WrongBlinding, 0, rng, ops);
    InstanceArchive archive;
    archive.put(record_of(in, 0));
    auto slot = *in.sender.slot;
    CHECK(validate_blame(build_blame(1, in.sender.seeds[1], slot, 1), 1, archive, ops).outcome ==
          VerdictOutcome::AttackerConfirmed);
    CHECK(validate_blame(build_blame(1, Seed::random(rng), slot, 1), 1, archive, ops).outcome ==
          VerdictOutcome::BlameInvalid);
}

TEST_CASE("adjudication needs the referenced instance") {
    Rng rng(25);
    CryptoOps ops;
    auto in = run_instance(3, 10, std::nullopt, FaultKind::None, 0, rng, ops);
    InstanceArchive archive(2);
    auto b = build_blame(1, in.sender.seeds[1], *in.sender.slot, 1);
    CHECK_THROWS_AS(validate_blame(b, 1, archive, ops), CannotAdjudicate);
    archive.put(record_of(in, 0));
    CHECK_NOTHROW(validate_blame(b, 1, archive, ops));
    b.round_offset = 5;
    CHECK_THROWS_AS(validate_blame(b, 3, archive, ops), CannotAdjudicate);
    archive.put(record_of(in, 1));
    archive.put(record_of(in, 2));
    CHECK(archive.size() == 2);
    b.round_offset = 1;
    CHECK_THROWS_AS(validate_blame(b, 1, archive, ops), CannotAdjudicate);

    auto rec = record_of(in, 7);
    rec.final_commitments.clear();
    archive.put(rec);
    CHECK_THROWS_AS(validate_blame(b, 8, archive, ops), CannotAdjudicate);
}

TEST_CASE("verify_zero_commitments needs the matrices") {
    Rng rng(26);
    CryptoOps ops;
    auto in = run_instance(3, 10, std::nullopt, FaultKind::None, 0, rng, ops);
    auto slot = *in.sender.slot;
    CHECK_THROWS_AS(verify_zero_commitments(slot, in.sender.seeds, {}, in.layout, 0, ops), CannotVerify);
    CHECK_THROWS_AS(verify_zero_commitments(slot ^ 1, in.sender.seeds, in.commitments, in.layout, 0, ops),
                    CannotVerify);
    auto truncated = in.commitments;
    truncated[1] = placeholder_commitments(3, 5);
    CHECK_THROWS_AS(verify_zero_commitments(slot, in.sender.seeds, truncated, in.layout, 0, ops), CannotVerify);
}

TEST_CASE("honest rounds never produce a blame") {
    Rng rng(27);
    CryptoOps ops;
    const int rounds = 10000;
    int blames = 0;
    for (int i = 0; i < rounds; ++i) {
        auto in = run_instance(2, 1 + rng.uniform(40), std::nullopt, FaultKind::None, 0, rng, ops);
        auto extracted = extract_messages(in.result, in.layout);
        if (detect_collision(in.message, extracted, in.sender.r)) ++blames;
        if (verify_zero_commitments(*in.sender.slot, in.sender.seeds, in.commitments, in.layout, 0, ops)) ++blames;
    }
    CHECK(blames == 0);
}
