#include <doctest.h>

#include "dcnet/crypto.hpp"
#include "dcnet/error.hpp"

using namespace dcnet;

namespace {
// Frozen from tests/oracles/secp256k1_oracle.py (pure-Python double-and-add).
constexpr const char* kOracleH = "02a2c70161569f7783083bdea159f4667ee592aa6af361644d180c9cdd7254fb3a";
constexpr const char* kOracleCommit57 = "03a0baae9751e3d70b94ecc6a21ee629787f48c38b6ea15ba1dd789e9d3a0b5560";
constexpr const char* kOracleCommitBig = "033674a120d62152378719eeff68956bdef477d311985c1af74e8039684b5e7c6d";
constexpr const char* kOracleBlind0 = "817cae43358ab3d29164838ea270a66c725b203d456ec846ccd5f193cf804c8a";
constexpr const char* kOracleBlind7 = "fa3d4dfe83986cf0feff51ab766af151beb26e3e20036e21d8d8297232c4ce1f";

Scalar scalar_hex(const char* hex) { return Scalar::from_bytes(from_hex(hex)); }
}  // namespace

TEST_CASE("scalar arithmetic wraps at the group order") {
    const auto& top = Scalar::order_minus_one();
    CHECK((top + Scalar::from_u64(1)).is_zero());
    CHECK(Scalar{} - Scalar::from_u64(1) == top);
    CHECK(-Scalar::from_u64(5) + Scalar::from_u64(5) == Scalar{});
    CHECK(top + top == top - Scalar::from_u64(1));

    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        auto a = Scalar::random(rng), b = Scalar::random(rng);
        CHECK(a + b - b == a);
        CHECK(a + b == b + a);
        CHECK(Scalar::from_bytes(a.to_bytes()) == a);
    }
}

TEST_CASE("scalar decoding rejects values at or above q") {
    auto q_bytes = from_hex("fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141");
    CHECK_THROWS_AS(Scalar::from_bytes(q_bytes), RangeError);
    CHECK_THROWS_AS(Scalar::from_bytes(Bytes(31, 0)), InvalidArgument);
    CHECK(Scalar::reduce(q_bytes).is_zero());
}

TEST_CASE("commit(0, 0) is the identity") {
    auto c = commit(Scalar{}, Scalar{});
    CHECK(c.element.is_identity());
    CHECK(to_hex(c.element.encode()) == std::string(66, '0'));
}

TEST_CASE("commitments match the independent double-and-add oracle") {
    CHECK(to_hex(commit(Scalar::from_u64(5), Scalar::from_u64(7)).element.encode()) == kOracleCommit57);
    CHECK(to_hex(commit(Scalar{}, Scalar::from_u64(1)).element.encode()) == kOracleH);

    auto v = Scalar::order_minus_one() - Scalar::from_u64(2);
    auto r = scalar_hex("1234567890abcdef1234567890abcdef1234567890abcdef1234567890abcdef");
    CHECK(to_hex(commit(v, r).element.encode()) == kOracleCommitBig);

    // generic scalar multiplication agrees with the fixed-base tables
    auto generic = generator_h().scalar_mul(Scalar::from_u64(7)) + GroupElement::generator().scalar_mul(Scalar::from_u64(5));
    CHECK(generic == commit(Scalar::from_u64(5), Scalar::from_u64(7)).element);
}

TEST_CASE("homomorphism over 1000 random tuples") {
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        auto x1 = Scalar::random(rng), r1 = Scalar::random(rng);
        auto x2 = Scalar::random(rng), r2 = Scalar::random(rng);
        REQUIRE(commit(x1, r1) + commit(x2, r2) == commit(x1 + x2, r1 + r2));
    }
}

TEST_CASE("verify_commitment binds value and blinding") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        auto x = Scalar::random(rng), r = Scalar::random(rng);
        auto c = commit(x, r);
        CHECK(verify_commitment(c, x, r));
        CHECK_FALSE(verify_commitment(c, x + Scalar::from_u64(1), r));
        auto r2 = Scalar::random(rng);
        CHECK_FALSE(verify_commitment(commit(Scalar{}, r), Scalar{}, r2));
        CHECK_FALSE(verify_commitment(c, Scalar::random(rng), Scalar::random(rng)));
    }
}

TEST_CASE("generator H is deterministic and nothing-up-my-sleeve") {
    auto h1 = derive_generator_h();
    auto h2 = derive_generator_h();
    CHECK(h1 == h2);
    CHECK_FALSE(h1 == GroupElement::generator());
    CHECK_FALSE(h1.is_identity());
    CHECK(to_hex(h1.encode()) == kOracleH);
}

TEST_CASE("group element encoding round-trips") {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        auto c = commit(Scalar::random(rng), Scalar::random(rng));
        auto enc = c.element.encode();
        CHECK(GroupElement::decode(enc) == c.element);
    }
    CHECK(GroupElement::decode(Bytes(33, 0)).is_identity());
    auto bad = from_hex(kOracleH);
    bad[0] = 0x05;
    CHECK_THROWS_AS(GroupElement::decode(bad), DecodeError);
}

TEST_CASE("blinding stream is a deterministic keyed PRF") {
    Seed s;
    s.bytes.fill(0x11);
    CHECK(to_hex(blinding_stream(s, 0).to_bytes()) == kOracleBlind0);
    CHECK(to_hex(blinding_stream(s, 7).to_bytes()) == kOracleBlind7);
    CHECK(blinding_stream(s, 3) == blinding_stream(s, 3));
    CHECK_FALSE(blinding_stream(s, 3) == blinding_stream(s, 4));

    Rng rng(11);
    int disagreements = 0;
    for (int i = 0; i < 100; ++i) {
        auto a = Seed::random(rng), b = Seed::random(rng);
        if (!(blinding_stream(a, 0) == blinding_stream(b, 0))) ++disagreements;
    }
    CHECK(disagreements == 100);
}

TEST_CASE("seal and open") {
    Rng rng(5);
    auto alice = KeyPair::generate(rng);
    auto mallory = KeyPair::generate(rng);
    CHECK(public_key_of(alice.sk) == alice.pk);

    for (int i = 0; i < 100; ++i) {
        auto seed = Seed::random(rng);
        auto sealed = seal(alice.pk, seed);
        REQUIRE(sealed.ciphertext.size() == kSealedSeedBytes);
        REQUIRE(open(alice.sk, sealed) == seed);
    }

    auto seed = Seed::random(rng);
    auto sealed = seal(alice.pk, seed);
    CHECK(seal(alice.pk, seed) == sealed);  // deterministic, re-sealable by seed holders
    CHECK_FALSE(seal(mallory.pk, seed) == sealed);
    CHECK_THROWS_AS(open(mallory.sk, sealed), AuthenticationError);

    for (std::size_t byte : {0u, 33u, 47u, 79u}) {
        auto tampered = sealed;
        tampered.ciphertext[byte] ^= 0x01;
        CHECK_THROWS_AS(open(alice.sk, tampered), AuthenticationError);
    }
}

TEST_CASE("31-byte block embedding") {
    CHECK(embed_block(Bytes(31, 0)).is_zero());
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        Bytes b(31);
        rng.fill(b);
        auto s = embed_block(b);
        auto back = extract_block(s);
        REQUIRE(Bytes(back.begin(), back.end()) == b);
    }
    Bytes one(31, 0);
    one[30] = 1;
    CHECK(embed_block(one) == Scalar::from_u64(1));
    CHECK_THROWS_AS(extract_block(Scalar::order_minus_one()), RangeError);
    CHECK_THROWS_AS(embed_block(Bytes(32, 0)), InvalidArgument);
}
