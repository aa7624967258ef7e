#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>

#include "dcnet/bytes.hpp"
#include "dcnet/rng.hpp"

struct ec_point_st;

namespace dcnet {

inline constexpr std::size_t kScalarBytes = 32;
inline constexpr std::size_t kPointBytes = 33;
inline constexpr std::size_t kBlockBytes = 31;
inline constexpr std::size_t kSeedBytes = 32;
// Sealed box: ephemeral public key (32) + MAC (16) + seed (32).
inline constexpr std::size_t kSealedSeedBytes = 80;

// Element of Z_q where q is the order of secp256k1.
class Scalar {
public:
    using Limbs = std::array<std::uint64_t, 4>;  // little-endian 64-bit limbs

    Scalar() = default;

    static Scalar from_u64(std::uint64_t v);
    // 32-byte big-endian; throws RangeError when the value is >= q.
    static Scalar from_bytes(ByteView be);
    // Big-endian integer of any length, reduced mod q.
    static Scalar reduce(ByteView be);
    static Scalar random(Rng& rng);
    static const Scalar& order_minus_one();

    std::array<std::uint8_t, kScalarBytes> to_bytes() const;
    bool is_zero() const { return limbs_ == Limbs{}; }
    const Limbs& limbs() const { return limbs_; }

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    Scalar operator-() const { return Scalar{} - *this; }

    friend bool operator==(const Scalar&, const Scalar&) = default;

private:
    Limbs limbs_{};
};

// Point on secp256k1, identity included.
class GroupElement {
public:
    GroupElement();  // identity
    GroupElement(const GroupElement& o);
    GroupElement& operator=(const GroupElement& o);
    GroupElement(GroupElement&&) noexcept = default;
    GroupElement& operator=(GroupElement&&) noexcept = default;
    ~GroupElement();

    static GroupElement generator();
    // 33-byte SEC1 compressed form; the identity is 33 zero bytes.
    static GroupElement decode(ByteView encoded);
    std::array<std::uint8_t, kPointBytes> encode() const;

    bool is_identity() const;
    GroupElement scalar_mul(const Scalar& k) const;

    GroupElement& operator+=(const GroupElement& o);
    friend GroupElement operator+(GroupElement a, const GroupElement& b) { return a += b; }
    bool operator==(const GroupElement& o) const;

    const ec_point_st* raw() const { return p_.get(); }
    ec_point_st* raw() { return p_.get(); }

private:
    struct Free {
        void operator()(ec_point_st* p) const;
    };
    std::unique_ptr<ec_point_st, Free> p_;
};

// Pedersen commitment blinding*H + value*G.
struct Commitment {
    GroupElement element;

    Commitment& operator+=(const Commitment& o) {
        element += o.element;
        return *this;
    }
    friend Commitment operator+(Commitment a, const Commitment& b) { return a += b; }
    bool operator==(const Commitment&) const = default;
};

struct Seed {
    std::array<std::uint8_t, kSeedBytes> bytes{};

    static Seed random(Rng& rng);
    bool operator==(const Seed&) const = default;
};

struct SealedSeed {
    std::array<std::uint8_t, kSealedSeedBytes> ciphertext{};
    bool operator==(const SealedSeed&) const = default;
};

struct PublicKey {
    std::array<std::uint8_t, 32> bytes{};
    auto operator<=>(const PublicKey&) const = default;
};

struct SecretKey {
    std::array<std::uint8_t, 32> bytes{};
};

struct KeyPair {
    PublicKey pk;
    SecretKey sk;

    static KeyPair generate(Rng& rng);
};

Commitment commit(const Scalar& value, const Scalar& blinding);
bool verify_commitment(const Commitment& c, const Scalar& value, const Scalar& blinding);

// Hash-to-curve of a fixed domain string (try-and-increment, even y).
GroupElement derive_generator_h();
// Cached result of derive_generator_h().
const GroupElement& generator_h();
// Domain string and counter that produced H; exposed for independent checks.
inline constexpr char kGeneratorHDomain[] = "dcnet/pedersen/generator-H/v1";

// Keyed PRF over a 32-bit counter: HMAC-SHA512(seed, "blind" || index) mod q.
Scalar blinding_stream(const Seed& seed, std::uint32_t index);

// Deterministic sealed box: the ephemeral key is derived from the seed and the
// recipient, so anybody who learns the seed can re-seal and compare. Output is
// compatible with libsodium's crypto_box_seal_open.
SealedSeed seal(const PublicKey& recipient, const Seed& seed);
// Throws AuthenticationError for a wrong key or a tampered ciphertext.
Seed open(const SecretKey& sk, const SealedSeed& sealed);
PublicKey public_key_of(const SecretKey& sk);

// Big-endian embedding of a 31-byte block into Z_q.
Scalar embed_block(ByteView block);
// Throws RangeError when the scalar is >= 2^248.
std::array<std::uint8_t, kBlockBytes> extract_block(const Scalar& s);

}  // namespace dcnet
