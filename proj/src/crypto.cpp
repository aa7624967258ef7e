#include "dcnet/crypto.hpp"

#define OPENSSL_SUPPRESS_DEPRECATED
#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>
#include <sodium.h>

#include <cstring>
#include <stdexcept>
#include <vector>

#include "dcnet/error.hpp"

namespace dcnet {

namespace {

constexpr Scalar::Limbs kOrder = {0xBFD25E8CD0364141ULL, 0xBAAEDCE6AF48A03BULL,
                                  0xFFFFFFFFFFFFFFFEULL, 0xFFFFFFFFFFFFFFFFULL};

using u128 = unsigned __int128;

bool geq(const Scalar::Limbs& a, const Scalar::Limbs& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return true;
}

// a -= b, returns borrow
std::uint64_t sub_limbs(Scalar::Limbs& a, const Scalar::Limbs& b) {
    std::uint64_t borrow = 0;
    for (int i = 0; i < 4; ++i) {
        u128 d = u128{a[i]} - b[i] - borrow;
        a[i] = static_cast<std::uint64_t>(d);
        borrow = static_cast<std::uint64_t>(d >> 64) & 1;
    }
    return borrow;
}

std::uint64_t add_limbs(Scalar::Limbs& a, const Scalar::Limbs& b) {
    std::uint64_t carry = 0;
    for (int i = 0; i < 4; ++i) {
        u128 s = u128{a[i]} + b[i] + carry;
        a[i] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
    }
    return carry;
}

Scalar::Limbs limbs_from_be(ByteView be) {
    Scalar::Limbs l{};
    for (int i = 0; i < 32; ++i) l[3 - i / 8] = (l[3 - i / 8] << 8) | be[i];
    return l;
}

void ensure_sodium() {
    static const bool ok = sodium_init() >= 0;
    if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

const EC_GROUP* curve() {
    static const EC_GROUP* g = [] {
        auto* grp = EC_GROUP_new_by_curve_name(NID_secp256k1);
        if (!grp) throw std::runtime_error("secp256k1 unavailable in libcrypto");
        return grp;
    }();
    return g;
}

BN_CTX* bn_ctx() {
    struct Holder {
        BN_CTX* ctx = BN_CTX_new();
        ~Holder() { BN_CTX_free(ctx); }
    };
    thread_local Holder h;
    return h.ctx;
}

struct BnFree {
    void operator()(BIGNUM* b) const { BN_clear_free(b); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnFree>;

BnPtr to_bn(const Scalar& s) {
    auto bytes = s.to_bytes();
    return BnPtr(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr));
}

void check(int ok, const char* what) {
    if (ok != 1) throw std::runtime_error(std::string("libcrypto failure: ") + what);
}

// Fixed-base table with 8-bit windows: entry[w][d-1] = d * 256^w * P.
class FixedBaseTable {
public:
    explicit FixedBaseTable(const GroupElement& base) {
        const auto* grp = curve();
        auto* ctx = bn_ctx();
        points_.reserve(32 * 255);
        EC_POINT* window_base = EC_POINT_dup(base.raw(), grp);
        for (int w = 0; w < 32; ++w) {
            EC_POINT* acc = EC_POINT_dup(window_base, grp);
            points_.push_back(acc);
            for (int d = 2; d <= 255; ++d) {
                EC_POINT* next = EC_POINT_new(grp);
                check(EC_POINT_add(grp, next, points_.back(), window_base, ctx), "table add");
                points_.push_back(next);
            }
            check(EC_POINT_add(grp, window_base, points_.back(), window_base, ctx), "table base");
        }
        EC_POINT_free(window_base);
        check(EC_POINTs_make_affine(grp, points_.size(), points_.data(), ctx), "make affine");
    }

    ~FixedBaseTable() {
        for (auto* p : points_) EC_POINT_free(p);
    }

    FixedBaseTable(const FixedBaseTable&) = delete;
    FixedBaseTable& operator=(const FixedBaseTable&) = delete;

    void accumulate(EC_POINT* acc, const std::array<std::uint8_t, 32>& be) const {
        const auto* grp = curve();
        auto* ctx = bn_ctx();
        for (int w = 0; w < 32; ++w) {
            std::uint8_t digit = be[31 - w];
            if (digit == 0) continue;
            check(EC_POINT_add(grp, acc, acc, points_[w * 255 + digit - 1], ctx), "comb add");
        }
    }

private:
    std::vector<EC_POINT*> points_;
};

const FixedBaseTable& table_g() {
    static const FixedBaseTable t(GroupElement::generator());
    return t;
}

const FixedBaseTable& table_h() {
    static const FixedBaseTable t(generator_h());
    return t;
}

}  // namespace

// ---- Scalar -----------------------------------------------------------------

Scalar Scalar::from_u64(std::uint64_t v) {
    Scalar s;
    s.limbs_[0] = v;
    return s;
}

Scalar Scalar::from_bytes(ByteView be) {
    if (be.size() != kScalarBytes) throw InvalidArgument("scalar encoding must be 32 bytes");
    Scalar s;
    s.limbs_ = limbs_from_be(be);
    if (geq(s.limbs_, kOrder)) throw RangeError("scalar encoding is not below the group order");
    return s;
}

Scalar Scalar::reduce(ByteView be) {
    BnPtr v(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr));
    BnPtr r(BN_new());
    check(BN_nnmod(r.get(), v.get(), EC_GROUP_get0_order(curve()), bn_ctx()), "reduce");
    std::array<std::uint8_t, 32> out{};
    check(BN_bn2binpad(r.get(), out.data(), 32) == 32 ? 1 : 0, "bn2bin");
    Scalar s;
    s.limbs_ = limbs_from_be(out);
    return s;
}

Scalar Scalar::random(Rng& rng) {
    std::array<std::uint8_t, 32> buf;
    for (;;) {
        rng.fill(buf);
        auto l = limbs_from_be(buf);
        if (!geq(l, kOrder)) {
            Scalar s;
            s.limbs_ = l;
            return s;
        }
    }
}

const Scalar& Scalar::order_minus_one() {
    static const Scalar s = [] {
        Scalar x;
        x.limbs_ = kOrder;
        x.limbs_[0] -= 1;
        return x;
    }();
    return s;
}

std::array<std::uint8_t, kScalarBytes> Scalar::to_bytes() const {
    std::array<std::uint8_t, kScalarBytes> out{};
    for (int i = 0; i < 32; ++i)
        out[i] = static_cast<std::uint8_t>(limbs_[3 - i / 8] >> (8 * (7 - i % 8)));
    return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    auto carry = add_limbs(limbs_, o.limbs_);
    if (carry || geq(limbs_, kOrder)) sub_limbs(limbs_, kOrder);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    if (sub_limbs(limbs_, o.limbs_)) add_limbs(limbs_, kOrder);
    return *this;
}

// ---- GroupElement -------------------------------------------------------------

void GroupElement::Free::operator()(ec_point_st* p) const { EC_POINT_free(p); }

GroupElement::GroupElement() : p_(EC_POINT_new(curve())) {
    check(EC_POINT_set_to_infinity(curve(), p_.get()), "infinity");
}

GroupElement::GroupElement(const GroupElement& o) : p_(EC_POINT_dup(o.p_.get(), curve())) {}

GroupElement& GroupElement::operator=(const GroupElement& o) {
    if (this != &o) {
        if (!p_) p_.reset(EC_POINT_new(curve()));
        check(EC_POINT_copy(p_.get(), o.p_.get()), "copy");
    }
    return *this;
}

GroupElement::~GroupElement() = default;

GroupElement GroupElement::generator() {
    GroupElement g;
    check(EC_POINT_copy(g.p_.get(), EC_GROUP_get0_generator(curve())), "generator");
    return g;
}

GroupElement GroupElement::decode(ByteView encoded) {
    if (encoded.size() != kPointBytes) throw DecodeError("group element encoding must be 33 bytes");
    GroupElement e;
    bool all_zero = true;
    for (auto b : encoded) all_zero = all_zero && b == 0;
    if (all_zero) return e;
    if (EC_POINT_oct2point(curve(), e.p_.get(), encoded.data(), encoded.size(), bn_ctx()) != 1)
        throw DecodeError("invalid compressed point");
    return e;
}

std::array<std::uint8_t, kPointBytes> GroupElement::encode() const {
    std::array<std::uint8_t, kPointBytes> out{};
    if (is_identity()) return out;
    auto n = EC_POINT_point2oct(curve(), p_.get(), POINT_CONVERSION_COMPRESSED, out.data(),
                                out.size(), bn_ctx());
    check(n == kPointBytes ? 1 : 0, "point2oct");
    return out;
}

bool GroupElement::is_identity() const { return EC_POINT_is_at_infinity(curve(), p_.get()) == 1; }

GroupElement GroupElement::scalar_mul(const Scalar& k) const {
    GroupElement out;
    auto bn = to_bn(k);
    check(EC_POINT_mul(curve(), out.p_.get(), nullptr, p_.get(), bn.get(), bn_ctx()), "mul");
    return out;
}

GroupElement& GroupElement::operator+=(const GroupElement& o) {
    check(EC_POINT_add(curve(), p_.get(), p_.get(), o.p_.get(), bn_ctx()), "add");
    return *this;
}

bool GroupElement::operator==(const GroupElement& o) const {
    return EC_POINT_cmp(curve(), p_.get(), o.p_.get(), bn_ctx()) == 0;
}

// ---- commitments ------------------------------------------------------------------

GroupElement derive_generator_h() {
    ensure_sodium();
    const std::size_t dlen = sizeof(kGeneratorHDomain) - 1;
    for (std::uint32_t counter = 0;; ++counter) {
        Bytes msg(kGeneratorHDomain, kGeneratorHDomain + dlen);
        put_u32(msg, counter);
        std::array<std::uint8_t, kPointBytes> candidate{};
        candidate[0] = 0x02;
        crypto_hash_sha256(candidate.data() + 1, msg.data(), msg.size());
        GroupElement e;
        if (EC_POINT_oct2point(curve(), e.raw(), candidate.data(), candidate.size(), bn_ctx()) == 1)
            return e;
    }
}

const GroupElement& generator_h() {
    static const GroupElement h = derive_generator_h();
    return h;
}

Commitment commit(const Scalar& value, const Scalar& blinding) {
    Commitment c;
    table_g().accumulate(c.element.raw(), value.to_bytes());
    table_h().accumulate(c.element.raw(), blinding.to_bytes());
    return c;
}

bool verify_commitment(const Commitment& c, const Scalar& value, const Scalar& blinding) {
    return commit(value, blinding) == c;
}

Scalar blinding_stream(const Seed& seed, std::uint32_t index) {
    ensure_sodium();
    std::uint8_t msg[9] = {'b', 'l', 'i', 'n', 'd'};
    msg[5] = static_cast<std::uint8_t>(index >> 24);
    msg[6] = static_cast<std::uint8_t>(index >> 16);
    msg[7] = static_cast<std::uint8_t>(index >> 8);
    msg[8] = static_cast<std::uint8_t>(index);
    std::array<std::uint8_t, crypto_auth_hmacsha512_BYTES> mac;
    crypto_auth_hmacsha512(mac.data(), msg, sizeof(msg), seed.bytes.data());
    return Scalar::reduce(mac);
}

// ---- seeds and sealing ----------------------------------------------------------

Seed Seed::random(Rng& rng) {
    Seed s;
    rng.fill(s.bytes);
    return s;
}

KeyPair KeyPair::generate(Rng& rng) {
    ensure_sodium();
    std::array<std::uint8_t, crypto_box_SEEDBYTES> seed;
    rng.fill(seed);
    KeyPair kp;
    crypto_box_seed_keypair(kp.pk.bytes.data(), kp.sk.bytes.data(), seed.data());
    sodium_memzero(seed.data(), seed.size());
    return kp;
}

PublicKey public_key_of(const SecretKey& sk) {
    ensure_sodium();
    PublicKey pk;
    crypto_scalarmult_base(pk.bytes.data(), sk.bytes.data());
    return pk;
}

SealedSeed seal(const PublicKey& recipient, const Seed& seed) {
    ensure_sodium();
    static_assert(kSealedSeedBytes == crypto_box_SEALBYTES + kSeedBytes);
    static constexpr char domain[] = "dcnet/seal/ephemeral/v1";

    std::array<std::uint8_t, crypto_box_SECRETKEYBYTES> esk;
    crypto_generichash_state st;
    crypto_generichash_init(&st, nullptr, 0, esk.size());
    crypto_generichash_update(&st, reinterpret_cast<const std::uint8_t*>(domain), sizeof(domain) - 1);
    crypto_generichash_update(&st, seed.bytes.data(), seed.bytes.size());
    crypto_generichash_update(&st, recipient.bytes.data(), recipient.bytes.size());
    crypto_generichash_final(&st, esk.data(), esk.size());

    SealedSeed out;
    auto* epk = out.ciphertext.data();
    crypto_scalarmult_base(epk, esk.data());

    // same nonce derivation as crypto_box_seal
    std::array<std::uint8_t, crypto_box_NONCEBYTES> nonce;
    crypto_generichash_init(&st, nullptr, 0, nonce.size());
    crypto_generichash_update(&st, epk, crypto_box_PUBLICKEYBYTES);
    crypto_generichash_update(&st, recipient.bytes.data(), recipient.bytes.size());
    crypto_generichash_final(&st, nonce.data(), nonce.size());

    if (crypto_box_easy(epk + crypto_box_PUBLICKEYBYTES, seed.bytes.data(), seed.bytes.size(),
                        nonce.data(), recipient.bytes.data(), esk.data()) != 0)
        throw InvalidArgument("sealing failed: unusable recipient key");
    sodium_memzero(esk.data(), esk.size());
    return out;
}

Seed open(const SecretKey& sk, const SealedSeed& sealed) {
    ensure_sodium();
    auto pk = public_key_of(sk);
    Seed seed;
    if (crypto_box_seal_open(seed.bytes.data(), sealed.ciphertext.data(), sealed.ciphertext.size(),
                             pk.bytes.data(), sk.bytes.data()) != 0)
        throw AuthenticationError("sealed seed failed authentication");
    return seed;
}

// ---- block embedding -----------------------------------------------------------------

Scalar embed_block(ByteView block) {
    if (block.size() != kBlockBytes) throw InvalidArgument("block must be exactly 31 bytes");
    std::array<std::uint8_t, 32> be{};
    std::memcpy(be.data() + 1, block.data(), kBlockBytes);
    return Scalar::from_bytes(be);
}

std::array<std::uint8_t, kBlockBytes> extract_block(const Scalar& s) {
    auto be = s.to_bytes();
    if (be[0] != 0) throw RangeError("scalar does not encode a 31-byte block");
    std::array<std::uint8_t, kBlockBytes> out;
    std::memcpy(out.data(), be.data() + 1, kBlockBytes);
    return out;
}

}  // namespace dcnet
