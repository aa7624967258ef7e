#include "dcnet/rng.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace dcnet {

namespace {
void ensure_sodium() {
    static const bool ok = sodium_init() >= 0;
    if (!ok) throw std::runtime_error("libsodium initialisation failed");
}
}  // namespace

Rng::Rng(std::uint64_t seed) {
    ensure_sodium();
    std::uint8_t in[8];
    for (int i = 0; i < 8; ++i) in[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    crypto_generichash(key_.data(), key_.size(), in, sizeof(in), nullptr, 0);
}

Rng::Rng(const std::array<std::uint8_t, 32>& key) : key_(key) { ensure_sodium(); }

Rng Rng::from_entropy() {
    ensure_sodium();
    std::array<std::uint8_t, 32> key;
    randombytes_buf(key.data(), key.size());
    return Rng(key);
}

void Rng::refill() {
    std::uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {};
    std::memcpy(nonce, &block_, sizeof(block_));
    crypto_stream_chacha20(buf_.data(), buf_.size(), nonce, key_.data());
    ++block_;
    pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
    std::size_t done = 0;
    while (done < out.size()) {
        if (pos_ == buf_.size()) refill();
        auto n = std::min(out.size() - done, buf_.size() - pos_);
        std::memcpy(out.data() + done, buf_.data() + pos_, n);
        pos_ += n;
        done += n;
    }
}

std::uint64_t Rng::next_u64() {
    std::uint8_t b[8];
    fill(b);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
    // rejection sampling to avoid modulo bias
    std::uint64_t limit = bound * (UINT64_MAX / bound);
    for (;;) {
        auto v = next_u64();
        if (v < limit) return v % bound;
    }
}

Rng Rng::fork() {
    std::array<std::uint8_t, 32> key;
    fill(key);
    return Rng(key);
}

}  // namespace dcnet
