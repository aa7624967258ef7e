#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace dcnet {

// Deterministic ChaCha20 keystream generator. The same seed reproduces the same
// stream on every platform, which the simulator relies on for replayable runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    explicit Rng(const std::array<std::uint8_t, 32>& key);

    // Fresh key from the operating system.
    static Rng from_entropy();

    void fill(std::span<std::uint8_t> out);
    std::uint64_t next_u64();
    // Uniform in [0, bound). bound must be > 0.
    std::uint64_t uniform(std::uint64_t bound);
    // Independent child stream; advances this generator.
    Rng fork();

private:
    void refill();

    std::array<std::uint8_t, 32> key_{};
    std::uint64_t block_ = 0;
    std::array<std::uint8_t, 512> buf_{};
    std::size_t pos_ = sizeof(buf_);
};

}  // namespace dcnet
