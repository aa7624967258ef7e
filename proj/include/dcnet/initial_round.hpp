#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dcnet/dc_core.hpp"

namespace dcnet {

enum class RoundMode : std::uint8_t { Unsecured = 0, Secured = 1 };

const char* to_string(RoundMode m);

inline ArithmeticMode arithmetic_for(RoundMode m) {
    return m == RoundMode::Secured ? ArithmeticMode::ModQBlocks : ArithmeticMode::Xor;
}

// Reserved identifiers. Carriers (blame, direct) hold their payload inside the
// slot and reserve nothing in the final round.
inline constexpr std::uint16_t kEmptyId = 0;
inline constexpr std::uint16_t kBlameId = 1;
inline constexpr std::uint16_t kDirectId = 2;
inline constexpr std::uint16_t kFirstMessageId = 3;
inline constexpr std::size_t kDefaultLengthCap = 65535;

inline bool is_carrier(std::uint16_t r) { return r == kBlameId || r == kDirectId; }

// Secured: 4 + k * ct_len rounded up to whole 31-byte blocks. Unsecured: 4.
std::size_t initial_slot_width(std::size_t k, RoundMode mode, std::size_t ct_len = kSealedSeedBytes);
// Bytes a carrier slot can hold after its 4-byte header (0 when unsecured).
std::size_t carrier_capacity(std::size_t k, RoundMode mode);

struct LengthAnnouncement {
    std::uint16_t r = 0;
    std::uint16_t length = 0;
    std::vector<SealedSeed> seeds;  // k entries for secured message slots
    Bytes carried;                  // payload of blame / direct carriers
    bool malformed = false;         // decoded slot did not parse cleanly

    bool empty() const { return r == kEmptyId && length == 0 && !malformed; }
    bool operator==(const LengthAnnouncement&) const = default;
};

// Exactly 2k announcements.
struct InitSlotVector {
    std::vector<LengthAnnouncement> slots;
};

Bytes encode_initial(const InitSlotVector& v, std::size_t k, RoundMode mode);
std::vector<LengthAnnouncement> decode_initial_result(const Payload& x, std::size_t k, RoundMode mode);

// What a participant puts into the round.
struct InitialIntent {
    enum class Kind { None, Announce, Carry } kind = Kind::None;
    std::size_t length = 0;     // Announce
    std::uint16_t carrier = 0;  // Carry: kBlameId or kDirectId
    Bytes payload;              // Carry

    static InitialIntent none() { return {}; }
    static InitialIntent announce(std::size_t length) { return {Kind::Announce, length, 0, {}}; }
    static InitialIntent carry(std::uint16_t id, Bytes payload) { return {Kind::Carry, payload.size(), id, std::move(payload)}; }
};

struct InitialOptions {
    RoundMode mode = RoundMode::Secured;
    std::size_t length_cap = kDefaultLengthCap;
    // Evaluation-only deterministic slot choice; leaks the sender's position.
    std::optional<std::size_t> fixed_slot;
};

// Zero-payload slices and their commitments prepared while idle.
struct PrecomputedInitial {
    std::size_t k = 0;
    SliceMatrix slices;
    CommitmentMatrix commitments;
};

PrecomputedInitial precompute_initial(std::size_t k, RoundMode mode, Rng& rng, CryptoOps& ops);

struct InitialPreparation {
    std::uint16_t r = 0;
    std::optional<std::size_t> slot;
    std::vector<Seed> seeds;  // by recipient index
    LengthAnnouncement announcement;
    Payload payload;
    SliceMatrix slices;
    std::optional<CommitmentMatrix> commitments;
};

// Throws LengthCapError (announce over cap) or InvalidArgument (carrier too big,
// k < 2) before anything is sent. `ops` may be null for unsecured rounds.
InitialPreparation prepare_initial(const InitialIntent& intent, std::span<const PublicKey> roster,
                                   const InitialOptions& opts, Rng& rng, CryptoOps* ops,
                                   PrecomputedInitial* precomputed = nullptr);

// True when the sender's slot decoded back to exactly what it put in.
bool own_announcement_intact(const InitialPreparation& prep, const std::vector<LengthAnnouncement>& decoded);

enum class IndicatorKind { OccupancyExceeded, LengthCapExceeded, MalformedSlot };

const char* to_string(IndicatorKind k);

struct AttackIndicator {
    IndicatorKind kind;
    std::optional<std::size_t> slot;
    bool operator==(const AttackIndicator&) const = default;
};

std::vector<AttackIndicator> validate_announcements(const std::vector<LengthAnnouncement>& anns, std::size_t k,
                                                    std::size_t length_cap = kDefaultLengthCap);

std::size_t occupied_slots(const std::vector<LengthAnnouncement>& anns);

// Smallest identifier width (bits) keeping the pairwise collision probability
// of k participants below p.
unsigned identifier_min_bits(double p, std::size_t k);

}  // namespace dcnet
