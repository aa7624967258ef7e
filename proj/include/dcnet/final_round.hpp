#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dcnet/dc_core.hpp"
#include "dcnet/initial_round.hpp"

namespace dcnet {

struct LayoutEntry {
    std::size_t slot = 0;
    std::uint16_t r = 0;
    std::uint16_t length = 0;
    std::size_t first_byte = 1;  // 1-based position in the compound message

    std::size_t begin() const { return first_byte - 1; }
    std::size_t end() const { return begin() + length; }
    bool operator==(const LayoutEntry&) const = default;
};

struct Layout {
    std::vector<LayoutEntry> entries;  // slot order
    std::size_t total = 0;

    std::size_t blocks() const { return blocks_for(total); }
    const LayoutEntry* find(std::uint16_t r, std::uint16_t length) const;
    const LayoutEntry* entry_for_slot(std::size_t slot) const;
    // Per compound block, the entry index of the only reservation touching it;
    // empty for blocks shared by two reservations.
    std::vector<std::optional<std::size_t>> block_owners() const;
    // Blocks lying entirely in one entry's reservation.
    std::vector<std::size_t> owned_blocks(std::size_t entry) const;

    bool operator==(const Layout&) const = default;
};

// Entries for every well-formed message announcement (r >= 3, length > 0).
// Empty optional when nothing was announced and the final round is skipped.
std::optional<Layout> compute_layout(const std::vector<LengthAnnouncement>& anns);

// Stream position of the blinding for compound block `block`, slice row `row`.
inline std::uint32_t blinding_index(std::size_t block, std::size_t row, std::size_t k) {
    return static_cast<std::uint32_t>(block * k + row);
}

// Seeds addressed to `self` in every announced slot; empty where the sealed
// seed does not open (collision garbage, or no seeds in unsecured mode).
std::vector<std::optional<Seed>> open_slot_seeds(const std::vector<LengthAnnouncement>& anns, std::size_t self,
                                                 const SecretKey& sk);

struct OwnMessage {
    std::uint16_t r = 0;
    Bytes bytes;
};

struct FinalPreparation {
    Payload payload;
    SliceMatrix slices;
    std::optional<CommitmentMatrix> commitments;
    std::optional<std::size_t> own_entry;
};

// Throws OwnAnnouncementLost when `own` has no matching layout entry.
FinalPreparation prepare_final(const std::optional<OwnMessage>& own, const Layout& layout,
                               const std::vector<std::optional<Seed>>& opened, std::size_t k, RoundMode mode,
                               Rng& rng, CryptoOps* ops);

// WrongSlot writes a whole block of its own data into the target block.
enum class FaultKind { None, WrongValue, WrongBlinding, WrongSlot };

const char* to_string(FaultKind f);

// Misbehaviour hook for tests and the simulator: tampers with the block holding
// compound byte `byte_offset` and recommits so the commitments stay consistent
// with the tampered slices.
void inject_fault(FinalPreparation& prep, FaultKind kind, std::size_t byte_offset, Rng& rng, CryptoOps* ops);

struct ExtractedMessage {
    std::size_t slot = 0;
    std::uint16_t r = 0;
    Bytes bytes;
    bool corrupted = false;  // a block of the reservation did not extract

    bool operator==(const ExtractedMessage&) const = default;
};

std::vector<ExtractedMessage> extract_messages(const Payload& x, const Layout& layout);

// True when the own reservation is missing or its bytes differ from the message.
bool detect_collision(const Bytes& own_message, const std::vector<ExtractedMessage>& extracted, std::uint16_t own_r);

}  // namespace dcnet
