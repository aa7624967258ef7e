#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "dcnet/final_round.hpp"

namespace dcnet {

// Rides in a carrier slot (r = kBlameId) of a later initial round.
struct BlameMessage {
    static constexpr std::size_t kEncodedBytes = 38;

    std::uint16_t round_offset = 1;  // 1 = previous protocol instance
    std::uint16_t accused = 0;
    std::uint16_t slot = 0;
    Seed seed;

    Bytes encode() const;
    static BlameMessage decode(ByteView bytes);
    bool operator==(const BlameMessage&) const = default;
};

enum class VerdictOutcome { AttackerConfirmed, BlameInvalid };

const char* to_string(VerdictOutcome v);

struct Verdict {
    VerdictOutcome outcome = VerdictOutcome::BlameInvalid;
    std::size_t accused = 0;
    bool operator==(const Verdict&) const = default;
};

// Row sums of the peer's commitments over each block owned by `entry` must be
// commitments to zero under the blindings streamed from `seed`.
bool zero_commitments_hold(const CommitmentMatrix& peer_matrix, const Seed& seed, const Layout& layout,
                           std::size_t entry, std::size_t k, CryptoOps& ops);

// Run by the owner of `slot`. seeds_sent[i] is the seed sealed to peer i and
// matrices[i] is peer i's final-round commitment matrix. Returns the first
// peer whose commitments are not zero commitments. Throws CannotVerify when
// the matrices are missing or do not fit the layout.
std::optional<std::size_t> verify_zero_commitments(std::size_t slot, const std::vector<Seed>& seeds_sent,
                                                   const std::vector<CommitmentMatrix>& matrices,
                                                   const Layout& layout, std::size_t owner, CryptoOps& ops);

BlameMessage build_blame(std::size_t accused, const Seed& seed, std::size_t slot, std::uint16_t round_offset);

// Per-instance state kept for adjudicating later blames.
struct InstanceRecord {
    std::uint32_t instance = 0;
    std::vector<PublicKey> roster;
    std::vector<LengthAnnouncement> announcements;
    Layout layout;
    std::vector<CommitmentMatrix> final_commitments;  // by committer
};

class InstanceArchive {
public:
    static constexpr std::size_t kDefaultRetention = 16;

    explicit InstanceArchive(std::size_t retention = kDefaultRetention) : retention_(retention) {}

    void put(InstanceRecord r);
    const InstanceRecord* find(std::uint32_t instance) const;
    std::size_t size() const { return records_.size(); }
    void clear() { records_.clear(); }

private:
    std::size_t retention_;
    std::deque<InstanceRecord> records_;
};

// Checks that the seed re-seals to the ciphertext the slot owner announced for
// the accused, then recomputes the accused's zero commitments. Throws
// CannotAdjudicate when the referenced instance is no longer retained.
Verdict validate_blame(const BlameMessage& b, std::uint32_t current_instance, const InstanceArchive& archive,
                       CryptoOps& ops);

}  // namespace dcnet
