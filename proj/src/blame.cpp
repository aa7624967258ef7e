#include "dcnet/blame.hpp"

#include "dcnet/error.hpp"

namespace dcnet {

Bytes BlameMessage::encode() const {
    Bytes out;
    out.reserve(kEncodedBytes);
    put_u16(out, round_offset);
    put_u16(out, accused);
    put_u16(out, slot);
    append(out, seed.bytes);
    return out;
}

BlameMessage BlameMessage::decode(ByteView bytes) {
    if (bytes.size() != kEncodedBytes) throw DecodeError("blame message must be 38 bytes");
    Reader in(bytes);
    BlameMessage b;
    b.round_offset = in.u16();
    b.accused = in.u16();
    b.slot = in.u16();
    auto s = in.take(kSeedBytes);
    std::copy(s.begin(), s.end(), b.seed.bytes.begin());
    return b;
}

const char* to_string(VerdictOutcome v) {
    return v == VerdictOutcome::AttackerConfirmed ? "ATTACKER_CONFIRMED" : "BLAME_INVALID";
}

bool zero_commitments_hold(const CommitmentMatrix& peer_matrix, const Seed& seed, const Layout& layout,
                           std::size_t entry, std::size_t k, CryptoOps& ops) {
    if (peer_matrix.rows != k || peer_matrix.cols != layout.blocks())
        throw CannotVerify("commitment matrix does not fit the layout");
    if (ops.real() && !peer_matrix.materialised()) throw CannotVerify("commitment matrix was not retained");
    bool ok = true;
    std::vector<const Commitment*> column(k);
    for (std::size_t b : layout.owned_blocks(entry)) {
        Scalar blinding;
        for (std::size_t j = 0; j < k; ++j) blinding += blinding_stream(seed, blinding_index(b, j, k));
        if (peer_matrix.materialised())
            for (std::size_t j = 0; j < k; ++j) column[j] = &peer_matrix.at(j, b);
        Commitment sum = ops.sum(column);
        if (!ops.verify(sum, Scalar{}, blinding)) ok = false;
    }
    return ok;
}

std::optional<std::size_t> verify_zero_commitments(std::size_t slot, const std::vector<Seed>& seeds_sent,
                                                   const std::vector<CommitmentMatrix>& matrices,
                                                   const Layout& layout, std::size_t owner, CryptoOps& ops) {
    const std::size_t k = seeds_sent.size();
    if (matrices.size() != k) throw CannotVerify("commitment matrices of the round are not available");
    const LayoutEntry* e = layout.entry_for_slot(slot);
    if (!e) throw CannotVerify("slot is not part of the layout");
    std::size_t entry = static_cast<std::size_t>(e - layout.entries.data());
    for (std::size_t i = 0; i < k; ++i) {
        if (i == owner) continue;
        if (!zero_commitments_hold(matrices[i], seeds_sent[i], layout, entry, k, ops)) return i;
    }
    return std::nullopt;
}

BlameMessage build_blame(std::size_t accused, const Seed& seed, std::size_t slot, std::uint16_t round_offset) {
    if (accused > 0xFFFF || slot > 0xFFFF) throw InvalidArgument("blame index out of range");
    if (round_offset == 0) throw InvalidArgument("blame must reference an earlier instance");
    return {round_offset, static_cast<std::uint16_t>(accused), static_cast<std::uint16_t>(slot), seed};
}

void InstanceArchive::put(InstanceRecord r) {
    records_.push_back(std::move(r));
    while (records_.size() > retention_) records_.pop_front();
}

const InstanceRecord* InstanceArchive::find(std::uint32_t instance) const {
    for (const auto& r : records_)
        if (r.instance == instance) return &r;
    return nullptr;
}

Verdict validate_blame(const BlameMessage& b, std::uint32_t current_instance, const InstanceArchive& archive,
                       CryptoOps& ops) {
    Verdict invalid{VerdictOutcome::BlameInvalid, b.accused};
    if (b.round_offset == 0 || b.round_offset > current_instance)
        throw CannotAdjudicate("blame references an instance that never existed");
    const InstanceRecord* rec = archive.find(current_instance - b.round_offset);
    if (!rec) throw CannotAdjudicate("referenced instance is no longer retained");

    const std::size_t k = rec->roster.size();
    if (b.accused >= k || b.slot >= rec->announcements.size()) return invalid;
    const auto& ann = rec->announcements[b.slot];
    const LayoutEntry* e = rec->layout.entry_for_slot(b.slot);
    if (!e || ann.seeds.size() != k) return invalid;
    if (seal(rec->roster[b.accused], b.seed) != ann.seeds[b.accused]) return invalid;
    if (rec->final_commitments.size() != k) throw CannotAdjudicate("commitments of the instance were not retained");

    std::size_t entry = static_cast<std::size_t>(e - rec->layout.entries.data());
    if (zero_commitments_hold(rec->final_commitments[b.accused], b.seed, rec->layout, entry, k, ops)) return invalid;
    return {VerdictOutcome::AttackerConfirmed, b.accused};
}

}  // namespace dcnet
