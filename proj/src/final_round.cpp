#include "dcnet/final_round.hpp"

#include <algorithm>

#include "dcnet/error.hpp"

namespace dcnet {

const LayoutEntry* Layout::find(std::uint16_t r, std::uint16_t length) const {
    for (const auto& e : entries)
        if (e.r == r && e.length == length) return &e;
    return nullptr;
}

const LayoutEntry* Layout::entry_for_slot(std::size_t slot) const {
    for (const auto& e : entries)
        if (e.slot == slot) return &e;
    return nullptr;
}

std::vector<std::optional<std::size_t>> Layout::block_owners() const {
    std::vector<std::optional<std::size_t>> owner(blocks());
    std::vector<bool> shared(blocks(), false);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::size_t first = entries[i].begin() / kBlockBytes;
        std::size_t last = (entries[i].end() - 1) / kBlockBytes;
        for (std::size_t b = first; b <= last; ++b) {
            if (owner[b] && *owner[b] != i) shared[b] = true;
            owner[b] = i;
        }
    }
    for (std::size_t b = 0; b < owner.size(); ++b)
        if (shared[b]) owner[b].reset();
    return owner;
}

std::vector<std::size_t> Layout::owned_blocks(std::size_t entry) const {
    auto owners = block_owners();
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < owners.size(); ++b)
        if (owners[b] == entry) out.push_back(b);
    return out;
}

std::optional<Layout> compute_layout(const std::vector<LengthAnnouncement>& anns) {
    Layout layout;
    std::size_t next = 1;
    for (std::size_t s = 0; s < anns.size(); ++s) {
        const auto& a = anns[s];
        if (a.malformed || a.r < kFirstMessageId || a.length == 0) continue;
        layout.entries.push_back({s, a.r, a.length, next});
        next += a.length;
    }
    if (layout.entries.empty()) return std::nullopt;
    layout.total = next - 1;
    return layout;
}

std::vector<std::optional<Seed>> open_slot_seeds(const std::vector<LengthAnnouncement>& anns, std::size_t self,
                                                 const SecretKey& sk) {
    std::vector<std::optional<Seed>> out(anns.size());
    for (std::size_t s = 0; s < anns.size(); ++s) {
        if (anns[s].seeds.size() <= self) continue;
        try {
            out[s] = open(sk, anns[s].seeds[self]);
        } catch (const AuthenticationError&) {
        }
    }
    return out;
}

FinalPreparation prepare_final(const std::optional<OwnMessage>& own, const Layout& layout,
                               const std::vector<std::optional<Seed>>& opened, std::size_t k, RoundMode mode,
                               Rng& rng, CryptoOps* ops) {
    FinalPreparation prep;
    Bytes compound(layout.total, 0);
    if (own) {
        if (own->bytes.size() > 0xFFFF) throw LengthCapError("message too long");
        const LayoutEntry* e = layout.find(own->r, static_cast<std::uint16_t>(own->bytes.size()));
        if (!e) throw OwnAnnouncementLost("own announcement is not part of the layout");
        prep.own_entry = static_cast<std::size_t>(e - layout.entries.data());
        std::copy(own->bytes.begin(), own->bytes.end(), compound.begin() + e->begin());
    }

    prep.payload = Payload::from_bytes(arithmetic_for(mode), compound);
    prep.slices = split_payload(prep.payload, k, rng);
    if (mode == RoundMode::Unsecured) return prep;

    auto owners = layout.block_owners();
    for (std::size_t b = 0; b < owners.size(); ++b) {
        if (!owners[b] || owners[b] == prep.own_entry) continue;
        std::size_t slot = layout.entries[*owners[b]].slot;
        if (slot >= opened.size() || !opened[slot]) continue;
        for (std::size_t j = 0; j < k; ++j)
            prep.slices.blindings[j][b] = blinding_stream(*opened[slot], blinding_index(b, j, k));
    }
    if (ops) prep.commitments = commit_slices(prep.slices, *ops);
    return prep;
}

const char* to_string(FaultKind f) {
    switch (f) {
        case FaultKind::None: return "none";
        case FaultKind::WrongValue: return "wrong-value";
        case FaultKind::WrongBlinding: return "wrong-blinding";
        case FaultKind::WrongSlot: return "wrong-slot";
    }
    return "?";
}

void inject_fault(FinalPreparation& prep, FaultKind kind, std::size_t byte_offset, Rng& rng, CryptoOps* ops) {
    if (kind == FaultKind::None) return;
    auto& m = prep.slices;
    const std::size_t row = m.k() - 1;
    if (m.mode == ArithmeticMode::Xor) {
        if (byte_offset >= m.length()) throw InvalidArgument("fault offset outside the compound message");
        if (kind == FaultKind::WrongBlinding) return;
        std::uint8_t d = kind == FaultKind::WrongValue ? 0x01 : static_cast<std::uint8_t>(1 + rng.uniform(255));
        m.slices[row].bytes()[byte_offset] ^= d;
        prep.payload.bytes()[byte_offset] ^= d;
        return;
    }
    std::size_t block = byte_offset / kBlockBytes;
    if (block >= m.length()) throw InvalidArgument("fault offset outside the compound message");
    if (kind == FaultKind::WrongValue || kind == FaultKind::WrongSlot) {
        Bytes delta(kBlockBytes, 0);
        if (kind == FaultKind::WrongValue) {
            delta[byte_offset % kBlockBytes] = 0x01;
        } else {
            rng.fill(delta);
            delta[0] |= 0x01;
        }
        Scalar d = embed_block(delta);
        m.slices[row].blocks()[block] += d;
        prep.payload.blocks()[block] += d;
    } else {
        m.blindings[row][block] = Scalar::random(rng);
    }
    if (ops && prep.commitments) {
        auto c = ops->commit(m.slices[row].blocks()[block], m.blindings[row][block]);
        if (prep.commitments->materialised()) prep.commitments->at(row, block) = std::move(c);
    }
}

std::vector<ExtractedMessage> extract_messages(const Payload& x, const Layout& layout) {
    Bytes bytes;
    std::vector<bool> bad;
    if (x.mode() == ArithmeticMode::Xor) {
        if (x.size() != layout.total) throw InvalidArgument("compound result length does not match the layout");
        bytes = x.bytes();
    } else {
        if (x.size() != layout.blocks()) throw InvalidArgument("compound result length does not match the layout");
        bytes.resize(x.size() * kBlockBytes, 0);
        bad.resize(x.size(), false);
        for (std::size_t b = 0; b < x.size(); ++b) {
            try {
                auto block = extract_block(x.blocks()[b]);
                std::copy(block.begin(), block.end(), bytes.begin() + b * kBlockBytes);
            } catch (const RangeError&) {
                bad[b] = true;
            }
        }
    }

    std::vector<ExtractedMessage> out;
    out.reserve(layout.entries.size());
    for (const auto& e : layout.entries) {
        ExtractedMessage m;
        m.slot = e.slot;
        m.r = e.r;
        m.bytes.assign(bytes.begin() + e.begin(), bytes.begin() + e.end());
        if (!bad.empty())
            for (std::size_t b = e.begin() / kBlockBytes; b <= (e.end() - 1) / kBlockBytes; ++b)
                m.corrupted = m.corrupted || bad[b];
        out.push_back(std::move(m));
    }
    return out;
}

bool detect_collision(const Bytes& own_message, const std::vector<ExtractedMessage>& extracted, std::uint16_t own_r) {
    for (const auto& m : extracted)
        if (m.r == own_r && m.bytes.size() == own_message.size()) return m.corrupted || m.bytes != own_message;
    return true;
}

}  // namespace dcnet
