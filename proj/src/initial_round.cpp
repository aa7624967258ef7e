#include "dcnet/initial_round.hpp"

#include <algorithm>
#include <cmath>

#include "dcnet/error.hpp"

namespace dcnet {

const char* to_string(RoundMode m) { return m == RoundMode::Secured ? "secured" : "unsecured"; }

const char* to_string(IndicatorKind k) {
    switch (k) {
        case IndicatorKind::OccupancyExceeded: return "OCCUPANCY_EXCEEDED";
        case IndicatorKind::LengthCapExceeded: return "LENGTH_CAP_EXCEEDED";
        case IndicatorKind::MalformedSlot: return "MALFORMED_SLOT";
    }
    return "?";
}

std::size_t initial_slot_width(std::size_t k, RoundMode mode, std::size_t ct_len) {
    if (mode == RoundMode::Unsecured) return 4;
    return blocks_for(4 + k * ct_len) * kBlockBytes;
}

std::size_t carrier_capacity(std::size_t k, RoundMode mode) {
    return mode == RoundMode::Secured ? initial_slot_width(k, mode) - 4 : 0;
}

namespace {

void encode_slot(Bytes& out, const LengthAnnouncement& a, std::size_t k, RoundMode mode, std::size_t width) {
    std::size_t start = out.size();
    put_u16(out, a.r);
    put_u16(out, a.length);
    if (is_carrier(a.r)) {
        if (a.carried.size() > width - 4) throw InvalidArgument("carrier payload exceeds slot capacity");
        append(out, a.carried);
    } else if (a.r != kEmptyId && mode == RoundMode::Secured) {
        if (a.seeds.size() != k) throw InvalidArgument("secured announcement needs one sealed seed per member");
        for (const auto& s : a.seeds) append(out, s.ciphertext);
    }
    out.resize(start + width, 0);
}

bool all_zero(ByteView b) {
    return std::all_of(b.begin(), b.end(), [](std::uint8_t v) { return v == 0; });
}

LengthAnnouncement parse_slot(ByteView slot, std::size_t k, RoundMode mode) {
    LengthAnnouncement a;
    a.r = get_u16(slot, 0);
    a.length = get_u16(slot, 2);
    ByteView body = slot.subspan(4);

    if (a.r == kEmptyId) {
        a.malformed = a.length != 0 || !all_zero(body);
        return a;
    }
    if (is_carrier(a.r)) {
        if (a.length > body.size() || !all_zero(body.subspan(a.length))) {
            a.malformed = true;
            return a;
        }
        a.carried.assign(body.begin(), body.begin() + a.length);
        return a;
    }
    if (mode == RoundMode::Secured) {
        std::size_t used = k * kSealedSeedBytes;
        if (!all_zero(body.subspan(used))) {
            a.malformed = true;
            return a;
        }
        a.seeds.resize(k);
        for (std::size_t j = 0; j < k; ++j)
            std::copy_n(body.begin() + j * kSealedSeedBytes, kSealedSeedBytes, a.seeds[j].ciphertext.begin());
    }
    return a;
}

}  // namespace

Bytes encode_initial(const InitSlotVector& v, std::size_t k, RoundMode mode) {
    if (v.slots.size() != 2 * k) throw InvalidArgument("initial slot vector must hold 2k slots");
    std::size_t width = initial_slot_width(k, mode);
    Bytes out;
    out.reserve(2 * k * width);
    for (const auto& a : v.slots) encode_slot(out, a, k, mode, width);
    return out;
}

std::vector<LengthAnnouncement> decode_initial_result(const Payload& x, std::size_t k, RoundMode mode) {
    std::size_t width = initial_slot_width(k, mode);
    std::vector<LengthAnnouncement> out;
    out.reserve(2 * k);

    if (mode == RoundMode::Unsecured) {
        if (x.mode() != ArithmeticMode::Xor || x.size() != 2 * k * width)
            throw InvalidArgument("initial result has the wrong shape");
        ByteView all = x.bytes();
        for (std::size_t s = 0; s < 2 * k; ++s) out.push_back(parse_slot(all.subspan(s * width, width), k, mode));
        return out;
    }

    std::size_t per_slot = width / kBlockBytes;
    if (x.mode() != ArithmeticMode::ModQBlocks || x.size() != 2 * k * per_slot)
        throw InvalidArgument("initial result has the wrong shape");
    Bytes slot(width);
    for (std::size_t s = 0; s < 2 * k; ++s) {
        bool ok = true;
        for (std::size_t b = 0; b < per_slot && ok; ++b) {
            try {
                auto block = extract_block(x.blocks()[s * per_slot + b]);
                std::copy(block.begin(), block.end(), slot.begin() + b * kBlockBytes);
            } catch (const RangeError&) {
                ok = false;
            }
        }
        if (!ok) {
            LengthAnnouncement garbage;
            garbage.malformed = true;
            out.push_back(std::move(garbage));
            continue;
        }
        out.push_back(parse_slot(slot, k, mode));
    }
    return out;
}

PrecomputedInitial precompute_initial(std::size_t k, RoundMode mode, Rng& rng, CryptoOps& ops) {
    if (mode != RoundMode::Secured) throw InvalidArgument("precomputation only applies to secured rounds");
    std::size_t blocks = 2 * k * initial_slot_width(k, mode) / kBlockBytes;
    PrecomputedInitial pre;
    pre.k = k;
    pre.slices = split_payload(Payload::zeros(ArithmeticMode::ModQBlocks, blocks), k, rng);
    CryptoOps::PrecomputeScope scope(ops);
    pre.commitments = commit_slices(pre.slices, ops);
    return pre;
}

InitialPreparation prepare_initial(const InitialIntent& intent, std::span<const PublicKey> roster,
                                   const InitialOptions& opts, Rng& rng, CryptoOps* ops,
                                   PrecomputedInitial* precomputed) {
    const std::size_t k = roster.size();
    if (k < 2) throw InvalidArgument("a group needs at least two members");
    const std::size_t slots = 2 * k;
    const std::size_t width = initial_slot_width(k, opts.mode);

    InitialPreparation prep;
    InitSlotVector v;
    v.slots.resize(slots);

    if (intent.kind != InitialIntent::Kind::None) {
        LengthAnnouncement a;
        if (intent.kind == InitialIntent::Kind::Announce) {
            if (intent.length == 0) throw InvalidArgument("announced length must be positive");
            if (intent.length > opts.length_cap || intent.length > 0xFFFF)
                throw LengthCapError("message of " + std::to_string(intent.length) + " bytes exceeds the length cap");
            a.r = static_cast<std::uint16_t>(kFirstMessageId + rng.uniform(0x10000 - kFirstMessageId));
            a.length = static_cast<std::uint16_t>(intent.length);
            if (opts.mode == RoundMode::Secured) {
                for (std::size_t j = 0; j < k; ++j) {
                    prep.seeds.push_back(Seed::random(rng));
                    a.seeds.push_back(seal(roster[j], prep.seeds.back()));
                }
            }
        } else {
            if (!is_carrier(intent.carrier)) throw InvalidArgument("carrier identifier must be reserved");
            if (intent.payload.size() > carrier_capacity(k, opts.mode))
                throw InvalidArgument("carrier payload does not fit into one slot");
            a.r = intent.carrier;
            a.length = static_cast<std::uint16_t>(intent.payload.size());
            a.carried = intent.payload;
        }
        std::size_t slot = opts.fixed_slot ? *opts.fixed_slot : rng.uniform(slots);
        if (slot >= slots) throw InvalidArgument("fixed slot out of range");
        prep.r = a.r;
        prep.slot = slot;
        prep.announcement = a;
        v.slots[slot] = std::move(a);
    }

    const auto arith = arithmetic_for(opts.mode);
    prep.payload = Payload::from_bytes(arith, encode_initial(v, k, opts.mode));

    if (opts.mode == RoundMode::Secured && precomputed) {
        if (precomputed->k != k || precomputed->slices.length() != prep.payload.size())
            throw InvalidArgument("precomputed round does not match the group");
        prep.slices = std::move(precomputed->slices);
        CommitmentMatrix cm = std::move(precomputed->commitments);
        if (prep.slot) {
            std::size_t per_slot = width / kBlockBytes;
            std::size_t last = k - 1;
            for (std::size_t b = *prep.slot * per_slot; b < (*prep.slot + 1) * per_slot; ++b) {
                const Scalar& x = prep.payload.blocks()[b];
                if (x.is_zero()) continue;
                prep.slices.slices[last].blocks()[b] += x;
                if (!ops) continue;
                auto c = ops->commit(prep.slices.slices[last].blocks()[b], prep.slices.blindings[last][b]);
                if (cm.materialised()) cm.at(last, b) = std::move(c);
            }
        }
        prep.commitments = std::move(cm);
        *precomputed = PrecomputedInitial{};
        return prep;
    }

    prep.slices = split_payload(prep.payload, k, rng);
    if (opts.mode == RoundMode::Secured && ops) prep.commitments = commit_slices(prep.slices, *ops);
    return prep;
}

bool own_announcement_intact(const InitialPreparation& prep, const std::vector<LengthAnnouncement>& decoded) {
    if (!prep.slot) return true;
    if (*prep.slot >= decoded.size()) return false;
    return decoded[*prep.slot] == prep.announcement;
}

std::size_t occupied_slots(const std::vector<LengthAnnouncement>& anns) {
    return static_cast<std::size_t>(std::count_if(anns.begin(), anns.end(), [](const auto& a) { return !a.empty(); }));
}

std::vector<AttackIndicator> validate_announcements(const std::vector<LengthAnnouncement>& anns, std::size_t k,
                                                    std::size_t length_cap) {
    std::vector<AttackIndicator> out;
    if (occupied_slots(anns) > k) out.push_back({IndicatorKind::OccupancyExceeded, std::nullopt});
    for (std::size_t s = 0; s < anns.size(); ++s) {
        if (anns[s].malformed)
            out.push_back({IndicatorKind::MalformedSlot, s});
        else if (anns[s].length > length_cap)
            out.push_back({IndicatorKind::LengthCapExceeded, s});
    }
    return out;
}

unsigned identifier_min_bits(double p, std::size_t k) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("collision probability must lie in (0, 1)");
    if (k < 2) throw InvalidArgument("group size must be at least 2");
    long double kk = static_cast<long double>(k);
    long double exponent = 2.0L / (kk * (kk - 1.0L));
    long double per_pair = -std::expm1(exponent * std::log1p(-static_cast<long double>(p)));
    long double bits = -std::log2(per_pair);
    return static_cast<unsigned>(std::ceil(bits - 1e-12L));
}

}  // namespace dcnet
