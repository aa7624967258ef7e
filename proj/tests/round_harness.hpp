#pragma once

// Runs one DC round among in-process participants, bypassing any transport.

#include <optional>
#include <vector>

#include "dcnet/dc_core.hpp"

namespace dcnet::testing {

struct HarnessRound {
    std::vector<RoundTranscript> transcripts;  // one per participant
    Aggregate result;
};

inline HarnessRound run_round(const std::vector<SliceMatrix>& prepared,
                              const std::vector<std::optional<CommitmentMatrix>>& commitments,
                              std::uint32_t round_id = 0) {
    const std::size_t k = prepared.size();
    HarnessRound out;
    std::vector<std::optional<Aggregate>> aggregates(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::optional<Share>> received(k);
        for (std::size_t j = 0; j < k; ++j)
            if (j != i) received[j] = prepared[j].share_for(i);
        aggregates[i] = aggregate_received(prepared[i].share_for(i), i, received);
    }
    out.result = combine_broadcasts(aggregates);

    for (std::size_t i = 0; i < k; ++i) {
        RoundTranscript t;
        t.round_id = round_id;
        t.k = static_cast<std::uint16_t>(k);
        t.self = static_cast<std::uint16_t>(i);
        t.mode = prepared[i].mode;
        t.own = prepared[i];
        for (std::size_t j = 0; j < k; ++j) t.received.push_back(prepared[j].share_for(i));
        if (!commitments.empty() && commitments.front())
            for (const auto& c : commitments) t.commitments.push_back(*c);
        for (const auto& a : aggregates) t.aggregates.push_back(*a);
        t.result = out.result;
        out.transcripts.push_back(std::move(t));
    }
    return out;
}

inline HarnessRound run_round(const std::vector<SliceMatrix>& prepared) {
    return run_round(prepared, std::vector<std::optional<CommitmentMatrix>>{});
}

}  // namespace dcnet::testing
