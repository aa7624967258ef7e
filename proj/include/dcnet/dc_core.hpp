#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <vector>

#include "dcnet/bytes.hpp"
#include "dcnet/crypto.hpp"
#include "dcnet/ops.hpp"
#include "dcnet/rng.hpp"

namespace dcnet {

// XOR over equal-length byte strings (unsecured rounds) or addition mod q over
// 31-byte blocks embedded as scalars (secured rounds, matches commitment math).
enum class ArithmeticMode : std::uint8_t { Xor = 0, ModQBlocks = 1 };

const char* to_string(ArithmeticMode m);

inline constexpr std::size_t blocks_for(std::size_t bytes) { return (bytes + kBlockBytes - 1) / kBlockBytes; }

// One DC vector in either arithmetic domain. size() counts bytes in XOR mode
// and blocks in ModQBlocks mode.
class Payload {
public:
    Payload() = default;

    static Payload zeros(ArithmeticMode mode, std::size_t size);
    static Payload random(ArithmeticMode mode, std::size_t size, Rng& rng);
    // ModQBlocks: zero-pads the tail to whole blocks and embeds each block.
    static Payload from_bytes(ArithmeticMode mode, ByteView bytes);
    static Payload from_blocks(std::vector<Scalar> blocks);

    ArithmeticMode mode() const { return mode_; }
    std::size_t size() const { return mode_ == ArithmeticMode::Xor ? bytes_.size() : blocks_.size(); }

    const Bytes& bytes() const { return bytes_; }
    Bytes& bytes() { return bytes_; }
    const std::vector<Scalar>& blocks() const { return blocks_; }
    std::vector<Scalar>& blocks() { return blocks_; }

    // ModQBlocks: extracts every block; throws RangeError on a block >= 2^248.
    Bytes to_bytes() const;

    Payload& operator+=(const Payload& o);
    Payload& operator-=(const Payload& o);
    friend Payload operator+(Payload a, const Payload& b) { return a += b; }
    friend Payload operator-(Payload a, const Payload& b) { return a -= b; }
    bool operator==(const Payload&) const = default;

private:
    ArithmeticMode mode_ = ArithmeticMode::Xor;
    Bytes bytes_;
    std::vector<Scalar> blocks_;
};

// What one participant sends to one peer: a slice and, in secured rounds, the
// blinding factors of the slice's commitments.
struct Share {
    Payload slice;
    std::vector<Scalar> blindings;

    bool operator==(const Share&) const = default;
};

// k slices of a prepared payload, row i destined for peer i.
struct SliceMatrix {
    ArithmeticMode mode = ArithmeticMode::Xor;
    std::vector<Payload> slices;
    std::vector<std::vector<Scalar>> blindings;  // empty in XOR mode

    std::size_t k() const { return slices.size(); }
    std::size_t length() const { return slices.empty() ? 0 : slices.front().size(); }
    bool blinded() const { return !blindings.empty(); }
    Share share_for(std::size_t peer) const;
    Payload sum() const;
    bool operator==(const SliceMatrix&) const = default;
};

// k x B grid of commitments; cell (i, t) commits to slice i, block t.
// In modelled execution the grid keeps its dimensions but holds no points.
struct CommitmentMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Commitment> cells;

    bool materialised() const { return cells.size() == rows * cols; }
    const Commitment& at(std::size_t row, std::size_t col) const { return cells[row * cols + col]; }
    Commitment& at(std::size_t row, std::size_t col) { return cells[row * cols + col]; }
    std::size_t wire_size() const { return 6 + rows * cols * kPointBytes; }
    bool operator==(const CommitmentMatrix&) const = default;
};

// A participant's broadcast after the sharing step.
struct Aggregate {
    Payload sum;                    // S_j
    std::vector<Scalar> blindings;  // R_j, empty in XOR mode

    bool operator==(const Aggregate&) const = default;
};

// Splits payload into k additive shares: k-1 uniform rows, the last row closes
// the sum. ModQBlocks rows also get uniform blinding factors.
SliceMatrix split_payload(const Payload& payload, std::size_t k, Rng& rng);

CommitmentMatrix commit_slices(const SliceMatrix& m, CryptoOps& ops);
// Commitment grid with the right dimensions but no curve work and no counting.
CommitmentMatrix placeholder_commitments(std::size_t rows, std::size_t cols);

// received[j] is what peer j sent to us; received[self] is ignored and the own
// row is used instead. Throws IncompleteRoundError naming absent peers.
Aggregate aggregate_received(const Share& own_share, std::size_t self,
                             const std::vector<std::optional<Share>>& received);

// Blockwise sum of all k broadcasts. Throws IncompleteRoundError.
Aggregate combine_broadcasts(const std::vector<std::optional<Aggregate>>& aggregates);

// ---- verification -------------------------------------------------------------

enum class CheckLevel { PairwiseShare, PeerAggregate, GlobalResult };

const char* to_string(CheckLevel level);

struct CheckFailure {
    CheckLevel level;
    std::optional<std::size_t> peer;  // none for the global check
    std::size_t block;
};

struct VerificationReport {
    bool pairwise_ok = true;
    bool aggregate_ok = true;
    bool global_ok = true;
    std::vector<CheckFailure> failures;

    bool ok() const { return pairwise_ok && aggregate_ok && global_ok; }
    std::vector<std::size_t> offending_peers(CheckLevel level) const;
};

// Pairwise check: what peer `from` sent us opens its own commitments in row `self`.
bool check_share(const Share& share, const CommitmentMatrix& committer_matrix, std::size_t self,
                 CryptoOps& ops, std::vector<std::size_t>* failed_blocks = nullptr);

// Column sums over all committers: column[j][t] = sum_i C_i(j, t).
std::vector<std::vector<Commitment>> commitment_column_sums(
    const std::vector<CommitmentMatrix>& matrices, CryptoOps& ops);

// Per-peer aggregate check against the column sums.
bool check_aggregate(const Aggregate& agg, const std::vector<Commitment>& column, CryptoOps& ops,
                     std::vector<std::size_t>* failed_blocks = nullptr);

// Global check: the combined result opens the sum of all commitments.
bool check_global(const Aggregate& result, const std::vector<std::vector<Commitment>>& columns,
                  CryptoOps& ops, std::vector<std::size_t>* failed_blocks = nullptr);

// Everything a participant keeps of one DC round.
struct RoundTranscript {
    std::uint32_t round_id = 0;
    std::uint16_t k = 0;
    std::uint16_t self = 0;
    ArithmeticMode mode = ArithmeticMode::Xor;
    SliceMatrix own;
    std::vector<Share> received;                   // by sender; [self] is the own row
    std::vector<CommitmentMatrix> commitments;     // by committer; empty when unsecured
    std::vector<Aggregate> aggregates;             // by broadcaster
    Aggregate result;

    bool secured() const { return !commitments.empty(); }
    bool operator==(const RoundTranscript&) const = default;
};

// Re-runs every check offline. Unsecured transcripts only get the
// reconstruction check (global level, no peer attribution).
VerificationReport verify_round(const RoundTranscript& t, CryptoOps& ops);

// ---- transcript persistence ----------------------------------------------------------

// Record layout: u32 record length, u32 round_id, u16 k, u8 mode, u16 self,
// u32 length, u8 secured, then the matrices row-major (32-byte scalars,
// 33-byte points, raw bytes in XOR mode).
Bytes encode_transcript(const RoundTranscript& t);
RoundTranscript decode_transcript(ByteView record);

// Append-only per-node transcript file.
class TranscriptFile {
public:
    explicit TranscriptFile(std::filesystem::path path) : path_(std::move(path)) {}

    void append(const RoundTranscript& t) const;
    std::vector<RoundTranscript> read_all() const;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// In-memory retention of the most recent rounds for deferred validation.
class TranscriptStore {
public:
    static constexpr std::size_t kDefaultRetention = 16;

    explicit TranscriptStore(std::size_t retention = kDefaultRetention) : retention_(retention) {}

    void put(RoundTranscript t);
    const RoundTranscript* find(std::uint32_t round_id) const;
    std::size_t size() const { return rounds_.size(); }
    std::size_t retention() const { return retention_; }

private:
    std::size_t retention_;
    std::deque<RoundTranscript> rounds_;
};

}  // namespace dcnet
