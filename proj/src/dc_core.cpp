#include "dcnet/dc_core.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "dcnet/error.hpp"

namespace dcnet {

const char* to_string(ArithmeticMode m) { return m == ArithmeticMode::Xor ? "xor" : "modq"; }

const char* to_string(CheckLevel level) {
    switch (level) {
        case CheckLevel::PairwiseShare: return "pairwise";
        case CheckLevel::PeerAggregate: return "aggregate";
        case CheckLevel::GlobalResult: return "global";
    }
    return "?";
}

// ---- Payload -------------------------------------------------------------------

Payload Payload::zeros(ArithmeticMode mode, std::size_t size) {
    Payload p;
    p.mode_ = mode;
    if (mode == ArithmeticMode::Xor)
        p.bytes_.assign(size, 0);
    else
        p.blocks_.assign(size, Scalar{});
    return p;
}

Payload Payload::random(ArithmeticMode mode, std::size_t size, Rng& rng) {
    Payload p;
    p.mode_ = mode;
    if (mode == ArithmeticMode::Xor) {
        p.bytes_.resize(size);
        rng.fill(p.bytes_);
    } else {
        p.blocks_.reserve(size);
        for (std::size_t i = 0; i < size; ++i) p.blocks_.push_back(Scalar::random(rng));
    }
    return p;
}

Payload Payload::from_bytes(ArithmeticMode mode, ByteView bytes) {
    Payload p;
    p.mode_ = mode;
    if (mode == ArithmeticMode::Xor) {
        p.bytes_.assign(bytes.begin(), bytes.end());
        return p;
    }
    auto n = blocks_for(bytes.size());
    p.blocks_.reserve(n);
    std::array<std::uint8_t, kBlockBytes> block;
    for (std::size_t b = 0; b < n; ++b) {
        block.fill(0);
        auto begin = b * kBlockBytes;
        auto len = std::min(kBlockBytes, bytes.size() - begin);
        std::copy_n(bytes.begin() + begin, len, block.begin());
        p.blocks_.push_back(embed_block(block));
    }
    return p;
}

Payload Payload::from_blocks(std::vector<Scalar> blocks) {
    Payload p;
    p.mode_ = ArithmeticMode::ModQBlocks;
    p.blocks_ = std::move(blocks);
    return p;
}

Bytes Payload::to_bytes() const {
    if (mode_ == ArithmeticMode::Xor) return bytes_;
    Bytes out;
    out.reserve(blocks_.size() * kBlockBytes);
    for (const auto& b : blocks_) {
        auto raw = extract_block(b);
        out.insert(out.end(), raw.begin(), raw.end());
    }
    return out;
}

namespace {
void require_compatible(const Payload& a, const Payload& b) {
    if (a.mode() != b.mode() || a.size() != b.size())
        throw InvalidArgument("payloads differ in arithmetic mode or length");
}
}  // namespace

Payload& Payload::operator+=(const Payload& o) {
    require_compatible(*this, o);
    if (mode_ == ArithmeticMode::Xor) {
        for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= o.bytes_[i];
    } else {
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
    }
    return *this;
}

Payload& Payload::operator-=(const Payload& o) {
    require_compatible(*this, o);
    if (mode_ == ArithmeticMode::Xor) {
        for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= o.bytes_[i];
    } else {
        for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= o.blocks_[i];
    }
    return *this;
}

// ---- slicing ---------------------------------------------------------------------

Share SliceMatrix::share_for(std::size_t peer) const {
    Share s;
    s.slice = slices.at(peer);
    if (blinded()) s.blindings = blindings.at(peer);
    return s;
}

Payload SliceMatrix::sum() const {
    Payload acc = Payload::zeros(mode, length());
    for (const auto& s : slices) acc += s;
    return acc;
}

SliceMatrix split_payload(const Payload& payload, std::size_t k, Rng& rng) {
    if (k < 2) throw InvalidArgument("a DC round needs at least two participants");
    SliceMatrix m;
    m.mode = payload.mode();
    m.slices.reserve(k);
    Payload last = payload;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        m.slices.push_back(Payload::random(payload.mode(), payload.size(), rng));
        last -= m.slices.back();
    }
    m.slices.push_back(std::move(last));
    if (m.mode == ArithmeticMode::ModQBlocks) {
        m.blindings.resize(k);
        for (auto& row : m.blindings) {
            row.reserve(payload.size());
            for (std::size_t t = 0; t < payload.size(); ++t) row.push_back(Scalar::random(rng));
        }
    }
    return m;
}

CommitmentMatrix commit_slices(const SliceMatrix& m, CryptoOps& ops) {
    if (m.mode != ArithmeticMode::ModQBlocks || !m.blinded())
        throw InvalidArgument("commitments need ModQBlocks slices with blindings");
    CommitmentMatrix c;
    c.rows = m.k();
    c.cols = m.length();
    if (ops.real()) c.cells.reserve(c.rows * c.cols);
    for (std::size_t i = 0; i < c.rows; ++i) {
        const auto& blocks = m.slices[i].blocks();
        for (std::size_t t = 0; t < c.cols; ++t) {
            auto cm = ops.commit(blocks[t], m.blindings[i][t]);
            if (ops.real()) c.cells.push_back(std::move(cm));
        }
    }
    return c;
}

CommitmentMatrix placeholder_commitments(std::size_t rows, std::size_t cols) {
    CommitmentMatrix c;
    c.rows = rows;
    c.cols = cols;
    return c;
}

// ---- aggregation ------------------------------------------------------------------

namespace {
void add_blindings(std::vector<Scalar>& acc, const std::vector<Scalar>& more) {
    if (acc.size() != more.size()) throw InvalidArgument("blinding vectors differ in length");
    for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += more[t];
}

std::string missing_message(const char* what, const std::vector<std::size_t>& missing) {
    std::string msg = std::string(what) + ": missing peers";
    for (auto p : missing) msg += " " + std::to_string(p);
    return msg;
}
}  // namespace

Aggregate aggregate_received(const Share& own_share, std::size_t self,
                             const std::vector<std::optional<Share>>& received) {
    std::vector<std::size_t> missing;
    for (std::size_t j = 0; j < received.size(); ++j) {
        if (j != self && !received[j]) missing.push_back(j);
    }
    if (self >= received.size()) throw InvalidArgument("own index outside the group");
    if (!missing.empty()) throw IncompleteRoundError(missing_message("incomplete sharing step", missing), missing);

    Aggregate agg;
    agg.sum = own_share.slice;
    agg.blindings = own_share.blindings;
    for (std::size_t j = 0; j < received.size(); ++j) {
        if (j == self) continue;
        agg.sum += received[j]->slice;
        if (!agg.blindings.empty()) add_blindings(agg.blindings, received[j]->blindings);
    }
    return agg;
}

Aggregate combine_broadcasts(const std::vector<std::optional<Aggregate>>& aggregates) {
    std::vector<std::size_t> missing;
    for (std::size_t j = 0; j < aggregates.size(); ++j) {
        if (!aggregates[j]) missing.push_back(j);
    }
    if (!missing.empty()) throw IncompleteRoundError(missing_message("incomplete broadcast step", missing), missing);
    if (aggregates.empty()) throw InvalidArgument("no aggregates to combine");

    Aggregate result = *aggregates.front();
    for (std::size_t j = 1; j < aggregates.size(); ++j) {
        result.sum += aggregates[j]->sum;
        if (!result.blindings.empty()) add_blindings(result.blindings, aggregates[j]->blindings);
    }
    return result;
}

// ---- verification ----------------------------------------------------------------

std::vector<std::size_t> VerificationReport::offending_peers(CheckLevel level) const {
    std::vector<std::size_t> peers;
    for (const auto& f : failures) {
        if (f.level == level && f.peer && std::find(peers.begin(), peers.end(), *f.peer) == peers.end())
            peers.push_back(*f.peer);
    }
    return peers;
}

bool check_share(const Share& share, const CommitmentMatrix& committer_matrix, std::size_t self,
                 CryptoOps& ops, std::vector<std::size_t>* failed_blocks) {
    const auto& blocks = share.slice.blocks();
    if (blocks.size() != committer_matrix.cols || share.blindings.size() != blocks.size()) {
        if (failed_blocks) failed_blocks->push_back(0);
        return false;
    }
    bool ok = true;
    for (std::size_t t = 0; t < blocks.size(); ++t) {
        static const Commitment placeholder;
        const auto& c = committer_matrix.materialised() ? committer_matrix.at(self, t) : placeholder;
        if (!ops.verify(c, blocks[t], share.blindings[t])) {
            ok = false;
            if (failed_blocks) failed_blocks->push_back(t);
        }
    }
    return ok;
}

std::vector<std::vector<Commitment>> commitment_column_sums(
    const std::vector<CommitmentMatrix>& matrices, CryptoOps& ops) {
    if (matrices.empty()) return {};
    const auto rows = matrices.front().rows;
    const auto cols = matrices.front().cols;
    for (const auto& m : matrices) {
        if (m.rows != rows || m.cols != cols) throw InvalidArgument("commitment matrices differ in shape");
    }
    std::vector<std::vector<Commitment>> columns(rows, std::vector<Commitment>(ops.real() ? cols : 0));
    std::vector<const Commitment*> terms(matrices.size());
    static const Commitment placeholder;
    for (std::size_t j = 0; j < rows; ++j) {
        for (std::size_t t = 0; t < cols; ++t) {
            for (std::size_t i = 0; i < matrices.size(); ++i)
                terms[i] = matrices[i].materialised() ? &matrices[i].at(j, t) : &placeholder;
            auto s = ops.sum(terms);
            if (ops.real()) columns[j][t] = std::move(s);
        }
    }
    return columns;
}

bool check_aggregate(const Aggregate& agg, const std::vector<Commitment>& column, CryptoOps& ops,
                     std::vector<std::size_t>* failed_blocks) {
    const auto& blocks = agg.sum.blocks();
    if (agg.blindings.size() != blocks.size() || (ops.real() && column.size() != blocks.size())) {
        if (failed_blocks) failed_blocks->push_back(0);
        return false;
    }
    bool ok = true;
    static const Commitment placeholder;
    for (std::size_t t = 0; t < blocks.size(); ++t) {
        const auto& c = ops.real() ? column[t] : placeholder;
        if (!ops.verify(c, blocks[t], agg.blindings[t])) {
            ok = false;
            if (failed_blocks) failed_blocks->push_back(t);
        }
    }
    return ok;
}

bool check_global(const Aggregate& result, const std::vector<std::vector<Commitment>>& columns,
                  CryptoOps& ops, std::vector<std::size_t>* failed_blocks) {
    const auto& blocks = result.sum.blocks();
    bool ok = true;
    std::vector<const Commitment*> terms(columns.size());
    static const Commitment placeholder;
    for (std::size_t t = 0; t < blocks.size(); ++t) {
        for (std::size_t j = 0; j < columns.size(); ++j) terms[j] = ops.real() ? &columns[j][t] : &placeholder;
        auto total = ops.sum(terms);
        if (!ops.verify(total, blocks[t], result.blindings.at(t))) {
            ok = false;
            if (failed_blocks) failed_blocks->push_back(t);
        }
    }
    return ok;
}

VerificationReport verify_round(const RoundTranscript& t, CryptoOps& ops) {
    VerificationReport report;
    if (!t.secured()) {
        // without commitments only reconstruction can be checked
        Payload expected = Payload::zeros(t.mode, t.result.sum.size());
        for (const auto& a : t.aggregates) expected += a.sum;
        if (!(expected == t.result.sum)) {
            report.global_ok = false;
            report.failures.push_back({CheckLevel::GlobalResult, std::nullopt, 0});
        }
        return report;
    }

    for (std::size_t i = 0; i < t.k; ++i) {
        if (i == t.self) continue;
        std::vector<std::size_t> failed;
        if (!check_share(t.received.at(i), t.commitments.at(i), t.self, ops, &failed)) {
            report.pairwise_ok = false;
            for (auto b : failed) report.failures.push_back({CheckLevel::PairwiseShare, i, b});
        }
    }

    auto columns = commitment_column_sums(t.commitments, ops);
    for (std::size_t j = 0; j < t.k; ++j) {
        std::vector<std::size_t> failed;
        static const std::vector<Commitment> none;
        if (!check_aggregate(t.aggregates.at(j), ops.real() ? columns.at(j) : none, ops, &failed)) {
            report.aggregate_ok = false;
            for (auto b : failed) report.failures.push_back({CheckLevel::PeerAggregate, j, b});
        }
    }

    std::vector<std::size_t> failed;
    if (!check_global(t.result, columns, ops, &failed)) {
        report.global_ok = false;
        for (auto b : failed) report.failures.push_back({CheckLevel::GlobalResult, std::nullopt, b});
    }
    return report;
}

// ---- persistence -----------------------------------------------------------------------

namespace {

void put_scalar(Bytes& out, const Scalar& s) {
    auto b = s.to_bytes();
    out.insert(out.end(), b.begin(), b.end());
}

void put_payload(Bytes& out, const Payload& p) {
    if (p.mode() == ArithmeticMode::Xor)
        append(out, p.bytes());
    else
        for (const auto& s : p.blocks()) put_scalar(out, s);
}

void put_scalars(Bytes& out, const std::vector<Scalar>& v) {
    for (const auto& s : v) put_scalar(out, s);
}

void put_matrix(Bytes& out, const CommitmentMatrix& m) {
    put_u16(out, static_cast<std::uint16_t>(m.rows));
    put_u32(out, static_cast<std::uint32_t>(m.cols));
    out.push_back(m.materialised() ? 1 : 0);
    if (!m.materialised()) return;
    for (const auto& c : m.cells) {
        auto e = c.element.encode();
        out.insert(out.end(), e.begin(), e.end());
    }
}

Scalar get_scalar(Reader& r) { return Scalar::from_bytes(r.take(kScalarBytes)); }

Payload get_payload(Reader& r, ArithmeticMode mode, std::size_t len) {
    if (mode == ArithmeticMode::Xor) {
        auto v = r.take(len);
        return Payload::from_bytes(mode, v);
    }
    std::vector<Scalar> blocks;
    blocks.reserve(len);
    for (std::size_t i = 0; i < len; ++i) blocks.push_back(get_scalar(r));
    return Payload::from_blocks(std::move(blocks));
}

std::vector<Scalar> get_scalars(Reader& r, std::size_t n) {
    std::vector<Scalar> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) v.push_back(get_scalar(r));
    return v;
}

CommitmentMatrix get_matrix(Reader& r) {
    CommitmentMatrix m;
    m.rows = r.u16();
    m.cols = r.u32();
    if (r.u8() == 0) return m;
    m.cells.reserve(m.rows * m.cols);
    for (std::size_t i = 0; i < m.rows * m.cols; ++i)
        m.cells.push_back(Commitment{GroupElement::decode(r.take(kPointBytes))});
    return m;
}

}  // namespace

Bytes encode_transcript(const RoundTranscript& t) {
    const bool blinded = t.mode == ArithmeticMode::ModQBlocks;
    const auto len = t.own.length();
    Bytes body;
    put_u32(body, t.round_id);
    put_u16(body, t.k);
    body.push_back(static_cast<std::uint8_t>(t.mode));
    put_u16(body, t.self);
    put_u32(body, static_cast<std::uint32_t>(len));
    body.push_back(t.secured() ? 1 : 0);
    for (std::size_t i = 0; i < t.k; ++i) put_payload(body, t.own.slices.at(i));
    if (blinded)
        for (std::size_t i = 0; i < t.k; ++i) put_scalars(body, t.own.blindings.at(i));
    for (std::size_t i = 0; i < t.k; ++i) {
        put_payload(body, t.received.at(i).slice);
        if (blinded) put_scalars(body, t.received.at(i).blindings);
    }
    if (t.secured())
        for (std::size_t i = 0; i < t.k; ++i) put_matrix(body, t.commitments.at(i));
    for (std::size_t i = 0; i < t.k; ++i) {
        put_payload(body, t.aggregates.at(i).sum);
        if (blinded) put_scalars(body, t.aggregates.at(i).blindings);
    }
    put_payload(body, t.result.sum);
    if (blinded) put_scalars(body, t.result.blindings);

    Bytes out;
    put_u32(out, static_cast<std::uint32_t>(body.size()));
    append(out, body);
    return out;
}

RoundTranscript decode_transcript(ByteView record) {
    Reader outer(record);
    auto body_len = outer.u32();
    Reader r(outer.take(body_len));
    if (!outer.done()) throw DecodeError("trailing bytes after transcript record");

    RoundTranscript t;
    t.round_id = r.u32();
    t.k = r.u16();
    auto mode = r.u8();
    if (mode > 1) throw DecodeError("unknown arithmetic mode");
    t.mode = static_cast<ArithmeticMode>(mode);
    t.self = r.u16();
    const std::size_t len = r.u32();
    const bool secured = r.u8() != 0;
    const bool blinded = t.mode == ArithmeticMode::ModQBlocks;

    t.own.mode = t.mode;
    for (std::size_t i = 0; i < t.k; ++i) t.own.slices.push_back(get_payload(r, t.mode, len));
    if (blinded)
        for (std::size_t i = 0; i < t.k; ++i) t.own.blindings.push_back(get_scalars(r, len));
    for (std::size_t i = 0; i < t.k; ++i) {
        Share s;
        s.slice = get_payload(r, t.mode, len);
        if (blinded) s.blindings = get_scalars(r, len);
        t.received.push_back(std::move(s));
    }
    if (secured)
        for (std::size_t i = 0; i < t.k; ++i) t.commitments.push_back(get_matrix(r));
    for (std::size_t i = 0; i < t.k; ++i) {
        Aggregate a;
        a.sum = get_payload(r, t.mode, len);
        if (blinded) a.blindings = get_scalars(r, len);
        t.aggregates.push_back(std::move(a));
    }
    t.result.sum = get_payload(r, t.mode, len);
    if (blinded) t.result.blindings = get_scalars(r, len);
    if (!r.done()) throw DecodeError("transcript record has unparsed bytes");
    return t;
}

void TranscriptFile::append(const RoundTranscript& t) const {
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot open transcript file " + path_.string());
    auto rec = encode_transcript(t);
    out.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size()));
    if (!out) throw IoError("short write to " + path_.string());
}

std::vector<RoundTranscript> TranscriptFile::read_all() const {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw IoError("cannot open transcript file " + path_.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<RoundTranscript> out;
    std::size_t pos = 0;
    while (pos < data.size()) {
        if (data.size() - pos < 4) throw DecodeError("truncated transcript record header");
        auto len = get_u32(data, pos);
        if (data.size() - pos - 4 < len) throw DecodeError("truncated transcript record");
        out.push_back(decode_transcript(ByteView(data).subspan(pos, 4 + len)));
        pos += 4 + len;
    }
    return out;
}

void TranscriptStore::put(RoundTranscript t) {
    rounds_.push_back(std::move(t));
    while (rounds_.size() > retention_) rounds_.pop_front();
}

const RoundTranscript* TranscriptStore::find(std::uint32_t round_id) const {
    for (auto it = rounds_.rbegin(); it != rounds_.rend(); ++it) {
        if (it->round_id == round_id) return &*it;
    }
    return nullptr;
}

}  // namespace dcnet
