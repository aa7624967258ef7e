#pragma once

#include <cstdint>
#include <span>

#include "dcnet/crypto.hpp"

namespace dcnet {

struct OpCounters {
    std::uint64_t commitments_generated = 0;
    std::uint64_t commitments_precomputed = 0;
    std::uint64_t commitments_verified = 0;
    std::uint64_t point_additions = 0;

    OpCounters& operator+=(const OpCounters& o);
    friend OpCounters operator-(OpCounters a, const OpCounters& b);
    bool operator==(const OpCounters&) const = default;
};

enum class CryptoExecution { Real, Modelled };

// Counts and executes one participant's commitment operations. Modelled mode
// skips curve arithmetic: commitments are identity placeholders, checks pass,
// counters advance as in Real mode.
class CryptoOps {
public:
    explicit CryptoOps(CryptoExecution exec = CryptoExecution::Real) : exec_(exec) {}

    bool real() const { return exec_ == CryptoExecution::Real; }
    const OpCounters& counters() const { return counters_; }

    Commitment commit(const Scalar& value, const Scalar& blinding);
    bool verify(const Commitment& c, const Scalar& value, const Scalar& blinding);
    Commitment add(const Commitment& a, const Commitment& b);
    Commitment sum(std::span<const Commitment* const> terms);

    // Commitments made while a scope is alive are counted as precomputed.
    class PrecomputeScope {
    public:
        explicit PrecomputeScope(CryptoOps& ops) : ops_(ops), prev_(ops.precomputing_) {
            ops_.precomputing_ = true;
        }
        ~PrecomputeScope() { ops_.precomputing_ = prev_; }
        PrecomputeScope(const PrecomputeScope&) = delete;
        PrecomputeScope& operator=(const PrecomputeScope&) = delete;

    private:
        CryptoOps& ops_;
        bool prev_;
    };

private:
    CryptoExecution exec_;
    OpCounters counters_;
    bool precomputing_ = false;
};

}  // namespace dcnet
