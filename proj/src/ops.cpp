#include "dcnet/ops.hpp"

namespace dcnet {

OpCounters& OpCounters::operator+=(const OpCounters& o) {
    commitments_generated += o.commitments_generated;
    commitments_precomputed += o.commitments_precomputed;
    commitments_verified += o.commitments_verified;
    point_additions += o.point_additions;
    return *this;
}

OpCounters operator-(OpCounters a, const OpCounters& b) {
    a.commitments_generated -= b.commitments_generated;
    a.commitments_precomputed -= b.commitments_precomputed;
    a.commitments_verified -= b.commitments_verified;
    a.point_additions -= b.point_additions;
    return a;
}

Commitment CryptoOps::commit(const Scalar& value, const Scalar& blinding) {
    if (precomputing_)
        ++counters_.commitments_precomputed;
    else
        ++counters_.commitments_generated;
    return real() ? dcnet::commit(value, blinding) : Commitment{};
}

bool CryptoOps::verify(const Commitment& c, const Scalar& value, const Scalar& blinding) {
    ++counters_.commitments_verified;
    return real() ? dcnet::verify_commitment(c, value, blinding) : true;
}

Commitment CryptoOps::add(const Commitment& a, const Commitment& b) {
    ++counters_.point_additions;
    return real() ? a + b : Commitment{};
}

Commitment CryptoOps::sum(std::span<const Commitment* const> terms) {
    if (terms.empty()) return {};
    counters_.point_additions += terms.size() - 1;
    if (!real()) return {};
    Commitment acc = *terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) acc += *terms[i];
    return acc;
}

}  // namespace dcnet
