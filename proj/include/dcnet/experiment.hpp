#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dcnet/baseline.hpp"
#include "dcnet/node.hpp"

namespace dcnet {

// Sender count 0 stands for k/2.
inline constexpr std::size_t kHalfGroup = 0;

struct Optimisations {
    bool deferred_validation = false;
    bool precompute = false;
    bool direct_transmission = false;

    std::string label() const;  // "none" or '+'-joined names
    bool operator==(const Optimisations&) const = default;
};

// Parses "none" or a comma-separated subset of deferred, precompute, direct.
Optimisations parse_optimisations(const std::string& s);

struct ExperimentSpec {
    std::vector<std::size_t> nodes{8};
    std::vector<std::size_t> senders{1};
    std::vector<std::size_t> msg_sizes{512};
    ModePolicy mode = ModePolicy::FixedSecured;
    Optimisations opts;
    std::uint32_t iterations = 100;
    std::uint64_t seed = 1;
    bool fixed_slots = false;
    bool baseline = false;
    NetConfig net;
    ComputeCosts costs;
    CryptoExecution crypto = CryptoExecution::Modelled;

    // Throws InfeasibleSpec when a combination cannot run.
    void validate() const;
    std::size_t senders_for(std::size_t s, std::size_t k) const { return s == kHalfGroup ? k / 2 : s; }
};

struct Row {
    std::string protocol;  // "dcnet" or "baseline"
    std::string iteration;  // index or "summary"
    std::size_t k = 0;
    std::size_t senders = 0;
    std::size_t msg_size = 0;
    std::string mode;
    std::string optimisations;
    double sim_runtime_ms = 0;
    std::uint64_t bytes_total = 0;
    std::uint64_t commitments_generated = 0;
    std::uint64_t commitments_precomputed = 0;
    std::uint64_t commitments_verified = 0;
    std::size_t delivered = 0;
    // summary rows only
    double runtime_min_ms = 0;
    double runtime_median_ms = 0;
    double runtime_max_ms = 0;
};

std::string csv_header();
std::string csv_line(const Row& r);
void write_csv(std::ostream& out, const std::vector<Row>& rows);

// One row per iteration of the protocol, then one summary row per
// (k, senders, msg_size) series.
std::vector<Row> run_experiment(const ExperimentSpec& spec);

// Paired series of the protocol and the fixed-length baseline with
// l_fix = msg_size.
std::vector<Row> compare_baseline(const ExperimentSpec& spec);

// Sorted-copy median; the mean of the middle pair for even sizes.
double median(std::vector<double> v);

}  // namespace dcnet
