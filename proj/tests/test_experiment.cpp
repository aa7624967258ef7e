#include <doctest.h>

#include <sstream>

#include "dcnet/error.hpp"
#include "dcnet/experiment.hpp"

using namespace dcnet;

namespace {

std::string csv(const std::vector<Row>& rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

const Row& summary(const std::vector<Row>& rows, const std::string& protocol, std::size_t k, std::size_t size) {
    for (const auto& r : rows)
        if (r.iteration == "summary" && r.protocol == protocol && r.k == k && r.msg_size == size) return r;
    throw std::runtime_error("no summary row");
}

}  // namespace

TEST_CASE("optimisation labels") {
    CHECK(parse_optimisations("none").label() == "none");
    CHECK(parse_optimisations("").label() == "none");
    CHECK(parse_optimisations("direct,deferred").label() == "deferred+direct");
    CHECK(parse_optimisations("deferred,precompute,direct").label() == "deferred+precompute+direct");
    CHECK_THROWS_AS(parse_optimisations("deferred,fast"), InfeasibleSpec);
}

TEST_CASE("median") {
    CHECK(median({3.0}) == 3.0);
    CHECK(median({4.0, 1.0, 3.0}) == 3.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK_THROWS_AS(median({}), InvalidArgument);
}

TEST_CASE("infeasible specifications fail before any run") {
    ExperimentSpec s;
    s.nodes = {4};
    s.senders = {5};
    CHECK_THROWS_AS(run_experiment(s), InfeasibleSpec);
    s.senders = {1};
    s.iterations = 0;
    CHECK_THROWS_AS(run_experiment(s), InfeasibleSpec);
    s.iterations = 1;
    s.nodes = {1};
    CHECK_THROWS_AS(run_experiment(s), InfeasibleSpec);
    s.nodes = {4};
    s.msg_sizes = {70000};
    CHECK_THROWS_AS(run_experiment(s), InfeasibleSpec);
    s.msg_sizes = {512};
    CHECK_THROWS_AS(compare_baseline(s), InfeasibleSpec);
    s.net.bandwidth_bps = 0;
    CHECK_THROWS_AS(run_experiment(s), InfeasibleSpec);
}

TEST_CASE("one row per iteration plus a summary") {
    ExperimentSpec s;
    s.nodes = {4, 6};
    s.senders = {kHalfGroup};
    s.mode = ModePolicy::FixedUnsecured;
    s.iterations = 5;
    s.fixed_slots = true;
    auto rows = run_experiment(s);
    REQUIRE(rows.size() == 12);
    CHECK(rows[5].iteration == "summary");
    CHECK(rows[5].senders == 2);
    CHECK(rows[11].senders == 3);
    for (const auto& r : rows) CHECK(r.delivered == r.senders);
    CHECK(rows[5].runtime_min_ms <= rows[5].runtime_median_ms);
    CHECK(rows[5].runtime_median_ms <= rows[5].runtime_max_ms);
}

TEST_CASE("csv schema") {
    Row r;
    r.protocol = "dcnet";
    r.iteration = "0";
    r.k = 8;
    r.senders = 4;
    r.msg_size = 512;
    r.mode = "unsecured";
    r.optimisations = "none";
    r.sim_runtime_ms = 404.8071;
    r.bytes_total = 10;
    r.delivered = 4;
    CHECK(csv_line(r) == "dcnet,0,8,4,512,unsecured,none,404.807,10,0,0,0,4,,,");
    r.iteration = "summary";
    r.runtime_min_ms = 1;
    r.runtime_median_ms = 2;
    r.runtime_max_ms = 3;
    CHECK(csv_line(r) == "dcnet,summary,8,4,512,unsecured,none,404.807,10,0,0,0,4,1.000,2.000,3.000");
    std::string text = csv({r});
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.back() == '\n');
    CHECK(text.substr(0, text.find('\n')) == csv_header());
}

TEST_CASE("same spec and seed give identical csv bytes") {
    ExperimentSpec s;
    s.nodes = {4};
    s.senders = {2};
    s.mode = ModePolicy::Auto;
    s.iterations = 4;
    s.seed = 99;
    CHECK(csv(run_experiment(s)) == csv(run_experiment(s)));
    s.baseline = true;
    s.mode = ModePolicy::FixedSecured;
    s.iterations = 2;
    CHECK(csv(compare_baseline(s)) == csv(compare_baseline(s)));
}

TEST_CASE("deferred validation halves the verified commitments") {
    ExperimentSpec s;
    s.nodes = {6};
    s.senders = {3};
    s.iterations = 1;
    s.fixed_slots = true;
    auto plain = run_experiment(s);
    s.opts.deferred_validation = true;
    auto deferred = run_experiment(s);
    CHECK(deferred[0].commitments_verified * 2 == plain[0].commitments_verified);
    CHECK(deferred[0].sim_runtime_ms < plain[0].sim_runtime_ms);
}

TEST_CASE("precomputation moves initial-round generation to its own column") {
    ExperimentSpec s;
    s.nodes = {6};
    s.senders = {3};
    s.iterations = 1;
    s.fixed_slots = true;
    auto plain = run_experiment(s);
    s.opts.precompute = true;
    auto pre = run_experiment(s);
    CHECK(pre[0].commitments_generated + pre[0].commitments_precomputed >= plain[0].commitments_generated);
    CHECK(pre[0].commitments_generated < plain[0].commitments_generated);
    CHECK(pre[0].sim_runtime_ms < plain[0].sim_runtime_ms);
}

TEST_CASE("baseline comparison pairs both protocols per message size") {
    ExperimentSpec s;
    s.nodes = {4};
    s.senders = {1};
    s.msg_sizes = {64, 128};
    s.iterations = 2;
    s.baseline = true;
    auto rows = compare_baseline(s);
    CHECK(rows.size() == 2 * 2 * 3);
    const auto& b = summary(rows, "baseline", 4, 128);
    const std::size_t blocks = baseline_vector_blocks(4, 128);
    const std::uint64_t dc = 4 * 3 * (Envelope::kHeaderBytes + 6 + 4 * blocks * kPointBytes) +
                             4 * 3 * 2 * (Envelope::kHeaderBytes + 6 + 2 * blocks * kScalarBytes);
    const std::uint64_t transmit = 4 * 4 * (Envelope::kHeaderBytes + 128 + 2);
    CHECK(b.bytes_total == dc + transmit);
    CHECK(b.delivered == 1);
    CHECK(summary(rows, "dcnet", 4, 64).delivered == 1);
}
