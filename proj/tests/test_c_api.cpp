#include <doctest.h>

#include <string>

#include "dcnet/dcnet.h"

TEST_CASE("status names and version") {
    CHECK(std::string(dcnet_status_name(DCNET_OK)) == "ok");
    CHECK(std::string(dcnet_status_name(DCNET_E_INFEASIBLE)) == "infeasible specification");
    CHECK(std::string(dcnet_version()) == "1.0.0");
}

TEST_CASE("null handles are rejected with a message") {
    CHECK(dcnet_spec_new(nullptr) == DCNET_E_INVALID_ARGUMENT);
    CHECK(std::string(dcnet_last_error()) == "out is null");
    CHECK(dcnet_spec_set_seed(nullptr, 1) == DCNET_E_INVALID_ARGUMENT);
    CHECK(dcnet_result_rows(nullptr) == 0);
    CHECK(dcnet_result_csv(nullptr, nullptr) == nullptr);
    dcnet_spec_free(nullptr);
    dcnet_result_free(nullptr);
    dcnet_run_free(nullptr);
}

TEST_CASE("experiment through the C API") {
    dcnet_spec* spec = nullptr;
    REQUIRE(dcnet_spec_new(&spec) == DCNET_OK);
    size_t k[] = {4, 6};
    size_t s[] = {2};
    size_t m[] = {100};
    CHECK(dcnet_spec_set_nodes(spec, k, 2) == DCNET_OK);
    CHECK(dcnet_spec_set_senders(spec, s, 1) == DCNET_OK);
    CHECK(dcnet_spec_set_msg_sizes(spec, m, 1) == DCNET_OK);
    CHECK(dcnet_spec_set_mode(spec, DCNET_MODE_UNSECURED) == DCNET_OK);
    CHECK(dcnet_spec_set_iterations(spec, 3) == DCNET_OK);
    CHECK(dcnet_spec_set_fixed_slots(spec, 1) == DCNET_OK);
    CHECK(dcnet_spec_set_optimisations(spec, "bogus") == DCNET_E_INFEASIBLE);
    CHECK(dcnet_spec_set_network(spec, -1, 1e6) == DCNET_E_INVALID_ARGUMENT);
    CHECK(dcnet_spec_set_compute(spec, 1, 1, 0) == DCNET_E_INVALID_ARGUMENT);

    dcnet_result* res = nullptr;
    REQUIRE(dcnet_run(spec, &res) == DCNET_OK);
    CHECK(dcnet_result_rows(res) == 2 * (3 + 1));
    dcnet_row row{};
    REQUIRE(dcnet_result_row(res, 3, &row) == DCNET_OK);
    CHECK(row.summary == 1);
    CHECK(row.k == 4);
    CHECK(row.delivered == 2);
    CHECK(row.runtime_median_ms > 400.0);
    CHECK(dcnet_result_row(res, 99, &row) == DCNET_E_INVALID_ARGUMENT);
    size_t len = 0;
    std::string csv = dcnet_result_csv(res, &len);
    CHECK(csv.size() == len);
    CHECK(csv.rfind("protocol,iteration,k,", 0) == 0);
    dcnet_result_free(res);

    size_t too_many[] = {9};
    CHECK(dcnet_spec_set_senders(spec, too_many, 1) == DCNET_OK);
    CHECK(dcnet_run(spec, &res) == DCNET_E_INFEASIBLE);
    CHECK(res == nullptr);
    dcnet_spec_free(spec);
}

TEST_CASE("attacker scenario through the C API") {
    dcnet_scenario* sc = nullptr;
    REQUIRE(dcnet_scenario_new(4, &sc) == DCNET_OK);
    const uint8_t msg[] = {'h', 'i'};
    CHECK(dcnet_scenario_add_message(sc, 0, msg, sizeof msg) == DCNET_OK);
    CHECK(dcnet_scenario_add_message(sc, 7, msg, sizeof msg) == DCNET_E_INVALID_ARGUMENT);
    CHECK(dcnet_scenario_add_attacker(sc, 3, DCNET_ATTACK_WRONG_VALUE, 0, 1) == DCNET_OK);
    CHECK(dcnet_scenario_add_attacker(sc, 3, static_cast<dcnet_attack>(42), 0, 1) == DCNET_E_INVALID_ARGUMENT);
    CHECK(dcnet_scenario_set_mode(sc, DCNET_MODE_SECURED) == DCNET_OK);
    CHECK(dcnet_scenario_set_max_instances(sc, 6) == DCNET_OK);

    dcnet_run_result* run = nullptr;
    REQUIRE(dcnet_scenario_run(sc, &run) == DCNET_OK);
    CHECK(dcnet_run_exclusions(run) == 1);
    CHECK(dcnet_run_nodes(run) == 4);
    int excluded = 0;
    CHECK(dcnet_run_node_excluded(run, 3, &excluded) == DCNET_OK);
    CHECK(excluded == 1);
    size_t delivered = 0;
    CHECK(dcnet_run_delivered(run, 0, &delivered) == DCNET_OK);
    CHECK(delivered == 2);  // the corrupted copy, then the retransmission
    CHECK(dcnet_run_delivered(run, 4, &delivered) == DCNET_E_INVALID_ARGUMENT);
    std::string log = dcnet_run_log(run, nullptr);
    CHECK(log.find("action=EXCLUDE_PEER") != std::string::npos);
    dcnet_run_free(run);
    dcnet_scenario_free(sc);
}
