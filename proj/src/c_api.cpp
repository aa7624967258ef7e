#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "dcnet/dcnet.h"
#include "dcnet/error.hpp"
#include "dcnet/experiment.hpp"

struct dcnet_spec {
    dcnet::ExperimentSpec spec;
};

struct dcnet_result {
    std::vector<dcnet::Row> rows;
    std::string csv;
};

struct dcnet_scenario {
    dcnet::Scenario sc;
};

struct dcnet_run_result {
    dcnet::RunResult run;
    std::string log;
};

namespace {

thread_local std::string last_error;

template <typename F>
dcnet_status guarded(F&& f) {
    try {
        last_error.clear();
        f();
        return DCNET_OK;
    } catch (const dcnet::Error& e) {
        last_error = e.what();
        return static_cast<dcnet_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown failure";
    }
    return DCNET_E_INTERNAL;
}

void require(const void* p, const char* what) {
    if (!p) throw dcnet::InvalidArgument(std::string(what) + " is null");
}

template <typename H, typename F>
dcnet_status with(H* handle, const char* name, F&& f) {
    return guarded([&] {
        require(handle, name);
        f();
    });
}

std::vector<std::size_t> list(const size_t* v, size_t n) {
    if (n == 0) throw dcnet::InvalidArgument("empty list");
    require(v, "list");
    return {v, v + n};
}

dcnet::ModePolicy policy(dcnet_mode m) {
    switch (m) {
        case DCNET_MODE_AUTO: return dcnet::ModePolicy::Auto;
        case DCNET_MODE_SECURED: return dcnet::ModePolicy::FixedSecured;
        case DCNET_MODE_UNSECURED: return dcnet::ModePolicy::FixedUnsecured;
    }
    throw dcnet::InvalidArgument("unknown mode");
}

dcnet::CryptoExecution execution(dcnet_crypto c) {
    switch (c) {
        case DCNET_CRYPTO_MODELLED: return dcnet::CryptoExecution::Modelled;
        case DCNET_CRYPTO_REAL: return dcnet::CryptoExecution::Real;
    }
    throw dcnet::InvalidArgument("unknown crypto execution");
}

dcnet::ProtocolOptions& apply(dcnet::ProtocolOptions& o, const dcnet::Optimisations& p) {
    o.deferred_validation = p.deferred_validation;
    o.precompute = p.precompute;
    o.direct_transmission = p.direct_transmission;
    return o;
}

dcnet::Misbehaviour misbehaviour(dcnet_attack attack, uint32_t from_instance, uint32_t times) {
    dcnet::Misbehaviour m;
    m.from_instance = from_instance;
    m.times = times;
    m.kind = dcnet::Misbehaviour::Kind::CorruptFinal;
    switch (attack) {
        case DCNET_ATTACK_FLOOD_SLOTS: m.kind = dcnet::Misbehaviour::Kind::FloodSlots; break;
        case DCNET_ATTACK_WRONG_VALUE: m.fault = dcnet::FaultKind::WrongValue; break;
        case DCNET_ATTACK_WRONG_BLINDING: m.fault = dcnet::FaultKind::WrongBlinding; break;
        case DCNET_ATTACK_WRONG_SLOT: m.fault = dcnet::FaultKind::WrongSlot; break;
        default: throw dcnet::InvalidArgument("unknown attack");
    }
    return m;
}

}  // namespace

extern "C" {

const char* dcnet_last_error(void) { return last_error.c_str(); }

const char* dcnet_status_name(dcnet_status s) {
    switch (s) {
        case DCNET_OK: return "ok";
        case DCNET_E_INVALID_ARGUMENT: return "invalid argument";
        case DCNET_E_DECODE: return "decode error";
        case DCNET_E_AUTHENTICATION: return "authentication error";
        case DCNET_E_RANGE: return "range error";
        case DCNET_E_INCOMPLETE_ROUND: return "incomplete round";
        case DCNET_E_LENGTH_CAP: return "length cap exceeded";
        case DCNET_E_OWN_ANNOUNCEMENT_LOST: return "own announcement lost";
        case DCNET_E_CANNOT_VERIFY: return "cannot verify";
        case DCNET_E_CANNOT_ADJUDICATE: return "cannot adjudicate";
        case DCNET_E_PROTOCOL_LOGIC: return "protocol logic fault";
        case DCNET_E_ROUTING: return "routing error";
        case DCNET_E_DEADLOCK: return "deadlock";
        case DCNET_E_INFEASIBLE: return "infeasible specification";
        case DCNET_E_IO: return "i/o error";
        case DCNET_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* dcnet_version(void) { return "1.0.0"; }

dcnet_status dcnet_spec_new(dcnet_spec** out) {
    return guarded([&] {
        require(out, "out");
        *out = new dcnet_spec{};
    });
}

void dcnet_spec_free(dcnet_spec* spec) { delete spec; }

dcnet_status dcnet_spec_set_nodes(dcnet_spec* spec, const size_t* k, size_t n) {
    return with(spec, "spec", [&] { spec->spec.nodes = list(k, n); });
}

dcnet_status dcnet_spec_set_senders(dcnet_spec* spec, const size_t* senders, size_t n) {
    return with(spec, "spec", [&] { spec->spec.senders = list(senders, n); });
}

dcnet_status dcnet_spec_set_msg_sizes(dcnet_spec* spec, const size_t* sizes, size_t n) {
    return with(spec, "spec", [&] { spec->spec.msg_sizes = list(sizes, n); });
}

dcnet_status dcnet_spec_set_mode(dcnet_spec* spec, dcnet_mode mode) {
    return with(spec, "spec", [&] { spec->spec.mode = policy(mode); });
}

dcnet_status dcnet_spec_set_optimisations(dcnet_spec* spec, const char* opts) {
    return with(spec, "spec", [&] {
        require(opts, "opts");
        spec->spec.opts = dcnet::parse_optimisations(opts);
    });
}

dcnet_status dcnet_spec_set_iterations(dcnet_spec* spec, uint32_t iterations) {
    return with(spec, "spec", [&] { spec->spec.iterations = iterations; });
}

dcnet_status dcnet_spec_set_seed(dcnet_spec* spec, uint64_t seed) {
    return with(spec, "spec", [&] { spec->spec.seed = seed; });
}

dcnet_status dcnet_spec_set_fixed_slots(dcnet_spec* spec, int on) {
    return with(spec, "spec", [&] { spec->spec.fixed_slots = on != 0; });
}

dcnet_status dcnet_spec_set_baseline(dcnet_spec* spec, int on) {
    return with(spec, "spec", [&] { spec->spec.baseline = on != 0; });
}

dcnet_status dcnet_spec_set_network(dcnet_spec* spec, double latency_ms, double bandwidth_bps) {
    return with(spec, "spec", [&] {
        dcnet::NetConfig c = spec->spec.net;
        c.latency_ms = latency_ms;
        c.bandwidth_bps = bandwidth_bps;
        c.validate();
        spec->spec.net = c;
    });
}

dcnet_status dcnet_spec_set_compute(dcnet_spec* spec, double scalar_mul_ms, double point_add_ms, unsigned threads) {
    return with(spec, "spec", [&] {
        if (!(scalar_mul_ms >= 0) || !(point_add_ms >= 0) || threads == 0)
            throw dcnet::InvalidArgument("compute costs must be >= 0 with at least one thread");
        spec->spec.costs = dcnet::ComputeCosts{scalar_mul_ms, point_add_ms, threads};
    });
}

dcnet_status dcnet_spec_set_crypto(dcnet_spec* spec, dcnet_crypto crypto) {
    return with(spec, "spec", [&] { spec->spec.crypto = execution(crypto); });
}

dcnet_status dcnet_run(const dcnet_spec* spec, dcnet_result** out) {
    return guarded([&] {
        require(spec, "spec");
        require(out, "out");
        *out = nullptr;
        auto r = std::make_unique<dcnet_result>();
        r->rows = spec->spec.baseline ? dcnet::compare_baseline(spec->spec) : dcnet::run_experiment(spec->spec);
        std::ostringstream os;
        dcnet::write_csv(os, r->rows);
        r->csv = os.str();
        *out = r.release();
    });
}

void dcnet_result_free(dcnet_result* result) { delete result; }

size_t dcnet_result_rows(const dcnet_result* result) { return result ? result->rows.size() : 0; }

dcnet_status dcnet_result_row(const dcnet_result* result, size_t index, dcnet_row* out) {
    return guarded([&] {
        require(result, "result");
        require(out, "out");
        if (index >= result->rows.size()) throw dcnet::InvalidArgument("row index out of range");
        const auto& r = result->rows[index];
        dcnet_row row{};
        row.baseline = r.protocol == "baseline";
        row.summary = r.iteration == "summary";
        row.iteration = row.summary ? 0 : static_cast<uint32_t>(std::stoul(r.iteration));
        row.k = r.k;
        row.senders = r.senders;
        row.msg_size = r.msg_size;
        row.sim_runtime_ms = r.sim_runtime_ms;
        row.bytes_total = r.bytes_total;
        row.commitments_generated = r.commitments_generated;
        row.commitments_precomputed = r.commitments_precomputed;
        row.commitments_verified = r.commitments_verified;
        row.delivered = r.delivered;
        row.runtime_min_ms = r.runtime_min_ms;
        row.runtime_median_ms = r.runtime_median_ms;
        row.runtime_max_ms = r.runtime_max_ms;
        *out = row;
    });
}

const char* dcnet_result_csv(const dcnet_result* result, size_t* len) {
    if (!result) return nullptr;
    if (len) *len = result->csv.size();
    return result->csv.c_str();
}

dcnet_status dcnet_scenario_new(size_t k, dcnet_scenario** out) {
    return guarded([&] {
        require(out, "out");
        if (k < 2) throw dcnet::InvalidArgument("a group needs at least two nodes");
        auto s = new dcnet_scenario{};
        s->sc.k = k;
        *out = s;
    });
}

void dcnet_scenario_free(dcnet_scenario* sc) { delete sc; }

dcnet_status dcnet_scenario_add_message(dcnet_scenario* sc, size_t node, const uint8_t* data, size_t len) {
    return with(sc, "sc", [&] {
        if (node >= sc->sc.k) throw dcnet::InvalidArgument("node outside the group");
        if (len == 0) throw dcnet::InvalidArgument("empty message");
        require(data, "data");
        sc->sc.messages[node].emplace_back(data, data + len);
    });
}

dcnet_status dcnet_scenario_add_attacker(dcnet_scenario* sc, size_t node, dcnet_attack attack, uint32_t from_instance,
                                         uint32_t times) {
    return with(sc, "sc", [&] {
        if (node >= sc->sc.k) throw dcnet::InvalidArgument("node outside the group");
        sc->sc.attackers[node] = misbehaviour(attack, from_instance, times);
    });
}

dcnet_status dcnet_scenario_set_mode(dcnet_scenario* sc, dcnet_mode mode) {
    return with(sc, "sc", [&] { sc->sc.node.machine.policy = policy(mode); });
}

dcnet_status dcnet_scenario_set_crypto(dcnet_scenario* sc, dcnet_crypto crypto) {
    return with(sc, "sc", [&] { sc->sc.node.crypto = execution(crypto); });
}

dcnet_status dcnet_scenario_set_optimisations(dcnet_scenario* sc, const char* opts) {
    return with(sc, "sc", [&] {
        require(opts, "opts");
        apply(sc->sc.node.options, dcnet::parse_optimisations(opts));
    });
}

dcnet_status dcnet_scenario_set_network(dcnet_scenario* sc, double latency_ms, double bandwidth_bps) {
    return with(sc, "sc", [&] {
        dcnet::NetConfig c = sc->sc.net;
        c.latency_ms = latency_ms;
        c.bandwidth_bps = bandwidth_bps;
        c.validate();
        sc->sc.net = c;
    });
}

dcnet_status dcnet_scenario_set_max_instances(dcnet_scenario* sc, uint32_t n) {
    return with(sc, "sc", [&] {
        if (n == 0) throw dcnet::InvalidArgument("at least one instance");
        sc->sc.max_instances = n;
    });
}

dcnet_status dcnet_scenario_set_seed(dcnet_scenario* sc, uint64_t seed) {
    return with(sc, "sc", [&] { sc->sc.seed = seed; });
}

dcnet_status dcnet_scenario_run(const dcnet_scenario* sc, dcnet_run_result** out) {
    return guarded([&] {
        require(sc, "sc");
        require(out, "out");
        *out = nullptr;
        auto r = std::make_unique<dcnet_run_result>();
        r->run = dcnet::coordinator_run(sc->sc);
        r->log = r->run.log_text();
        *out = r.release();
    });
}

void dcnet_run_free(dcnet_run_result* run) { delete run; }

const char* dcnet_run_log(const dcnet_run_result* run, size_t* len) {
    if (!run) return nullptr;
    if (len) *len = run->log.size();
    return run->log.c_str();
}

uint32_t dcnet_run_exclusions(const dcnet_run_result* run) { return run ? run->run.exclusions : 0; }

size_t dcnet_run_instances(const dcnet_run_result* run) { return run ? run->run.instances.size() : 0; }

double dcnet_run_end_ms(const dcnet_run_result* run) { return run ? dcnet::to_ms(run->run.end) : 0.0; }

uint64_t dcnet_run_bytes_total(const dcnet_run_result* run) { return run ? run->run.bytes_total : 0; }

size_t dcnet_run_nodes(const dcnet_run_result* run) { return run ? run->run.nodes.size() : 0; }

dcnet_status dcnet_run_delivered(const dcnet_run_result* run, size_t node, size_t* count) {
    return guarded([&] {
        require(run, "run");
        require(count, "count");
        if (node >= run->run.nodes.size()) throw dcnet::InvalidArgument("node index out of range");
        *count = run->run.nodes[node].delivered.size();
    });
}

dcnet_status dcnet_run_node_excluded(const dcnet_run_result* run, size_t node, int* excluded) {
    return guarded([&] {
        require(run, "run");
        require(excluded, "excluded");
        if (node >= run->run.nodes.size()) throw dcnet::InvalidArgument("node index out of range");
        *excluded = run->run.nodes[node].excluded ? 1 : 0;
    });
}

}  // extern "C"
