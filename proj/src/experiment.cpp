#include "dcnet/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "dcnet/error.hpp"

namespace dcnet {

std::string Optimisations::label() const {
    std::string s;
    auto add = [&](bool on, const char* name) {
        if (!on) return;
        if (!s.empty()) s += '+';
        s += name;
    };
    add(deferred_validation, "deferred");
    add(precompute, "precompute");
    add(direct_transmission, "direct");
    return s.empty() ? "none" : s;
}

Optimisations parse_optimisations(const std::string& s) {
    Optimisations o;
    if (s.empty() || s == "none") return o;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "deferred") o.deferred_validation = true;
        else if (item == "precompute") o.precompute = true;
        else if (item == "direct") o.direct_transmission = true;
        else throw InfeasibleSpec("unknown optimisation '" + item + "'");
    }
    return o;
}

void ExperimentSpec::validate() const {
    if (nodes.empty() || senders.empty() || msg_sizes.empty()) throw InfeasibleSpec("empty parameter list");
    if (iterations < 1) throw InfeasibleSpec("iterations must be at least 1");
    for (auto k : nodes) {
        if (k < 2) throw InfeasibleSpec("group size must be at least 2");
        if (fixed_slots && k > 0x7fff) throw InfeasibleSpec("group too large for fixed slots");
        for (auto s : senders)
            if (senders_for(s, k) > k) throw InfeasibleSpec("more senders than nodes at k=" + std::to_string(k));
    }
    for (auto m : msg_sizes)
        if (m == 0 || m > kDefaultLengthCap) throw InfeasibleSpec("message size must be in 1..65535");
    if (baseline && mode == ModePolicy::FixedUnsecured)
        throw InfeasibleSpec("the baseline comparison runs the secured protocol");
    try {
        net.validate();
    } catch (const InvalidArgument& e) {
        throw InfeasibleSpec(e.what());
    }
    if (costs.threads == 0) throw InfeasibleSpec("at least one compute thread is required");
}

std::string csv_header() {
    return "protocol,iteration,k,senders,msg_size,mode,optimisations,sim_runtime_ms,bytes_total,"
           "commitments_generated,commitments_precomputed,commitments_verified,delivered,"
           "runtime_min_ms,runtime_median_ms,runtime_max_ms";
}

namespace {

std::string ms(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::uint64_t series_seed(std::uint64_t seed, std::size_t k, std::size_t senders, std::size_t size, std::uint32_t i) {
    std::uint64_t x = seed;
    for (std::uint64_t v : {std::uint64_t(k), std::uint64_t(senders), std::uint64_t(size), std::uint64_t(i)})
        x = (x ^ v) * 0x100000001b3ULL + 0x9e3779b97f4a7c15ULL;
    return x;
}

const char* mode_label(ModePolicy p) { return to_string(p); }

Row summarise(const std::vector<Row>& series) {
    Row s = series.front();
    s.iteration = "summary";
    std::vector<double> t;
    for (const auto& r : series) t.push_back(r.sim_runtime_ms);
    s.runtime_min_ms = *std::min_element(t.begin(), t.end());
    s.runtime_max_ms = *std::max_element(t.begin(), t.end());
    s.runtime_median_ms = median(t);
    s.sim_runtime_ms = s.runtime_median_ms;
    return s;
}

Row protocol_row(const ExperimentSpec& spec, std::size_t k, std::size_t senders, std::size_t size, std::uint32_t i) {
    Scenario sc;
    sc.k = k;
    sc.net = spec.net;
    sc.node.machine.policy = spec.mode;
    sc.node.crypto = spec.crypto;
    sc.node.costs = spec.costs;
    sc.node.options.deferred_validation = spec.opts.deferred_validation;
    sc.node.options.precompute = spec.opts.precompute;
    sc.node.options.direct_transmission = spec.opts.direct_transmission;
    sc.node.options.fixed_slots = spec.fixed_slots;
    sc.seed = series_seed(spec.seed, k, senders, size, i);
    Rng rng(sc.seed ^ 0x6d657373616765ULL);
    for (std::size_t s = 0; s < senders; ++s) {
        Bytes m(size);
        rng.fill(m);
        sc.messages[s] = {std::move(m)};
    }
    sc.max_instances = 1;
    auto r = coordinator_run(sc);

    Row row;
    row.protocol = "dcnet";
    row.iteration = std::to_string(i);
    row.k = k;
    row.senders = senders;
    row.msg_size = size;
    row.mode = mode_label(spec.mode);
    row.optimisations = spec.opts.label();
    row.sim_runtime_ms = to_ms(r.instances.front().runtime());
    row.bytes_total = r.bytes_total;
    auto ops = r.total_ops();
    row.commitments_generated = ops.commitments_generated;
    row.commitments_precomputed = ops.commitments_precomputed;
    row.commitments_verified = ops.commitments_verified;
    // messages seen by node 0
    for (const auto& d : r.nodes.front().delivered) row.delivered += d.instance == 0 ? 1 : 0;
    return row;
}

Row baseline_row(const ExperimentSpec& spec, std::size_t k, std::size_t senders, std::size_t size, std::uint32_t i) {
    BaselineScenario sc;
    sc.k = k;
    sc.l_fix = size;
    sc.net = spec.net;
    sc.crypto = spec.crypto;
    sc.costs = spec.costs;
    sc.seed = series_seed(spec.seed, k, senders, size, i);
    Rng rng(sc.seed ^ 0x6d657373616765ULL);
    for (std::size_t s = 0; s < senders; ++s) {
        Bytes m(size);
        rng.fill(m);
        sc.messages[s] = std::move(m);
    }
    auto r = run_baseline(sc);

    Row row;
    row.protocol = "baseline";
    row.iteration = std::to_string(i);
    row.k = k;
    row.senders = senders;
    row.msg_size = size;
    row.mode = "secured";
    row.optimisations = "none";
    row.sim_runtime_ms = to_ms(r.runtime);
    row.bytes_total = r.bytes_total;
    row.commitments_generated = r.ops.commitments_generated;
    row.commitments_precomputed = r.ops.commitments_precomputed;
    row.commitments_verified = r.ops.commitments_verified;
    for (const auto& s : r.decoded.front()) row.delivered += s.empty() ? 0 : 1;
    return row;
}

template <typename F>
void run_series(const ExperimentSpec& spec, std::vector<Row>& out, F make_row) {
    for (auto k : spec.nodes)
        for (auto s : spec.senders)
            for (auto size : spec.msg_sizes) {
                std::vector<Row> series;
                for (std::uint32_t i = 0; i < spec.iterations; ++i)
                    series.push_back(make_row(k, spec.senders_for(s, k), size, i));
                out.insert(out.end(), series.begin(), series.end());
                out.push_back(summarise(series));
            }
}

}  // namespace

std::string csv_line(const Row& r) {
    const bool summary = r.iteration == "summary";
    std::ostringstream os;
    os << r.protocol << ',' << r.iteration << ',' << r.k << ',' << r.senders << ',' << r.msg_size << ',' << r.mode
       << ',' << r.optimisations << ',' << ms(r.sim_runtime_ms) << ',' << r.bytes_total << ','
       << r.commitments_generated << ',' << r.commitments_precomputed << ',' << r.commitments_verified << ','
       << r.delivered << ',';
    if (summary) os << ms(r.runtime_min_ms) << ',' << ms(r.runtime_median_ms) << ',' << ms(r.runtime_max_ms);
    else os << ",,";
    return os.str();
}

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
    out << csv_header() << '\n';
    for (const auto& r : rows) out << csv_line(r) << '\n';
}

double median(std::vector<double> v) {
    if (v.empty()) throw InvalidArgument("median of an empty series");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

std::vector<Row> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<Row> rows;
    run_series(spec, rows, [&](std::size_t k, std::size_t s, std::size_t size, std::uint32_t i) {
        return protocol_row(spec, k, s, size, i);
    });
    return rows;
}

std::vector<Row> compare_baseline(const ExperimentSpec& spec) {
    spec.validate();
    if (!spec.baseline) throw InfeasibleSpec("baseline comparison requested without the baseline flag");
    std::vector<Row> rows;
    run_series(spec, rows, [&](std::size_t k, std::size_t s, std::size_t size, std::uint32_t i) {
        return protocol_row(spec, k, s, size, i);
    });
    run_series(spec, rows, [&](std::size_t k, std::size_t s, std::size_t size, std::uint32_t i) {
        return baseline_row(spec, k, s, size, i);
    });
    return rows;
}

}  // namespace dcnet
