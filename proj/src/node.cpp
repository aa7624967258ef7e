#include "dcnet/node.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#include "dcnet/error.hpp"

namespace dcnet {

// ---- DcSession ---------------------------------------------------------------

DcSession::DcSession(Setup s, CryptoOps& ops, Send send, std::function<void()> settle)
    : setup_(std::move(s)),
      ops_(ops),
      send_(std::move(send)),
      settle_(std::move(settle)),
      commitments_(setup_.k),
      shares_(setup_.k),
      aggregates_(setup_.k) {
    if (setup_.k < 2 || setup_.self >= setup_.k) throw InvalidArgument("bad session geometry");
    if (setup_.slices.k() != setup_.k) throw InvalidArgument("slice matrix does not match the group size");
    shares_[setup_.self] = setup_.slices.share_for(setup_.self);
    if (setup_.commitments) commitments_[setup_.self] = *setup_.commitments;
    transcript_.round_id = setup_.round_id;
    transcript_.k = static_cast<std::uint16_t>(setup_.k);
    transcript_.self = static_cast<std::uint16_t>(setup_.self);
    transcript_.mode = setup_.slices.mode;
}

void DcSession::start() {
    if (secured())
        send_(std::nullopt, Envelope{EnvelopeKind::Commitments, setup_.round_id,
                                     static_cast<std::uint16_t>(setup_.self), *setup_.commitments});
    maybe_send_shares();
}

std::size_t DcSession::count_commitments() const {
    return static_cast<std::size_t>(std::count_if(commitments_.begin(), commitments_.end(),
                                                  [](const auto& c) { return c.has_value(); }));
}

void DcSession::receive(const Envelope& e) {
    if (e.round_id != setup_.round_id) throw ProtocolLogicFault("envelope for another round");
    const std::size_t j = e.sender;
    if (j >= setup_.k || j == setup_.self) throw ProtocolLogicFault("envelope from an unexpected sender");
    switch (e.kind) {
        case EnvelopeKind::Commitments: {
            if (!secured()) throw ProtocolLogicFault("commitments in an unsecured round");
            if (commitments_[j]) throw ProtocolLogicFault("duplicate commitments");
            const auto& m = std::get<CommitmentMatrix>(e.body);
            if (m.rows != setup_.k || m.cols != setup_.slices.length())
                throw ProtocolLogicFault("commitment matrix has the wrong shape");
            commitments_[j] = m;
            maybe_send_shares();
            break;
        }
        case EnvelopeKind::Shares:
            if (shares_[j]) throw ProtocolLogicFault("duplicate share");
            shares_[j] = std::get<Share>(e.body);
            maybe_aggregate();
            break;
        case EnvelopeKind::Aggregate:
            if (aggregates_[j]) throw ProtocolLogicFault("duplicate aggregate");
            aggregates_[j] = std::get<Aggregate>(e.body);
            maybe_finish();
            break;
        default:
            throw ProtocolLogicFault(std::string("unexpected envelope kind ") + to_string(e.kind));
    }
}

void DcSession::maybe_send_shares() {
    if (shares_sent_ || (secured() && count_commitments() < setup_.k)) return;
    shares_sent_ = true;
    for (std::size_t j = 0; j < setup_.k; ++j) {
        if (j == setup_.self) continue;
        send_(j, Envelope{EnvelopeKind::Shares, setup_.round_id, static_cast<std::uint16_t>(setup_.self),
                          setup_.slices.share_for(j)});
    }
    maybe_aggregate();
}

void DcSession::maybe_aggregate() {
    if (aggregated_ || !shares_sent_) return;
    if (std::any_of(shares_.begin(), shares_.end(), [](const auto& s) { return !s; })) return;
    if (secured() && !setup_.deferred) {
        for (std::size_t j = 0; j < setup_.k; ++j) {
            if (j == setup_.self) continue;
            std::vector<std::size_t> failed;
            if (!check_share(*shares_[j], *commitments_[j], setup_.self, ops_, &failed)) {
                report_.pairwise_ok = false;
                for (auto b : failed) report_.failures.push_back({CheckLevel::PairwiseShare, j, b});
            }
        }
    }
    settle_();
    aggregates_[setup_.self] = aggregate_received(*shares_[setup_.self], setup_.self, shares_);
    aggregated_ = true;
    send_(std::nullopt, Envelope{EnvelopeKind::Aggregate, setup_.round_id, static_cast<std::uint16_t>(setup_.self),
                                 *aggregates_[setup_.self]});
    maybe_finish();
}

void DcSession::maybe_finish() {
    if (done_ || !aggregated_) return;
    if (std::any_of(aggregates_.begin(), aggregates_.end(), [](const auto& a) { return !a; })) return;
    Aggregate result = combine_broadcasts(aggregates_);

    if (secured()) {
        for (auto& c : commitments_) transcript_.commitments.push_back(std::move(*c));
        auto columns = commitment_column_sums(transcript_.commitments, ops_);
        static const std::vector<Commitment> modelled;
        for (std::size_t j = 0; j < setup_.k; ++j) {
            std::vector<std::size_t> failed;
            if (!check_aggregate(*aggregates_[j], ops_.real() ? columns[j] : modelled, ops_, &failed)) {
                report_.aggregate_ok = false;
                for (auto b : failed) report_.failures.push_back({CheckLevel::PeerAggregate, j, b});
            }
        }
        if (!setup_.deferred) {
            std::vector<std::size_t> failed;
            if (!check_global(result, columns, ops_, &failed)) {
                report_.global_ok = false;
                for (auto b : failed) report_.failures.push_back({CheckLevel::GlobalResult, std::nullopt, b});
            }
        }
    }
    settle_();

    transcript_.own = std::move(setup_.slices);
    for (auto& s : shares_) transcript_.received.push_back(std::move(*s));
    for (auto& a : aggregates_) transcript_.aggregates.push_back(std::move(*a));
    transcript_.result = std::move(result);
    done_ = true;
}

std::string DcSession::describe() const {
    auto count = [](const auto& v) {
        return std::count_if(v.begin(), v.end(), [](const auto& x) { return x.has_value(); });
    };
    std::ostringstream os;
    os << "round_id=" << setup_.round_id << " commitments=" << (secured() ? count(commitments_) : 0) << "/"
       << (secured() ? setup_.k : 0) << " shares=" << count(shares_) << "/" << setup_.k
       << " aggregates=" << count(aggregates_) << "/" << setup_.k;
    return os.str();
}

// ---- Participant -------------------------------------------------------------

Participant::Participant(std::size_t net_id, KeyPair keys, std::vector<PublicKey> roster, NodeConfig cfg,
                         std::uint64_t seed, const Directory& directory)
    : net_id_(net_id),
      keys_(keys),
      cfg_(cfg),
      rng_(seed),
      directory_(directory),
      ops_(cfg.crypto),
      state_(initial_state(keys.pk, std::move(roster), cfg.machine)) {}

void Participant::queue_message(Bytes m) {
    if (m.empty()) throw InvalidArgument("empty message");
    if (m.size() > cfg_.options.length_cap)
        throw LengthCapError("message of " + std::to_string(m.size()) + " bytes exceeds the length cap");
    outbox_.push_back(std::move(m));
}

void Participant::on_timer(Context& ctx, std::uint64_t tag) {
    ctx_ = &ctx;
    if (tag == kTagGroupReady) {
        handle(Event::group_ready());
        refresh_precompute();
    } else if (tag == kTagTick) {
        handle(Event::timer());
    }
    pump();
    ctx_ = nullptr;
}

void Participant::on_envelope(Context& ctx, const Envelope& e) {
    ctx_ = &ctx;
    if (session_ && !session_->done() && e.round_id == session_->round_id())
        session_->receive(e);
    else
        early_[e.round_id].push_back(e);
    pump();
    ctx_ = nullptr;
}

void Participant::pump() {
    while (session_ && session_->done()) {
        if (session_->round_id() % 2 == 0) finish_initial();
        else finish_final();
    }
}

std::string Participant::describe() const {
    std::ostringstream os;
    os << "node=" << net_id_ << " phase=" << to_string(state_.phase)
       << " mode=" << (state_.mode == RoundMode::Secured ? "SECURED" : "UNSECURED") << " round=" << state_.instance
       << " outbox=" << outbox_.size() << " session=" << (session_ ? session_->describe() : "none");
    return os.str();
}

bool Participant::quiescent() const {
    return state_.phase != Phase::InitialRound && state_.phase != Phase::FinalRound;
}

void Participant::log_line(const std::string& line) { log_.push_back({ctx_ ? ctx_->now() : 0, net_id_, line}); }

void Participant::settle() {
    OpCounters delta = ops_.counters() - settled_;
    settled_ = ops_.counters();
    if (ctx_) ctx_->charge(cfg_.costs.charge(delta));
}

void Participant::send(std::optional<std::size_t> to, Envelope e) {
    if (to) {
        ctx_->send(directory_.at(state_.roster.at(*to)), std::move(e));
        return;
    }
    std::vector<std::size_t> ids;
    for (std::size_t j = 0; j < state_.roster.size(); ++j)
        if (j != state_.self) ids.push_back(directory_.at(state_.roster[j]));
    ctx_->broadcast(ids, std::move(e));
}

void Participant::handle(const Event& e) {
    auto r = step(state_, e, cfg_.machine);
    state_ = std::move(r.state);
    log_line(dcnet::log_line(state_, e.kind, net_id_));
    for (const auto& a : r.actions) apply(a);
}

void Participant::apply(const Action& a) {
    switch (a.kind) {
        case ActionKind::StartInitialRound:
            start_initial(a.mode);
            break;
        case ActionKind::StartFinalRound:
            start_final(a.mode);
            break;
        case ActionKind::CompleteInstance:
            completions_.push_back({state_.instance - 1, ctx_->now()});
            init_prep_.reset();
            own_message_.reset();
            layout_.reset();
            refresh_precompute();
            break;
        case ActionKind::SwitchMode:
            precomputed_.reset();
            break;
        case ActionKind::ExcludePeer:
            precomputed_.reset();
            init_prep_.reset();
            own_message_.reset();
            layout_.reset();
            log_line("round=" + std::to_string(state_.instance) + " node=" + std::to_string(net_id_) +
                     " action=EXCLUDE_PEER peer=" + to_hex(ByteView(a.peer.bytes).first(4)));
            break;
        case ActionKind::ReinitGroup:
            log_line("round=" + std::to_string(state_.instance) + " node=" + std::to_string(net_id_) +
                     " action=REINIT_GROUP roster=" + std::to_string(state_.roster.size()));
            break;
    }
}

bool Participant::misbehaving_now(Misbehaviour::Kind kind) const {
    const auto& m = cfg_.misbehaviour;
    return m.kind == kind && state_.instance >= m.from_instance && misbehaved_ < m.times;
}

void Participant::refresh_precompute() {
    if (!cfg_.options.precompute || state_.mode != RoundMode::Secured || state_.phase != Phase::Idle) return;
    const std::size_t k = state_.roster.size();
    if (precomputed_ && precomputed_->k == k) return;
    settle();
    precomputed_ = precompute_initial(k, RoundMode::Secured, rng_, ops_);
    settle();
}

void Participant::open_session(DcSession::Setup setup) {
    settle();
    const auto round_id = setup.round_id;
    session_.emplace(
        std::move(setup), ops_, [this](std::optional<std::size_t> to, Envelope e) { send(to, std::move(e)); },
        [this] { settle(); });
    session_->start();
    auto it = early_.find(round_id);
    if (it != early_.end()) {
        auto pending = std::move(it->second);
        early_.erase(it);
        for (const auto& e : pending) session_->receive(e);
    }
}

InitialPreparation Participant::prepare_flood(RoundMode mode) {
    const std::size_t k = state_.roster.size();
    InitSlotVector v;
    v.slots.resize(2 * k);
    for (std::size_t s = 0; s <= k; ++s) {
        auto& a = v.slots[s];
        a.r = static_cast<std::uint16_t>(kFirstMessageId + rng_.uniform(0x10000 - kFirstMessageId));
        a.length = static_cast<std::uint16_t>(1 + rng_.uniform(64));
        if (mode == RoundMode::Secured)
            for (const auto& pk : state_.roster) a.seeds.push_back(seal(pk, Seed::random(rng_)));
    }
    InitialPreparation p;
    p.payload = Payload::from_bytes(arithmetic_for(mode), encode_initial(v, k, mode));
    p.slices = split_payload(p.payload, k, rng_);
    if (mode == RoundMode::Secured) p.commitments = commit_slices(p.slices, ops_);
    return p;
}

void Participant::start_initial(RoundMode mode) {
    const std::size_t k = state_.roster.size();
    carrying_blame_ = false;
    carried_message_.clear();
    own_message_.reset();
    anns_.clear();
    layout_.reset();

    if (misbehaving_now(Misbehaviour::Kind::FloodSlots)) {
        ++misbehaved_;
        init_prep_ = prepare_flood(mode);
    } else {
        InitialOptions opts;
        opts.mode = mode;
        opts.length_cap = cfg_.options.length_cap;
        if (cfg_.options.fixed_slots) opts.fixed_slot = 2 * state_.self;
        InitialIntent intent = InitialIntent::none();
        while (!pending_blames_.empty() && mode == RoundMode::Secured) {
            const auto& pb = pending_blames_.front();
            std::uint32_t offset = state_.instance - pb.instance;
            if (offset == 0 || offset > InstanceArchive::kDefaultRetention) {
                pending_blames_.pop_front();
                continue;
            }
            intent = InitialIntent::carry(
                kBlameId, build_blame(pb.accused, pb.seed, pb.slot, static_cast<std::uint16_t>(offset)).encode());
            carrying_blame_ = true;
            break;
        }
        if (!carrying_blame_ && !outbox_.empty()) {
            const Bytes& m = outbox_.front();
            if (cfg_.options.direct_transmission && mode == RoundMode::Secured && m.size() <= carrier_capacity(k, mode)) {
                intent = InitialIntent::carry(kDirectId, m);
                carried_message_ = m;
            } else {
                intent = InitialIntent::announce(m.size());
            }
        }
        PrecomputedInitial* pre = nullptr;
        if (mode == RoundMode::Secured && precomputed_ && precomputed_->k == k) pre = &*precomputed_;
        init_prep_ = prepare_initial(intent, state_.roster, opts, rng_, mode == RoundMode::Secured ? &ops_ : nullptr,
                                     pre);
        if (pre) precomputed_.reset();
    }

    DcSession::Setup setup;
    setup.round_id = 2 * state_.instance;
    setup.k = k;
    setup.self = state_.self;
    setup.deferred = cfg_.options.deferred_validation;
    setup.slices = init_prep_->slices;
    setup.commitments = init_prep_->commitments;
    open_session(std::move(setup));
}

void Participant::finish_initial() {
    RoundTranscript t = session_->transcript();
    VerificationReport report = session_->report();
    session_.reset();
    if (cfg_.options.deferred_validation) transcripts_.put(t);

    const std::size_t k = state_.roster.size();
    const RoundMode mode = t.mode == ArithmeticMode::ModQBlocks ? RoundMode::Secured : RoundMode::Unsecured;
    anns_ = decode_initial_result(t.result.sum, k, mode);

    RoundSummary s;
    s.occupied = occupied_slots(anns_);
    s.malformed = static_cast<std::size_t>(
        std::count_if(anns_.begin(), anns_.end(), [](const auto& a) { return a.malformed; }));
    s.collisions = s.malformed;
    auto indicators = validate_announcements(anns_, k, cfg_.options.length_cap);
    s.garbage = !report.ok() || std::any_of(indicators.begin(), indicators.end(), [](const auto& i) {
                    return i.kind == IndicatorKind::LengthCapExceeded;
                });
    layout_ = compute_layout(anns_);
    s.reserved_bytes = layout_ ? layout_->total : 0;

    if (init_prep_->slot) {
        if (!own_announcement_intact(*init_prep_, anns_)) {
            ++collisions_seen_;
        } else if (carrying_blame_) {
            pending_blames_.pop_front();
        } else if (!carried_message_.empty()) {
            outbox_.pop_front();
        } else if (!outbox_.empty()) {
            own_message_ = OwnMessage{init_prep_->r, outbox_.front()};
        }
    }

    std::vector<BlameMessage> blames;
    for (const auto& a : anns_) {
        if (a.malformed) continue;
        if (a.r == kDirectId) delivered_.push_back({state_.instance, kDirectId, a.carried, true});
        if (a.r == kBlameId) {
            try {
                blames.push_back(BlameMessage::decode(a.carried));
            } catch (const DecodeError&) {
            }
        }
    }
    s.blames = blames.size();

    for (const auto& b : blames) {
        try {
            Verdict v = validate_blame(b, state_.instance, archive_, ops_);
            settle();
            const InstanceRecord* rec = archive_.find(state_.instance - b.round_offset);
            PublicKey accused = rec && b.accused < rec->roster.size() ? rec->roster[b.accused] : PublicKey{};
            log_line("round=" + std::to_string(state_.instance) + " node=" + std::to_string(net_id_) +
                     " verdict=" + to_string(v.outcome) + " accused=" + to_hex(ByteView(accused.bytes).first(4)));
            handle(Event::blame_verdict(v, accused));
        } catch (const CannotAdjudicate& err) {
            log_line("round=" + std::to_string(state_.instance) + " node=" + std::to_string(net_id_) +
                     " verdict=CANNOT_ADJUDICATE");
        }
    }
    if (state_.phase == Phase::Excluding) return;
    handle(Event::round_complete(s));
}

void Participant::start_final(RoundMode mode) {
    const std::size_t k = state_.roster.size();
    std::vector<std::optional<Seed>> opened(anns_.size());
    if (mode == RoundMode::Secured) opened = open_slot_seeds(anns_, state_.self, keys_.sk);
    CryptoOps* ops = mode == RoundMode::Secured ? &ops_ : nullptr;
    auto prep = prepare_final(own_message_, *layout_, opened, k, mode, rng_, ops);

    if (misbehaving_now(Misbehaviour::Kind::CorruptFinal)) {
        for (std::size_t i = 0; i < layout_->entries.size(); ++i) {
            if (prep.own_entry == i) continue;
            inject_fault(prep, cfg_.misbehaviour.fault, layout_->entries[i].begin(), rng_, ops);
            ++misbehaved_;
            break;
        }
    }

    DcSession::Setup setup;
    setup.round_id = 2 * state_.instance + 1;
    setup.k = k;
    setup.self = state_.self;
    setup.deferred = cfg_.options.deferred_validation;
    setup.slices = std::move(prep.slices);
    setup.commitments = std::move(prep.commitments);
    open_session(std::move(setup));
}

void Participant::finish_final() {
    RoundTranscript t = session_->transcript();
    VerificationReport report = session_->report();
    session_.reset();
    if (cfg_.options.deferred_validation) transcripts_.put(t);

    auto extracted = extract_messages(t.result.sum, *layout_);
    RoundSummary s;
    s.final = true;
    s.garbage = !report.ok();
    for (const auto& m : extracted) {
        if (m.corrupted) s.garbage = true;
        else delivered_.push_back({state_.instance, m.r, m.bytes, false});
    }

    const bool secured = t.secured();
    if (own_message_) {
        if (!detect_collision(own_message_->bytes, extracted, own_message_->r)) {
            outbox_.pop_front();
        } else {
            ++collisions_seen_;
            if (secured) {
                try {
                    auto accused = verify_zero_commitments(*init_prep_->slot, init_prep_->seeds, t.commitments,
                                                           *layout_, state_.self, ops_);
                    if (accused) {
                        pending_blames_.push_back({state_.instance, *accused, *init_prep_->slot,
                                                   init_prep_->seeds[*accused]});
                        log_line("round=" + std::to_string(state_.instance) + " node=" + std::to_string(net_id_) +
                                 " blame=" + std::to_string(*accused));
                    }
                } catch (const CannotVerify&) {
                }
            }
        }
    }
    if (secured) archive_.put({state_.instance, state_.roster, anns_, *layout_, std::move(t.commitments)});
    settle();
    handle(Event::round_complete(s));
}

// ---- coordinator -------------------------------------------------------------

std::string RunResult::log_text() const {
    std::string out;
    for (const auto& r : log) {
        out += r.line;
        out += '\n';
    }
    return out;
}

OpCounters RunResult::total_ops() const {
    OpCounters total;
    for (const auto& n : nodes) total += n.ops;
    return total;
}

namespace {

void require_quiescent(const std::vector<std::unique_ptr<Participant>>& nodes, const Simulator& sim) {
    std::string dump;
    bool stuck = false;
    for (const auto& n : nodes) {
        if (!sim.attached(n->net_id())) continue;
        if (!n->quiescent()) stuck = true;
        dump += n->describe() + "\n";
    }
    if (stuck) throw DeadlockError("event queue drained with nodes inside a round:\n" + dump);
}

SimTime settle_time(const Simulator& sim) {
    SimTime t = sim.now();
    for (std::size_t i = 0; i < sim.nodes(); ++i) t = std::max(t, sim.busy_until(i));
    return t;
}

}  // namespace

RunResult coordinator_run(const Scenario& sc) {
    if (sc.k < 2) throw InvalidArgument("a group needs at least two nodes");
    for (const auto& [id, _] : sc.messages)
        if (id >= sc.k) throw InvalidArgument("message queued for a node outside the group");
    for (const auto& [id, _] : sc.attackers)
        if (id >= sc.k) throw InvalidArgument("attacker outside the group");
    sc.net.validate();

    Rng rng(sc.seed);
    std::vector<KeyPair> keys;
    std::vector<PublicKey> roster;
    Directory dir;
    for (std::size_t i = 0; i < sc.k; ++i) {
        keys.push_back(KeyPair::generate(rng));
        roster.push_back(keys.back().pk);
        dir[keys.back().pk] = i;
    }
    if (dir.size() != sc.k) throw InvalidArgument("duplicate public keys");

    std::vector<std::unique_ptr<Participant>> nodes;
    for (std::size_t i = 0; i < sc.k; ++i) {
        NodeConfig cfg = sc.node;
        auto a = sc.attackers.find(i);
        cfg.misbehaviour = a != sc.attackers.end() ? a->second : Misbehaviour{};
        nodes.push_back(std::make_unique<Participant>(i, keys[i], roster, cfg, rng.next_u64(), dir));
        auto m = sc.messages.find(i);
        if (m != sc.messages.end())
            for (const auto& msg : m->second) nodes.back()->queue_message(msg);
    }

    Simulator sim(sc.net, sc.k);
    for (auto& n : nodes) sim.attach(n->net_id(), n.get());
    auto post_all = [&](SimTime at, std::uint64_t tag) {
        for (auto& n : nodes)
            if (sim.attached(n->net_id())) sim.post_timer(n->net_id(), at, tag);
    };

    RunResult res;
    post_all(0, kTagGroupReady);
    sim.run();
    require_quiescent(nodes, sim);

    const SimTime interval = from_ms(sc.tick_interval_ms);
    SimTime last_tick = 0;
    for (std::uint32_t ticks = 0; ticks < sc.max_instances; ++ticks) {
        bool work = std::any_of(nodes.begin(), nodes.end(),
                                [&](const auto& n) { return sim.attached(n->net_id()) && n->has_pending_work(); });
        if (!work && ticks > 0) break;

        SimTime start = ticks == 0 ? settle_time(sim) : std::max(settle_time(sim), last_tick + interval);
        last_tick = start;
        std::uint32_t instance = 0;
        for (auto& n : nodes)
            if (sim.attached(n->net_id())) instance = std::max(instance, n->state().instance);
        post_all(start, kTagTick);
        sim.run();
        require_quiescent(nodes, sim);
        res.instances.push_back({instance, start, settle_time(sim)});

        std::set<PublicKey> excluded;
        bool excluding = false;
        for (auto& n : nodes) {
            if (!sim.attached(n->net_id())) continue;
            if (n->state().phase == Phase::Excluding) excluding = true;
            excluded.insert(n->state().excluded.begin(), n->state().excluded.end());
        }
        if (!excluding) continue;

        post_all(settle_time(sim), kTagTick);
        sim.run();
        for (auto& n : nodes) {
            if (sim.attached(n->net_id()) && excluded.count(n->key())) {
                sim.detach(n->net_id());
                ++res.exclusions;
            }
        }
        post_all(settle_time(sim), kTagGroupReady);
        sim.run();
        require_quiescent(nodes, sim);
    }

    res.end = settle_time(sim);
    res.bytes_total = sim.network().total_bytes();
    for (auto& n : nodes) {
        NodeReport r;
        r.id = n->net_id();
        r.key = n->key();
        r.excluded = !sim.attached(n->net_id());
        r.attacker = sc.attackers.count(n->net_id()) > 0;
        r.ops = n->counters();
        r.bytes_sent = sim.network().bytes_sent(n->net_id());
        r.delivered = n->delivered();
        r.outbox_remaining = n->outbox_size();
        r.phase = n->state().phase;
        r.mode = n->state().mode;
        res.nodes.push_back(std::move(r));
        res.log.insert(res.log.end(), n->log().begin(), n->log().end());
    }
    std::stable_sort(res.log.begin(), res.log.end(),
                     [](const LogRecord& a, const LogRecord& b) { return a.at != b.at ? a.at < b.at : a.node < b.node; });
    return res;
}

}  // namespace dcnet
