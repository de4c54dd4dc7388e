#include "nccell/handover.hpp"

#include <algorithm>
#include <string>

#include "nccell/errors.hpp"

namespace nccell {

std::string_view key_path_name(KeyPath p) noexcept {
    switch (p) {
        case KeyPath::LedgerFirstHo: return "LedgerFirstHo";
        case KeyPath::LedgerPending: return "LedgerPending";
        case KeyPath::LedgerSteadyState: return "LedgerSteadyState";
        case KeyPath::BaselinePerHo: return "BaselinePerHo";
        case KeyPath::IntraDomain: return "IntraDomain";
    }
    return "?";
}

std::size_t HoProcedure::key_signals() const {
    return static_cast<std::size_t>(
        std::count_if(signals.begin(), signals.end(), [](const SignalRecord& r) { return r.key_exchange; }));
}

DomainKeyStore::DomainKeyStore(Field field, std::size_t payload_size, unsigned keys_per_domain, std::uint64_t seed)
    : field_(std::move(field)), payload_size_(payload_size), keys_per_domain_(keys_per_domain), seed_(seed) {
    if (payload_size_ == 0 || keys_per_domain_ == 0) throw InvalidParameter("key store needs n >= 1 and l >= 1");
}

const std::vector<MacKey>& DomainKeyStore::keys(DomainId domain) {
    auto it = cache_.find(domain);
    if (it != cache_.end()) return it->second;
    Rng rng = substream(seed_, 0x4B45590000ull + domain);
    std::vector<MacKey> set;
    set.reserve(keys_per_domain_);
    for (unsigned i = 0; i < keys_per_domain_; ++i)
        set.push_back(MacKey::random(field_, domain * keys_per_domain_ + i, payload_size_, rng, domain));
    return cache_.emplace(domain, std::move(set)).first->second;
}

HandoverEngine::HandoverEngine(Config cfg, Ledger& ledger, SignalTrace& trace, DomainKeyStore& keys)
    : cfg_(std::move(cfg)), ledger_(ledger), trace_(trace), keys_(keys) {
    if (cfg_.prep_timeout_ms <= 0) throw InvalidParameter("preparation timeout must be positive");
}

DomainId HandoverEngine::domain_of(CellId cell) const {
    if (cfg_.domain_of_cell.empty()) return cell;
    return cfg_.domain_of_cell.at(cell);
}

void HandoverEngine::emit(HoProcedure& proc, SignalKind kind, Entity src, Entity dst, SimTime t, bool key) {
    const SignalRecord rec{kind, src, dst, t, key};
    trace_.push_back(rec);
    proc.signals.push_back(rec);
}

std::size_t HandoverEngine::begin(const HoEvent& ev) {
    if (ev.source == ev.target)
        throw NoOpHandover("UE " + std::to_string(ev.ue) + " asked to hand over to its serving cell " +
                           std::to_string(ev.source));
    HoProcedure proc;
    proc.ue = ev.ue;
    proc.s_cell = ev.source;
    proc.t_cell = ev.target;
    proc.t_trigger = ev.t;
    emit(proc, SignalKind::HoRequest, Entity::controller(ev.source), Entity::controller(ev.target), ev.t, false);

    const DomainId target_domain = domain_of(ev.target);
    const std::size_t idx = procs_.size();
    bool ready = true;
    if (domain_of(ev.source) == target_domain) {
        proc.key_path = KeyPath::IntraDomain;
    } else if (is_baseline(cfg_.scheme)) {
        proc.key_path = KeyPath::BaselinePerHo;
        proc.first_into_domain = claimed_.insert(target_domain).second;
    } else {
        proc.first_into_domain = claimed_.insert(target_domain).second;
        if (ledger_.query_keys(ev.source, target_domain)) {
            proc.key_path = KeyPath::LedgerSteadyState;
        } else if (ledger_.is_pending(EntryKind::CellKeySet, target_domain)) {
            proc.key_path = KeyPath::LedgerPending;
            ready = false;
        } else {
            const auto receipt = ledger_.submit_candidate(
                CandidateEntry::key_set(ev.target, target_domain, keys_.keys(target_domain), ev.t));
            if (receipt.queued) charges_[target_domain].upload = trace_.back();
            proc.key_path = KeyPath::LedgerFirstHo;
            ready = false;
        }
    }
    procs_.push_back(std::move(proc));
    if (ready)
        complete(procs_[idx], ev.t);
    else
        waiting_.push_back(idx);
    return idx;
}

void HandoverEngine::charge_first_ho(HoProcedure& proc) {
    const auto& c = charges_[domain_of(proc.t_cell)];
    if (c.upload) proc.signals.push_back(*c.upload);
    if (c.broadcast) proc.signals.push_back(*c.broadcast);
}

void HandoverEngine::complete(HoProcedure& proc, SimTime now) {
    const bool intra = proc.key_path == KeyPath::IntraDomain;
    const bool baseline = proc.key_path == KeyPath::BaselinePerHo;
    if (!intra && !baseline && proc.first_into_domain) charge_first_ho(proc);

    const Entity s = Entity::controller(proc.s_cell);
    const Entity t = Entity::controller(proc.t_cell);
    const Entity ue = Entity::ue(proc.ue);

    proc.t_prepared = now;
    proc.phase = HoPhase::Prepared;
    emit(proc, SignalKind::HoAck, t, s, now, baseline);

    proc.phase = HoPhase::Executing;
    emit(proc, SignalKind::HoCommand, s, ue, now, false);
    emit(proc, SignalKind::HoConfirm, ue, t, now, false);
    if (!intra) emit(proc, SignalKind::KeyToUe, s, ue, now, true);
    emit(proc, SignalKind::PathSwitch, t, Entity::core(), now, false);
    emit(proc, SignalKind::HoComplete, t, s, now, false);

    proc.t_complete = now;
    proc.phase = HoPhase::Complete;
}

void HandoverEngine::on_block(const LedgerBlock& block, SimTime now) {
    const SignalRecord broadcast{SignalKind::BlockBroadcast, Entity::ledger_server(), Entity::all_controllers(),
                                 block.verified_at, true};
    for (const auto& e : block.entries)
        if (e.kind == EntryKind::CellKeySet) charges_[e.domain].broadcast = broadcast;

    std::vector<std::size_t> still;
    for (std::size_t idx : waiting_) {
        HoProcedure& proc = procs_[idx];
        if (!ledger_.query_keys(proc.s_cell, domain_of(proc.t_cell))) {
            still.push_back(idx);
            continue;
        }
        if (now - proc.t_trigger > cfg_.prep_timeout_ms)
            throw HoPreparationTimeout("UE " + std::to_string(proc.ue) + " waited " +
                                       std::to_string(now - proc.t_trigger) + " ms for keys of cell " +
                                       std::to_string(proc.t_cell));
        complete(proc, now);
    }
    waiting_ = std::move(still);
}

void HandoverEngine::check_timeouts(SimTime now) const {
    for (std::size_t idx : waiting_) {
        const HoProcedure& proc = procs_[idx];
        if (now - proc.t_trigger > cfg_.prep_timeout_ms)
            throw HoPreparationTimeout("UE " + std::to_string(proc.ue) + " still waiting for keys of cell " +
                                       std::to_string(proc.t_cell) + " after " +
                                       std::to_string(now - proc.t_trigger) + " ms");
    }
}

std::optional<PrestageAction> HandoverEngine::predict_and_prestage(const HoEvent& forecast,
                                                                   const PredictionConfig& prediction,
                                                                   Rng& rng) const {
    if (!prediction.enabled) return std::nullopt;
    const bool hit = bernoulli(prediction.accuracy, rng);
    if (!hit || is_baseline(cfg_.scheme)) return std::nullopt;
    return PrestageAction{forecast.target, std::max<SimTime>(0, forecast.t - prediction.lead_ms)};
}

void HandoverEngine::prestage(CellId cell, SimTime now) {
    if (is_baseline(cfg_.scheme)) return;
    const DomainId domain = domain_of(cell);
    if (ledger_.is_ledgered(EntryKind::CellKeySet, domain) || ledger_.is_pending(EntryKind::CellKeySet, domain)) return;
    const auto receipt = ledger_.submit_candidate(CandidateEntry::key_set(cell, domain, keys_.keys(domain), now));
    if (receipt.queued) charges_[domain].upload = trace_.back();
}

HoProcedure HandoverEngine::run_handover(UeState& ue, CellId target, SimTime now) {
    const std::size_t idx = begin(HoEvent{now, ue.id, ue.serving, target});
    SimTime clock = now;
    while (procs_[idx].phase != HoPhase::Complete) {
        const SimTime t = ledger_.next_verification_at(clock);
        if (t - now > cfg_.prep_timeout_ms) {
            check_timeouts(t);
            throw HoPreparationTimeout("no block verification within the preparation timeout");
        }
        if (auto block = ledger_.tick(t)) on_block(*block, t);
        clock = t + 1;
    }
    ue.serving = target;
    return procs_[idx];
}

std::vector<std::pair<SimTime, std::size_t>> cumulative_key_exchanges(std::span<const SignalRecord> trace,
                                                                      SimTime horizon_ms, SimTime step_ms) {
    if (step_ms <= 0) throw InvalidParameter("sampling step must be positive");
    std::vector<std::pair<SimTime, std::size_t>> series;
    std::size_t count = 0;
    std::size_t i = 0;
    for (SimTime t = 0; t <= horizon_ms; t += step_ms) {
        for (; i < trace.size() && trace[i].t <= t; ++i)
            if (trace[i].key_exchange) ++count;
        series.emplace_back(t, count);
    }
    return series;
}

}  // namespace nccell
