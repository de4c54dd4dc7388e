#include "nccell/simulation.hpp"

#include <algorithm>

namespace nccell {

SimulationResult simulate_key_sharing(const SimulationConfig& cfg, Scheme scheme, const std::vector<HoEvent>& events,
                                      std::size_t cell_count) {
    SimulationResult result;
    result.scheme = scheme;

    Ledger ledger(Ledger::Config{cfg.collection_period_ms}, &result.trace);
    for (ControllerId c = 0; c < cell_count; ++c) ledger.register_controller(c);
    DomainKeyStore keys(Field(cfg.security.q_bits), cfg.security.n, cfg.security.l, mix_seed(cfg.seed) ^ 0x6B657973ull);
    HandoverEngine engine(HandoverEngine::Config{scheme, cfg.prep_timeout_ms, {}}, ledger, result.trace, keys);

    // Forecasts are drawn for every HO in stream order, whatever the scheme,
    // so the draws line up across schemes.
    std::vector<PrestageAction> prestages;
    Rng prediction_rng = substream(cfg.seed, 0x50524544ull);
    for (const auto& ev : events)
        if (auto action = engine.predict_and_prestage(ev, cfg.prediction, prediction_rng)) prestages.push_back(*action);
    std::stable_sort(prestages.begin(), prestages.end(),
                     [](const PrestageAction& a, const PrestageAction& b) { return a.at < b.at; });

    std::size_t ip = 0;
    std::size_t ie = 0;
    SimTime next_tick = 0;
    for (;;) {
        const bool more = ip < prestages.size() || ie < events.size();
        if (!more && !engine.has_waiting() && ledger.pending_count() == 0) break;

        SimTime now = next_tick;
        if (ip < prestages.size()) now = std::min(now, prestages[ip].at);
        if (ie < events.size()) now = std::min(now, events[ie].t);

        for (; ip < prestages.size() && prestages[ip].at == now; ++ip) engine.prestage(prestages[ip].cell, now);
        for (; ie < events.size() && events[ie].t == now; ++ie) engine.begin(events[ie]);
        if (now == next_tick) {
            if (auto block = ledger.tick(now)) engine.on_block(*block, now);
            engine.check_timeouts(now);
            next_tick += cfg.collection_period_ms;
        }
    }

    result.procedures = engine.procedures();
    result.blocks = ledger.blocks();
    return result;
}

std::vector<SignalingWindow> audit_signaling(const SimulationResult& result, SimTime horizon_ms, SimTime window_ms) {
    SimTime end = horizon_ms;
    if (!result.trace.empty()) end = std::max(end, result.trace.back().t + 1);

    std::vector<SignalingWindow> windows;
    for (SimTime start = 0; start < end; start += window_ms) {
        SignalingWindow w;
        w.start = start;
        const auto in = [&](SimTime t) { return t >= start && t < start + window_ms; };
        for (const auto& b : result.blocks) {
            if (in(b.verified_at)) ++w.verifications;
            for (const auto& e : b.entries)
                if (e.kind == EntryKind::CellKeySet && in(e.submitted_at)) ++w.n_bsh;
        }
        for (const auto& p : result.procedures)
            if (p.key_path != KeyPath::IntraDomain && p.phase == HoPhase::Complete && in(p.t_complete)) ++w.n_ue;
        w.key_exchanges = per_second_signaling(result.trace, start, window_ms);
        windows.push_back(w);
    }
    return windows;
}

}  // namespace nccell
