#pragma once

#include <cstdint>
#include <vector>

#include "nccell/handover.hpp"
#include "nccell/keydist.hpp"
#include "nccell/ledger.hpp"
#include "nccell/mobility.hpp"

namespace nccell {

struct SecurityParams {
    unsigned q_bits = 8;
    unsigned n = 1024;
    unsigned m = 32;
    unsigned l = 8;
};

struct SimulationConfig {
    ScenarioConfig scenario;
    SecurityParams security;
    PredictionConfig prediction;
    SimTime collection_period_ms = 1000;
    SimTime prep_timeout_ms = 2000;
    SimTime horizon_ms = 10000;
    std::uint64_t seed = 1;
};

struct SimulationResult {
    Scheme scheme = Scheme::Blockchain;
    std::vector<HoProcedure> procedures;  // in trigger order
    SignalTrace trace;                    // time-ordered
    std::vector<LedgerBlock> blocks;
};

/// Replays a radio HO event stream under one key-distribution scheme.
///
/// At each instant prestage uploads run first, then HO triggers, then the
/// ledger verification if the instant is a multiple of the collection
/// period. Ledger ticks continue past the horizon until every HO completed.
SimulationResult simulate_key_sharing(const SimulationConfig& cfg, Scheme scheme, const std::vector<HoEvent>& events,
                                      std::size_t cell_count);

/// One 1 s window of the per-second signaling audit.
struct SignalingWindow {
    SimTime start = 0;
    std::size_t n_bsh = 0;          // key sets submitted in the window
    std::size_t n_ue = 0;           // HOs whose keys reached the UE in the window
    std::size_t verifications = 0;  // non-empty blocks verified in the window
    std::size_t key_exchanges = 0;  // key-exchange signals counted on the trace

    /// key_exchanges == n_bsh + n_ue + verifications
    bool balanced() const noexcept { return key_exchanges == n_bsh + n_ue + verifications; }
};

/// Windows [k*1000, (k+1)*1000) covering the horizon and every later signal.
/// n_bsh, n_ue and verifications come from the ledger blocks and HO records;
/// key_exchanges comes from the signal trace.
std::vector<SignalingWindow> audit_signaling(const SimulationResult& result, SimTime horizon_ms,
                                             SimTime window_ms = 1000);

}  // namespace nccell
