#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "nccell/gf.hpp"
#include "nccell/integrity.hpp"
#include "nccell/keydist.hpp"
#include "nccell/ledger.hpp"
#include "nccell/mobility.hpp"

namespace nccell {

enum class HoPhase { Triggered, Prepared, Executing, Complete };

enum class KeyPath {
    LedgerFirstHo,      // this HO uploaded the target's key set
    LedgerPending,      // target key set already queued, waits for the same block
    LedgerSteadyState,  // target key set already on the ledger
    BaselinePerHo,      // t-BS hands a key subset to the s-BS on every HO
    IntraDomain,        // same security domain, no key sharing needed
};

std::string_view key_path_name(KeyPath p) noexcept;

struct HoProcedure {
    UeId ue = 0;
    CellId s_cell = 0;
    CellId t_cell = 0;
    HoPhase phase = HoPhase::Triggered;
    SimTime t_trigger = 0;
    SimTime t_prepared = 0;
    SimTime t_complete = 0;
    KeyPath key_path = KeyPath::BaselinePerHo;
    bool first_into_domain = false;
    // Signals of this HO, plus the upload and block broadcast it is charged
    // for when it is the first HO into its target domain.
    std::vector<SignalRecord> signals;

    std::size_t key_signals() const;
    SimTime prep_wait() const noexcept { return t_prepared - t_trigger; }
};

struct PredictionConfig {
    bool enabled = false;
    double accuracy = 0.8;
    SimTime lead_ms = 1000;
};

/// Per-domain MAC key sets, generated deterministically from a seed.
class DomainKeyStore {
public:
    DomainKeyStore(Field field, std::size_t payload_size, unsigned keys_per_domain, std::uint64_t seed);

    const std::vector<MacKey>& keys(DomainId domain);

private:
    Field field_;
    std::size_t payload_size_;
    unsigned keys_per_domain_;
    std::uint64_t seed_;
    std::map<DomainId, std::vector<MacKey>> cache_;
};

struct PrestageAction {
    CellId cell = 0;
    SimTime at = 0;
};

/// Handover procedures with key sharing under one distribution scheme.
///
/// Blockchain: preparation completes as soon as the source controller's
/// ledger copy holds the target domain's key set; otherwise the target
/// controller uploads it and the HO waits for the next verified block.
/// Baselines: the target hands keys to the source and the source to the UE
/// on every HO.
class HandoverEngine {
public:
    struct Config {
        Scheme scheme = Scheme::Blockchain;
        SimTime prep_timeout_ms = 2000;
        std::vector<DomainId> domain_of_cell;  // empty: every cell is its own domain
    };

    HandoverEngine(Config cfg, Ledger& ledger, SignalTrace& trace, DomainKeyStore& keys);

    /// Starts a procedure. Returns its index in procedures(). Throws NoOpHandover
    /// when source and target coincide.
    std::size_t begin(const HoEvent& ev);

    /// Called after the ledger produced `block` at `now`; completes waiting HOs.
    void on_block(const LedgerBlock& block, SimTime now);

    /// Throws HoPreparationTimeout if any HO has waited longer than the timeout.
    void check_timeouts(SimTime now) const;

    /// Decides whether the forecast HO is predicted. Draws exactly one number
    /// from rng when prediction is enabled.
    std::optional<PrestageAction> predict_and_prestage(const HoEvent& forecast, const PredictionConfig& prediction,
                                                       Rng& rng) const;

    /// Uploads the cell's key set ahead of time (blockchain scheme only).
    void prestage(CellId cell, SimTime now);

    /// Runs one HO to completion, ticking the ledger on its own schedule, and
    /// moves the UE to the target cell.
    HoProcedure run_handover(UeState& ue, CellId target, SimTime now);

    bool has_waiting() const noexcept { return !waiting_.empty(); }
    const std::vector<HoProcedure>& procedures() const noexcept { return procs_; }
    DomainId domain_of(CellId cell) const;
    Scheme scheme() const noexcept { return cfg_.scheme; }

private:
    void emit(HoProcedure& proc, SignalKind kind, Entity src, Entity dst, SimTime t, bool key);
    void complete(HoProcedure& proc, SimTime now);
    void charge_first_ho(HoProcedure& proc);

    struct DomainCharges {
        std::optional<SignalRecord> upload;
        std::optional<SignalRecord> broadcast;
    };

    Config cfg_;
    Ledger& ledger_;
    SignalTrace& trace_;
    DomainKeyStore& keys_;
    std::vector<HoProcedure> procs_;
    std::vector<std::size_t> waiting_;
    std::set<DomainId> claimed_;
    std::map<DomainId, DomainCharges> charges_;
};

/// Running count of key-exchange signals, sampled every `step_ms` from 0 to
/// `horizon_ms` inclusive. Sample i counts signals with t <= i * step_ms.
std::vector<std::pair<SimTime, std::size_t>> cumulative_key_exchanges(std::span<const SignalRecord> trace,
                                                                      SimTime horizon_ms, SimTime step_ms = 100);

}  // namespace nccell
