#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "nccell/config.hpp"
#include "nccell/simulation.hpp"

namespace nccell {

// CSV writers. Times are integer milliseconds; probabilities and bandwidth
// fractions are printed with 12 significant digits.
void write_signal_csv(std::ostream& out, const SignalTrace& trace);
void write_handover_csv(std::ostream& out, const std::vector<HoProcedure>& procs);
void write_per_second_csv(std::ostream& out, const std::vector<SignalingWindow>& windows);
void write_cumulative_csv(std::ostream& out, const SimulationResult& blockchain, const SimulationResult& macsig,
                          const SimulationResult& hmac, SimTime horizon_ms, SimTime step_ms);
void write_analytics_csv(std::ostream& out, const std::vector<AnalyticsRow>& rows);

struct RunArtifacts {
    std::vector<HoEvent> events;
    SimulationResult blockchain;
    SimulationResult macsig;
    SimulationResult hmac;

    const SimulationResult& get(Scheme s) const;
};

/// Simulates the scenario once and replays the same HO stream under all three
/// schemes. No files are written.
RunArtifacts simulate_run(const RunConfig& cfg);

/// simulate_run plus config.txt, signals.csv, handovers.csv and
/// per_second.csv for cfg.scheme and cumulative.csv for all schemes.
RunArtifacts run_command(const RunConfig& cfg);

/// fig4.csv (equal-security bandwidth) and fig5.csv (equal-bandwidth safe keys).
void analyze_command(const RunConfig& cfg);

/// attack.csv over schemes x strategies x l'.
void attack_command(const RunConfig& cfg);

/// Invariant checks at reduced trial counts. Prints one line per check.
bool selftest(std::ostream& out);

}  // namespace nccell
