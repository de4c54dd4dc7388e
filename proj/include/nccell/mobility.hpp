#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "nccell/ledger.hpp"
#include "nccell/random.hpp"

namespace nccell {

using CellId = std::uint32_t;

struct Position {
    double x = 0.0;
    double y = 0.0;
};

/// rows x cols base stations on a square lattice with spacing isd, BS i at
/// the centre of its isd x isd tile. With wrap enabled, distances are taken on
/// the torus of the whole grid extent.
class CellGrid {
public:
    CellGrid(unsigned rows = 4, unsigned cols = 4, double isd_m = 100.0, bool wrap = true);

    unsigned rows() const noexcept { return rows_; }
    unsigned cols() const noexcept { return cols_; }
    std::size_t cell_count() const noexcept { return positions_.size(); }
    double isd() const noexcept { return isd_; }
    bool wrap() const noexcept { return wrap_; }
    double width() const noexcept { return cols_ * isd_; }
    double height() const noexcept { return rows_ * isd_; }
    const Position& bs_position(CellId c) const { return positions_.at(c); }

    Position wrap_position(Position p) const;
    double distance(Position a, Position b) const;

private:
    unsigned rows_;
    unsigned cols_;
    double isd_;
    bool wrap_;
    std::vector<Position> positions_;
};

struct UeState {
    UeId id = 0;
    Position pos;
    double speed_mps = 60.0 / 3.6;
    double heading_rad = 0.0;
    CellId serving = 0;
};

/// Advances the UE along its fixed heading and wraps it onto the grid.
UeState step(const UeState& ue, SimTime dt_ms, const CellGrid& grid);

struct RadioConfig {
    double tx_power_dbm = 23.0;
    double pl0_db = 38.5;
    double pl_exponent = 3.5;
    double min_distance_m = 1.0;
    double shadowing_sigma_db = 0.0;
    SimTime rs_period_ms = 160;
};

double path_loss_db(double distance_m, const RadioConfig& radio);

struct Measurement {
    SimTime t = 0;
    UeId ue = 0;
    std::vector<double> rsrp_dbm;  // per cell
};

/// UL-RSRP of the UE's reference signal at every BS. `shadowing` is only
/// consulted when radio.shadowing_sigma_db > 0. Throws ScheduleError when t
/// is off the RS grid.
Measurement measure(const UeState& ue, const CellGrid& grid, SimTime t, const RadioConfig& radio,
                    Rng* shadowing = nullptr);

/// Strongest cell, lowest id on ties.
CellId best_cell(const Measurement& m);

struct TriggerConfig {
    double ul_offset_db = 1.0;
    SimTime ul_ttt_ms = 32;
};

/// Target cell whose RSRP has exceeded the serving cell's by more than the
/// offset at every measurement in [t_last - TTT, t_last]. Among qualifying
/// cells the strongest wins, lowest id on ties. History must be time-ordered.
std::optional<CellId> ho_trigger(std::span<const Measurement> history, CellId serving, const TriggerConfig& trig);

struct ScenarioConfig {
    unsigned rows = 4;
    unsigned cols = 4;
    double isd_m = 100.0;
    bool wrap = true;
    unsigned ue_count = 20;
    double speed_kmh = 60.0;
    RadioConfig radio;
    TriggerConfig trigger;
};

/// A handover decision on the radio side.
struct HoEvent {
    SimTime t = 0;
    UeId ue = 0;
    CellId source = 0;
    CellId target = 0;

    friend bool operator==(const HoEvent&, const HoEvent&) = default;
};

/// Drives every UE on the RS grid up to (excluding) the horizon and records
/// the handover decisions. The serving cell switches at the decision instant,
/// so the event stream does not depend on any key-sharing policy.
class MobilitySimulator {
public:
    MobilitySimulator(const ScenarioConfig& cfg, std::uint64_t seed);

    const CellGrid& grid() const noexcept { return grid_; }
    const std::vector<UeState>& initial_ues() const noexcept { return initial_; }

    std::vector<HoEvent> run(SimTime horizon_ms, std::vector<Measurement>* trace = nullptr) const;

private:
    ScenarioConfig cfg_;
    CellGrid grid_;
    std::uint64_t seed_;
    std::vector<UeState> initial_;
};

}  // namespace nccell
