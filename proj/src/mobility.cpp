#include "nccell/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nccell/errors.hpp"

namespace nccell {

CellGrid::CellGrid(unsigned rows, unsigned cols, double isd_m, bool wrap)
    : rows_(rows), cols_(cols), isd_(isd_m), wrap_(wrap) {
    if (rows == 0 || cols == 0) throw InvalidParameter("cell grid needs at least one row and column");
    if (!(isd_m > 0.0)) throw InvalidParameter("inter-site distance must be positive");
    positions_.reserve(static_cast<std::size_t>(rows) * cols);
    for (unsigned r = 0; r < rows; ++r)
        for (unsigned c = 0; c < cols; ++c) positions_.push_back({(c + 0.5) * isd_, (r + 0.5) * isd_});
}

Position CellGrid::wrap_position(Position p) const {
    auto wrap1 = [](double v, double extent) {
        double r = std::fmod(v, extent);
        if (r < 0.0) r += extent;
        return r >= extent ? 0.0 : r;
    };
    return {wrap1(p.x, width()), wrap1(p.y, height())};
}

double CellGrid::distance(Position a, Position b) const {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    if (wrap_) {
        dx = std::fmin(dx, width() - dx);
        dy = std::fmin(dy, height() - dy);
    }
    return std::hypot(dx, dy);
}

UeState step(const UeState& ue, SimTime dt_ms, const CellGrid& grid) {
    if (dt_ms <= 0) throw InvalidParameter("step needs a positive time increment");
    UeState next = ue;
    const double dist = ue.speed_mps * static_cast<double>(dt_ms) / 1000.0;
    Position p{ue.pos.x + dist * std::cos(ue.heading_rad), ue.pos.y + dist * std::sin(ue.heading_rad)};
    next.pos = grid.wrap() ? grid.wrap_position(p) : p;
    return next;
}

double path_loss_db(double distance_m, const RadioConfig& radio) {
    const double d = std::fmax(distance_m, radio.min_distance_m);
    return radio.pl0_db + 10.0 * radio.pl_exponent * std::log10(d);
}

Measurement measure(const UeState& ue, const CellGrid& grid, SimTime t, const RadioConfig& radio, Rng* shadowing) {
    if (radio.rs_period_ms <= 0 || t < 0 || t % radio.rs_period_ms != 0)
        throw ScheduleError("measurement at " + std::to_string(t) + " ms is off the " +
                            std::to_string(radio.rs_period_ms) + " ms UL RS grid");
    Measurement m;
    m.t = t;
    m.ue = ue.id;
    m.rsrp_dbm.resize(grid.cell_count());
    std::normal_distribution<double> fading(0.0, radio.shadowing_sigma_db);
    for (CellId c = 0; c < grid.cell_count(); ++c) {
        double rsrp = radio.tx_power_dbm - path_loss_db(grid.distance(ue.pos, grid.bs_position(c)), radio);
        if (radio.shadowing_sigma_db > 0.0 && shadowing != nullptr) rsrp += fading(*shadowing);
        m.rsrp_dbm[c] = rsrp;
    }
    return m;
}

CellId best_cell(const Measurement& m) {
    return static_cast<CellId>(std::max_element(m.rsrp_dbm.begin(), m.rsrp_dbm.end()) - m.rsrp_dbm.begin());
}

std::optional<CellId> ho_trigger(std::span<const Measurement> history, CellId serving, const TriggerConfig& trig) {
    if (history.empty()) return std::nullopt;
    const Measurement& last = history.back();
    const SimTime window_start = last.t - trig.ul_ttt_ms;
    std::optional<CellId> pick;
    for (CellId c = 0; c < last.rsrp_dbm.size(); ++c) {
        if (c == serving) continue;
        bool held = true;
        for (auto it = history.rbegin(); it != history.rend() && it->t >= window_start; ++it) {
            if (!(it->rsrp_dbm[c] > it->rsrp_dbm[serving] + trig.ul_offset_db)) {
                held = false;
                break;
            }
        }
        if (held && (!pick || last.rsrp_dbm[c] > last.rsrp_dbm[*pick])) pick = c;
    }
    return pick;
}

MobilitySimulator::MobilitySimulator(const ScenarioConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), grid_(cfg.rows, cfg.cols, cfg.isd_m, cfg.wrap), seed_(seed) {
    if (cfg.radio.rs_period_ms <= 0) throw InvalidParameter("UL RS periodicity must be positive");
    Rng rng = substream(seed, 0);
    std::uniform_real_distribution<double> ux(0.0, grid_.width());
    std::uniform_real_distribution<double> uy(0.0, grid_.height());
    std::uniform_real_distribution<double> heading(0.0, 2.0 * std::numbers::pi);
    for (UeId i = 0; i < cfg.ue_count; ++i) {
        UeState ue;
        ue.id = i;
        ue.pos = {ux(rng), uy(rng)};
        ue.heading_rad = heading(rng);
        ue.speed_mps = cfg.speed_kmh / 3.6;
        initial_.push_back(ue);
    }
}

std::vector<HoEvent> MobilitySimulator::run(SimTime horizon_ms, std::vector<Measurement>* trace) const {
    const SimTime period = cfg_.radio.rs_period_ms;
    const std::size_t keep = static_cast<std::size_t>(cfg_.trigger.ul_ttt_ms / period) + 2;

    std::vector<UeState> ues = initial_;
    std::vector<std::deque<Measurement>> history(ues.size());
    std::vector<Rng> fading;
    for (const auto& ue : ues) fading.push_back(substream(seed_, 1000 + ue.id));

    std::vector<HoEvent> events;
    for (SimTime t = 0; t < horizon_ms; t += period) {
        for (std::size_t i = 0; i < ues.size(); ++i) {
            if (t > 0) ues[i] = step(ues[i], period, grid_);
            Measurement m = measure(ues[i], grid_, t, cfg_.radio, &fading[i]);
            if (t == 0) ues[i].serving = best_cell(m);
            if (trace != nullptr) trace->push_back(m);
            auto& h = history[i];
            h.push_back(std::move(m));
            if (h.size() > keep) h.pop_front();

            const std::vector<Measurement> window(h.begin(), h.end());
            if (auto target = ho_trigger(window, ues[i].serving, cfg_.trigger)) {
                events.push_back({t, ues[i].id, ues[i].serving, *target});
                ues[i].serving = *target;
            }
        }
    }
    return events;
}

}  // namespace nccell
