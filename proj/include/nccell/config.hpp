#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nccell/attack.hpp"
#include "nccell/keydist.hpp"
#include "nccell/simulation.hpp"

namespace nccell {

struct AnalyzeParams {
    unsigned c_min = 1;
    unsigned c_max = 7;
    double epsilon = 0.01;
    double d = 0.5;
    unsigned L = 16;
    unsigned s = 8;
    std::uint64_t trials = 100000;
    unsigned workers = 1;
};

struct AttackParams {
    std::vector<Scheme> schemes{Scheme::Blockchain, Scheme::DoubleRandom, Scheme::CCoverFree};
    std::vector<Strategy> strategies{Strategy::RandomForge, Strategy::ValidTagForge, Strategy::TagOnlyPollution};
    std::vector<unsigned> l_primes{0, 1, 2};
    Knowledge knowledge = Knowledge::AllKeys;
    unsigned colluders = 2;
    unsigned q_bits = 4;
    unsigned l = 8;
    unsigned L = 16;
    unsigned s = 8;
    unsigned m = 4;
    unsigned n = 8;
    std::uint64_t trials = 20000;
    unsigned workers = 1;
};

/// Every knob of a run. Defaults give the standard scenario: 16 cells,
/// 100 m ISD with wrap-around, 20 UEs at 60 km/h, 160 ms UL RS period, 1 dB
/// UL offset, 32 ms UL TTT, q = 2^8, n = 1024, m = 32, l = 8.
struct RunConfig {
    SimulationConfig sim;
    Scheme scheme = Scheme::Blockchain;
    AnalyzeParams analyze;
    AttackParams attack;
    SimTime cumulative_step_ms = 100;
    std::filesystem::path output_dir = "out";

    /// Applies one dotted key. Throws ConfigError naming the key.
    void set(std::string_view key, std::string_view value);

    /// Sorted key=value lines; parsing them back yields the same config.
    std::string canonical() const;

    void validate() const;  // throws ConfigError

    static RunConfig parse(std::string_view text);
    static RunConfig load(const std::filesystem::path& path);
};

}  // namespace nccell
