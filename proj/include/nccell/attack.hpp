#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "nccell/integrity.hpp"
#include "nccell/keydist.hpp"
#include "nccell/stats.hpp"

namespace nccell {

enum class Knowledge { RandomAssignment, AllKeys };
enum class Strategy { RandomForge, ValidTagForge, TagOnlyPollution };

std::string_view knowledge_name(Knowledge k) noexcept;
std::string_view strategy_name(Strategy s) noexcept;
std::optional<Knowledge> parse_knowledge(std::string_view s);
std::optional<Strategy> parse_strategy(std::string_view s);

struct AdversaryConfig {
    unsigned count = 1;  // colluders
    Knowledge knowledge = Knowledge::AllKeys;
    Strategy strategy = Strategy::RandomForge;
};

/// A key the colluders hold, paired with the tag position it checks.
struct HeldKey {
    std::size_t position;
    const MacKey* key;
};

struct Injection {
    CodedPacket packet;
    bool degenerated = false;  // ValidTagForge without keys fell back to RandomForge
};

/// RandomForge: one payload symbol changed, every tag random.
/// ValidTagForge: one payload symbol changed, tags at held positions recomputed.
/// TagOnlyPollution: payload untouched, one tag changed.
Injection inject(const Field& field, const CodedPacket& pkt, const AdversaryConfig& adversary,
                 std::span<const HeldKey> held, Rng& rng);

/// One benign next hop checking injected packets.
struct BypassSetup {
    Scheme scheme = Scheme::CCoverFree;
    unsigned q_bits = 4;
    unsigned l = 8;           // tags per packet
    unsigned L = 16;          // baseline key universe
    unsigned s = 8;           // DoubleRandom keys per node
    int l_prime = -1;         // tags the benign node checks; -1 derives it from the scheme
    unsigned m = 4;
    unsigned n = 8;
};

struct BypassResult {
    Proportion counts;
    Interval ci;

    double rate() const noexcept { return counts.rate(); }
};

/// Fraction of injected packets a benign next hop accepts. Baselines verify
/// keys only; the blockchain scheme also compares tags with the ledger copy.
/// Throws InvalidParameter for fewer than 1000 trials.
BypassResult measure_bypass_rate(const BypassSetup& setup, const AdversaryConfig& adversary, std::uint64_t trials,
                                 std::uint64_t seed, unsigned workers = 1);

}  // namespace nccell
