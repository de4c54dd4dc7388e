#include "nccell/attack.hpp"

#include <algorithm>
#include <numeric>

#include "nccell/errors.hpp"
#include "nccell/montecarlo.hpp"
#include "nccell/rlnc.hpp"

namespace nccell {

std::string_view knowledge_name(Knowledge k) noexcept {
    return k == Knowledge::AllKeys ? "AllKeys" : "RandomAssignment";
}

std::string_view strategy_name(Strategy s) noexcept {
    switch (s) {
        case Strategy::RandomForge: return "RandomForge";
        case Strategy::ValidTagForge: return "ValidTagForge";
        case Strategy::TagOnlyPollution: return "TagOnlyPollution";
    }
    return "?";
}

std::optional<Knowledge> parse_knowledge(std::string_view s) {
    if (s == "AllKeys") return Knowledge::AllKeys;
    if (s == "RandomAssignment") return Knowledge::RandomAssignment;
    return std::nullopt;
}

std::optional<Strategy> parse_strategy(std::string_view s) {
    if (s == "RandomForge") return Strategy::RandomForge;
    if (s == "ValidTagForge") return Strategy::ValidTagForge;
    if (s == "TagOnlyPollution") return Strategy::TagOnlyPollution;
    return std::nullopt;
}

namespace {

Element different_value(const Field& field, Element old, Rng& rng) {
    // Uniform over the q-1 values other than `old`.
    const Element offset = random_nonzero(field, rng);
    return static_cast<Element>(old ^ offset);
}

void perturb_payload(const Field& field, CodedPacket& pkt, Rng& rng) {
    const auto i = std::uniform_int_distribution<std::size_t>(0, pkt.payload.size() - 1)(rng);
    pkt.payload[i] = different_value(field, pkt.payload[i], rng);
}

}  // namespace

Injection inject(const Field& field, const CodedPacket& pkt, const AdversaryConfig& adversary,
                 std::span<const HeldKey> held, Rng& rng) {
    if (pkt.payload.empty()) throw DimensionMismatch("inject: empty payload");
    Injection out{pkt, false};
    Strategy strategy = adversary.strategy;
    if (strategy == Strategy::ValidTagForge && held.empty()) {
        strategy = Strategy::RandomForge;
        out.degenerated = true;
    }
    switch (strategy) {
        case Strategy::RandomForge:
            perturb_payload(field, out.packet, rng);
            for (auto& t : out.packet.tags) t = random_element(field, rng);
            break;
        case Strategy::ValidTagForge:
            perturb_payload(field, out.packet, rng);
            for (const auto& h : held) {
                if (h.position >= out.packet.tags.size()) throw DimensionMismatch("inject: held key position out of range");
                out.packet.tags[h.position] = make_tag(field, out.packet.payload, *h.key);
            }
            break;
        case Strategy::TagOnlyPollution: {
            if (out.packet.tags.empty()) throw DimensionMismatch("inject: packet carries no tags to pollute");
            const auto i = std::uniform_int_distribution<std::size_t>(0, out.packet.tags.size() - 1)(rng);
            out.packet.tags[i] = different_value(field, out.packet.tags[i], rng);
            break;
        }
    }
    return out;
}

BypassResult measure_bypass_rate(const BypassSetup& setup, const AdversaryConfig& adversary, std::uint64_t trials,
                                 std::uint64_t seed, unsigned workers) {
    if (trials < 1000) throw InvalidParameter("bypass-rate measurement needs at least 1000 trials");
    if (adversary.count < 1) throw InvalidParameter("adversary needs at least one colluder");
    if (setup.l < 1 || setup.m < 1 || setup.n < 1) throw InvalidParameter("l, m and n must be positive");
    if (setup.l_prime > static_cast<int>(setup.l)) throw InvalidParameter("l' cannot exceed the number of tags");

    const Field field(setup.q_bits);
    SchemeConfig assign_cfg;
    assign_cfg.scheme = setup.scheme;
    assign_cfg.l = setup.l;
    assign_cfg.L = setup.L;
    assign_cfg.s = setup.s;
    assign_cfg.q_bits = setup.q_bits;
    const bool ledger = setup.scheme == Scheme::Blockchain;
    const bool needs_assignment =
        !ledger && (setup.l_prime < 0 || adversary.knowledge == Knowledge::RandomAssignment);

    BypassResult result;
    result.counts = run_trials(trials, seed, workers, [&](Rng& rng, std::uint64_t count) {
        Proportion p;
        std::vector<MacKey> keys;
        std::vector<std::size_t> verify_pos;
        std::vector<MacKey> verify_keys;
        std::vector<HeldKey> held;
        for (std::uint64_t trial = 0; trial < count; ++trial) {
            keys.clear();
            for (unsigned i = 0; i < setup.l; ++i) keys.push_back(MacKey::random(field, i, setup.n, rng));
            const Generation gen = Generation::random(field, 0, setup.m, setup.n, rng);
            CodedPacket pkt = encode(field, gen, rng);
            attach_tags(field, pkt, keys);

            std::optional<KeyAssignment> assignment;
            if (needs_assignment) assignment = assign_keys(assign_cfg, adversary.count + 2, rng);

            // Node 0 is the source, node 1 the benign verifier, the rest collude.
            verify_pos.clear();
            if (setup.l_prime >= 0) {
                verify_pos.resize(static_cast<std::size_t>(setup.l_prime));
                std::iota(verify_pos.begin(), verify_pos.end(), std::size_t{0});
            } else if (ledger) {
                verify_pos.resize(setup.l);
                std::iota(verify_pos.begin(), verify_pos.end(), std::size_t{0});
            } else {
                verify_pos = assignment->verifiable_positions(1);
            }
            verify_keys.clear();
            for (std::size_t pos : verify_pos) verify_keys.push_back(keys[pos]);

            held.clear();
            if (adversary.knowledge == Knowledge::AllKeys || ledger) {
                for (std::size_t i = 0; i < keys.size(); ++i) held.push_back({i, &keys[i]});
            } else {
                std::vector<char> mine(setup.l, 0);
                for (NodeId node = 2; node < adversary.count + 2; ++node)
                    for (std::size_t pos : assignment->verifiable_positions(node)) mine[pos] = 1;
                for (std::size_t i = 0; i < keys.size(); ++i)
                    if (mine[i]) held.push_back({i, &keys[i]});
            }

            const CodedPacket polluted = inject(field, pkt, adversary, held, rng).packet;
            bool accepted;
            if (ledger) {
                const TagSet tags = make_tagset(field, gen, keys);
                accepted = ledger_check(field, polluted, &tags, verify_pos, verify_keys) == LedgerVerdict::Accept;
            } else {
                const auto verdicts = verify_tags_at(field, polluted, verify_pos, verify_keys);
                accepted = std::all_of(verdicts.begin(), verdicts.end(), [](bool v) { return v; });
            }
            if (accepted) ++p.successes;
            ++p.trials;
        }
        return p;
    });
    result.ci = wilson_interval(result.counts);
    return result;
}

}  // namespace nccell
