#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nccell/integrity.hpp"
#include "nccell/random.hpp"
#include "nccell/stats.hpp"

namespace nccell {

/// Key distribution policy. DoubleRandom backs MacSig and CCoverFree backs
/// the HMAC scheme; both are the per-HO baselines.
enum class Scheme { Blockchain, DoubleRandom, CCoverFree };

std::string_view scheme_name(Scheme s) noexcept;         // blockchain | macsig | hmac
std::optional<Scheme> parse_scheme(std::string_view s);  // accepts the names above
inline bool is_baseline(Scheme s) noexcept { return s != Scheme::Blockchain; }

/// Exact non-negative rational, kept in lowest terms.
class Fraction {
public:
    Fraction(std::int64_t num = 0, std::int64_t den = 1);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Fraction operator+(const Fraction& a, const Fraction& b);
    friend bool operator==(const Fraction&, const Fraction&) = default;
    friend bool operator<(const Fraction& a, const Fraction& b) noexcept {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }

private:
    std::int64_t num_;
    std::int64_t den_;
};

struct SchemeConfig {
    Scheme scheme = Scheme::Blockchain;
    unsigned l = 8;        // tags per packet
    unsigned L = 16;       // keys at the source (baselines)
    unsigned s = 8;        // keys per non-source node (DoubleRandom)
    unsigned c = 0;        // colluding adversaries
    double epsilon = 0.01;
    double d = 0.5;
    unsigned q_bits = 8;
    unsigned m = 32;
    unsigned n = 1024;

    std::uint32_t q() const noexcept { return 1u << q_bits; }
    void validate() const;  // throws InvalidParameter
};

/// Tags needed for (1 - epsilon)-probable c-secure random key distribution,
/// rounded up.
std::uint64_t required_tags(unsigned c, double epsilon, double d);

Fraction bandwidth_macsig(std::uint64_t l, std::uint64_t m, std::uint64_t n, std::uint64_t q);
Fraction bandwidth_hmac(std::uint64_t l, std::uint64_t m, std::uint64_t n);
Fraction bandwidth_blockchain(std::uint64_t l, std::uint64_t m, std::uint64_t n);

/// Probability that a forged packet survives l_verified independent tag checks.
double security_level(unsigned l_verified, std::uint32_t q);

struct KeyAssignment {
    std::vector<std::vector<KeyId>> holdings;  // per node, sorted
    std::vector<KeyId> source_keys;            // keys used for tagging, sorted
    NodeId source = 0;
    unsigned universe = 0;

    /// Tag positions (indices into source_keys) the node can check.
    std::vector<std::size_t> verifiable_positions(NodeId node) const;
    std::size_t verifiable_count(NodeId node) const { return verifiable_positions(node).size(); }
};

/// Node 0 is the source. Blockchain: every node holds the full l-key domain
/// set. DoubleRandom: every node draws s of L keys, the source tags with l of
/// its own. CCoverFree: the source holds all L, every other node one key.
KeyAssignment assign_keys(const SchemeConfig& cfg, std::size_t node_count, Rng& rng);

std::vector<KeyId> sample_without_replacement(unsigned universe, unsigned k, Rng& rng);

struct SafeKeyEstimate {
    double probability = 0.0;
    Proportion counts;  // empty for the closed-form blockchain value
    Interval ci;
    bool exact = false;
};

/// Blockchain: 1 - q^-l. Baselines: Monte-Carlo estimate of the chance that c
/// colluders do NOT jointly hold every source key a random benign node can
/// verify with (a node that can verify nothing counts as unsafe).
SafeKeyEstimate safe_key_probability(const SchemeConfig& cfg, int c, std::uint64_t trials = 100000,
                                     std::uint64_t seed = 1, unsigned workers = 1);

struct AnalyticsRow {
    Scheme scheme;
    unsigned c;
    std::uint64_t l;
    Fraction bandwidth;
    std::optional<SafeKeyEstimate> safe;
};

/// Equal-security sweep: baselines carry required_tags(c) tags, the
/// blockchain scheme keeps cfg.l.
std::vector<AnalyticsRow> bandwidth_sweep(const SchemeConfig& cfg, unsigned c_min, unsigned c_max);

/// Equal-bandwidth sweep: every scheme carries cfg.l tags.
std::vector<AnalyticsRow> safe_key_sweep(const SchemeConfig& cfg, unsigned c_min, unsigned c_max,
                                         std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

}  // namespace nccell
