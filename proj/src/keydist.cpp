#include "nccell/keydist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "nccell/errors.hpp"
#include "nccell/montecarlo.hpp"

namespace nccell {

std::string_view scheme_name(Scheme s) noexcept {
    switch (s) {
        case Scheme::Blockchain: return "blockchain";
        case Scheme::DoubleRandom: return "macsig";
        case Scheme::CCoverFree: return "hmac";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view s) {
    if (s == "blockchain") return Scheme::Blockchain;
    if (s == "macsig" || s == "double-random") return Scheme::DoubleRandom;
    if (s == "hmac" || s == "c-cover-free") return Scheme::CCoverFree;
    return std::nullopt;
}

Fraction::Fraction(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw InvalidParameter("fraction with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Fraction operator+(const Fraction& a, const Fraction& b) {
    return Fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

void SchemeConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
    if (!(d >= 0.0 && d < 1.0)) throw InvalidParameter("d must lie in [0, 1)");
    if (q_bits < 1 || q_bits > 16) throw InvalidParameter("q_bits must lie in 1..16");
    if (l < 1) throw InvalidParameter("l must be at least 1");
    if (m + n == 0) throw InvalidParameter("m + n must be positive");
    if (is_baseline(scheme)) {
        if (l > L) throw InvalidParameter("l must not exceed L");
        if (scheme == Scheme::DoubleRandom && (s > L || l > s))
            throw InvalidParameter("DoubleRandom needs l <= s <= L");
    }
}

std::uint64_t required_tags(unsigned c, double epsilon, double d) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in (0, 1)");
    if (!(d >= 0.0 && d < 1.0)) throw InvalidParameter("d must lie in [0, 1)");
    const double value = std::numbers::e * (c + 1.0) * std::log(1.0 / epsilon) / (1.0 - d);
    return static_cast<std::uint64_t>(std::ceil(value));
}

namespace {

std::int64_t checked_len(std::uint64_t m, std::uint64_t n) {
    if (m + n == 0) throw InvalidParameter("m + n must be positive");
    return static_cast<std::int64_t>(m + n);
}

}  // namespace

Fraction bandwidth_macsig(std::uint64_t l, std::uint64_t m, std::uint64_t n, std::uint64_t q) {
    if (q == 0) throw InvalidParameter("q must be positive");
    const auto len = checked_len(m, n);
    const auto ll = static_cast<std::int64_t>(l);
    return Fraction(ll + 1, len) + Fraction(32 * ll, static_cast<std::int64_t>(q) * len);
}

Fraction bandwidth_hmac(std::uint64_t l, std::uint64_t m, std::uint64_t n) {
    return Fraction(static_cast<std::int64_t>(l) + 1, checked_len(m, n));
}

Fraction bandwidth_blockchain(std::uint64_t l, std::uint64_t m, std::uint64_t n) {
    return Fraction(static_cast<std::int64_t>(l), checked_len(m, n));
}

double security_level(unsigned l_verified, std::uint32_t q) {
    return std::pow(static_cast<double>(q), -static_cast<double>(l_verified));
}

std::vector<std::size_t> KeyAssignment::verifiable_positions(NodeId node) const {
    const auto& held = holdings.at(node);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < source_keys.size(); ++i)
        if (std::binary_search(held.begin(), held.end(), source_keys[i])) out.push_back(i);
    return out;
}

std::vector<KeyId> sample_without_replacement(unsigned universe, unsigned k, Rng& rng) {
    if (k > universe) throw InvalidParameter("cannot draw more keys than the universe holds");
    std::vector<KeyId> pool(universe);
    std::iota(pool.begin(), pool.end(), KeyId{0});
    for (unsigned i = 0; i < k; ++i) {
        const auto j = std::uniform_int_distribution<unsigned>(i, universe - 1)(rng);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

KeyAssignment assign_keys(const SchemeConfig& cfg, std::size_t node_count, Rng& rng) {
    if (node_count < 2) throw InvalidParameter("key assignment needs at least two nodes");
    if (cfg.s > cfg.L && cfg.scheme == Scheme::DoubleRandom) throw InvalidParameter("s must not exceed L");
    if (cfg.l > cfg.L && is_baseline(cfg.scheme)) throw InvalidParameter("l must not exceed L");
    KeyAssignment a;
    a.holdings.resize(node_count);
    switch (cfg.scheme) {
        case Scheme::Blockchain: {
            a.universe = cfg.l;
            std::vector<KeyId> all(cfg.l);
            std::iota(all.begin(), all.end(), KeyId{0});
            for (auto& h : a.holdings) h = all;
            a.source_keys = all;
            break;
        }
        case Scheme::DoubleRandom: {
            if (cfg.l > cfg.s) throw InvalidParameter("the source cannot tag with more keys than it holds");
            a.universe = cfg.L;
            for (auto& h : a.holdings) h = sample_without_replacement(cfg.L, cfg.s, rng);
            const auto& own = a.holdings[a.source];
            for (KeyId idx : sample_without_replacement(cfg.s, cfg.l, rng)) a.source_keys.push_back(own[idx]);
            std::sort(a.source_keys.begin(), a.source_keys.end());
            break;
        }
        case Scheme::CCoverFree: {
            a.universe = cfg.L;
            std::uniform_int_distribution<KeyId> pick(0, cfg.L - 1);
            for (std::size_t node = 0; node < node_count; ++node) {
                if (node == a.source) {
                    a.holdings[node].resize(cfg.L);
                    std::iota(a.holdings[node].begin(), a.holdings[node].end(), KeyId{0});
                } else {
                    a.holdings[node] = {pick(rng)};
                }
            }
            a.source_keys = sample_without_replacement(cfg.L, cfg.l, rng);
            break;
        }
    }
    return a;
}

SafeKeyEstimate safe_key_probability(const SchemeConfig& cfg, int c, std::uint64_t trials, std::uint64_t seed,
                                     unsigned workers) {
    if (c < 0) throw InvalidParameter("colluder count must be non-negative");
    cfg.validate();
    SafeKeyEstimate est;
    if (cfg.scheme == Scheme::Blockchain) {
        est.probability = 1.0 - security_level(cfg.l, cfg.q());
        est.ci = {est.probability, est.probability};
        est.exact = true;
        return est;
    }
    if (trials == 0) throw InvalidParameter("Monte-Carlo estimate needs at least one trial");
    const auto colluders = static_cast<std::size_t>(c);
    // Node 0 is the source, node 1 the benign verifier, the rest collude.
    est.counts = run_trials(trials, seed, workers, [&](Rng& rng, std::uint64_t count) {
        Proportion p;
        std::vector<char> covered(cfg.L);
        for (std::uint64_t t = 0; t < count; ++t) {
            const KeyAssignment a = assign_keys(cfg, colluders + 2, rng);
            std::fill(covered.begin(), covered.end(), 0);
            for (std::size_t node = 2; node < colluders + 2; ++node)
                for (KeyId k : a.holdings[node]) covered[k] = 1;
            bool can_verify = false;
            bool exposed = true;
            for (std::size_t pos : a.verifiable_positions(1)) {
                can_verify = true;
                if (!covered[a.source_keys[pos]]) exposed = false;
            }
            if (can_verify && !exposed) ++p.successes;
            ++p.trials;
        }
        return p;
    });
    est.probability = est.counts.rate();
    est.ci = wilson_interval(est.counts);
    return est;
}

std::vector<AnalyticsRow> bandwidth_sweep(const SchemeConfig& cfg, unsigned c_min, unsigned c_max) {
    cfg.validate();
    std::vector<AnalyticsRow> rows;
    for (Scheme s : {Scheme::Blockchain, Scheme::DoubleRandom, Scheme::CCoverFree}) {
        for (unsigned c = c_min; c <= c_max; ++c) {
            AnalyticsRow row{s, c, cfg.l, Fraction(0), std::nullopt};
            switch (s) {
                case Scheme::Blockchain: row.bandwidth = bandwidth_blockchain(cfg.l, cfg.m, cfg.n); break;
                case Scheme::DoubleRandom:
                    row.l = required_tags(c, cfg.epsilon, cfg.d);
                    row.bandwidth = bandwidth_macsig(row.l, cfg.m, cfg.n, cfg.q());
                    break;
                case Scheme::CCoverFree:
                    row.l = required_tags(c, cfg.epsilon, cfg.d);
                    row.bandwidth = bandwidth_hmac(row.l, cfg.m, cfg.n);
                    break;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<AnalyticsRow> safe_key_sweep(const SchemeConfig& cfg, unsigned c_min, unsigned c_max,
                                         std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    std::vector<AnalyticsRow> rows;
    for (Scheme s : {Scheme::Blockchain, Scheme::DoubleRandom, Scheme::CCoverFree}) {
        SchemeConfig sc = cfg;
        sc.scheme = s;
        for (unsigned c = c_min; c <= c_max; ++c) {
            AnalyticsRow row{s, c, cfg.l, Fraction(0), std::nullopt};
            switch (s) {
                case Scheme::Blockchain: row.bandwidth = bandwidth_blockchain(cfg.l, cfg.m, cfg.n); break;
                case Scheme::DoubleRandom: row.bandwidth = bandwidth_macsig(cfg.l, cfg.m, cfg.n, cfg.q()); break;
                case Scheme::CCoverFree: row.bandwidth = bandwidth_hmac(cfg.l, cfg.m, cfg.n); break;
            }
            row.safe = safe_key_probability(sc, static_cast<int>(c), trials, mix_seed(seed) ^ (std::uint64_t{c} << 8) ^
                                                                                   static_cast<std::uint64_t>(s),
                                            workers);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace nccell
