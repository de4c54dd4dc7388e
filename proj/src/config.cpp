#include "nccell/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "nccell/errors.hpp"

namespace nccell {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError(std::string(key), "cannot parse '" + std::string(v) + "' as a number");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError(std::string(key), "expected true/false, got '" + std::string(v) + "'");
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        const auto item = trim(v.substr(0, comma));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view key, std::string_view v, Parse parse) {
    std::vector<T> out;
    for (auto item : split_list(v)) {
        auto parsed = parse(item);
        if (!parsed) throw ConfigError(std::string(key), "unknown value '" + std::string(item) + "'");
        out.push_back(*parsed);
    }
    return out;
}

template <typename T, typename Name>
std::string join(const std::vector<T>& items, Name name) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += name(items[i]);
    }
    return out;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct Knob {
    const char* key;
    std::function<void(RunConfig&, std::string_view key, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define NUM_KNOB(KEY, TYPE, MEMBER)                                                                       \
    Knob {                                                                                                \
        KEY, [](RunConfig& c, std::string_view k, std::string_view v) { c.MEMBER = parse_number<TYPE>(k, v); }, \
            [](const RunConfig& c) { return fmt::format("{}", c.MEMBER); }                                 \
    }

#define BOOL_KNOB(KEY, MEMBER)                                                                       \
    Knob {                                                                                           \
        KEY, [](RunConfig& c, std::string_view k, std::string_view v) { c.MEMBER = parse_bool(k, v); }, \
            [](const RunConfig& c) { return fmt_bool(c.MEMBER); }                                     \
    }

const std::vector<Knob>& knobs() {
    static const std::vector<Knob> table = {
        NUM_KNOB("scenario.rows", unsigned, sim.scenario.rows),
        NUM_KNOB("scenario.cols", unsigned, sim.scenario.cols),
        NUM_KNOB("scenario.isd_m", double, sim.scenario.isd_m),
        BOOL_KNOB("scenario.wrap", sim.scenario.wrap),
        NUM_KNOB("scenario.ue_count", unsigned, sim.scenario.ue_count),
        NUM_KNOB("scenario.speed_kmh", double, sim.scenario.speed_kmh),
        NUM_KNOB("scenario.rs_period_ms", SimTime, sim.scenario.radio.rs_period_ms),
        NUM_KNOB("scenario.ul_offset_db", double, sim.scenario.trigger.ul_offset_db),
        NUM_KNOB("scenario.ul_ttt_ms", SimTime, sim.scenario.trigger.ul_ttt_ms),
        NUM_KNOB("scenario.tx_power_dbm", double, sim.scenario.radio.tx_power_dbm),
        NUM_KNOB("scenario.pl0_db", double, sim.scenario.radio.pl0_db),
        NUM_KNOB("scenario.pl_exponent", double, sim.scenario.radio.pl_exponent),
        NUM_KNOB("scenario.min_distance_m", double, sim.scenario.radio.min_distance_m),
        NUM_KNOB("scenario.shadowing_sigma_db", double, sim.scenario.radio.shadowing_sigma_db),
        Knob{"security.q",
             [](RunConfig& c, std::string_view k, std::string_view v) {
                 const auto q = parse_number<std::uint32_t>(k, v);
                 if (q < 2 || q > 65536 || !std::has_single_bit(q))
                     throw ConfigError(std::string(k), "field size must be a power of two in 2..65536");
                 c.sim.security.q_bits = static_cast<unsigned>(std::countr_zero(q));
             },
             [](const RunConfig& c) { return fmt::format("{}", 1u << c.sim.security.q_bits); }},
        NUM_KNOB("security.n", unsigned, sim.security.n),
        NUM_KNOB("security.m", unsigned, sim.security.m),
        NUM_KNOB("security.l", unsigned, sim.security.l),
        Knob{"scheme",
             [](RunConfig& c, std::string_view k, std::string_view v) {
                 auto s = parse_scheme(v);
                 if (!s) throw ConfigError(std::string(k), "unknown scheme '" + std::string(v) + "'");
                 c.scheme = *s;
             },
             [](const RunConfig& c) { return std::string(scheme_name(c.scheme)); }},
        BOOL_KNOB("prediction.enabled", sim.prediction.enabled),
        NUM_KNOB("prediction.accuracy", double, sim.prediction.accuracy),
        NUM_KNOB("prediction.lead_ms", SimTime, sim.prediction.lead_ms),
        NUM_KNOB("ledger.collection_period_ms", SimTime, sim.collection_period_ms),
        NUM_KNOB("handover.prep_timeout_ms", SimTime, sim.prep_timeout_ms),
        NUM_KNOB("run.horizon_ms", SimTime, sim.horizon_ms),
        NUM_KNOB("run.seed", std::uint64_t, sim.seed),
        NUM_KNOB("run.cumulative_step_ms", SimTime, cumulative_step_ms),
        Knob{"run.output_dir",
             [](RunConfig& c, std::string_view, std::string_view v) { c.output_dir = std::string(v); },
             [](const RunConfig& c) { return c.output_dir.string(); }},
        NUM_KNOB("analyze.c_min", unsigned, analyze.c_min),
        NUM_KNOB("analyze.c_max", unsigned, analyze.c_max),
        NUM_KNOB("analyze.epsilon", double, analyze.epsilon),
        NUM_KNOB("analyze.d", double, analyze.d),
        NUM_KNOB("analyze.L", unsigned, analyze.L),
        NUM_KNOB("analyze.s", unsigned, analyze.s),
        NUM_KNOB("analyze.trials", std::uint64_t, analyze.trials),
        NUM_KNOB("analyze.workers", unsigned, analyze.workers),
        Knob{"attack.schemes",
             [](RunConfig& c, std::string_view k, std::string_view v) {
                 c.attack.schemes = parse_list<Scheme>(k, v, parse_scheme);
             },
             [](const RunConfig& c) {
                 return join(c.attack.schemes, [](Scheme s) { return std::string(scheme_name(s)); });
             }},
        Knob{"attack.strategies",
             [](RunConfig& c, std::string_view k, std::string_view v) {
                 c.attack.strategies = parse_list<Strategy>(k, v, parse_strategy);
             },
             [](const RunConfig& c) {
                 return join(c.attack.strategies, [](Strategy s) { return std::string(strategy_name(s)); });
             }},
        Knob{"attack.l_primes",
             [](RunConfig& c, std::string_view k, std::string_view v) {
                 c.attack.l_primes.clear();
                 for (auto item : split_list(v)) c.attack.l_primes.push_back(parse_number<unsigned>(k, item));
             },
             [](const RunConfig& c) {
                 return join(c.attack.l_primes, [](unsigned x) { return std::to_string(x); });
             }},
        Knob{"attack.knowledge",
             [](RunConfig& c, std::string_view k, std::string_view v) {
                 auto kn = parse_knowledge(v);
                 if (!kn) throw ConfigError(std::string(k), "unknown knowledge level '" + std::string(v) + "'");
                 c.attack.knowledge = *kn;
             },
             [](const RunConfig& c) { return std::string(knowledge_name(c.attack.knowledge)); }},
        NUM_KNOB("attack.colluders", unsigned, attack.colluders),
        Knob{"attack.q",
             [](RunConfig& c, std::string_view k, std::string_view v) {
                 const auto q = parse_number<std::uint32_t>(k, v);
                 if (q < 2 || q > 65536 || !std::has_single_bit(q))
                     throw ConfigError(std::string(k), "field size must be a power of two in 2..65536");
                 c.attack.q_bits = static_cast<unsigned>(std::countr_zero(q));
             },
             [](const RunConfig& c) { return fmt::format("{}", 1u << c.attack.q_bits); }},
        NUM_KNOB("attack.l", unsigned, attack.l),
        NUM_KNOB("attack.L", unsigned, attack.L),
        NUM_KNOB("attack.s", unsigned, attack.s),
        NUM_KNOB("attack.m", unsigned, attack.m),
        NUM_KNOB("attack.n", unsigned, attack.n),
        NUM_KNOB("attack.trials", std::uint64_t, attack.trials),
        NUM_KNOB("attack.workers", unsigned, attack.workers),
    };
    return table;
}

#undef NUM_KNOB
#undef BOOL_KNOB

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
    const auto& table = knobs();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Knob& k) { return key == k.key; });
    if (it == table.end()) throw ConfigError(std::string(key), "unknown configuration key");
    it->set(*this, key, trim(value));
}

std::string RunConfig::canonical() const {
    std::vector<std::pair<std::string, std::string>> lines;
    for (const auto& k : knobs()) lines.emplace_back(k.key, k.get(*this));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& [k, v] : lines) out += k + "=" + v + "\n";
    return out;
}

void RunConfig::validate() const {
    const auto& sc = sim.scenario;
    if (sc.rows == 0 || sc.cols == 0) throw ConfigError("scenario.rows", "grid needs at least one row and column");
    if (!(sc.isd_m > 0)) throw ConfigError("scenario.isd_m", "must be positive");
    if (!(sc.speed_kmh >= 0)) throw ConfigError("scenario.speed_kmh", "must be non-negative");
    if (sc.radio.rs_period_ms <= 0) throw ConfigError("scenario.rs_period_ms", "must be positive");
    if (sc.trigger.ul_ttt_ms < 0) throw ConfigError("scenario.ul_ttt_ms", "must be non-negative");
    if (!(sc.radio.min_distance_m > 0)) throw ConfigError("scenario.min_distance_m", "must be positive");
    if (sc.radio.shadowing_sigma_db < 0) throw ConfigError("scenario.shadowing_sigma_db", "must be non-negative");
    if (sim.security.n == 0) throw ConfigError("security.n", "must be positive");
    if (sim.security.m == 0) throw ConfigError("security.m", "must be positive");
    if (sim.security.l == 0) throw ConfigError("security.l", "must be positive");
    if (!(sim.prediction.accuracy >= 0 && sim.prediction.accuracy <= 1))
        throw ConfigError("prediction.accuracy", "must lie in [0, 1]");
    if (sim.prediction.lead_ms < 0) throw ConfigError("prediction.lead_ms", "must be non-negative");
    if (sim.collection_period_ms <= 0) throw ConfigError("ledger.collection_period_ms", "must be positive");
    if (sim.prep_timeout_ms <= 0) throw ConfigError("handover.prep_timeout_ms", "must be positive");
    if (sim.horizon_ms < 0) throw ConfigError("run.horizon_ms", "must be non-negative");
    if (cumulative_step_ms <= 0) throw ConfigError("run.cumulative_step_ms", "must be positive");
    if (analyze.c_min > analyze.c_max) throw ConfigError("analyze.c_min", "must not exceed analyze.c_max");
    if (!(analyze.epsilon > 0 && analyze.epsilon < 1)) throw ConfigError("analyze.epsilon", "must lie in (0, 1)");
    if (!(analyze.d >= 0 && analyze.d < 1)) throw ConfigError("analyze.d", "must lie in [0, 1)");
    if (sim.security.l > analyze.L) throw ConfigError("analyze.L", "must be at least security.l");
    if (analyze.s > analyze.L || sim.security.l > analyze.s)
        throw ConfigError("analyze.s", "needs security.l <= analyze.s <= analyze.L");
    if (analyze.trials == 0) throw ConfigError("analyze.trials", "must be positive");
    if (attack.trials < 1000) throw ConfigError("attack.trials", "must be at least 1000");
    if (attack.colluders < 1) throw ConfigError("attack.colluders", "must be at least 1");
    if (attack.l < 1 || attack.l > attack.L) throw ConfigError("attack.l", "must lie in 1..attack.L");
    if (attack.s > attack.L || attack.l > attack.s) throw ConfigError("attack.s", "needs attack.l <= attack.s <= attack.L");
    if (attack.m == 0 || attack.n == 0) throw ConfigError("attack.m", "attack generation dimensions must be positive");
    for (unsigned lp : attack.l_primes)
        if (lp > attack.l) throw ConfigError("attack.l_primes", "every l' must be at most attack.l");
}

RunConfig RunConfig::parse(std::string_view text) {
    RunConfig cfg;
    std::size_t lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key=value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace nccell
