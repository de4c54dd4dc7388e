#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nccell/app.hpp"
#include "nccell/errors.hpp"

using namespace nccell;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("nccell_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
    std::vector<std::string> out;
    std::istringstream in(slurp(p));
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

int cli(const std::string& args) {
    const int rc = std::system((std::string(NCCELL_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config defaults") {
    const RunConfig cfg;
    CHECK(cfg.sim.scenario.rows * cfg.sim.scenario.cols == 16);
    CHECK(cfg.sim.scenario.isd_m == 100.0);
    CHECK(cfg.sim.scenario.ue_count == 20);
    CHECK(cfg.sim.scenario.speed_kmh == 60.0);
    CHECK(cfg.sim.scenario.radio.rs_period_ms == 160);
    CHECK(cfg.sim.scenario.trigger.ul_offset_db == 1.0);
    CHECK(cfg.sim.scenario.trigger.ul_ttt_ms == 32);
    CHECK(cfg.sim.security.q_bits == 8);
    CHECK(cfg.sim.security.n == 1024);
    CHECK(cfg.sim.security.m == 32);
    CHECK(cfg.sim.security.l == 8);
    CHECK(cfg.sim.collection_period_ms == 1000);
}

TEST_CASE("config round trip and errors") {
    RunConfig cfg;
    cfg.set("scenario.ue_count", "7");
    cfg.set("security.q", "16");
    cfg.set("scheme", "hmac");
    cfg.set("prediction.enabled", "true");
    cfg.set("attack.schemes", "blockchain,macsig");
    const auto text = cfg.canonical();
    const auto back = RunConfig::parse(text);
    CHECK(back.canonical() == text);
    CHECK(back.sim.scenario.ue_count == 7);
    CHECK(back.sim.security.q_bits == 4);
    CHECK(back.scheme == Scheme::CCoverFree);
    CHECK(back.attack.schemes.size() == 2);

    try {
        cfg.set("scenario.bogus", "1");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "scenario.bogus");
    }
    try {
        cfg.set("security.q", "100");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "security.q");
    }
    CHECK_THROWS_AS(RunConfig::parse("run.seed"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("run.seed=abc"), ConfigError);
    CHECK(RunConfig::parse("# comment\n\nrun.seed = 9 # trailing\n").sim.seed == 9);
}

TEST_CASE("run writes the documented CSVs") {
    RunConfig cfg;
    cfg.output_dir = scratch("run");
    const auto art = run_command(cfg);
    for (const char* f : {"config.txt", "signals.csv", "handovers.csv", "per_second.csv", "cumulative.csv"})
        CHECK(fs::exists(cfg.output_dir / f));
    const auto ho = lines(cfg.output_dir / "handovers.csv");
    CHECK(ho.front() == "ue_id,s_cell,t_cell,t_trigger,t_complete,key_signals,prep_wait_ms");
    CHECK(ho.size() == art.events.size() + 1);
    for (std::size_t i = 1; i < ho.size(); ++i) {
        const auto f = fields(ho[i]);
        REQUIRE(f.size() == 7);
        CHECK((f[5] == "1" || f[5] == "3"));
    }
    CHECK(lines(cfg.output_dir / "signals.csv").front() == "t_ms,kind,src,dst,key_exchange_flag");
    CHECK(lines(cfg.output_dir / "per_second.csv").front() == "window_start_ms,n_bsh,n_ue,verifications,key_exchanges");
    CHECK(lines(cfg.output_dir / "cumulative.csv").front() == "t_ms,blockchain,macsig,hmac");
    CHECK(RunConfig::load(cfg.output_dir / "config.txt").canonical() == cfg.canonical());

    cfg.scheme = Scheme::DoubleRandom;
    run_command(cfg);
    const auto base = lines(cfg.output_dir / "handovers.csv");
    for (std::size_t i = 1; i < base.size(); ++i) CHECK(fields(base[i])[5] == "2");
}

TEST_CASE("zero horizon gives header-only CSVs") {
    RunConfig cfg;
    cfg.sim.horizon_ms = 0;
    cfg.output_dir = scratch("zero");
    run_command(cfg);
    for (const char* f : {"signals.csv", "handovers.csv", "per_second.csv", "cumulative.csv"})
        CHECK(lines(cfg.output_dir / f).size() == 1);
}

TEST_CASE("unwritable output raises IoError") {
    const auto blocker = scratch("blocker");
    std::ofstream(blocker) << "x";
    RunConfig cfg;
    cfg.output_dir = blocker / "sub";
    CHECK_THROWS_AS(run_command(cfg), IoError);
    fs::remove(blocker);
}

TEST_CASE("analyze output") {
    RunConfig cfg;
    cfg.analyze.trials = 2000;
    cfg.output_dir = scratch("analyze");
    analyze_command(cfg);
    const auto fig4 = lines(cfg.output_dir / "fig4.csv");
    const auto fig5 = lines(cfg.output_dir / "fig5.csv");
    CHECK(fig4.front() == "scheme,c,l,bandwidth,safe_key_prob,ci_low,ci_high");
    REQUIRE(fig4.size() == 22);
    REQUIRE(fig5.size() == 22);
    for (std::size_t i = 1; i <= 7; ++i) {
        const auto f = fields(fig4[i]);
        CHECK(f[0] == "blockchain");
        CHECK(std::stod(f[3]) == doctest::Approx(8.0 / 1056.0).epsilon(1e-11));
        CHECK(f[4].empty());
        const auto g = fields(fig5[i]);
        CHECK(std::stod(g[4]) == 1.0 - std::ldexp(1.0, -64));
    }
    for (std::size_t i = 9; i <= 14; ++i) CHECK(std::stod(fields(fig4[i])[3]) > std::stod(fields(fig4[i - 1])[3]));
}

TEST_CASE("attack output") {
    RunConfig cfg;
    cfg.attack.trials = 1000;
    cfg.output_dir = scratch("attack");
    attack_command(cfg);
    const auto rows = lines(cfg.output_dir / "attack.csv");
    CHECK(rows.front() == "scheme,strategy,q,l_prime,trials,rate,ci_low,ci_high");
    CHECK(rows.size() == 1 + 3 * 3 * 3);
    bool ledger_row = false, single_check = false, blind = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = fields(rows[i]);
        if (f[0] == "blockchain" && f[1] == "ValidTagForge") ledger_row = ledger_row || true;
        if (f[0] != "blockchain" && f[1] == "RandomForge" && f[3] == "1") single_check = true;
        if (f[0] != "blockchain" && f[3] == "0") {
            blind = true;
            CHECK(f[5] == "1");
        }
        if (f[0] == "blockchain") CHECK(f[5] == "0");
    }
    CHECK(ledger_row);
    CHECK(single_check);
    CHECK(blind);

    const auto first = slurp(cfg.output_dir / "attack.csv");
    attack_command(cfg);
    CHECK(slurp(cfg.output_dir / "attack.csv") == first);

    cfg.attack.strategies.clear();
    attack_command(cfg);
    CHECK(lines(cfg.output_dir / "attack.csv").size() == 1);
    CHECK(RunConfig::load(cfg.output_dir / "config.txt").attack.strategies.empty());
}

TEST_CASE("command line") {
    const auto dir = scratch("cli");
    CHECK(cli("run --out " + dir.string() + " --seed 3 --scheme macsig --predict on --horizon-ms 5000") == 0);
    const auto a = slurp(dir / "signals.csv");
    CHECK(cli("run --out " + dir.string() + " --seed 3 --scheme macsig --predict on --horizon-ms 5000") == 0);
    CHECK(slurp(dir / "signals.csv") == a);
    CHECK(RunConfig::load(dir / "config.txt").sim.seed == 3);

    CHECK(cli("run --scheme nope") == 1);
    CHECK(cli("frobnicate") == 1);
    CHECK(cli("run --horizon-ms -5 --out " + dir.string()) == 1);

    const auto bad = scratch("bad.cfg");
    std::ofstream(bad) << "scenario.nope=1\n";
    CHECK(cli("run --config " + bad.string()) == 1);

    const auto blocker = scratch("cli_blocker");
    std::ofstream(blocker) << "x";
    CHECK(cli("run --out " + (blocker / "x").string()) == 2);
    fs::remove(blocker);
    fs::remove(bad);
}
