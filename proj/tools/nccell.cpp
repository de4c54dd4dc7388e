// nccell: run / analyze / attack / selftest.
#include <CLI11.hpp>
#include <fmt/core.h>

#include <iostream>
#include <optional>
#include <string>

#include "nccell/app.hpp"
#include "nccell/errors.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string scheme;
    std::string predict;
    std::optional<std::int64_t> horizon_ms;
    std::string out;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "key=value config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output directory");
}

nccell::RunConfig build_config(const Overrides& o) {
    nccell::RunConfig cfg = o.config.empty() ? nccell::RunConfig{} : nccell::RunConfig::load(o.config);
    if (o.seed) cfg.set("run.seed", std::to_string(*o.seed));
    if (!o.scheme.empty()) cfg.set("scheme", o.scheme);
    if (!o.predict.empty()) cfg.set("prediction.enabled", o.predict == "on" ? "true" : "false");
    if (o.horizon_ms) cfg.set("run.horizon_ms", std::to_string(*o.horizon_ms));
    if (!o.out.empty()) cfg.set("run.output_dir", o.out);
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blockchain-assisted key distribution for network-coded cellular handover"};
    app.require_subcommand(1);

    Overrides o;
    auto* run = app.add_subcommand("run", "simulate handovers under all three schemes and write traces");
    add_common(run, o);
    run->add_option("--scheme", o.scheme, "scheme written to signals/handovers/per_second CSVs")
        ->check(CLI::IsMember({"blockchain", "macsig", "hmac"}));
    run->add_option("--predict", o.predict, "HO prediction")->check(CLI::IsMember({"on", "off"}));
    run->add_option("--horizon-ms", o.horizon_ms, "simulated time in ms");

    auto* analyze = app.add_subcommand("analyze", "bandwidth and safe-key sweeps over c");
    add_common(analyze, o);

    auto* attack = app.add_subcommand("attack", "pollution bypass-rate sweep");
    add_common(attack, o);

    app.add_subcommand("selftest", "quick invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("selftest")) return nccell::selftest(std::cout) ? 0 : 2;
        const nccell::RunConfig cfg = build_config(o);
        if (app.got_subcommand("run")) {
            const auto art = nccell::run_command(cfg);
            fmt::print("{} handovers; outputs in {}\n", art.events.size(), cfg.output_dir.string());
        } else if (app.got_subcommand("analyze")) {
            nccell::analyze_command(cfg);
            fmt::print("fig4.csv, fig5.csv written to {}\n", cfg.output_dir.string());
        } else {
            nccell::attack_command(cfg);
            fmt::print("attack.csv written to {}\n", cfg.output_dir.string());
        }
    } catch (const nccell::ConfigError& e) {
        fmt::print(stderr, "config error [{}]: {}\n", e.field(), e.what());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }
    return 0;
}
