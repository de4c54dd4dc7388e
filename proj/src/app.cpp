#include "nccell/app.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <map>
#include <ostream>

#include "nccell/attack.hpp"
#include "nccell/errors.hpp"
#include "nccell/integrity.hpp"
#include "nccell/rlnc.hpp"

namespace nccell {

namespace {

std::string prob(double p) { return fmt::format("{:.12g}", p); }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    auto out = open_out(path);
    writer(out);
    finish(out, path);
}

}  // namespace

void write_signal_csv(std::ostream& out, const SignalTrace& trace) {
    out << "t_ms,kind,src,dst,key_exchange_flag\n";
    for (const auto& r : trace)
        fmt::print(out, "{},{},{},{},{}\n", r.t, signal_kind_name(r.kind), r.src.str(), r.dst.str(),
                   r.key_exchange ? 1 : 0);
}

void write_handover_csv(std::ostream& out, const std::vector<HoProcedure>& procs) {
    out << "ue_id,s_cell,t_cell,t_trigger,t_complete,key_signals,prep_wait_ms\n";
    for (const auto& p : procs)
        fmt::print(out, "{},{},{},{},{},{},{}\n", p.ue, p.s_cell, p.t_cell, p.t_trigger, p.t_complete,
                   p.key_signals(), p.prep_wait());
}

void write_per_second_csv(std::ostream& out, const std::vector<SignalingWindow>& windows) {
    out << "window_start_ms,n_bsh,n_ue,verifications,key_exchanges\n";
    for (const auto& w : windows)
        fmt::print(out, "{},{},{},{},{}\n", w.start, w.n_bsh, w.n_ue, w.verifications, w.key_exchanges);
}

void write_cumulative_csv(std::ostream& out, const SimulationResult& blockchain, const SimulationResult& macsig,
                          const SimulationResult& hmac, SimTime horizon_ms, SimTime step_ms) {
    out << "t_ms,blockchain,macsig,hmac\n";
    SimTime end = horizon_ms;
    for (const auto* r : {&blockchain, &macsig, &hmac})
        if (!r->trace.empty()) end = std::max(end, r->trace.back().t);
    end = (end + step_ms - 1) / step_ms * step_ms;
    const auto a = cumulative_key_exchanges(blockchain.trace, end, step_ms);
    const auto b = cumulative_key_exchanges(macsig.trace, end, step_ms);
    const auto c = cumulative_key_exchanges(hmac.trace, end, step_ms);
    for (std::size_t i = 0; i < a.size(); ++i)
        fmt::print(out, "{},{},{},{}\n", a[i].first, a[i].second, b[i].second, c[i].second);
}

void write_analytics_csv(std::ostream& out, const std::vector<AnalyticsRow>& rows) {
    out << "scheme,c,l,bandwidth,safe_key_prob,ci_low,ci_high\n";
    for (const auto& r : rows) {
        if (r.safe)
            fmt::print(out, "{},{},{},{},{},{},{}\n", scheme_name(r.scheme), r.c, r.l, prob(r.bandwidth.value()),
                       prob(r.safe->probability), prob(r.safe->ci.low), prob(r.safe->ci.high));
        else
            fmt::print(out, "{},{},{},{},,,\n", scheme_name(r.scheme), r.c, r.l, prob(r.bandwidth.value()));
    }
}

const SimulationResult& RunArtifacts::get(Scheme s) const {
    switch (s) {
        case Scheme::Blockchain: return blockchain;
        case Scheme::DoubleRandom: return macsig;
        case Scheme::CCoverFree: return hmac;
    }
    return blockchain;
}

RunArtifacts simulate_run(const RunConfig& cfg) {
    cfg.validate();
    RunArtifacts art;
    const MobilitySimulator mobility(cfg.sim.scenario, cfg.sim.seed);
    art.events = mobility.run(cfg.sim.horizon_ms);
    const std::size_t cells = mobility.grid().cell_count();
    art.blockchain = simulate_key_sharing(cfg.sim, Scheme::Blockchain, art.events, cells);
    art.macsig = simulate_key_sharing(cfg.sim, Scheme::DoubleRandom, art.events, cells);
    art.hmac = simulate_key_sharing(cfg.sim, Scheme::CCoverFree, art.events, cells);
    return art;
}

RunArtifacts run_command(const RunConfig& cfg) {
    RunArtifacts art = simulate_run(cfg);
    const auto& dir = cfg.output_dir;
    ensure_dir(dir);
    const SimulationResult& selected = art.get(cfg.scheme);

    write_file(dir / "config.txt", [&](std::ostream& o) { o << cfg.canonical(); });
    write_file(dir / "signals.csv", [&](std::ostream& o) { write_signal_csv(o, selected.trace); });
    write_file(dir / "handovers.csv", [&](std::ostream& o) { write_handover_csv(o, selected.procedures); });
    write_file(dir / "per_second.csv", [&](std::ostream& o) {
        write_per_second_csv(o, cfg.sim.horizon_ms == 0 && selected.trace.empty()
                                    ? std::vector<SignalingWindow>{}
                                    : audit_signaling(selected, cfg.sim.horizon_ms));
    });
    write_file(dir / "cumulative.csv", [&](std::ostream& o) {
        if (cfg.sim.horizon_ms == 0 && art.blockchain.trace.empty())
            o << "t_ms,blockchain,macsig,hmac\n";
        else
            write_cumulative_csv(o, art.blockchain, art.macsig, art.hmac, cfg.sim.horizon_ms, cfg.cumulative_step_ms);
    });
    return art;
}

void analyze_command(const RunConfig& cfg) {
    cfg.validate();
    SchemeConfig sc;
    sc.l = cfg.sim.security.l;
    sc.L = cfg.analyze.L;
    sc.s = cfg.analyze.s;
    sc.epsilon = cfg.analyze.epsilon;
    sc.d = cfg.analyze.d;
    sc.q_bits = cfg.sim.security.q_bits;
    sc.m = cfg.sim.security.m;
    sc.n = cfg.sim.security.n;
    const auto fig4 = bandwidth_sweep(sc, cfg.analyze.c_min, cfg.analyze.c_max);
    const auto fig5 = safe_key_sweep(sc, cfg.analyze.c_min, cfg.analyze.c_max, cfg.analyze.trials, cfg.sim.seed,
                                     cfg.analyze.workers);
    ensure_dir(cfg.output_dir);
    write_file(cfg.output_dir / "config.txt", [&](std::ostream& o) { o << cfg.canonical(); });
    write_file(cfg.output_dir / "fig4.csv", [&](std::ostream& o) { write_analytics_csv(o, fig4); });
    write_file(cfg.output_dir / "fig5.csv", [&](std::ostream& o) { write_analytics_csv(o, fig5); });
}

void attack_command(const RunConfig& cfg) {
    cfg.validate();
    const auto& a = cfg.attack;
    ensure_dir(cfg.output_dir);
    write_file(cfg.output_dir / "config.txt", [&](std::ostream& o) { o << cfg.canonical(); });
    write_file(cfg.output_dir / "attack.csv", [&](std::ostream& o) {
        o << "scheme,strategy,q,l_prime,trials,rate,ci_low,ci_high\n";
        std::uint64_t row = 0;
        for (Scheme scheme : a.schemes)
            for (Strategy strategy : a.strategies)
                for (unsigned lp : a.l_primes) {
                    BypassSetup setup{scheme, a.q_bits, a.l, a.L, a.s, static_cast<int>(lp), a.m, a.n};
                    const AdversaryConfig adv{a.colluders, a.knowledge, strategy};
                    const auto r = measure_bypass_rate(setup, adv, a.trials, mix_seed(cfg.sim.seed) + row++, a.workers);
                    fmt::print(o, "{},{},{},{},{},{},{},{}\n", scheme_name(scheme), strategy_name(strategy),
                               1u << a.q_bits, lp, r.counts.trials, prob(r.rate()), prob(r.ci.low), prob(r.ci.high));
                }
    });
}

bool selftest(std::ostream& out) {
    bool all = true;
    auto check = [&](const char* name, auto&& fn) {
        bool ok = false;
        std::string detail;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            detail = e.what();
        }
        fmt::print(out, "[{}] {}{}\n", ok ? "PASS" : "FAIL", name, detail.empty() ? "" : " (" + detail + ")");
        all = all && ok;
    };

    check("gf: every nonzero element of GF(2^8) has an inverse", [] {
        const Field f(8);
        for (std::uint32_t a = 1; a < 256; ++a)
            if (f.mul(static_cast<Element>(a), f.inv(static_cast<Element>(a))) != 1) return false;
        return true;
    });
    check("gf: GF(2^4) multiplication distributes over addition", [] {
        const Field f(4);
        for (Element a = 0; a < 16; ++a)
            for (Element b = 0; b < 16; ++b)
                for (Element c = 0; c < 16; ++c)
                    if (f.mul(a, b ^ c) != (f.mul(a, b) ^ f.mul(a, c))) return false;
        return true;
    });
    check("rlnc: decode recovers 20 random generations", [] {
        const Field f(8);
        Rng rng(7);
        for (int g = 0; g < 20; ++g) {
            const auto gen = Generation::random(f, g, 8, 32, rng);
            std::vector<CodedPacket> pkts;
            while (rank(f, [&] {
                       std::vector<FieldVector> rows;
                       for (auto& p : pkts) rows.push_back(p.coeffs);
                       return rows;
                   }()) < gen.size())
                pkts.push_back(encode(f, gen, rng));
            const auto res = decode(f, pkts);
            if (!res.complete() || *res.natives != gen.natives()) return false;
        }
        return true;
    });
    check("integrity: recoded packets keep verifying", [] {
        const Field f(8);
        Rng rng(11);
        for (int trial = 0; trial < 200; ++trial) {
            const auto gen = Generation::random(f, 0, 4, 16, rng);
            std::vector<MacKey> keys;
            for (KeyId k = 0; k < 3; ++k) keys.push_back(MacKey::random(f, k, 16, rng));
            std::vector<CodedPacket> pkts;
            for (int i = 0; i < 3; ++i) {
                pkts.push_back(encode(f, gen, rng));
                attach_tags(f, pkts.back(), keys);
            }
            const auto out = recode(f, pkts, rng);
            for (bool v : verify_tags(f, out, keys))
                if (!v) return false;
        }
        return true;
    });
    check("keydist: bandwidth and tag-count formulas", [] {
        return bandwidth_hmac(8, 32, 1024) == Fraction(9, 1056) && bandwidth_macsig(8, 32, 1024, 256) == Fraction(10, 1056) &&
               required_tags(7, 0.01, 0.5) == 201;
    });

    RunConfig cfg;
    cfg.sim.horizon_ms = 10000;
    check("handover: signaling rule 3/1 (blockchain), 2 (baselines)", [&] {
        const auto art = simulate_run(cfg);
        std::map<CellId, int> seen;
        for (const auto& p : art.blockchain.procedures) {
            const std::size_t want = seen[p.t_cell]++ == 0 ? 3 : 1;
            if (p.key_signals() != want) return false;
        }
        for (const auto* r : {&art.macsig, &art.hmac})
            for (const auto& p : r->procedures)
                if (p.key_signals() != 2) return false;
        return !art.events.empty();
    });
    check("ledger: per-second signaling balances n_bsh + n_ue + 1", [&] {
        const auto art = simulate_run(cfg);
        for (const auto& w : audit_signaling(art.blockchain, cfg.sim.horizon_ms))
            if (!w.balanced() || w.verifications > 1) return false;
        return true;
    });
    check("simulation: identical seeds give identical traces", [&] {
        return simulate_run(cfg).blockchain.trace == simulate_run(cfg).blockchain.trace;
    });
    check("attack: forged packet passes one q=16 check at rate 1/16 (3 sigma)", [] {
        BypassSetup setup;
        setup.l = 1;
        setup.l_prime = 1;
        const auto r = measure_bypass_rate(setup, {1, Knowledge::AllKeys, Strategy::RandomForge}, 100000, 3);
        return within_binomial_sigmas(r.counts, 1.0 / 16.0);
    });
    check("attack: ledger comparison rejects the all-keys forger", [] {
        BypassSetup setup;
        setup.scheme = Scheme::Blockchain;
        const auto r = measure_bypass_rate(setup, {3, Knowledge::AllKeys, Strategy::ValidTagForge}, 10000, 5);
        return r.counts.successes == 0;
    });
    return all;
}

}  // namespace nccell
