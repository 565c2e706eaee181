// SPDX-License-Identifier: Apache-2.0
//
// sns <command> --config <path> [--seed N] [--out DIR] [--threads N]
// exit codes: 0 pass, 1 assertion failure, 2 usage error, 3 numerical blow-up

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sns/config.hpp"
#include "sns/experiments.hpp"
#include "sns/snapshot.hpp"
#include "sns/solver.hpp"

using json = nlohmann::json;
using namespace sns;

namespace {

struct CommonArgs {
    std::string config_path;
    std::int64_t seed = -1;
    std::string out;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "experiment config file")->required();
    cmd->add_option("--seed", a.seed, "override run.seed");
    cmd->add_option("--out", a.out, "override output.dir");
    cmd->add_option("--threads", a.threads, "override run.threads");
}

ExperimentSetup load_setup(const CommonArgs& a, Config& cfg) {
    cfg = Config::parse_file(a.config_path);
    ExperimentSetup s = ExperimentSetup::from_config(cfg);
    if (a.seed >= 0) s.seed = std::uint64_t(a.seed);
    if (!a.out.empty()) s.out_dir = a.out;
    if (a.threads > 0) s.threads = a.threads;
    std::filesystem::create_directories(s.out_dir);
    return s;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw resource_error("cannot open " + path);
    f << j.dump(2) << "\n";
}

InitialSplit make_split(const TorusGrid& g, const DyadicSystem& dyad,
                        const ExperimentSetup& s) {
    // smooth part: fixed low-mode profile of size lambda; rough part: a
    // high-frequency field scaled to the requested C^{-kappa} size
    SpectralField us(g);
    {
        CounterRng rng(s.seed, 99);
        for (int k1 = -2; k1 <= 2; ++k1)
            for (int k2 = -2; k2 <= 2; ++k2) {
                if ((k1 == 0 && k2 == 0) || k1 * k1 + k2 * k2 > 4) continue;
                if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
                int idx = g.index(k1, k2);
                cplx z = rng.complex_gaussian(idx, 5, 1.0);
                double kn = std::sqrt(double(k1 * k1 + k2 * k2));
                us.set_mode_pair(k1, k2, z * cplx(0, 1) * (k2 / kn),
                                 z * cplx(0, 1) * (-k1 / kn));
            }
        us.div_free = true;
        double n0 = l2_norm(us);
        if (n0 > 0) us *= s.lambda / n0;
    }
    SpectralField ur(g);
    double bound = 0.0;
    if (s.rough_amp > 0) {
        CounterRng rng(s.seed, 98);
        for (int idx = 0; idx < g.size(); ++idx) {
            if (g.nyquist(idx) || g.conj_index(idx) < idx || g.k_abs(idx) < g.n() / 8) continue;
            cplx z = rng.complex_gaussian(idx, 6, 1.0 / g.k_sq(idx));
            double k1 = g.k1_of(idx), k2 = g.k2_of(idx), kn = g.k_abs(idx);
            ur.set_mode_pair(g.k1_of(idx), g.k2_of(idx), z * cplx(0, 1) * (k2 / kn),
                             z * cplx(0, 1) * (-k1 / kn));
            (void)k1;
        }
        ur.div_free = true;
        double cn = c_alpha_norm(ur, -s.kappa, dyad);
        if (cn > 0) {
            SpectralField scaled = ur;
            scaled *= s.rough_amp / cn;
            ur = scaled;
        }
        bound = 1.001 * s.rough_amp;
    }
    return InitialSplit{us, ur, bound};
}

int cmd_simulate(const CommonArgs& args) {
    Config cfg;
    ExperimentSetup s = load_setup(args, cfg);
    TorusGrid g(s.n);
    DyadicSystem dyad(g);
    NoiseSpectrum sp = s.make_spectrum(g);

    TrajectoryConfig tc;
    tc.solver.h = s.h > 0 ? s.h : SolverConfig::default_h(g);
    tc.solver.kappa = s.kappa;
    tc.solver.rule = s.dealias_rule();
    tc.solver.ledger = cfg.get_bool("run.ledger", true);
    tc.t_end = s.t_end;
    tc.alpha0 = s.alpha0;
    tc.report_stride = cfg.get_int("run.report_stride", 1);
    tc.checkpoint_stride = std::uint64_t(cfg.get_num("run.checkpoint_stride", 0));
    if (tc.checkpoint_stride > 0)
        tc.checkpoint_path = s.out_dir + "/checkpoint.sns";
    tc.config_hash = cfg.hash();

    InitialSplit split = make_split(g, dyad, s);
    AnsatzStepper stepper(dyad, sp, tc.solver, CounterRng(s.seed, 0));
    RunReport rep = run_trajectory(tc, stepper, split);
    rep.config_hash = cfg.hash();
    rep.seed = s.seed;
    rep.write_csv(s.out_dir + "/run.csv");

    json j{{"command", "simulate"},
           {"config_hash", cfg.hash()},
           {"seed", s.seed},
           {"status", rep.terminal_status},
           {"rows", rep.rows.size()},
           {"stop_time", rep.stop_time},
           {"stop_cause", int(rep.stop_cause)}};
    write_json(s.out_dir + "/run.json", j);
    std::cout << "simulate: " << rep.terminal_status << ", " << rep.rows.size()
              << " rows -> " << s.out_dir << "/run.csv\n";
    if (rep.terminal_status.rfind("blowup", 0) == 0) return 3;
    return 0;
}

int cmd_verify(const CommonArgs& args, const std::string& suite) {
    Config cfg;
    ExperimentSetup s = load_setup(args, cfg);
    std::vector<SuiteReport> reports;
    auto want = [&](const std::string& name) { return suite == "all" || suite == name; };

    if (want("paraproducts")) {
        ParaSuiteConfig pc;
        pc.seed = s.seed;
        reports.push_back(para_inequality_suite(pc));
    }
    if (want("heatflow")) {
        HeatflowSuiteConfig hc;
        hc.seed = s.seed;
        reports.push_back(heatflow_suite(hc));
    }
    if (want("moments331")) {
        MomentSuiteConfig mc;
        mc.alpha0 = s.alpha0 > 0 ? s.alpha0 : 0.5;
        mc.samples = cfg.get_int("verify.samples", 4096);
        mc.seed = s.seed;
        mc.threads = s.threads;
        reports.push_back(moment_suite_331(mc));
    }
    if (want("concentration441")) {
        ConcentrationSuiteConfig cc;
        cc.alpha0 = s.alpha0 > 0 ? s.alpha0 : 0.5;
        cc.samples = cfg.get_int("verify.samples", 4096);
        cc.seed = s.seed;
        cc.threads = s.threads;
        reports.push_back(concentration_suite_441(cc));
    }
    if (want("suptime444")) {
        SupTimeSuiteConfig sc;
        sc.alpha0 = s.alpha0 > 0 ? s.alpha0 : 0.5;
        sc.paths = cfg.get_int("verify.paths", 128);
        sc.seed = s.seed;
        sc.threads = s.threads;
        reports.push_back(sup_time_suite_444(sc));
    }
    if (want("wick")) {
        WickSuiteConfig wc;
        wc.alpha0 = s.alpha0 > 0 ? s.alpha0 : 0.5;
        wc.kappa = s.kappa;
        wc.seed = s.seed;
        wc.threads = s.threads;
        reports.push_back(wick_suite(wc));
    }
    if (want("ledger")) {
        LedgerSuiteConfig lc;
        lc.alpha0 = s.alpha0;
        lc.split_radius = s.split_radius;
        lc.kappa = s.kappa;
        lc.seed = s.seed;
        lc.threads = s.threads;
        reports.push_back(ledger_suite(lc));
    }
    if (want("whbound")) {
        WhBoundSuiteConfig wc;
        wc.alpha0 = s.alpha0;
        wc.kappa = s.kappa;
        wc.seed = s.seed;
        wc.threads = s.threads;
        reports.push_back(wh_bound_suite(wc));
    }
    if (reports.empty()) {
        std::cerr << "unknown suite: " << suite << "\n";
        return 2;
    }

    bool all_pass = true;
    json out{{"command", "verify"}, {"config_hash", cfg.hash()}, {"seed", s.seed}};
    out["suites"] = json::array();
    for (const auto& r : reports) {
        r.write_csv(s.out_dir + "/verify_" + r.name + ".csv", cfg.hash(), s.seed);
        all_pass = all_pass && r.pass;
        out["suites"].push_back({{"name", r.name}, {"pass", r.pass}, {"rows", r.rows.size()}});
        std::cout << "suite " << r.name << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
        for (const auto& n : r.notes)
            if (n.rfind("FAIL", 0) == 0) std::cout << "  " << n << "\n";
    }
    out["pass"] = all_pass;
    write_json(s.out_dir + "/verify.json", out);
    return all_pass ? 0 : 1;
}

int cmd_invariant(const CommonArgs& args) {
    Config cfg;
    ExperimentSetup s = load_setup(args, cfg);
    InvariantConfig ic;
    ic.n = s.n;
    ic.sharp_N = cfg.get_int("invariant.sharp_N", s.n / 2 - 1);
    ic.h = s.h > 0 ? s.h : 1e-3;
    ic.t_end = s.t_end;
    ic.burnin = cfg.get_num("invariant.burnin", s.t_end / 4);
    ic.batches = cfg.get_int("invariant.batches", 30);
    ic.nonlinear = cfg.get_bool("invariant.nonlinear", true);
    ic.alpha0 = s.alpha0;
    ic.kappa = s.kappa;
    ic.seed = s.seed;

    TorusGrid gi(ic.n);
    NoiseSpectrum spi = s.make_spectrum(gi);
    InvariantResult res = invariant_stats(ic, &spi);
    std::vector<std::vector<double>> rows;
    for (const auto& r : res.table)
        rows.push_back({double(r.k1), double(r.k2), r.estimate, r.stderr_, r.theory, r.z});
    write_table_csv(s.out_dir + "/invariant_modes.csv", "k1,k2,estimate,stderr,theory,z", rows,
                    cfg.hash(), s.seed);
    std::vector<std::vector<double>> tail;
    for (std::size_t i = 0; i < res.tail_levels.size(); ++i)
        tail.push_back({res.tail_levels[i], res.tail_logp[i]});
    write_table_csv(s.out_dir + "/invariant_tail.csv", "level,log_p", tail, cfg.hash(), s.seed);

    json j{{"command", "invariant"},
           {"config_hash", cfg.hash()},
           {"seed", s.seed},
           {"fraction_within_3se", res.fraction_within_3se},
           {"stretched_exponent", res.stretched_exponent},
           {"tail_convex", res.tail_convex},
           {"pass", res.pass}};
    write_json(s.out_dir + "/invariant.json", j);
    std::cout << "invariant: " << 100.0 * res.fraction_within_3se
              << "% of modes within 3 SE; pass=" << res.pass << "\n";
    return res.pass ? 0 : 1;
}

int cmd_decay(const CommonArgs& args) {
    Config cfg;
    ExperimentSetup s = load_setup(args, cfg);
    DecayConfig dc;
    dc.n = s.n;
    dc.alpha0 = s.alpha0;
    dc.split_radius = s.split_radius;
    dc.lambdas = cfg.get_list("decay.lambdas", {1, 4, 16});
    dc.paths = s.ensemble;
    dc.t_end = s.t_end;
    dc.h = s.h > 0 ? s.h : 5e-4;
    dc.sample_dt = cfg.get_num("decay.sample_dt", 0.1);
    dc.kappa = s.kappa;
    dc.seed = s.seed;
    dc.threads = s.threads;
    TorusGrid gd(dc.n);
    NoiseSpectrum spd = s.make_spectrum(gd);
    DecayResult res = lyapunov_decay_experiment(dc, &spd);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        std::vector<double> row{res.times[i]};
        for (const auto& c : res.curves) {
            row.push_back(c.mean[i]);
            row.push_back(c.se[i]);
        }
        rows.push_back(row);
    }
    std::string header = "t";
    for (const auto& c : res.curves)
        header += ",EV_lambda" + std::to_string(c.lambda) + ",se_lambda" +
                  std::to_string(c.lambda);
    write_table_csv(s.out_dir + "/decay_curves.csv", header, rows, cfg.hash(), s.seed);
    json j{{"command", "decay"},       {"config_hash", cfg.hash()},
           {"seed", s.seed},           {"gamma_hat", res.gamma_hat},
           {"plateau", res.plateau},   {"decreasing", res.decreasing},
           {"common_plateau", res.common_plateau},
           {"pass", res.pass}};
    write_json(s.out_dir + "/decay.json", j);
    std::cout << "decay: gamma_hat=" << res.gamma_hat << " plateau=" << res.plateau
              << " pass=" << res.pass << "\n";
    return res.pass ? 0 : 1;
}

int cmd_mixing(const CommonArgs& args) {
    Config cfg;
    ExperimentSetup s = load_setup(args, cfg);
    MixingConfig mc;
    mc.n = s.n;
    mc.alpha0 = s.alpha0;
    mc.split_radius = s.split_radius;
    mc.h = s.h > 0 ? s.h : 1e-3;
    mc.t_end = s.t_end;
    mc.sample_dt = cfg.get_num("mixing.sample_dt", 0.1);
    mc.paths = s.ensemble;
    mc.lambda1 = cfg.get_num("mixing.lambda1", 2.0);
    mc.lambda2 = cfg.get_num("mixing.lambda2", 0.0);
    mc.kappa = s.kappa;
    mc.seed = s.seed;
    mc.threads = s.threads;
    TorusGrid gm(mc.n);
    NoiseSpectrum spm = s.make_spectrum(gm);
    MixingResult res = mixing_diagnostic(mc, &spm);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.times.size(); ++i)
        rows.push_back({res.times[i], res.gap_median[i], res.gap_q90[i], res.spectrum_w1[i]});
    write_table_csv(s.out_dir + "/mixing.csv", "t,gap_median,gap_q90,spectrum_w1", rows,
                    cfg.hash(), s.seed);
    json j{{"command", "mixing"},
           {"config_hash", cfg.hash()},
           {"seed", s.seed},
           {"spearman", res.spearman},
           {"pass", res.pass}};
    write_json(s.out_dir + "/mixing.json", j);
    std::cout << "mixing: spearman=" << res.spearman << " pass=" << res.pass << "\n";
    return res.pass ? 0 : 1;
}

int cmd_tail(const CommonArgs& args) {
    Config cfg;
    ExperimentSetup s = load_setup(args, cfg);
    TailConfig tc;
    tc.n = s.n;
    tc.alpha0 = s.alpha0;
    tc.split_radius = s.split_radius;
    tc.h = s.h > 0 ? s.h : 1e-3;
    tc.t_end = s.t_end;
    tc.lambda = s.lambda;
    tc.kappa = s.kappa;
    tc.paths = s.ensemble;
    tc.seed = s.seed;
    tc.threads = s.threads;
    TorusGrid gt(tc.n);
    NoiseSpectrum spt = s.make_spectrum(gt);
    TailResult res = stopping_tail_experiment(tc, &spt);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.sorted_T.size(); ++i)
        rows.push_back({res.sorted_T[i], double(i + 1) / double(tc.paths)});
    write_table_csv(s.out_dir + "/stopping_tail.csv", "T,ecdf", rows, cfg.hash(), s.seed);
    json j{{"command", "tail"},
           {"config_hash", cfg.hash()},
           {"seed", s.seed},
           {"slope_smallest_decade", res.slope_smallest_decade},
           {"events_in_decade", res.events_in_decade},
           {"triggered", res.sorted_T.size()},
           {"pass", res.pass}};
    write_json(s.out_dir + "/tail.json", j);
    std::cout << "tail: slope=" << res.slope_smallest_decade << " events="
              << res.events_in_decade << " pass=" << res.pass << "\n";
    return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral 2D stochastic Navier-Stokes toolkit"};
    app.require_subcommand(1);

    CommonArgs a_sim, a_ver, a_inv, a_dec, a_mix, a_tail;
    std::string suite = "all";

    add_common(app.add_subcommand("simulate", "run one trajectory of the full decomposition"),
               a_sim);
    CLI::App* ver = app.add_subcommand("verify", "run quantitative verification suites");
    add_common(ver, a_ver);
    ver->add_option("--suite", suite,
                    "paraproducts|heatflow|moments331|concentration441|suptime444|wick|ledger|"
                    "whbound|all");
    add_common(app.add_subcommand("invariant", "long-run invariant-measure statistics"), a_inv);
    add_common(app.add_subcommand("decay", "Lyapunov decay experiment"), a_dec);
    add_common(app.add_subcommand("mixing", "coupled-trajectory mixing diagnostic"), a_mix);
    add_common(app.add_subcommand("tail", "stopping-time tail experiment"), a_tail);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (app.got_subcommand("simulate")) return cmd_simulate(a_sim);
        if (app.got_subcommand("verify")) return cmd_verify(a_ver, suite);
        if (app.got_subcommand("invariant")) return cmd_invariant(a_inv);
        if (app.got_subcommand("decay")) return cmd_decay(a_dec);
        if (app.got_subcommand("mixing")) return cmd_mixing(a_mix);
        if (app.got_subcommand("tail")) return cmd_tail(a_tail);
    } catch (const blowup_error& e) {
        std::cerr << "numerical blow-up: " << e.what() << "\n";
        return 3;
    } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
