// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"
#include "sns/snapshot.hpp"
#include "sns/solver.hpp"

using namespace sns;
using test::random_field;

namespace {

SpectralField low_mode_field(const TorusGrid& g, double size, std::uint64_t seed) {
    SpectralField f(g);
    CounterRng rng(seed, 99);
    for (int k1 = -2; k1 <= 2; ++k1)
        for (int k2 = -2; k2 <= 2; ++k2) {
            if ((k1 == 0 && k2 == 0) || k1 * k1 + k2 * k2 > 4) continue;
            if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
            int idx = g.index(k1, k2);
            cplx z = rng.complex_gaussian(idx, 5, 1.0);
            double kn = std::sqrt(double(k1 * k1 + k2 * k2));
            f.set_mode_pair(k1, k2, z * cplx(0, 1) * (k2 / kn), z * cplx(0, 1) * (-k1 / kn));
        }
    f.div_free = true;
    double n0 = l2_norm(f);
    if (n0 > 0) f *= size / n0;
    return f;
}

}  // namespace

TEST_CASE("galerkin stepper") {
    TorusGrid g(16);

    SUBCASE("collinear two-mode shear decays exactly under viscosity") {
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.0, 0);
        GalerkinConfig gc{7, true, false, true, 1e-2};
        GalerkinStepper st(g, sp, gc, CounterRng(1, 0));
        SpectralField u0(g);
        u0.set_mode_pair(1, 0, cplx(0, 0), cplx(0.7, 0.1));
        u0.set_mode_pair(2, 0, cplx(0, 0), cplx(-0.2, 0.4));
        u0.div_free = true;
        st.init(u0);
        for (int q = 0; q < 50; ++q) st.step();
        double t = st.t();
        CHECK(std::abs(st.u().at(1, g.index(1, 0)) - cplx(0.7, 0.1) * std::exp(-t)) < 1e-13);
        CHECK(std::abs(st.u().at(1, g.index(2, 0)) - cplx(-0.2, 0.4) * std::exp(-4.0 * t)) <
              1e-13);
    }

    SUBCASE("truncated transport conserves energy and enstrophy (pairing rates)") {
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.0, 0);
        GalerkinConfig gc{7, false, false, true, 1e-3};
        GalerkinStepper st(g, sp, gc, CounterRng(2, 0));
        st.init(random_field(g, 5, 0.8, true));
        for (int q = 0; q < 5; ++q) {
            const SpectralField& u = st.u();
            SpectralField F = st.nonlinear_rate();
            double n = l2_norm(u);
            // energy rate 2<u,F>
            CHECK(std::abs(inner(u, F)) <= 1e-10 * n * n * n);
            // enstrophy rate 2<grad u, grad F> = 2 sum |k|^2 Re(conj(u) F)
            double ens_rate = 0, ens = 0;
            for (int i = 0; i < g.size(); ++i) {
                double ks = g.k_sq(i);
                ens_rate += ks * (std::real(std::conj(u.at(0, i)) * F.at(0, i)) +
                                  std::real(std::conj(u.at(1, i)) * F.at(1, i)));
                ens += ks * (std::norm(u.at(0, i)) + std::norm(u.at(1, i)));
            }
            CHECK(std::abs(ens_rate) <= 1e-10 * ens * n);
            st.step();
        }
    }

    SUBCASE("noise without viscosity is rejected") {
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.1, 0);
        GalerkinConfig gc{7, false, true, true, 1e-3};
        CHECK_THROWS_AS(GalerkinStepper(g, sp, gc, CounterRng(3, 0)), contract_error);
    }
}

TEST_CASE("ansatz stepper basics") {
    TorusGrid g(32);
    DyadicSystem dyad(g);

    SUBCASE("lambda recorded is exactly the smooth norm") {
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.1, 2);
        SolverConfig cfg;
        cfg.h = 1e-3;
        AnsatzStepper st(dyad, sp, cfg, CounterRng(7, 0));
        SpectralField us = low_mode_field(g, 3.7, 11);
        st.init({us, SpectralField(g), 0.0});
        CHECK(st.lambda() == l2_norm(us));
        CHECK(st.K() >= st.lambda_plus());
    }

    SUBCASE("no wick forcing and zero data keep Y at zero") {
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.0, 2);
        SolverConfig cfg;
        cfg.h = 1e-3;
        AnsatzStepper st(dyad, sp, cfg, CounterRng(7, 1));
        st.init({SpectralField(g), SpectralField(g), 0.0});
        for (int q = 0; q < 5; ++q) st.step();
        CHECK(l2_norm(st.Y()) == 0.0);
        CHECK(l2_norm(st.wL()) == 0.0);
        CHECK(l2_norm(st.wH()) == 0.0);
    }

    SUBCASE("first Y step is the Lawson image of the wick forcing") {
        // noiseless but with a rough initial datum: Xtilde[0] = u_r
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.0, 2);
        SolverConfig cfg;
        cfg.h = 2e-3;
        cfg.rule = Dealias::two_thirds;
        AnsatzStepper st(dyad, sp, cfg, CounterRng(8, 0));
        SpectralField ur = random_field(g, 21, 1.5, true);
        st.init({SpectralField(g), ur, 0.0});
        st.step();
        TensorField t = sym_tensor(ur, ur);
        apply_dealias_mask(t, cfg.rule);
        SpectralField want = leray_project(divergence(t));
        want *= -cfg.h;
        want = heat_semigroup(want, cfg.h);
        CHECK(test::rel_err(st.Y(), want) < 1e-12);
    }

    SUBCASE("decomposition bookkeeping w = -L_lambda Xtilde + wH + wL") {
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.2, 2);
        SolverConfig cfg;
        cfg.h = 1e-3;
        AnsatzStepper st(dyad, sp, cfg, CounterRng(9, 0));
        st.init({low_mode_field(g, 0.5, 13), SpectralField(g), 0.0});
        for (int q = 0; q < 10; ++q) st.step();
        SpectralField lhs = st.w();
        SpectralField rhs = st.wH();
        rhs += st.wL();
        rhs -= freq_project(st.xtilde(), FreqProjection::L_lambda,
                            std::max(st.lambda(), 1e-300), dyad);
        CHECK(test::rel_err(lhs, rhs) < 1e-8);
        CHECK(st.w().max_reality_defect() < 1e-12);
    }

    SUBCASE("deterministic replay is bit-identical") {
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.3, 2);
        SolverConfig cfg;
        cfg.h = 1e-3;
        AnsatzStepper a(dyad, sp, cfg, CounterRng(10, 4));
        AnsatzStepper b(dyad, sp, cfg, CounterRng(10, 4));
        InitialSplit split{low_mode_field(g, 1.0, 17), SpectralField(g), 0.0};
        a.init(split);
        b.init(split);
        for (int q = 0; q < 8; ++q) {
            a.step();
            b.step();
        }
        for (int i = 0; i < g.size(); ++i) {
            CHECK(a.wL().at(0, i) == b.wL().at(0, i));
            CHECK(a.Y().at(1, i) == b.Y().at(1, i));
        }
    }
}

TEST_CASE("noise-free ansatz and dpd coincide with a plain NSE evolution") {
    TorusGrid g(32);
    DyadicSystem dyad(g);
    NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.0, 2);
    SolverConfig cfg;
    cfg.h = 1e-3;

    SpectralField u0 = low_mode_field(g, 1.2, 23);
    AnsatzStepper ansatz(dyad, sp, cfg, CounterRng(11, 0));
    ansatz.init({u0, SpectralField(g), 0.0});
    DpdStepper dpd(dyad, sp, cfg, CounterRng(11, 0));
    dpd.init(u0);

    double prev = l2_norm(u0);
    for (int q = 0; q < 40; ++q) {
        ansatz.step();
        dpd.step();
        double now = l2_norm(dpd.u());
        CHECK(now <= prev * (1 + 1e-12));  // energy non-increasing
        prev = now;
    }
    CHECK(test::rel_err(ansatz.reconstruct_u(), dpd.u()) < 1e-12);
}

TEST_CASE("pipeline consistency on a shared noise path") {
    TorusGrid g(32);
    DyadicSystem dyad(g);
    NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.05, 2);
    SpectralField u0 = low_mode_field(g, 1.0, 29);

    // at matched steps the two pipelines realize the same discrete map up to
    // roundoff: the Bony bookkeeping telescopes exactly
    auto run_pair = [&](double h) {
        SolverConfig cfg;
        cfg.h = h;
        cfg.ledger = false;
        AnsatzStepper ansatz(dyad, sp, cfg, CounterRng(12, 0));
        ansatz.init({u0, SpectralField(g), 0.0});
        DpdStepper dpd(dyad, sp, cfg, CounterRng(12, 0));
        dpd.init(u0);
        int steps = int(std::round(0.05 / h));
        for (int q = 0; q < steps; ++q) {
            ansatz.step();
            dpd.step();
        }
        return test::rel_err(ansatz.reconstruct_u(), dpd.u());
    };
    CHECK(run_pair(1e-3) < 1e-10);

    // genuine discretization error via path-coupled refinement: a step of h
    // with two noise substeps sees the same Brownian path as two steps of h/2
    auto u_at = [&](double h, int substeps) {
        SolverConfig cfg;
        cfg.h = h;
        cfg.ledger = false;
        cfg.noise_substeps = substeps;
        AnsatzStepper ansatz(dyad, sp, cfg, CounterRng(12, 3));
        ansatz.init({u0, SpectralField(g), 0.0});
        int steps = int(std::round(0.05 / h));
        for (int q = 0; q < steps; ++q) ansatz.step();
        return ansatz.reconstruct_u();
    };
    double g1 = test::rel_err(u_at(2e-3, 2), u_at(1e-3, 1));
    double g2 = test::rel_err(u_at(1e-3, 2), u_at(5e-4, 1));
    CHECK(g1 > 1e-12);  // the coupled gap is a real discretization error
    CHECK(g2 < g1);
    double order = std::log2(g1 / g2);
    CHECK(order > 0.5);
    CHECK(order < 1.7);
}

TEST_CASE("dpd matches galerkin when the rough noise is empty") {
    TorusGrid g(24);
    DyadicSystem dyad(g);
    // R beyond the lattice: xi_1 empty, all noise is smooth and band-limited
    // inside the retained set shared by both integrators
    NoiseSpectrum sp =
        NoiseSpectrum::band(g, 0.3, 100, {{0.0, 1.0}, {6.0, 1.0}, {6.5, 0.0}});
    SolverConfig cfg;
    cfg.h = 1e-3;
    cfg.rule = Dealias::two_thirds;

    SpectralField u0 = low_mode_field(g, 0.8, 31);
    DpdStepper dpd(dyad, sp, cfg, CounterRng(13, 0));
    dpd.init(u0);
    GalerkinConfig gc{g.n() / 3, true, true, true, cfg.h};
    GalerkinStepper gal(g, sp, gc, CounterRng(13, 0));
    gal.init(u0);
    for (int q = 0; q < 100; ++q) {
        dpd.step();
        gal.step();
    }
    CHECK(test::rel_err(dpd.u(), gal.u()) < 1e-6);
}

TEST_CASE("k scale computation and saturation") {
    TorusGrid g(32);
    DyadicSystem dyad(g);
    NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.1, 2);
    SolverConfig cfg;
    cfg.h = 1e-3;

    SUBCASE("small fields keep K at lambda_plus") {
        AnsatzStepper st(dyad, sp, cfg, CounterRng(14, 0));
        st.init({low_mode_field(g, 0.2, 37), SpectralField(g), 0.0});
        st.step();
        CHECK(st.K() == doctest::Approx(1.0));
        CHECK(!st.k_saturated());
    }

    SUBCASE("L12 above lambda_plus saturates K at desk scales") {
        AnsatzStepper st(dyad, sp, cfg, CounterRng(14, 1));
        st.init({low_mode_field(g, 4.0, 37), SpectralField(g), 0.0});
        st.step();
        CHECK(st.K() >= st.lambda_plus());
        CHECK(st.k_saturated());
    }
}

TEST_CASE("checkpoint resume is bit exact") {
    TorusGrid g(16);
    DyadicSystem dyad(g);
    NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.2, 2);
    SolverConfig cfg;
    cfg.h = 1e-3;

    InitialSplit split{low_mode_field(g, 0.7, 41), SpectralField(g), 0.0};
    AnsatzStepper a(dyad, sp, cfg, CounterRng(15, 0));
    a.init(split);
    for (int q = 0; q < 10; ++q) a.step();
    write_checkpoint("checkpoint_test.sns", a, "deadbeef");
    for (int q = 0; q < 5; ++q) a.step();

    AnsatzStepper b(dyad, sp, cfg, CounterRng(15, 0));
    b.init(split);
    CheckpointHeader hd = resume_checkpoint("checkpoint_test.sns", b);
    CHECK(hd.step == 10);
    for (int q = 0; q < 5; ++q) b.step();
    for (int i = 0; i < g.size(); ++i) {
        CHECK(a.wL().at(0, i) == b.wL().at(0, i));
        CHECK(a.Y().at(0, i) == b.Y().at(0, i));
        CHECK(a.wH().at(1, i) == b.wH().at(1, i));
    }
    CHECK(a.t() == b.t());
    std::remove("checkpoint_test.sns");
}

TEST_CASE("field snapshot round trip") {
    TorusGrid g(16);
    SpectralField f = random_field(g, 43, 0.9, true);
    write_field_file("snapshot_test.sns", f);
    SpectralField back = read_field_file("snapshot_test.sns");
    CHECK(back.grid().n() == 16);
    CHECK(back.div_free == f.div_free);
    for (int i = 0; i < g.size(); ++i) CHECK(back.at(0, i) == f.at(0, i));
    std::remove("snapshot_test.sns");

    // corrupted snapshot fails cleanly
    {
        std::ofstream bad("snapshot_test.sns", std::ios::binary);
        bad << "NOPE";
    }
    CHECK_THROWS_AS(read_field_file("snapshot_test.sns"), resource_error);
    std::remove("snapshot_test.sns");
}

TEST_CASE("run trajectory") {
    TorusGrid g(16);
    DyadicSystem dyad(g);

    SUBCASE("smoke run with a weak band noise reaches t_end") {
        NoiseSpectrum sp =
            NoiseSpectrum::band(g, 0.05, 2, {{0.0, 0.1}, {6.0, 0.1}, {7.0, 0.0}});
        TrajectoryConfig tc;
        tc.solver.h = 2e-3;
        tc.solver.ledger = true;
        tc.t_end = 1.0;
        tc.alpha0 = 0.05;
        tc.report_stride = 100;
        InitialSplit split{SpectralField(g), SpectralField(g), 0.0};
        AnsatzStepper st(dyad, sp, tc.solver, CounterRng(16, 0));
        RunReport rep = run_trajectory(tc, st, split);
        CHECK(rep.terminal_status == "ok");
        REQUIRE(rep.rows.size() == 5);
        CHECK(rep.rows.back().t == doctest::Approx(1.0));
    }

    SUBCASE("identical config and seed replay identically") {
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.2, 2);
        TrajectoryConfig tc;
        tc.solver.h = 1e-3;
        tc.t_end = 0.05;
        tc.alpha0 = 0.2;
        tc.report_stride = 10;
        InitialSplit split{low_mode_field(g, 0.5, 47), SpectralField(g), 0.0};
        AnsatzStepper s1(dyad, sp, tc.solver, CounterRng(17, 0));
        AnsatzStepper s2(dyad, sp, tc.solver, CounterRng(17, 0));
        RunReport r1 = run_trajectory(tc, s1, split);
        RunReport r2 = run_trajectory(tc, s2, split);
        REQUIRE(r1.rows.size() == r2.rows.size());
        for (std::size_t i = 0; i < r1.rows.size(); ++i) {
            CHECK(r1.rows[i].w_l2 == r2.rows[i].w_l2);
            CHECK(r1.rows[i].x_cnorm == r2.rows[i].x_cnorm);
            CHECK(r1.rows[i].ledger.realized == r2.rows[i].ledger.realized);
        }
    }

    SUBCASE("stopping bookkeeping: trigger exceeds threshold at T and not before") {
        NoiseSpectrum sp = NoiseSpectrum::constant(g, 0.15, 2);
        TrajectoryConfig tc;
        tc.solver.h = 1e-3;
        tc.t_end = 1.0;
        tc.alpha0 = 0.15;
        tc.report_stride = 1;
        InitialSplit split{SpectralField(g), SpectralField(g), 0.0};
        AnsatzStepper st(dyad, sp, tc.solver, CounterRng(18, 0));
        RunReport rep = run_trajectory(tc, st, split);
        REQUIRE(rep.terminal_status == "stopped");
        REQUIRE(rep.stop_cause == StopCause::x_norm);
        // every recorded row before the trigger is below threshold
        for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
            CHECK(rep.rows[i].x_cnorm <= tc.alpha0);
        CHECK(rep.rows.back().x_cnorm > tc.alpha0);
        CHECK(rep.rows.back().t == doctest::Approx(rep.stop_time));
    }
}
