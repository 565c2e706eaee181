// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "helpers.hpp"
#include "sns/dyadic.hpp"

using namespace sns;
using test::random_field;

static double inf = std::numeric_limits<double>::infinity();

TEST_CASE("dyadic partition of unity") {
    TorusGrid g(32);
    DyadicSystem dyad(g);

    SUBCASE("weights sum to one at every lattice point") {
        for (int idx = 0; idx < g.size(); ++idx) {
            double s = 0;
            for (int j = -1; j <= dyad.j_max(); ++j) s += dyad.weight(j, idx);
            CHECK(std::abs(s - 1.0) < 1e-14);
        }
    }

    SUBCASE("support of rho_j is the dyadic annulus") {
        for (int idx = 0; idx < g.size(); ++idx) {
            double r = g.k_abs(idx);
            CHECK((dyad.weight(-1, idx) == 0.0 || r <= 4.0 / 3.0));
            for (int j = 0; j <= dyad.j_max(); ++j) {
                if (dyad.weight(j, idx) != 0.0) {
                    CHECK(r >= 0.75 * std::pow(2.0, j));
                    CHECK(r <= 8.0 / 3.0 * std::pow(2.0, j));
                }
            }
        }
    }

    SUBCASE("rho_j is the rescaled rho_0") {
        for (int idx = 0; idx < g.size(); ++idx) {
            double r = g.k_abs(idx);
            for (int j = 0; j <= dyad.j_max(); ++j)
                CHECK(dyad.weight(j, idx) == DyadicSystem::rho_profile(r / std::pow(2.0, j)));
        }
    }

    SUBCASE("mode of norm 3 is covered by blocks 1 and 2 with total weight 1") {
        int idx = g.index(3, 0);
        double w1 = dyad.weight(1, idx), w2 = dyad.weight(2, idx);
        CHECK(w1 + w2 == doctest::Approx(1.0).epsilon(1e-14));
        for (int j = -1; j <= dyad.j_max(); ++j)
            if (j != 1 && j != 2) CHECK(dyad.weight(j, idx) == 0.0);
        // frozen values of the constructed profile at |k| = 3
        CHECK(w1 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w2 == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("lp blocks reconstruct the field") {
    TorusGrid g(32);
    DyadicSystem dyad(g);
    SpectralField f = random_field(g, 17, 0.6);

    SpectralField sum(g);
    for (int j = -1; j <= dyad.j_max(); ++j) sum += lp_block(f, j, dyad);
    CHECK(test::rel_err(sum, f) < 1e-13);

    SUBCASE("constant field lives in the chi block") {
        SpectralField c(g);
        c.set_mode(0, 0, cplx(1, 0), cplx(2, 0));
        c.mean_free = false;
        CHECK(test::rel_err(lp_block(c, -1, dyad), c) < 1e-15);
        for (int j = 0; j <= dyad.j_max(); ++j) CHECK(l2_norm(lp_block(c, j, dyad)) == 0.0);
    }

    SUBCASE("blocks beyond j_max vanish") {
        CHECK(l2_norm(lp_block(f, dyad.j_max() + 1, dyad)) == 0.0);
    }
}

TEST_CASE("besov norms") {
    TorusGrid g(32);
    DyadicSystem dyad(g);

    SUBCASE("zero field") {
        CHECK(besov_norm(SpectralField(g), {0.5, 2, 2}, dyad) == 0.0);
    }

    SUBCASE("single-block unimodular probe: norm is |c| 2^{j alpha}") {
        // |k| = sqrt(8) sits strictly inside block j=1 with weight 1
        SpectralField f(g);
        cplx c(0.6, -0.3);
        int idx = g.index(2, 2);
        double kn = g.k_abs(idx);
        f.at(0, idx) = c * cplx(0, 1) * (2.0 / kn);
        f.at(1, idx) = c * cplx(0, 1) * (-2.0 / kn);
        // |f(x)| = |c| at every x since the mode direction is a unit vector
        for (double alpha : {-0.5, 0.0, 1.0})
            for (double p : {1.0, 2.0, 4.0, inf})
                CHECK(besov_norm(f, {alpha, p, inf}, dyad) ==
                      doctest::Approx(std::abs(c) * std::pow(2.0, alpha)).epsilon(1e-10));
    }

    SUBCASE("monotone in alpha for q = inf") {
        SpectralField f = random_field(g, 23, 0.4);
        double a = besov_norm(f, {0.75, 4, inf}, dyad);
        double b = besov_norm(f, {0.5, 4, inf}, dyad);
        CHECK(b <= a * (1 + 1e-12));
    }

    SUBCASE("p=q=2 path agrees with the weighted Plancherel sum") {
        SpectralField f = random_field(g, 29, 0.7);
        double alpha = 0.35;
        double direct = 0;
        for (int idx = 0; idx < g.size(); ++idx) {
            double w = 0;
            for (int j = -1; j <= dyad.j_max(); ++j)
                w += std::pow(2.0, 2 * j * alpha) * dyad.weight(j, idx) * dyad.weight(j, idx);
            direct += w * (std::norm(f.at(0, idx)) + std::norm(f.at(1, idx)));
        }
        CHECK(besov_norm(f, {alpha, 2, 2}, dyad) ==
              doctest::Approx(std::sqrt(direct)).epsilon(1e-10));
    }

    SUBCASE("bad indices are rejected") {
        CHECK_THROWS_AS(besov_norm(SpectralField(g), {0, 0.5, 2}, dyad), contract_error);
    }
}

TEST_CASE("frequency projections") {
    TorusGrid g(32);
    DyadicSystem dyad(g);
    SpectralField f = random_field(g, 31, 0.5);

    SUBCASE("H + L = identity") {
        for (double lam : {0.5, 1.0, 3.0, 7.7}) {
            SpectralField s = freq_project(f, FreqProjection::H_lambda, lam, dyad);
            s += freq_project(f, FreqProjection::L_lambda, lam, dyad);
            CHECK(test::rel_err(s, f) < 1e-14);
        }
    }

    SUBCASE("lambda <= 1 strips exactly the chi block") {
        SpectralField h = freq_project(f, FreqProjection::H_lambda, 0.8, dyad);
        SpectralField want = f;
        want -= lp_block(f, -1, dyad);
        CHECK(test::rel_err(h, want) < 1e-14);
    }

    SUBCASE("P equals the difference of the two H projections") {
        SpectralField p = freq_project(f, FreqProjection::P_lambda_K, 4.0, dyad, 32.0);
        SpectralField want = freq_project(f, FreqProjection::H_lambda, 4.0, dyad);
        want -= freq_project(f, FreqProjection::H_lambda, 32.0, dyad);
        CHECK(test::rel_err(p, want) < 1e-14);
    }

    SUBCASE("P with K < lambda is zero by the indicator") {
        SpectralField p = freq_project(f, FreqProjection::P_lambda_K, 8.0, dyad, 4.0);
        CHECK(l2_norm(p) == 0.0);
    }

    SUBCASE("H nesting for K >= 4 lambda") {
        SpectralField hk = freq_project(f, FreqProjection::H_lambda, 8.0, dyad);
        SpectralField hlk = freq_project(hk, FreqProjection::H_lambda, 2.0, dyad);
        CHECK(test::rel_err(hlk, hk) < 1e-14);
    }
}

TEST_CASE("heat semigroup") {
    TorusGrid g(32);
    DyadicSystem dyad(g);

    SUBCASE("t=0 is the identity") {
        SpectralField f = random_field(g, 37, 0.5);
        CHECK(test::rel_err(heat_semigroup(f, 0.0), f) == 0.0);
    }

    SUBCASE("single mode decays as e^{-t |k|^2}") {
        SpectralField f(g);
        f.set_mode_pair(3, 4, cplx(1, 0), cplx(0, 0));
        double t = 0.07;
        SpectralField h = heat_semigroup(f, t);
        CHECK(std::abs(h.at(0, g.index(3, 4)) - std::exp(-t * 25.0)) < 1e-16);
    }

    SUBCASE("block smoothing rate beats 9/16 (L2)") {
        SpectralField f = random_field(g, 41, 0.3);
        for (int j = 1; j <= dyad.j_max(); ++j) {
            SpectralField blk = lp_block(f, j, dyad);
            double n0 = l2_norm(blk);
            if (n0 == 0) continue;
            for (double t : {0.001, 0.01}) {
                double ratio = l2_norm(heat_semigroup(blk, t)) / n0;
                double c_emp = -std::log(ratio) / (t * std::pow(4.0, j));
                CHECK(c_emp >= 9.0 / 16.0 - 1e-9);
            }
        }
    }

    SUBCASE("negative time is rejected") {
        CHECK_THROWS_AS(heat_semigroup(SpectralField(g), -1.0), contract_error);
    }
}

TEST_CASE("high frequency decay of H_M") {
    TorusGrid g(64);
    DyadicSystem dyad(g);
    double alpha = 0.25, eps = 0.5, p = 4.0;

    SUBCASE("field supported below M is annihilated") {
        SpectralField f(g);
        f.set_mode_pair(1, 1, cplx(0.3, 0.1), cplx(0, 0.2));
        CHECK(high_freq_decay(f, 16.0, alpha, eps, p, dyad) == 0.0);
    }

    SUBCASE("single mode at |k| = 2M, frozen closed form") {
        SpectralField f(g);
        int idx = g.index(8, 0);
        f.at(0, idx) = 1.0;
        double M = 4.0;
        // H_M keeps the mode fully (weight 1); blocks j=2 carries rho_2(8)=chi(1)-..., j=3 the rest
        double got = high_freq_decay(f, M, alpha, eps, p, dyad);
        double w2 = dyad.weight(2, idx), w3 = dyad.weight(3, idx);
        double want = std::pow(2.0, 2 * (alpha - eps)) * w2 + std::pow(2.0, 3 * (alpha - eps)) * w3;
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }

    SUBCASE("ratio to M^{-eps} ||f||_{B^alpha_{p,inf}} stays bounded over dyadic M") {
        SpectralField f = random_field(g, 43, 1.2);
        double base = besov_norm(f, {alpha, p, inf}, dyad);
        std::vector<double> logM, logR;
        for (double M = 1; M <= g.n() / 4; M *= 2) {
            double lhs = high_freq_decay(f, M, alpha, eps, p, dyad);
            logM.push_back(std::log(M));
            logR.push_back(std::log(lhs / (std::pow(M, -eps) * base)));
        }
        CHECK(test::fit_slope(logM, logR) <= 0.1);
    }
}
