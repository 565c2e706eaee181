// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "helpers.hpp"
#include "sns/ops.hpp"

using namespace sns;
using test::random_field;

TEST_CASE("grid lattice and conjugate indexing") {
    TorusGrid g(8);
    CHECK(g.index(1, 0) == 1 * 8 + 0);
    CHECK(g.index(-1, 2) == 7 * 8 + 2);
    CHECK(g.freq(7) == -1);
    CHECK(g.freq(4) == 4);
    CHECK(g.conj_index(g.index(1, 2)) == g.index(-1, -2));
    CHECK(g.self_conjugate(g.index(4, 0)));
    CHECK(g.self_conjugate(g.index(0, 4)));
    CHECK_THROWS_AS(TorusGrid(5), contract_error);
    CHECK_THROWS_AS(TorusGrid(2), contract_error);
}

TEST_CASE("to_physical basics") {
    TorusGrid g(16);

    SUBCASE("zero field gives zero samples") {
        SpectralField z(g);
        PhysicalField p = to_physical(z, 2);
        double m = 0;
        for (auto& v : p.v[0]) m = std::max(m, std::abs(v));
        CHECK(m == 0.0);
    }

    SUBCASE("single mode k=(1,0) samples the basis exponential") {
        SpectralField f(g);
        f.set_mode(1, 0, cplx(0, 0), cplx(1, 0));
        PhysicalField p = to_physical(f, 1);
        for (int x1 = 0; x1 < g.n(); ++x1) {
            cplx expect = std::exp(cplx(0, 2 * kPi * x1 / g.n()));
            CHECK(std::abs(p.v[1][x1 * g.n()] - expect) < 1e-13);
            CHECK(std::abs(p.v[0][x1 * g.n()]) < 1e-14);
        }
    }

    SUBCASE("random round trip at oversample 1 and 2") {
        SpectralField f = random_field(g, 11, 1.0);
        for (int os : {1, 2}) {
            SpectralField back = to_spectral(to_physical(f, os), g);
            CHECK(test::rel_err(back, f) < 1e-12);
        }
    }

    SUBCASE("memory budget is enforced") {
        CHECK_THROWS_AS(to_physical(SpectralField(g), 1 << 12), resource_error);
    }
}

TEST_CASE("leray projection") {
    TorusGrid g(16);

    SUBCASE("explicit projector at k=(1,0)") {
        SpectralField f(g);
        f.set_mode_pair(1, 0, cplx(1, 0), cplx(0, 0));
        SpectralField p = leray_project(f);
        CHECK(std::abs(p.at(0, g.index(1, 0))) < 1e-15);
        CHECK(std::abs(p.at(1, g.index(1, 0))) < 1e-15);

        SpectralField h(g);
        h.set_mode_pair(1, 0, cplx(0, 0), cplx(1, 0));
        SpectralField q = leray_project(h);
        CHECK(std::abs(q.at(1, g.index(1, 0)) - cplx(1, 0)) < 1e-15);
    }

    SUBCASE("gradient fields are annihilated") {
        SpectralField f(g);
        for (int idx = 0; idx < g.size(); ++idx) {
            double k1 = g.k1_of(idx), k2 = g.k2_of(idx);
            f.at(0, idx) = cplx(k1, 0);
            f.at(1, idx) = cplx(k2, 0);
        }
        SpectralField p = leray_project(f);
        CHECK(l2_norm(p) < 1e-12 * l2_norm(f));
    }

    SUBCASE("idempotent and identity on its range") {
        SpectralField f = random_field(g, 3, 0.5);
        SpectralField p1 = leray_project(f);
        SpectralField p2 = leray_project(p1);
        CHECK(test::rel_err(p2, p1) < 1e-12);
        CHECK(p1.max_div_defect() < 1e-12 * l2_norm(f));
        CHECK(p1.max_reality_defect() < 1e-13);
    }
}

TEST_CASE("tensor algebra") {
    TorusGrid g(8);
    SpectralField u = random_field(g, 5, 0.7);
    SpectralField v = random_field(g, 6, 0.7);

    SUBCASE("sym_tensor is symmetric in its arguments") {
        TensorField a = sym_tensor(u, v);
        TensorField b = sym_tensor(v, u);
        CHECK(test::tensor_max_err(a, b) < 1e-13);
    }

    SUBCASE("sym_tensor matches the exact convolution") {
        TensorField a = sym_tensor(u, v);
        TensorField o = test::brute_force_sym_tensor(u, v);
        CHECK(test::tensor_max_err(a, o) < 1e-12);
    }

    SUBCASE("divergence of a constant tensor vanishes") {
        TensorField t(g);
        t.comp(0)[g.index(0, 0)] = 2.0;
        t.comp(1)[g.index(0, 0)] = -1.0;
        t.comp(2)[g.index(0, 0)] = 0.5;
        SpectralField d = divergence(t);
        CHECK(l2_norm(d) == 0.0);
    }

    SUBCASE("div of sym_tensor matches brute force") {
        SpectralField a = divergence(sym_tensor(u, v));
        SpectralField o = divergence(test::brute_force_sym_tensor(u, v));
        CHECK(test::rel_err(a, o) < 1e-11);
    }

    SUBCASE("grad_sym of a single mode") {
        SpectralField f(g);
        f.set_mode(2, 1, cplx(1, 0), cplx(0, 1));
        TensorField t = grad_sym(f);
        int idx = g.index(2, 1);
        CHECK(std::abs(t.at(0, 0, idx) - cplx(0, 2)) < 1e-15);       // i k1 u1
        CHECK(std::abs(t.at(1, 1, idx) - cplx(-1, 0)) < 1e-15);      // i k2 u2
        CHECK(std::abs(t.at(0, 1, idx) - cplx(-1.0, 0.5)) < 1e-15);  // i(k1 u2 + k2 u1)/2
    }

    SUBCASE("grid mismatch is rejected") {
        TorusGrid g2(16);
        CHECK_THROWS_AS(sym_tensor(u, SpectralField(g2)), contract_error);
    }
}

TEST_CASE("nonlinear term") {
    TorusGrid g(8);

    SUBCASE("zero input") {
        SpectralField z(g);
        z.div_free = true;
        CHECK(l2_norm(nonlinear_term(z, Dealias::two_thirds)) == 0.0);
    }

    SUBCASE("single divergence-free mode is a steady Euler state") {
        SpectralField f(g);
        f.set_mode_pair(1, 0, cplx(0, 0), cplx(0.8, 0.3));
        f.div_free = true;
        CHECK(l2_norm(nonlinear_term(f, Dealias::none)) < 1e-14);
    }

    SUBCASE("two-mode input matches the brute-force convolution") {
        SpectralField f(g);
        f.set_mode_pair(1, 0, cplx(0, 0), cplx(0.5, -0.25));
        f.set_mode_pair(0, 1, cplx(-0.3, 0.1), cplx(0, 0));
        f.div_free = true;
        SpectralField got = nonlinear_term(f, Dealias::none);
        SpectralField want = leray_project(divergence(test::brute_force_sym_tensor(f, f)));
        CHECK(test::rel_err(got, want) < 1e-12);
    }

    SUBCASE("non-div-free input is rejected") {
        SpectralField f = random_field(g, 9, 0.5);
        f.div_free = false;
        CHECK_THROWS_AS(nonlinear_term(f, Dealias::two_thirds), contract_error);
    }

    SUBCASE("truncated nonlinearity pairs to zero with u") {
        TorusGrid g32(32);
        SpectralField u = random_field(g32, 21, 1.0, true);
        apply_dealias_mask(u, Dealias::two_thirds);
        SpectralField f = nonlinear_term(u, Dealias::two_thirds);
        double n = l2_norm(u);
        CHECK(std::abs(inner(u, f)) <= 1e-10 * n * n * n);
    }

    SUBCASE("reality and div-free flags survive") {
        TorusGrid g32(32);
        SpectralField u = random_field(g32, 31, 1.0, true);
        apply_dealias_mask(u, Dealias::two_thirds);
        SpectralField f = nonlinear_term(u, Dealias::two_thirds);
        CHECK(f.max_reality_defect() < 1e-12);
        CHECK(f.div_free);
        CHECK(f.max_div_defect() < 1e-10);
    }
}

TEST_CASE("lp norms") {
    TorusGrid g(16);

    SUBCASE("constant field") {
        SpectralField f(g);
        f.set_mode(0, 0, cplx(3, 0), cplx(4, 0));
        f.mean_free = false;
        PhysicalField p = to_physical(f, 2);
        CHECK(lp_norm(p, 2.0) == doctest::Approx(5.0).epsilon(1e-13));
        CHECK(lp_norm(p, std::numeric_limits<double>::infinity()) ==
              doctest::Approx(5.0).epsilon(1e-13));
        CHECK(lp_norm(p, 6.0) == doctest::Approx(5.0).epsilon(1e-13));
    }

    SUBCASE("plancherel agreement for p=2") {
        SpectralField f = random_field(g, 13, 0.8);
        CHECK(lp_norm(to_physical(f, 2), 2.0) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
    }
}
