// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "helpers.hpp"
#include "sns/paraproduct.hpp"

using namespace sns;
using test::random_field;

TEST_CASE("paraproducts against the double-sum oracle at n=16") {
    TorusGrid g(16);
    DyadicSystem dyad(g);
    SpectralField f = random_field(g, 51, 0.8);
    SpectralField h = random_field(g, 52, 0.8);

    SUBCASE("high-low") {
        TensorField got = para_lo(f, h, dyad);
        TensorField want = test::brute_force_para_lo(f, h, dyad);
        CHECK(test::tensor_max_err(got, want) < 1e-12);
    }
    SUBCASE("resonant") {
        TensorField got = resonant(f, h, dyad);
        TensorField want = test::brute_force_resonant(f, h, dyad);
        CHECK(test::tensor_max_err(got, want) < 1e-12);
    }
    SUBCASE("low-high is the flipped high-low") {
        TensorField got = para_hi(f, h, dyad);
        TensorField want = test::brute_force_para_lo(h, f, dyad);
        CHECK(test::tensor_max_err(got, want) < 1e-12);
    }
}

TEST_CASE("paraproduct structure") {
    TorusGrid g(32);
    DyadicSystem dyad(g);

    SUBCASE("f olessthan 0 = 0") {
        SpectralField f = random_field(g, 53, 0.5);
        CHECK(tensor_l2_norm(para_lo(f, SpectralField(g), dyad)) == 0.0);
    }

    SUBCASE("constant against a high block contributes; low blocks do not") {
        SpectralField c(g);
        c.set_mode(0, 0, cplx(1, 0), cplx(0.5, 0));
        c.mean_free = false;

        SpectralField hi(g);  // |k|=8 lives in blocks 2,3
        hi.set_mode_pair(8, 0, cplx(0, 0), cplx(1, 0));
        TensorField lo = para_lo(c, hi, dyad);
        TensorField direct = sym_tensor(c, hi);
        CHECK(test::tensor_max_err(lo, direct) < 1e-13);

        SpectralField low(g);  // |k|=1 lives in blocks -1,0 only: no (i,j) with i<=j-2
        low.set_mode_pair(1, 0, cplx(0, 0), cplx(1, 0));
        CHECK(tensor_l2_norm(para_lo(c, low, dyad)) < 1e-14);
    }

    SUBCASE("resonant is symmetric and vanishes for separated blocks") {
        SpectralField a(g);
        a.set_mode_pair(2, 0, cplx(0, 0), cplx(1, 0));   // blocks 0,1
        SpectralField b(g);
        b.set_mode_pair(0, 13, cplx(1, 0), cplx(0, 0));  // blocks 3,4
        CHECK(tensor_l2_norm(resonant(a, b, dyad)) < 1e-14);

        SpectralField f = random_field(g, 54, 0.6);
        SpectralField h = random_field(g, 55, 0.6);
        CHECK(test::tensor_max_err(resonant(f, h, dyad), resonant(h, f, dyad)) < 1e-13);
    }

    SUBCASE("single-block injections stay inside the legal index set") {
        // f in block 3 only, g in block 1 only: i=3 > j-2=-1, so f<g must vanish
        SpectralField f(g);
        f.set_mode_pair(0, 8, cplx(0, 0), cplx(1, 0));
        SpectralField fblk = lp_block(f, 3, dyad);
        SpectralField h(g);
        h.set_mode_pair(2, 2, cplx(0.2, 0), cplx(0, -0.2));
        SpectralField hblk = lp_block(h, 1, dyad);
        CHECK(tensor_l2_norm(para_lo(fblk, hblk, dyad)) < 1e-14);
        // |k|=8 also touches block 2, adjacent to block 1: resonant pair is legal
        CHECK(tensor_l2_norm(resonant(fblk, hblk, dyad)) > 1e-8);
        CHECK(tensor_l2_norm(para_lo(hblk, fblk, dyad)) > 1e-8);  // legal pair i=1 <= 3-2
    }
}

TEST_CASE("bony completeness") {
    SUBCASE("random pairs at n=32") {
        TorusGrid g(32);
        DyadicSystem dyad(g);
        for (std::uint64_t s = 0; s < 3; ++s) {
            SpectralField f = random_field(g, 100 + s, 0.7);
            SpectralField h = random_field(g, 200 + s, 0.7);
            double res = bony_residual(f, h, dyad);
            CHECK(res <= 1e-11 * l2_norm(f) * l2_norm(h));
        }
    }

    SUBCASE("coincident single modes") {
        TorusGrid g(32);
        DyadicSystem dyad(g);
        SpectralField f(g);
        f.set_mode_pair(3, 1, cplx(0.4, 0.2), cplx(-0.1, 0.6));
        CHECK(bony_residual(f, f, dyad) <= 1e-12);
    }

    SUBCASE("adversarial high-frequency pair at n=64") {
        TorusGrid g(64);
        DyadicSystem dyad(g);
        SpectralField f = random_field(g, 61, 0.05);  // nearly flat spectrum
        SpectralField h = random_field(g, 62, 0.05);
        CHECK(bony_residual(f, h, dyad) <= 1e-11 * l2_norm(f) * l2_norm(h));
    }
}

TEST_CASE("paraproduct outputs are exactly symmetric tensors") {
    // storage is (11,12,22); verify the full-matrix accessor agrees across the diagonal
    TorusGrid g(16);
    DyadicSystem dyad(g);
    SpectralField f = random_field(g, 71, 0.5);
    SpectralField h = random_field(g, 72, 0.5);
    TensorField t = para_lo(f, h, dyad);
    for (int idx = 0; idx < g.size(); ++idx) CHECK(t.at(0, 1, idx) == t.at(1, 0, idx));
}
