// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_TESTS_HELPERS_HPP
#define SNS_TESTS_HELPERS_HPP

#include <cmath>

#include "sns/dyadic.hpp"
#include "sns/ops.hpp"
#include "sns/rng.hpp"

namespace sns::test {

// real random field with |u_k| ~ (1+|k|)^{-decay}, mean free
inline SpectralField random_field(const TorusGrid& g, std::uint64_t seed, double decay,
                                  bool div_free = false) {
    SpectralField f(g);
    CounterRng rng(seed, 7);
    for (int idx = 0; idx < g.size(); ++idx) {
        if (g.nyquist(idx)) continue;
        int cj = g.conj_index(idx);
        if (cj < idx) continue;
        double amp = std::pow(1.0 + g.k_abs(idx), -decay);
        cplx v1 = rng.complex_gaussian(idx, 1, amp * amp);
        cplx v2 = rng.complex_gaussian(idx, 2, amp * amp);
        f.comp(0)[idx] = v1;
        f.comp(1)[idx] = v2;
        f.comp(0)[cj] = std::conj(v1);
        f.comp(1)[cj] = std::conj(v2);
    }
    f.set_mode(0, 0, 0, 0);
    f.mean_free = true;
    if (div_free) return leray_project(f);
    return f;
}

// exact convolution over Z^2 restricted to the lattice: oracle for sym_tensor
inline TensorField brute_force_sym_tensor(const SpectralField& u, const SpectralField& v) {
    const TorusGrid& g = u.grid();
    int n = g.n();
    TensorField t(g);
    for (int kp1 = -n / 2 + 1; kp1 <= n / 2; ++kp1)
        for (int kp2 = -n / 2 + 1; kp2 <= n / 2; ++kp2) {
            int ip = g.index(kp1, kp2);
            for (int kq1 = -n / 2 + 1; kq1 <= n / 2; ++kq1)
                for (int kq2 = -n / 2 + 1; kq2 <= n / 2; ++kq2) {
                    int iq = g.index(kq1, kq2);
                    int k1 = kp1 + kq1, k2 = kp2 + kq2;
                    if (k1 < -n / 2 + 1 || k1 > n / 2 || k2 < -n / 2 + 1 || k2 > n / 2) continue;
                    int io = g.index(k1, k2);
                    t.at(0, 0, io) += u.at(0, ip) * v.at(0, iq);
                    t.at(1, 1, io) += u.at(1, ip) * v.at(1, iq);
                    t.at(0, 1, io) +=
                        0.5 * (u.at(0, ip) * v.at(1, iq) + u.at(1, ip) * v.at(0, iq));
                }
        }
    return t;
}

// direct double-sum paraproducts (the legal index sets spelled out)
inline TensorField brute_force_para_lo(const SpectralField& f, const SpectralField& g,
                                       const DyadicSystem& dyad) {
    TensorField acc(f.grid());
    for (int j = -1; j <= dyad.j_max(); ++j)
        for (int i = -1; i <= j - 2; ++i)
            acc += brute_force_sym_tensor(lp_block(f, i, dyad), lp_block(g, j, dyad));
    return acc;
}

inline TensorField brute_force_resonant(const SpectralField& f, const SpectralField& g,
                                        const DyadicSystem& dyad) {
    TensorField acc(f.grid());
    for (int j = -1; j <= dyad.j_max(); ++j)
        for (int i = -1; i <= dyad.j_max(); ++i)
            if (std::abs(i - j) <= 1)
                acc += brute_force_sym_tensor(lp_block(f, i, dyad), lp_block(g, j, dyad));
    return acc;
}

inline double rel_err(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a;
    d -= b;
    double nb = l2_norm(b);
    return nb == 0 ? l2_norm(d) : l2_norm(d) / nb;
}

inline double tensor_max_err(const TensorField& a, const TensorField& b) {
    double m = 0;
    for (int s = 0; s < 3; ++s)
        for (int i = 0; i < a.grid().size(); ++i)
            m = std::max(m, std::abs(a.comp(s)[i] - b.comp(s)[i]));
    return m;
}

// ordinary least squares slope of y against x
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sns::test

#endif
