// SPDX-License-Identifier: Apache-2.0
#include "sns/dyadic.hpp"

#include <algorithm>
#include <limits>

namespace sns {

namespace {
// smooth step: 0 for s <= 0, 1 for s >= 1
double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double a = std::exp(-1.0 / s);
    double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}
}  // namespace

double DyadicSystem::chi_profile(double r) {
    if (r <= 0.75) return 1.0;
    if (r >= 4.0 / 3.0) return 0.0;
    return 1.0 - smooth_step((r - 0.75) / (4.0 / 3.0 - 0.75));
}

DyadicSystem::DyadicSystem(const TorusGrid& grid) : grid_(grid) {
    double kmax = grid.k_abs_max();
    // smallest J with chi(|k|/2^{J+1}) = 1 for all lattice k, so the
    // partition chi + sum_{j<=J} rho_j telescopes to exactly 1
    j_max_ = 0;
    while (kmax / std::pow(2.0, j_max_ + 1) > 0.75) ++j_max_;

    blocks_.assign(j_max_ + 2, std::vector<double>(grid.size()));
    std::vector<double> chi_prev(grid.size()), chi_next(grid.size());
    for (int idx = 0; idx < grid.size(); ++idx) {
        double r = grid.k_abs(idx);
        chi_prev[idx] = chi_profile(r);
        blocks_[0][idx] = chi_prev[idx];
    }
    for (int j = 0; j <= j_max_; ++j) {
        double scale = std::pow(2.0, j + 1);
        for (int idx = 0; idx < grid.size(); ++idx) {
            chi_next[idx] = chi_profile(grid.k_abs(idx) / scale);
            blocks_[j + 1][idx] = chi_next[idx] - chi_prev[idx];
        }
        std::swap(chi_prev, chi_next);
    }

    modes_.assign(j_max_ + 2, {});
    for (int j = -1; j <= j_max_; ++j)
        for (int idx = 0; idx < grid.size(); ++idx)
            if (blocks_[j + 1][idx] != 0.0) modes_[j + 1].push_back(idx);

    high_.assign(j_max_ + 2, std::vector<double>(grid.size()));
    for (int jl = 0; jl <= j_max_ + 1; ++jl) {
        double scale = std::pow(2.0, jl);
        for (int idx = 0; idx < grid.size(); ++idx)
            high_[jl][idx] = 1.0 - chi_profile(grid.k_abs(idx) / scale);
    }
    zeros_.assign(grid.size(), 0.0);
}

const std::vector<double>& DyadicSystem::high_weights(int j_lambda) const {
    if (j_lambda < 0) j_lambda = 0;
    if (j_lambda > j_max_ + 1) return zeros_;
    return high_[j_lambda];
}

SpectralField apply_weights(const SpectralField& f, const std::vector<double>& w) {
    SpectralField out = f;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < f.grid().size(); ++i) out.at(c, i) = f.at(c, i) * w[i];
    return out;
}

SpectralField lp_block(const SpectralField& f, int j, const DyadicSystem& dyad) {
    if (j > dyad.j_max() || j < -1) {
        SpectralField z(f.grid());
        z.div_free = f.div_free;
        return z;
    }
    return apply_weights(f, dyad.block_weights(j));
}

SpectralField freq_project(const SpectralField& f, FreqProjection which, double lambda,
                           const DyadicSystem& dyad, double K) {
    if (lambda <= 0) throw contract_error("freq_project: lambda must be > 0");
    int jl = DyadicSystem::j_of_scale(lambda);
    switch (which) {
        case FreqProjection::H_lambda:
            return apply_weights(f, dyad.high_weights(jl));
        case FreqProjection::L_lambda: {
            SpectralField out = f;
            const std::vector<double>& w = dyad.high_weights(jl);
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < f.grid().size(); ++i) out.at(c, i) = f.at(c, i) * (1.0 - w[i]);
            return out;
        }
        case FreqProjection::P_lambda_K: {
            if (K < lambda) {
                SpectralField z(f.grid());
                z.div_free = f.div_free;
                return z;
            }
            int jk = DyadicSystem::j_of_scale(K);
            const std::vector<double>& wl = dyad.high_weights(jl);
            const std::vector<double>& wk = dyad.high_weights(jk);
            SpectralField out = f;
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < f.grid().size(); ++i)
                    out.at(c, i) = f.at(c, i) * (wl[i] - wk[i]);
            return out;
        }
    }
    throw contract_error("freq_project: bad projection kind");
}

double besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicSystem& dyad,
                  int oversample) {
    if (idx.p < 1 || idx.q < 1) throw contract_error("besov_norm: p,q must be >= 1");
    bool qinf = std::isinf(idx.q);
    double acc = 0;
    for (int j = -1; j <= dyad.j_max(); ++j) {
        SpectralField blk = lp_block(f, j, dyad);
        double lp = lp_norm(blk, idx.p, oversample);
        double term = std::pow(2.0, j * idx.alpha) * lp;
        if (qinf)
            acc = std::max(acc, term);
        else
            acc += std::pow(term, idx.q);
    }
    return qinf ? acc : std::pow(acc, 1.0 / idx.q);
}

double c_alpha_norm(const SpectralField& f, double alpha, const DyadicSystem& dyad) {
    double inf = std::numeric_limits<double>::infinity();
    return besov_norm(f, BesovIndex{alpha, inf, inf}, dyad);
}

TensorField lp_block(const TensorField& t, int j, const DyadicSystem& dyad) {
    TensorField out = t;
    if (j > dyad.j_max() || j < -1) {
        for (int s = 0; s < 3; ++s) std::fill(out.comp(s).begin(), out.comp(s).end(), cplx(0));
        return out;
    }
    const std::vector<double>& w = dyad.block_weights(j);
    for (int s = 0; s < 3; ++s)
        for (int i = 0; i < t.grid().size(); ++i) out.comp(s)[i] = t.comp(s)[i] * w[i];
    return out;
}

double besov_norm(const TensorField& t, const BesovIndex& idx, const DyadicSystem& dyad,
                  int oversample) {
    if (idx.p < 1 || idx.q < 1) throw contract_error("besov_norm: p,q must be >= 1");
    bool qinf = std::isinf(idx.q);
    double acc = 0;
    for (int j = -1; j <= dyad.j_max(); ++j) {
        double lp = lp_norm(lp_block(t, j, dyad), idx.p, oversample);
        double term = std::pow(2.0, j * idx.alpha) * lp;
        if (qinf)
            acc = std::max(acc, term);
        else
            acc += std::pow(term, idx.q);
    }
    return qinf ? acc : std::pow(acc, 1.0 / idx.q);
}

double high_freq_decay(const SpectralField& f, double M, double alpha, double eps, double p,
                       const DyadicSystem& dyad) {
    if (M < 1 || eps <= 0) throw contract_error("high_freq_decay: need M >= 1, eps > 0");
    SpectralField hf = freq_project(f, FreqProjection::H_lambda, M, dyad);
    return besov_norm(hf, BesovIndex{alpha - eps, p, 1.0}, dyad);
}

}  // namespace sns
