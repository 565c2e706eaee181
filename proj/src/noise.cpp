// SPDX-License-Identifier: Apache-2.0
#include "sns/noise.hpp"

#include <algorithm>
#include <cmath>

namespace sns {

namespace {

// variance of the OU integral over a step of length h for mode with |k|^2 = ksq
double ou_var(double ksq, double h, double phi_sq) {
    if (ksq == 0.0) return phi_sq * h;
    return phi_sq * (1.0 - std::exp(-2.0 * ksq * h)) / (2.0 * ksq);
}

}  // namespace

NoiseSpectrum::NoiseSpectrum(const TorusGrid& grid, std::vector<cplx> phi, double alpha0,
                             int split_radius)
    : grid_(grid), phi_(std::move(phi)), alpha0_(alpha0), split_radius_(split_radius) {
    if (int(phi_.size()) != grid.size()) throw contract_error("NoiseSpectrum: phi size mismatch");
    if (alpha0 < 0) throw contract_error("NoiseSpectrum: alpha0 must be >= 0");
    phi_[grid.index(0, 0)] = 0;
    for (int idx = 0; idx < grid.size(); ++idx)
        if (grid.nyquist(idx)) phi_[idx] = 0;
    double rr = double(split_radius) * split_radius;
    for (int idx = 0; idx < grid.size(); ++idx) {
        int cj = grid.conj_index(idx);
        if (std::abs(phi_[idx] - std::conj(phi_[cj])) > 1e-14 * (1.0 + std::abs(phi_[idx])))
            throw contract_error("NoiseSpectrum: phi must be conjugate symmetric");
        if (grid.k_sq(idx) > rr && std::abs(phi_[idx]) > alpha0 * (1.0 + 1e-12))
            throw contract_error("NoiseSpectrum: |phi_k| must be <= alpha0 for |k| > R");
    }
    for (int idx = 0; idx < grid.size(); ++idx) {
        if (grid.self_conjugate(idx)) continue;
        if (idx < grid.conj_index(idx)) half_.push_back(idx);
    }
}

NoiseSpectrum NoiseSpectrum::constant(const TorusGrid& grid, double alpha0, int split_radius) {
    std::vector<cplx> phi(grid.size(), cplx(alpha0, 0));
    return NoiseSpectrum(grid, std::move(phi), alpha0, split_radius);
}

NoiseSpectrum NoiseSpectrum::band(const TorusGrid& grid, double alpha0, int split_radius,
                                  const std::vector<std::pair<double, double>>& profile) {
    std::vector<cplx> phi(grid.size());
    for (int idx = 0; idx < grid.size(); ++idx) {
        double r = grid.k_abs(idx);
        double amp = profile.empty() ? 1.0 : profile.front().second;
        for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
            if (r >= profile[i].first && r <= profile[i + 1].first) {
                double s = (r - profile[i].first) / (profile[i + 1].first - profile[i].first);
                amp = profile[i].second + s * (profile[i + 1].second - profile[i].second);
            }
        }
        if (!profile.empty() && r > profile.back().first) amp = profile.back().second;
        phi[idx] = alpha0 * amp;
    }
    return NoiseSpectrum(grid, std::move(phi), alpha0, split_radius);
}

NoiseSpectrum NoiseSpectrum::table(const TorusGrid& grid, double alpha0, int split_radius,
                                   const std::vector<std::tuple<int, int, cplx>>& entries) {
    std::vector<cplx> phi(grid.size());
    for (const auto& [k1, k2, v] : entries) {
        phi[grid.index(k1, k2)] = v;
        phi[grid.index(-k1, -k2)] = std::conj(v);
    }
    return NoiseSpectrum(grid, std::move(phi), alpha0, split_radius);
}

cplx ou_increment(const NoiseSpectrum& sp, int idx, double ksq, double h, const CounterRng& rng,
                  std::uint64_t step) {
    double var = ou_var(ksq, h, std::norm(sp.phi(idx)));
    if (var == 0.0) return {0, 0};
    return rng.complex_gaussian(std::uint64_t(idx), draw_key(DrawPurpose::ou_step, step), var);
}

cplx ou_increment_composed(const NoiseSpectrum& sp, int idx, double ksq, double h, int substeps,
                           const CounterRng& rng, std::uint64_t atom0) {
    if (substeps <= 1) return ou_increment(sp, idx, ksq, h, rng, atom0);
    double ha = h / substeps;
    cplx acc(0, 0);
    for (int i = 0; i < substeps; ++i) {
        acc *= std::exp(-ksq * ha);
        acc += ou_increment(sp, idx, ksq, ha, rng, atom0 + std::uint64_t(i));
    }
    return acc;
}

StochasticConvolution::StochasticConvolution(const NoiseSpectrum& sp, CounterRng rng)
    : sp_(sp), rng_(rng), z_(sp.grid().size()) {}

void StochasticConvolution::set_rough_init(const SpectralField& ur) { ur0_ = ur; }

OuTables::OuTables(const NoiseSpectrum& sp, double h, int substeps) : substeps_(substeps) {
    const TorusGrid& g = sp.grid();
    double ha = h / substeps;
    full_decay_.resize(g.size());
    atom_decay_.resize(g.size());
    atom_sd_.resize(g.size());
    for (int idx = 0; idx < g.size(); ++idx) {
        double ksq = g.k_sq(idx);
        full_decay_[idx] = std::exp(-ksq * h);
        atom_decay_[idx] = std::exp(-ksq * ha);
        double var = ou_var(ksq, ha, std::norm(sp.phi(idx)));
        atom_sd_[idx] = var > 0 ? std::sqrt(0.5 * var) : 0.0;
    }
}

void StochasticConvolution::step(double h, NoiseKind which, int substeps) {
    if (h <= 0) throw contract_error("StochasticConvolution::step: h must be > 0");
    if (substeps < 1) throw contract_error("StochasticConvolution::step: substeps must be >= 1");
    if (!tables_ || cached_h_ != h || cached_sub_ != substeps) {
        tables_ = std::make_unique<OuTables>(sp_, h, substeps);
        cached_h_ = h;
        cached_sub_ = substeps;
    }
    const TorusGrid& g = sp_.grid();
    for (int idx : sp_.half_modes()) {
        bool xi2 = sp_.is_xi2_mode(idx);
        bool driven = which == NoiseKind::full || (which == NoiseKind::xi1_only && !xi2) ||
                      (which == NoiseKind::xi2_only && xi2);
        cplx z = z_[idx] * tables_->full_decay(idx);
        if (driven) z += tables_->draw(rng_, idx, step_);
        z_[idx] = z;
        z_[g.conj_index(idx)] = std::conj(z);
    }
    t_ += h;
    step_ += std::uint64_t(substeps);
}

void StochasticConvolution::sample_at(double t, std::uint64_t sample_id, NoiseKind which) {
    const TorusGrid& g = sp_.grid();
    for (int idx : sp_.half_modes()) {
        double ksq = g.k_sq(idx);
        bool xi2 = sp_.is_xi2_mode(idx);
        bool driven = which == NoiseKind::full || (which == NoiseKind::xi1_only && !xi2) ||
                      (which == NoiseKind::xi2_only && xi2);
        cplx z(0, 0);
        if (driven) {
            double var = ou_var(ksq, t, std::norm(sp_.phi(idx)));
            if (var > 0)
                z = rng_.complex_gaussian(std::uint64_t(idx),
                                          draw_key(DrawPurpose::direct_sample, sample_id), var);
        }
        z_[idx] = z;
        z_[g.conj_index(idx)] = std::conj(z);
    }
    t_ = t;
}

SpectralField amplitudes_to_field(const TorusGrid& g, const std::vector<cplx>& z) {
    SpectralField f(g);
    const cplx I(0, 1);
    for (int idx = 0; idx < g.size(); ++idx) {
        if (z[idx] == cplx(0, 0)) continue;
        double k1 = g.k1_of(idx), k2 = g.k2_of(idx);
        double kn = std::sqrt(k1 * k1 + k2 * k2);
        if (kn == 0.0) continue;
        // direction i k_perp/|k| with k_perp = (k2, -k1)
        f.at(0, idx) = z[idx] * I * (k2 / kn);
        f.at(1, idx) = z[idx] * I * (-k1 / kn);
    }
    f.div_free = true;
    return f;
}

SpectralField StochasticConvolution::field_X() const { return amplitudes_to_field(sp_.grid(), z_); }

std::optional<SpectralField> StochasticConvolution::rough_at_t() const {
    if (!ur0_) return std::nullopt;
    return heat_semigroup(*ur0_, t_);
}

SpectralField StochasticConvolution::field_Xtilde() const {
    SpectralField x = field_X();
    if (ur0_) x += heat_semigroup(*ur0_, t_);
    return x;
}

void StochasticConvolution::restore(double t, std::uint64_t step, std::vector<cplx> z) {
    if (int(z.size()) != sp_.grid().size())
        throw contract_error("StochasticConvolution::restore: size mismatch");
    t_ = t;
    step_ = step;
    z_ = std::move(z);
}

std::array<double, 3> wick_constant(const NoiseSpectrum& sp, double t, double trunc_N,
                                    const DyadicSystem& dyad, NoiseKind which) {
    if (t < 0) throw contract_error("wick_constant: t must be >= 0");
    const TorusGrid& g = sp.grid();
    const std::vector<double>* hw = nullptr;
    if (std::isfinite(trunc_N)) hw = &dyad.high_weights(DyadicSystem::j_of_scale(trunc_N));
    std::array<double, 3> c{0, 0, 0};
    for (int idx = 0; idx < g.size(); ++idx) {
        double ksq = g.k_sq(idx);
        if (ksq == 0.0) continue;
        bool xi2 = sp.is_xi2_mode(idx);
        if (which == NoiseKind::xi1_only && xi2) continue;
        if (which == NoiseKind::xi2_only && !xi2) continue;
        double phi_sq = std::norm(sp.phi(idx));
        if (phi_sq == 0.0) continue;
        double low = hw ? 1.0 - (*hw)[idx] : 1.0;
        double sigma = std::isinf(t) ? 1.0 / (2.0 * ksq)
                                     : (1.0 - std::exp(-2.0 * ksq * t)) / (2.0 * ksq);
        double w = low * low * phi_sq * sigma / ksq;
        double k1 = g.k1_of(idx), k2 = g.k2_of(idx);
        // k_perp (x) k_perp = (k2^2, -k1 k2, k1^2)
        c[0] += w * k2 * k2;
        c[1] += w * (-k1 * k2);
        c[2] += w * k1 * k1;
    }
    return c;
}

TensorField wick_square(const SpectralField& xt, double trunc_N, const NoiseSpectrum& sp,
                        double t, const DyadicSystem& dyad, NoiseKind which) {
    SpectralField xn = std::isfinite(trunc_N)
                           ? freq_project(xt, FreqProjection::L_lambda, trunc_N, dyad)
                           : xt;
    TensorField out = sym_tensor(xn, xn);
    std::array<double, 3> c = wick_constant(sp, t, trunc_N, dyad, which);
    int zero = xt.grid().index(0, 0);
    for (int s = 0; s < 3; ++s) out.comp(s)[zero] -= c[s];
    return out;
}

}  // namespace sns
