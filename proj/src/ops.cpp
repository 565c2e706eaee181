// SPDX-License-Identifier: Apache-2.0
#include "sns/ops.hpp"

#include <cmath>
#include <cstring>

#include "sns/fft.hpp"

namespace sns {

namespace {

// scatter lattice modes of grid n into the m-lattice (m >= n)
void embed(const std::vector<cplx>& in, const TorusGrid& g, std::vector<cplx>& out, int m) {
    std::fill(out.begin(), out.end(), cplx(0));
    int n = g.n();
    for (int a1 = 0; a1 < n; ++a1) {
        int k1 = g.freq(a1);
        int b1 = ((k1 % m) + m) % m;
        for (int a2 = 0; a2 < n; ++a2) {
            int k2 = g.freq(a2);
            int b2 = ((k2 % m) + m) % m;
            out[std::size_t(b1) * m + b2] = in[std::size_t(a1) * n + a2];
        }
    }
}

void restrict_modes(const std::vector<cplx>& in, int m, const TorusGrid& g,
                    std::vector<cplx>& out) {
    int n = g.n();
    for (int a1 = 0; a1 < n; ++a1) {
        int k1 = g.freq(a1);
        int b1 = ((k1 % m) + m) % m;
        for (int a2 = 0; a2 < n; ++a2) {
            int k2 = g.freq(a2);
            int b2 = ((k2 % m) + m) % m;
            out[std::size_t(a1) * n + a2] = in[std::size_t(b1) * m + b2];
        }
    }
}

void check_budget(int m) {
    if (std::size_t(m) * m > kMaxPhysicalPoints)
        throw resource_error("collocation grid " + std::to_string(m) + "^2 exceeds budget");
}

}  // namespace

PhysicalField to_physical(const SpectralField& f, int oversample) {
    if (oversample < 1) throw contract_error("to_physical: oversample must be >= 1");
    int m = oversample * f.grid().n();
    check_budget(m);
    PhysicalField p(m);
    const Fft& fft = fft_for_size(m);
    std::vector<cplx> tmp(std::size_t(m) * m);
    for (int c = 0; c < 2; ++c) {
        embed(f.comp(c), f.grid(), tmp, m);
        fft.backward(tmp.data(), p.v[c].data());
    }
    return p;
}

SpectralField to_spectral(const PhysicalField& p, const TorusGrid& grid) {
    SpectralField f(grid);
    const Fft& fft = fft_for_size(p.m);
    std::vector<cplx> tmp(std::size_t(p.m) * p.m);
    for (int c = 0; c < 2; ++c) {
        fft.forward(p.v[c].data(), tmp.data());
        restrict_modes(tmp, p.m, grid, f.comp(c));
    }
    f.mean_free = std::abs(f.at(0, 0)) == 0.0 && std::abs(f.at(1, 0)) == 0.0;
    return f;
}

PhysicalTensor tensor_to_physical(const TensorField& t, int oversample) {
    int m = oversample * t.grid().n();
    check_budget(m);
    PhysicalTensor p(m);
    const Fft& fft = fft_for_size(m);
    std::vector<cplx> tmp(std::size_t(m) * m);
    for (int s = 0; s < 3; ++s) {
        embed(t.comp(s), t.grid(), tmp, m);
        fft.backward(tmp.data(), p.v[s].data());
    }
    return p;
}

TensorField tensor_to_spectral(const PhysicalTensor& p, const TorusGrid& grid) {
    TensorField t(grid);
    const Fft& fft = fft_for_size(p.m);
    std::vector<cplx> tmp(std::size_t(p.m) * p.m);
    for (int s = 0; s < 3; ++s) {
        fft.forward(p.v[s].data(), tmp.data());
        restrict_modes(tmp, p.m, grid, t.comp(s));
    }
    return t;
}

SpectralField leray_project(const SpectralField& f) {
    SpectralField out = f;
    const TorusGrid& g = f.grid();
    for (int idx = 0; idx < g.size(); ++idx) {
        double k1 = g.k1_of(idx), k2 = g.k2_of(idx);
        double ks = k1 * k1 + k2 * k2;
        if (ks == 0.0) continue;
        cplx dot = (k1 * f.at(0, idx) + k2 * f.at(1, idx)) / ks;
        out.at(0, idx) = f.at(0, idx) - dot * k1;
        out.at(1, idx) = f.at(1, idx) - dot * k2;
    }
    out.div_free = true;
    return out;
}

void accumulate_sym_outer(PhysicalTensor& t, const PhysicalField& a, const PhysicalField& b,
                          double c) {
    std::size_t pts = std::size_t(t.m) * t.m;
    // unpacked complex arithmetic so the loop vectorizes
    const double* a0 = reinterpret_cast<const double*>(a.v[0].data());
    const double* a1 = reinterpret_cast<const double*>(a.v[1].data());
    const double* b0 = reinterpret_cast<const double*>(b.v[0].data());
    const double* b1 = reinterpret_cast<const double*>(b.v[1].data());
    double* t0 = reinterpret_cast<double*>(t.v[0].data());
    double* t1 = reinterpret_cast<double*>(t.v[1].data());
    double* t2 = reinterpret_cast<double*>(t.v[2].data());
    double ch = 0.5 * c;
    for (std::size_t i = 0; i < pts; ++i) {
        double ar0 = a0[2 * i], ai0 = a0[2 * i + 1];
        double ar1 = a1[2 * i], ai1 = a1[2 * i + 1];
        double br0 = b0[2 * i], bi0 = b0[2 * i + 1];
        double br1 = b1[2 * i], bi1 = b1[2 * i + 1];
        t0[2 * i] += c * (ar0 * br0 - ai0 * bi0);
        t0[2 * i + 1] += c * (ar0 * bi0 + ai0 * br0);
        t1[2 * i] += ch * (ar0 * br1 - ai0 * bi1 + ar1 * br0 - ai1 * bi0);
        t1[2 * i + 1] += ch * (ar0 * bi1 + ai0 * br1 + ar1 * bi0 + ai1 * br0);
        t2[2 * i] += c * (ar1 * br1 - ai1 * bi1);
        t2[2 * i + 1] += c * (ar1 * bi1 + ai1 * br1);
    }
}

TensorField sym_tensor(const SpectralField& u, const SpectralField& v, int oversample) {
    if (u.grid() != v.grid()) throw contract_error("sym_tensor: grid mismatch");
    PhysicalField pu = to_physical(u, oversample);
    PhysicalField pv = to_physical(v, oversample);
    PhysicalTensor pt(pu.m);
    accumulate_sym_outer(pt, pu, pv);
    return tensor_to_spectral(pt, u.grid());
}

SpectralField divergence(const TensorField& t) {
    const TorusGrid& g = t.grid();
    SpectralField out(g);
    const cplx I(0, 1);
    for (int idx = 0; idx < g.size(); ++idx) {
        double k1 = g.k1_of(idx), k2 = g.k2_of(idx);
        out.at(0, idx) = I * (k1 * t.at(0, 0, idx) + k2 * t.at(1, 0, idx));
        out.at(1, idx) = I * (k1 * t.at(0, 1, idx) + k2 * t.at(1, 1, idx));
    }
    return out;
}

TensorField grad_sym(const SpectralField& u) {
    const TorusGrid& g = u.grid();
    TensorField t(g);
    const cplx I(0, 1);
    for (int idx = 0; idx < g.size(); ++idx) {
        double k1 = g.k1_of(idx), k2 = g.k2_of(idx);
        t.at(0, 0, idx) = I * k1 * u.at(0, idx);
        t.at(1, 1, idx) = I * k2 * u.at(1, idx);
        t.at(0, 1, idx) = I * 0.5 * (k1 * u.at(1, idx) + k2 * u.at(0, idx));
    }
    return t;
}

void apply_dealias_mask(SpectralField& f, Dealias rule) {
    if (rule == Dealias::none) return;
    const TorusGrid& g = f.grid();
    int kc = g.n() / 3;
    for (int idx = 0; idx < g.size(); ++idx) {
        if (std::abs(g.k1_of(idx)) > kc || std::abs(g.k2_of(idx)) > kc) {
            f.at(0, idx) = 0;
            f.at(1, idx) = 0;
        }
    }
}

void apply_dealias_mask(TensorField& f, Dealias rule) {
    if (rule == Dealias::none) return;
    const TorusGrid& g = f.grid();
    int kc = g.n() / 3;
    for (int idx = 0; idx < g.size(); ++idx) {
        if (std::abs(g.k1_of(idx)) > kc || std::abs(g.k2_of(idx)) > kc)
            for (int s = 0; s < 3; ++s) f.comp(s)[idx] = 0;
    }
}

SpectralField nonlinear_term(const SpectralField& u, Dealias rule) {
    if (!u.div_free) throw contract_error("nonlinear_term: input must be divergence free");
    TensorField t = sym_tensor(u, u);
    apply_dealias_mask(t, rule);
    SpectralField out = leray_project(divergence(t));
    apply_dealias_mask(out, rule);
    return out;
}

double inner(const SpectralField& u, const SpectralField& v) {
    double s = 0;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < u.grid().size(); ++i)
            s += std::real(std::conj(u.at(c, i)) * v.at(c, i));
    return s;
}

double l2_norm(const SpectralField& u) { return std::sqrt(inner(u, u)); }

double h1_seminorm(const SpectralField& u) {
    double s = 0;
    const TorusGrid& g = u.grid();
    for (int i = 0; i < g.size(); ++i)
        s += g.k_sq(i) * (std::norm(u.at(0, i)) + std::norm(u.at(1, i)));
    return std::sqrt(s);
}

double inner_grad_tensor(const SpectralField& u, const TensorField& t) {
    const TorusGrid& g = u.grid();
    const cplx I(0, 1);
    double s = 0;
    for (int idx = 0; idx < g.size(); ++idx) {
        double k1 = g.k1_of(idx), k2 = g.k2_of(idx);
        // (grad u)_{ij} = i k_i u_j paired against T_{ij}
        s += std::real(std::conj(I * k1 * u.at(0, idx)) * t.at(0, 0, idx));
        s += std::real(std::conj(I * k1 * u.at(1, idx)) * t.at(0, 1, idx));
        s += std::real(std::conj(I * k2 * u.at(0, idx)) * t.at(1, 0, idx));
        s += std::real(std::conj(I * k2 * u.at(1, idx)) * t.at(1, 1, idx));
    }
    return s;
}

double lp_norm(const PhysicalField& p, double pexp) {
    std::size_t pts = std::size_t(p.m) * p.m;
    if (std::isinf(pexp)) {
        double m = 0;
        for (std::size_t i = 0; i < pts; ++i)
            m = std::max(m, std::sqrt(std::norm(p.v[0][i]) + std::norm(p.v[1][i])));
        return m;
    }
    double s = 0;
    for (std::size_t i = 0; i < pts; ++i)
        s += std::pow(std::norm(p.v[0][i]) + std::norm(p.v[1][i]), pexp / 2.0);
    return std::pow(s / double(pts), 1.0 / pexp);
}

double lp_norm(const SpectralField& f, double pexp, int oversample) {
    if (pexp == 2.0) return l2_norm(f);
    return lp_norm(to_physical(f, oversample), pexp);
}

double lp_norm(const PhysicalTensor& p, double pexp) {
    std::size_t pts = std::size_t(p.m) * p.m;
    if (std::isinf(pexp)) {
        double m = 0;
        for (std::size_t i = 0; i < pts; ++i)
            m = std::max(m, std::sqrt(std::norm(p.v[0][i]) + 2.0 * std::norm(p.v[1][i]) +
                                      std::norm(p.v[2][i])));
        return m;
    }
    double s = 0;
    for (std::size_t i = 0; i < pts; ++i)
        s += std::pow(std::norm(p.v[0][i]) + 2.0 * std::norm(p.v[1][i]) + std::norm(p.v[2][i]),
                      pexp / 2.0);
    return std::pow(s / double(pts), 1.0 / pexp);
}

double lp_norm(const TensorField& t, double pexp, int oversample) {
    return lp_norm(tensor_to_physical(t, oversample), pexp);
}

SpectralField heat_semigroup(const SpectralField& f, double t) {
    if (t < 0) throw contract_error("heat_semigroup: t must be >= 0");
    SpectralField out = f;
    const TorusGrid& g = f.grid();
    for (int idx = 0; idx < g.size(); ++idx) {
        double w = std::exp(-t * g.k_sq(idx));
        out.at(0, idx) *= w;
        out.at(1, idx) *= w;
    }
    return out;
}

SpectralWorkspace::SpectralWorkspace(const TorusGrid& g, int oversample)
    : g_(g), m_(oversample * g.n()) {
    check_budget(m_);
    scatter_.resize(g.size());
    for (int a1 = 0; a1 < g.n(); ++a1) {
        int b1 = ((g.freq(a1) % m_) + m_) % m_;
        for (int a2 = 0; a2 < g.n(); ++a2) {
            int b2 = ((g.freq(a2) % m_) + m_) % m_;
            scatter_[a1 * g.n() + a2] = b1 * m_ + b2;
        }
    }
    pad_.assign(std::size_t(m_) * m_, cplx(0));
    tmp_.resize(std::size_t(m_) * m_);
}

void SpectralWorkspace::synth(const std::vector<cplx>& coeffs, std::vector<cplx>& out) {
    out.resize(pad_.size());
    for (int i = 0; i < g_.size(); ++i) pad_[scatter_[i]] = coeffs[i];
    fft_for_size(m_).backward(pad_.data(), out.data());
    for (int i = 0; i < g_.size(); ++i) pad_[scatter_[i]] = cplx(0);
}

void SpectralWorkspace::synth_weighted(const std::vector<cplx>& coeffs,
                                       const std::vector<double>& w,
                                       const std::vector<int>& modes, std::vector<cplx>& out) {
    out.resize(pad_.size());
    for (int i : modes) pad_[scatter_[i]] = coeffs[i] * w[i];
    fft_for_size(m_).backward(pad_.data(), out.data());
    for (int i : modes) pad_[scatter_[i]] = cplx(0);
}

void SpectralWorkspace::synth_field(const SpectralField& f, PhysicalField& out) {
    if (out.m != m_) out = PhysicalField(m_);
    for (int c = 0; c < 2; ++c) synth(f.comp(c), out.v[c]);
}

void SpectralWorkspace::analyze(const std::vector<cplx>& phys, std::vector<cplx>& coeffs) {
    coeffs.resize(g_.size());
    fft_for_size(m_).forward(phys.data(), tmp_.data());
    for (int i = 0; i < g_.size(); ++i) coeffs[i] = tmp_[scatter_[i]];
}

void SpectralWorkspace::analyze_tensor(const PhysicalTensor& t, TensorField& out) {
    for (int s = 0; s < 3; ++s) analyze(t.v[s], out.comp(s));
}

bool has_nonfinite(const SpectralField& f) {
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < f.grid().size(); ++i) {
            if (!std::isfinite(f.at(c, i).real()) || !std::isfinite(f.at(c, i).imag()))
                return true;
        }
    return false;
}

}  // namespace sns
