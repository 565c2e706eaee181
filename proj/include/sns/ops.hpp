// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_OPS_HPP
#define SNS_OPS_HPP

#include "sns/field.hpp"

namespace sns {

enum class Dealias { none, two_thirds };

// Inverse DFT onto an (oversample*n)^2 collocation grid of [0,1)^2.
PhysicalField to_physical(const SpectralField& f, int oversample = 1);

// Analysis back to the n-lattice (modes outside the lattice are dropped).
SpectralField to_spectral(const PhysicalField& p, const TorusGrid& grid);

PhysicalTensor tensor_to_physical(const TensorField& t, int oversample = 1);
TensorField tensor_to_spectral(const PhysicalTensor& p, const TorusGrid& grid);

// Modewise I - k k^T / |k|^2; mode 0 passes through as is.
SpectralField leray_project(const SpectralField& f);

// Dealiased symmetric tensor product u (x)_s v, computed on the oversampled
// collocation grid so that retained modes carry the exact convolution.
TensorField sym_tensor(const SpectralField& u, const SpectralField& v, int oversample = 2);

// Pointwise accumulate a (x)_s b into t with weight c (all on the same grid).
void accumulate_sym_outer(PhysicalTensor& t, const PhysicalField& a, const PhysicalField& b,
                          double c = 1.0);

// div(T)_j = sum_i (i k_i) T_ij
SpectralField divergence(const TensorField& t);

// (grad_sym u)_{ij} = (i/2)(k_i u_j + k_j u_i)
TensorField grad_sym(const SpectralField& u);

// P div(u (x) u) with the selected retained band.
// pre: u div_free (to 1e-10 of its size); throws contract_error otherwise.
SpectralField nonlinear_term(const SpectralField& u, Dealias rule);

// Band mask: none keeps the full lattice, two_thirds keeps |k_i| <= n/3.
void apply_dealias_mask(SpectralField& f, Dealias rule);
void apply_dealias_mask(TensorField& f, Dealias rule);

// L^2 pairing <u,v> = sum_k Re(conj(u_k).v_k)  (Plancherel, measure-1 torus)
double inner(const SpectralField& u, const SpectralField& v);
double l2_norm(const SpectralField& u);
double h1_seminorm(const SpectralField& u);  // ||grad u|| = (sum |k|^2 |u_k|^2)^(1/2)
// <grad u, T> for symmetric T, computed modewise.
double inner_grad_tensor(const SpectralField& u, const TensorField& t);

// L^p norm of collocation samples: p=inf -> max |v(x)|; else mean quadrature.
double lp_norm(const PhysicalField& p, double pexp);
double lp_norm(const SpectralField& f, double pexp, int oversample = 2);
// Frobenius-pointwise L^p norm of a symmetric tensor field.
double lp_norm(const PhysicalTensor& p, double pexp);
double lp_norm(const TensorField& t, double pexp, int oversample = 2);

SpectralField heat_semigroup(const SpectralField& f, double t);

bool has_nonfinite(const SpectralField& f);

// Reusable synthesis/analysis buffers for one (grid, oversample) pair; keeps
// the padded plane warm and clears only the modes it scattered.  One instance
// per thread (holds no FFT plans; those come from the per-thread cache).
class SpectralWorkspace {
  public:
    SpectralWorkspace(const TorusGrid& g, int oversample);

    int m() const { return m_; }
    const TorusGrid& grid() const { return g_; }

    // out is resized to m x m; coeffs may be weighted or restricted to a mode list
    void synth(const std::vector<cplx>& coeffs, std::vector<cplx>& out);
    void synth_weighted(const std::vector<cplx>& coeffs, const std::vector<double>& w,
                        const std::vector<int>& modes, std::vector<cplx>& out);
    void synth_field(const SpectralField& f, PhysicalField& out);

    // forward transform and gather back onto the lattice
    void analyze(const std::vector<cplx>& phys, std::vector<cplx>& coeffs);
    void analyze_tensor(const PhysicalTensor& t, TensorField& out);

  private:
    TorusGrid g_;
    int m_;
    std::vector<int> scatter_;  // lattice index -> padded index
    std::vector<cplx> pad_;
    std::vector<cplx> tmp_;
};

}  // namespace sns

#endif
