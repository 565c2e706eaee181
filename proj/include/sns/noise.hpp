// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_NOISE_HPP
#define SNS_NOISE_HPP

#include <array>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "sns/dyadic.hpp"
#include "sns/rng.hpp"

namespace sns {

// Noise coefficients phi_k with conjugate symmetry phi(-k) = conj(phi(k)).
// The driving noise splits into a rough part xi_1 on modes |k| > split_radius
// (with sup |phi_k| <= alpha0 there) and a smooth part xi_2 on the finitely
// many modes 0 < |k| <= split_radius.
//
// Modes are excited along the divergence-free direction i k_perp / |k| per
// mode, with k_perp = (k2, -k1); the factor i makes each {k,-k} pair sum to a
// real field under the pairing B_{-k} = conj(B_k).  Self-conjugate lattice
// modes (Nyquist rows) carry no noise.
class NoiseSpectrum {
  public:
    NoiseSpectrum(const TorusGrid& grid, std::vector<cplx> phi, double alpha0, int split_radius);

    static NoiseSpectrum constant(const TorusGrid& grid, double alpha0, int split_radius);
    // |phi_k| = alpha0 * profile(|k|) given as (radius, amplitude) breakpoints
    // with linear interpolation; amplitude <= 1 beyond split_radius.
    static NoiseSpectrum band(const TorusGrid& grid, double alpha0, int split_radius,
                              const std::vector<std::pair<double, double>>& profile);
    static NoiseSpectrum table(const TorusGrid& grid, double alpha0, int split_radius,
                               const std::vector<std::tuple<int, int, cplx>>& entries);

    const TorusGrid& grid() const { return grid_; }
    double alpha0() const { return alpha0_; }
    int split_radius() const { return split_radius_; }
    cplx phi(int idx) const { return phi_[idx]; }
    const std::vector<cplx>& phi() const { return phi_; }

    // canonical half-lattice: modes that own their conjugate pair
    const std::vector<int>& half_modes() const { return half_; }

    bool is_xi2_mode(int idx) const { return grid_.k_sq(idx) <= double(split_radius_) * split_radius_; }

  private:
    TorusGrid grid_;
    std::vector<cplx> phi_;
    double alpha0_;
    int split_radius_;
    std::vector<int> half_;
};

enum class NoiseKind { xi1_only, xi2_only, full };

// Exact Ornstein-Uhlenbeck increment over one step for the mode stored at
// idx: eta with E|eta|^2 = |phi_k|^2 (1 - e^{-2|k|^2 h}) / (2|k|^2), drawn
// reproducibly from (rng, mode, step).
cplx ou_increment(const NoiseSpectrum& sp, int idx, double ksq, double h, const CounterRng& rng,
                  std::uint64_t step);

// Composed increment over h = substeps * h_atom, built from atomic draws
// keyed by atom0..atom0+substeps-1.  Runs whose steps share the same atomic
// grid see the same Brownian path, so refinement studies are path-coupled.
cplx ou_increment_composed(const NoiseSpectrum& sp, int idx, double ksq, double h, int substeps,
                           const CounterRng& rng, std::uint64_t atom0);


// Per-mode decay and increment tables for a fixed (h, substeps); all steppers
// on one noise path draw through the same tables so increments stay
// bit-identical across pipelines.
class OuTables {
  public:
    OuTables(const NoiseSpectrum& sp, double h, int substeps);

    double full_decay(int idx) const { return full_decay_[idx]; }
    int substeps() const { return substeps_; }

    // increment over the whole step for the mode at idx (atomic composition)
    cplx draw(const CounterRng& rng, int idx, std::uint64_t atom0) const {
        double sd = atom_sd_[idx];
        if (sd == 0.0) return {0, 0};
        if (substeps_ == 1) {
            auto [g1, g2] = rng.gaussian_pair(std::uint64_t(idx),
                                              draw_key(DrawPurpose::ou_step, atom0));
            return {sd * g1, sd * g2};
        }
        cplx acc(0, 0);
        for (int i = 0; i < substeps_; ++i) {
            acc *= atom_decay_[idx];
            auto [g1, g2] = rng.gaussian_pair(
                std::uint64_t(idx), draw_key(DrawPurpose::ou_step, atom0 + std::uint64_t(i)));
            acc += cplx(sd * g1, sd * g2);
        }
        return acc;
    }

  private:
    int substeps_;
    std::vector<double> full_decay_;  // e^{-|k|^2 h}
    std::vector<double> atom_decay_;  // e^{-|k|^2 h/substeps}
    std::vector<double> atom_sd_;     // sqrt(var_atom / 2), 0 where phi = 0
};

// Mild solution of the heat equation driven by xi_1 (per-mode OU from zero),
// stored as scalar complex amplitudes z_k along i k_perp/|k|, plus an optional
// rough initial datum carried by the heat flow: Xtilde = X + e^{t Lap} u_r.
class StochasticConvolution {
  public:
    StochasticConvolution(const NoiseSpectrum& sp, CounterRng rng);

    void set_rough_init(const SpectralField& ur);

    // advance by h > 0; which selects the driven modes; substeps > 1 keeps
    // the Brownian path consistent across step-size refinements
    void step(double h, NoiseKind which = NoiseKind::xi1_only, int substeps = 1);

    // draw the state at an arbitrary time directly (exact law, indexed draws)
    void sample_at(double t, std::uint64_t sample_id, NoiseKind which = NoiseKind::xi1_only);

    double t() const { return t_; }
    std::uint64_t step_count() const { return step_; }
    const std::vector<cplx>& amplitudes() const { return z_; }
    const NoiseSpectrum& spectrum() const { return sp_; }
    const CounterRng& rng() const { return rng_; }

    SpectralField field_X() const;       // the OU part only
    SpectralField field_Xtilde() const;  // X + e^{t Lap} u_r
    std::optional<SpectralField> rough_at_t() const;
    const std::optional<SpectralField>& rough_init() const { return ur0_; }

    // restore counters when resuming from a checkpoint
    void restore(double t, std::uint64_t step, std::vector<cplx> z);

  private:
    NoiseSpectrum sp_;
    CounterRng rng_;
    std::vector<cplx> z_;
    std::optional<SpectralField> ur0_;
    double t_ = 0;
    std::uint64_t step_ = 0;
    // step tables cached for the last (h, substeps)
    std::unique_ptr<OuTables> tables_;
    double cached_h_ = -1.0;
    int cached_sub_ = 0;
};

// field with coeff(k) = z_k * i k_perp / |k|
SpectralField amplitudes_to_field(const TorusGrid& g, const std::vector<cplx>& z);

// E X_N(x) (x) X_N(x) as a constant symmetric matrix (c11, c12, c22):
// sum over the driven modes of |phi_k|^2 sigma_k(t) (k_perp (x) k_perp)/|k|^2
// weighted by the squared low-pass multiplier of L_N, with
// sigma_k(t) = (1-e^{-2|k|^2 t})/(2|k|^2).  X is the xi_1 convolution, so by
// default only modes outside the split radius contribute.
// N = infinity means no truncation; t = infinity gives the stationary value.
std::array<double, 3> wick_constant(const NoiseSpectrum& sp, double t, double trunc_N,
                                    const DyadicSystem& dyad,
                                    NoiseKind which = NoiseKind::xi1_only);

// X_N (x)_s X_N minus its expectation, on the grid of xt.  The subtraction
// centers only the OU part; a rough-initial contribution inside xt is left
// untouched.
TensorField wick_square(const SpectralField& xt, double trunc_N, const NoiseSpectrum& sp,
                        double t, const DyadicSystem& dyad,
                        NoiseKind which = NoiseKind::xi1_only);

}  // namespace sns

#endif
