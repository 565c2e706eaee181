// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_DIAGNOSTICS_HPP
#define SNS_DIAGNOSTICS_HPP

#include <optional>
#include <vector>

#include "sns/noise.hpp"

namespace sns {

struct LyapunovConfig {
    double alpha = 0.1;   // feasibility bound on the rough part
    double kappa = 0.01;  // C^{-kappa} regularity
    std::vector<double> candidate_cuts;  // dyadic M values for H_M u candidates
    int N = 0;                           // moment order for the V^(N) variant
    int quad_points = 64;                // time quadrature for the V^(N) heat integral

    static std::vector<double> default_cuts(const TorusGrid& g) {
        std::vector<double> cuts;
        for (double m = 1; m <= g.n() / 2; m *= 2) cuts.push_back(m);
        return cuts;
    }
};

struct LyapunovResult {
    double value = 0;        // ||u_s|| + ||u_r||_{C^-kappa} of the best candidate
    double cut = 0;          // chosen M, or 0 when u_r = 0 was selected
    double rough_norm = 0;   // ||u_r||_{C^-kappa}
    double smooth_norm = 0;  // ||u_s||
};

// Constructive upper bound on V_alpha(u): minimize over u_r in
// {0} union {H_M u : M in candidate_cuts, ||H_M u||_{C^-kappa} <= alpha}.
LyapunovResult lyapunov_V(const SpectralField& u, const DyadicSystem& dyad,
                          const LyapunovConfig& cfg);

// V^(N) adds ||u_r||_{B^{-kappa/N}_{2,2}} <= alpha and, for p = 1..6,
// int_0^1 ||e^{t Lap} u_r||_{B^0_{4,pN}}^{pN} dt <= alpha^{pN} to feasibility.
LyapunovResult lyapunov_VN(const SpectralField& u, const DyadicSystem& dyad,
                           const LyapunovConfig& cfg);

// Stopping rule: trigger when ||w|| > w_bound, ||X||_{C^-kappa} > x_bound, or
// ||Y||_{L^inf} > y_bound.
struct StoppingThresholds {
    double w_bound;
    double x_bound;
    double y_bound;
};

enum class StopCause { none = 0, w_norm = 1, x_norm = 2, y_norm = 3 };

class StoppingMonitor {
  public:
    explicit StoppingMonitor(const StoppingThresholds& th) : th_(th) {}

    // feed the step quantities; returns true while not yet triggered
    bool observe(double t, std::uint64_t step, double w_l2, double x_cnorm, double y_linf);

    bool triggered() const { return cause_ != StopCause::none; }
    double T() const { return T_; }
    std::uint64_t trigger_step() const { return step_; }
    StopCause cause() const { return cause_; }
    double trigger_value() const { return value_; }
    const StoppingThresholds& thresholds() const { return th_; }

  private:
    StoppingThresholds th_;
    StopCause cause_ = StopCause::none;
    double T_ = -1;
    std::uint64_t step_ = 0;
    double value_ = 0;
};

// Exact per-unit-time Ito correction for d(1/2 ||w^L||^2) under the noise
// L_lambda xi_1 + xi_2: one half of sum_k weight_k^2 |phi_k|^2, where
// weight_k is the L_lambda multiplier on xi_1 modes and 1 on xi_2 modes.
double ito_correction(const NoiseSpectrum& sp, const DyadicSystem& dyad, double lambda);

// One row of the energy bookkeeping for a w^L step; all entries are increments
// over the step (already multiplied by h where appropriate).
struct LedgerRow {
    double t = 0;
    double dissipation = 0;   // -h ||grad wL||^2, always <= 0
    double ito_pairing = 0;   // <wL, dW>, martingale increment
    double ito_correction = 0;
    double r_pairing = 0;     // h <grad wL, T_R>
    double para_pairing = 0;  // h <grad wL, 2 w olessthan P_{lambda,K} Xtilde>
    double large_pairing = 0; // h <grad wL, 2 wL (x)_s wH>
    double realized = 0;      // 1/2 ||wL[t+h]||^2 - 1/2 ||wL[t]||^2
    double residual() const {
        return realized - (dissipation + ito_pairing + ito_correction + r_pairing +
                           para_pairing + large_pairing);
    }
};

}  // namespace sns

#endif
