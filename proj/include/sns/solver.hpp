// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_SOLVER_HPP
#define SNS_SOLVER_HPP

#include <memory>

#include "sns/diagnostics.hpp"
#include "sns/paraproduct.hpp"
#include "sns/report.hpp"

namespace sns {

struct SolverConfig {
    double h;
    double kappa = 0.01;
    Dealias rule = Dealias::two_thirds;
    bool ledger = true;
    // atomic noise draws per step; runs whose h/substeps grids coincide share
    // the same Brownian path (used by refinement studies)
    int noise_substeps = 1;

    static double default_h(const TorusGrid& g) {
        double kmax_sq = g.k_abs_max() * g.k_abs_max();
        return 0.25 / kmax_sq;
    }
};

// u[0] = u_s + u_r with the rough part small in C^{-kappa}
struct InitialSplit {
    SpectralField u_s;
    SpectralField u_r;
    double alpha_bound;  // declared bound on ||u_r||_{C^{-kappa}}
};

// One trajectory of the full decomposition u = Xtilde + Y + w,
// w = -L_lambda Xtilde + wH + wL, advanced by Lawson exponential Euler with
// exact Ornstein-Uhlenbeck treatment of every additive noise.
class AnsatzStepper {
  public:
    AnsatzStepper(const DyadicSystem& dyad, const NoiseSpectrum& sp, const SolverConfig& cfg,
                  CounterRng rng);

    void init(const InitialSplit& split);
    void step();

    double t() const { return conv_.t(); }
    std::uint64_t step_count() const { return conv_.step_count(); }
    const TorusGrid& grid() const { return dyad_.grid(); }

    const SpectralField& Y() const { return Y_; }
    const SpectralField& wH() const { return wH_; }
    const SpectralField& wL() const { return wL_; }
    const SpectralField& w() const { return w_; }
    SpectralField xtilde() const { return conv_.field_Xtilde(); }
    SpectralField x_part() const { return conv_.field_X(); }
    SpectralField reconstruct_u() const;  // Xtilde + Y + w

    double lambda() const { return lambda_; }
    double lambda_plus() const { return std::max(lambda_, 1.0); }
    double K() const { return K_; }
    bool k_saturated() const { return k_saturated_; }
    double ito_rate() const { return ito_rate_; }
    const SpectralField& R_term() const { return R_term_; }

    const LedgerRow& last_ledger() const { return ledger_; }
    const StochasticConvolution& conv() const { return conv_; }
    StochasticConvolution& conv() { return conv_; }
    const SolverConfig& config() const { return cfg_; }
    const NoiseSpectrum& spectrum() const { return sp_; }
    const DyadicSystem& dyad() const { return dyad_; }

    // monitor quantities at the current time
    double w_l2() const { return l2_norm(w_); }
    double x_cnorm() const { return c_alpha_norm(x_part(), -cfg_.kappa, dyad_); }
    double y_linf() const;

    // checkpoint support: overwrite the full mutable state
    void restore(double t, std::uint64_t step, double lambda, std::vector<cplx> z,
                 SpectralField ur, SpectralField Y, SpectralField wH, SpectralField wL);

  private:
    void refresh_w();
    void compute_K(double w_l12);

    const DyadicSystem& dyad_;
    NoiseSpectrum sp_;
    SolverConfig cfg_;
    StochasticConvolution conv_;
    SpectralField Y_, wH_, wL_, w_, R_term_;
    double lambda_ = 0;
    int j_lambda_ = 0;
    double K_ = 1;
    int j_K_ = 0;
    bool k_saturated_ = false;
    double ito_rate_ = 0;
    std::vector<double> decay_;  // e^{-h |k|^2}
    LedgerRow ledger_;

    // step scratch; one trajectory owns one stepper, so not shared
    SpectralWorkspace ws_;
    std::vector<PhysicalField> bx_, bwd_, bwp_;
    PhysicalField px_, pY_, pwH_, pwL_, scratch_, hl_total_, boundary2_;
    PhysicalTensor TY_, TwH_, Tmain_, TR_, Ttmp_, TwLnl_, Tlarge_;
    TensorField tY_, twH_, tmain_, tR_, twLnl_, tlarge_;
    std::vector<cplx> dz_;
    std::vector<double> wtmp_;
    std::unique_ptr<OuTables> ou_;
    double qv_mean_step_ = 0;
};

// Da Prato-Debussche pipeline: dt v = Lap v - P div(v^2 + 2 v (x)s X + :X^2:) + xi_2,
// u = v + X, same noise path as the ansatz when built from the same rng.
class DpdStepper {
  public:
    DpdStepper(const DyadicSystem& dyad, const NoiseSpectrum& sp, const SolverConfig& cfg,
               CounterRng rng);

    void init(const SpectralField& u0);  // v[0] = u[0]
    void step();

    double t() const { return conv_.t(); }
    const SpectralField& v() const { return v_; }
    SpectralField u() const;
    const StochasticConvolution& conv() const { return conv_; }

  private:
    const DyadicSystem& dyad_;
    NoiseSpectrum sp_;
    SolverConfig cfg_;
    StochasticConvolution conv_;
    SpectralField v_;
    std::vector<double> decay_;
    SpectralWorkspace ws_;
    PhysicalField px_, pv_;
    PhysicalTensor T_;
    TensorField ts_;
    std::vector<cplx> dz_;
    std::unique_ptr<OuTables> ou_;
};

// Sharp Fourier-Galerkin reference solver of the regularized equation:
// modes |k|_inf <= sharp_N, alias-free products, exact per-mode OU noise.
struct GalerkinConfig {
    int sharp_N;
    bool viscosity = true;
    bool noise_on = true;
    bool nonlinearity = true;
    double h;
};

class GalerkinStepper {
  public:
    GalerkinStepper(const TorusGrid& grid, const NoiseSpectrum& sp, const GalerkinConfig& cfg,
                    CounterRng rng);

    void init(const SpectralField& u0);
    void step();
    void restore(const SpectralField& u, double t, std::uint64_t step);

    double t() const { return t_; }
    std::uint64_t step_count() const { return step_; }
    const SpectralField& u() const { return u_; }
    const CounterRng& rng() const { return rng_; }

    // truncated transport term -P div(u (x) u) restricted to the sharp set;
    // its pairings drive the conservation checks
    SpectralField nonlinear_rate() const;

  private:
    TorusGrid grid_;
    NoiseSpectrum sp_;
    GalerkinConfig cfg_;
    CounterRng rng_;
    SpectralField u_;
    std::vector<double> decay_;
    std::vector<bool> keep_;
    double t_ = 0;
    std::uint64_t step_ = 0;
};

void apply_sharp_mask(SpectralField& f, int sharp_N);

struct TrajectoryConfig {
    SolverConfig solver;
    double t_end;
    double alpha0;
    int report_stride = 1;
    bool evaluate_monitor = true;
    std::string checkpoint_path;  // empty = no checkpoints
    std::uint64_t checkpoint_stride = 0;
    std::string config_hash;
};

// Full orchestration: init from the split (lambda = ||u_s[0]||), march to
// t_end, evaluate the stopping monitor each step, checkpoint on schedule.
// The caller constructs the stepper (and can inspect its final state after).
RunReport run_trajectory(const TrajectoryConfig& cfg, AnsatzStepper& stepper,
                         const InitialSplit& split);

}  // namespace sns

#endif
