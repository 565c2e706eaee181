// SPDX-License-Identifier: Apache-2.0
#include "sns/solver.hpp"

#include <cmath>

#include "sns/snapshot.hpp"

namespace sns {

namespace {

std::vector<double> make_decay(const TorusGrid& g, double h) {
    std::vector<double> d(g.size());
    for (int i = 0; i < g.size(); ++i) d[i] = std::exp(-h * g.k_sq(i));
    return d;
}

// field <- e^{h Lap}(field + h * F)
void lawson_update(SpectralField& f, const SpectralField& F, double h,
                   const std::vector<double>& decay) {
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < f.grid().size(); ++i)
            f.at(c, i) = decay[i] * (f.at(c, i) + h * F.at(c, i));
}

// quadrature L^p norm straight from cached samples
double lp_from_samples(const PhysicalField& p, double pexp) { return lp_norm(p, pexp); }

// 0/1 when the H_{jP} multiplier is flat on block j, NaN on boundary blocks
double flat_high_weight(int jP, int j) {
    if (j <= jP - 2) return 0.0;
    if (j >= jP + 1) return 1.0;
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void apply_sharp_mask(SpectralField& f, int sharp_N) {
    const TorusGrid& g = f.grid();
    for (int idx = 0; idx < g.size(); ++idx)
        if (std::abs(g.k1_of(idx)) > sharp_N || std::abs(g.k2_of(idx)) > sharp_N) {
            f.at(0, idx) = 0;
            f.at(1, idx) = 0;
        }
}

AnsatzStepper::AnsatzStepper(const DyadicSystem& dyad, const NoiseSpectrum& sp,
                             const SolverConfig& cfg, CounterRng rng)
    : dyad_(dyad),
      sp_(sp),
      cfg_(cfg),
      conv_(sp, rng),
      Y_(dyad.grid()),
      wH_(dyad.grid()),
      wL_(dyad.grid()),
      w_(dyad.grid()),
      R_term_(dyad.grid()),
      decay_(make_decay(dyad.grid(), cfg.h)),
      ws_(dyad.grid(), 2),
      tY_(dyad.grid()),
      twH_(dyad.grid()),
      tmain_(dyad.grid()),
      tR_(dyad.grid()),
      twLnl_(dyad.grid()),
      tlarge_(dyad.grid()) {
    if (cfg.h <= 0) throw contract_error("AnsatzStepper: h must be > 0");
    int m = ws_.m();
    int nb = dyad.j_max() + 2;
    bx_.assign(nb, PhysicalField(m));
    bwd_.assign(nb, PhysicalField(m));
    bwp_.assign(nb, PhysicalField(m));
    px_ = PhysicalField(m);
    pY_ = PhysicalField(m);
    pwH_ = PhysicalField(m);
    pwL_ = PhysicalField(m);
    scratch_ = PhysicalField(m);
    TY_ = PhysicalTensor(m);
    TwH_ = PhysicalTensor(m);
    Tmain_ = PhysicalTensor(m);
    TR_ = PhysicalTensor(m);
    Ttmp_ = PhysicalTensor(m);
    TwLnl_ = PhysicalTensor(m);
    Tlarge_ = PhysicalTensor(m);
    dz_.resize(dyad.grid().size());
    wtmp_.resize(dyad.grid().size());
    hl_total_ = PhysicalField(m);
    boundary2_ = PhysicalField(m);
    ou_ = std::make_unique<OuTables>(sp_, cfg_.h, cfg_.noise_substeps);
}

void AnsatzStepper::init(const InitialSplit& split) {
    const TorusGrid& g = dyad_.grid();
    if (split.u_s.grid() != g || split.u_r.grid() != g)
        throw contract_error("AnsatzStepper::init: grid mismatch");
    double rough = c_alpha_norm(split.u_r, -cfg_.kappa, dyad_);
    if (rough > split.alpha_bound * (1.0 + 1e-9) && split.alpha_bound > 0)
        throw contract_error("AnsatzStepper::init: rough part exceeds its declared bound");

    lambda_ = l2_norm(split.u_s);  // lambda = ||w[0]||
    j_lambda_ = DyadicSystem::j_of_scale(lambda_);
    conv_.set_rough_init(split.u_r);

    Y_ = SpectralField(g);
    wH_ = SpectralField(g);
    // wL[0] = L_lambda u_r + u_s
    wL_ = freq_project(split.u_r, FreqProjection::L_lambda, std::max(lambda_, 1e-300), dyad_);
    wL_ += split.u_s;
    refresh_w();
    ito_rate_ = ito_correction(sp_, dyad_, lambda_);
    K_ = lambda_plus();
    j_K_ = DyadicSystem::j_of_scale(K_);

    // E 1/2 ||dW||^2 for one step of the L_lambda xi_1 + xi_2 noise
    const std::vector<double>& hwl = dyad_.high_weights(j_lambda_);
    qv_mean_step_ = 0;
    for (int idx : sp_.half_modes()) {
        double ksq = g.k_sq(idx);
        if (ksq <= 0) continue;
        double weight = sp_.is_xi2_mode(idx) ? 1.0 : 1.0 - hwl[idx];
        qv_mean_step_ += weight * weight * std::norm(sp_.phi(idx)) *
                         (1.0 - std::exp(-2.0 * ksq * cfg_.h)) / (2.0 * ksq);
    }
}

void AnsatzStepper::refresh_w() {
    // w = -L_lambda Xtilde + wH + wL, assembled modewise
    const TorusGrid& g = dyad_.grid();
    SpectralField xt = conv_.field_Xtilde();
    const std::vector<double>& hw = dyad_.high_weights(j_lambda_);
    w_ = wH_;
    w_ += wL_;
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < g.size(); ++i) w_.at(c, i) -= (1.0 - hw[i]) * xt.at(c, i);
    w_.div_free = true;
}

void AnsatzStepper::compute_K(double w_l12) {
    double lp = lambda_plus();
    double log2K = std::log2(lp);
    if (w_l12 > 0) {
        double cand = 100.0 * std::log2(w_l12) - 99.0 * std::log2(lp);
        log2K = std::max(log2K, cand);
    }
    j_K_ = log2K <= 0 ? 0 : int(std::ceil(log2K));
    k_saturated_ = j_K_ > dyad_.j_max();
    K_ = std::exp2(std::min(log2K, 1000.0));
}

SpectralField AnsatzStepper::reconstruct_u() const {
    SpectralField u = conv_.field_Xtilde();
    u += Y_;
    u += w_;
    return u;
}

double AnsatzStepper::y_linf() const {
    return lp_norm(Y_, std::numeric_limits<double>::infinity(), 2);
}

namespace {

void clear_tensor(PhysicalTensor& t) {
    for (int s = 0; s < 3; ++s) std::fill(t.v[s].begin(), t.v[s].end(), cplx(0));
}

void clear_field(PhysicalField& f) {
    for (int c = 0; c < 2; ++c) std::fill(f.v[c].begin(), f.v[c].end(), cplx(0));
}

}  // namespace

void AnsatzStepper::step() {
    const TorusGrid& g = dyad_.grid();
    double h = cfg_.h;
    int jmax = dyad_.j_max();
    std::size_t pts = std::size_t(ws_.m()) * ws_.m();

    // block families of Xtilde and w at the current time, plus running sums
    SpectralField xt = conv_.field_Xtilde();
    for (int j = -1; j <= jmax; ++j)
        for (int c = 0; c < 2; ++c) {
            ws_.synth_weighted(xt.comp(c), dyad_.block_weights(j), dyad_.block_modes(j),
                               bx_[j + 1].v[c]);
            ws_.synth_weighted(w_.comp(c), dyad_.block_weights(j), dyad_.block_modes(j),
                               bwd_[j + 1].v[c]);
        }
    for (int c = 0; c < 2; ++c) {
        bwp_[0].v[c] = bwd_[0].v[c];
        for (int j = 0; j <= jmax; ++j)
            for (std::size_t i = 0; i < pts; ++i)
                bwp_[j + 1].v[c][i] = bwp_[j].v[c][i] + bwd_[j + 1].v[c][i];
        for (std::size_t i = 0; i < pts; ++i) {
            cplx s = 0;
            for (int j = 0; j <= jmax + 1; ++j) s += bx_[j].v[c][i];
            px_.v[c][i] = s;
        }
    }
    const PhysicalField& pw = bwp_[jmax + 1];
    ws_.synth_field(Y_, pY_);
    ws_.synth_field(wH_, pwH_);
    ws_.synth_field(wL_, pwL_);

    compute_K(lp_from_samples(pw, 12.0));

    int jl = j_lambda_, jk = j_K_;
    const std::vector<double>& hwl = dyad_.high_weights(jl);
    const std::vector<double>& hwk = dyad_.high_weights(std::min(jk, jmax + 1));

    // Delta_j of a projected copy of Xtilde: reuse the plain block where the
    // projector is flat on the block, synthesize the two boundary blocks
    auto projected_block = [&](int j, int jP, const std::vector<double>& pweights,
                               PhysicalField& store) -> const PhysicalField* {
        double fv = flat_high_weight(jP, j);
        if (fv == 0.0) return nullptr;
        if (fv == 1.0) return &bx_[j + 1];
        const std::vector<double>& bw = dyad_.block_weights(j);
        for (int i : dyad_.block_modes(j)) wtmp_[i] = bw[i] * pweights[i];
        for (int c = 0; c < 2; ++c)
            ws_.synth_weighted(xt.comp(c), wtmp_, dyad_.block_modes(j), store.v[c]);
        return &store;
    };

    // the wick constant E X (x) X is spatially constant, so the divergence
    // annihilates it; the renormalized and raw squares drive identical steps
    clear_tensor(TY_);
    accumulate_sym_outer(TY_, pY_, px_, 2.0);
    accumulate_sym_outer(TY_, px_, px_, 1.0);

    // paraproducts against H_K, H_lambda, P_{lambda,K}: one pass over j using
    // the shared prefix sums of w; boundary blocks go through `scratch_`
    clear_tensor(TwH_);
    clear_tensor(Tmain_);
    clear_tensor(TR_);
    clear_field(hl_total_);
    for (int j = -1; j <= jmax; ++j) {
        const PhysicalField* hk = projected_block(j, jk, hwk, scratch_);
        const PhysicalField* hl = projected_block(j, jl, hwl, boundary2_);
        if (hl)
            for (int c = 0; c < 2; ++c)
                for (std::size_t i = 0; i < pts; ++i) hl_total_.v[c][i] += hl->v[c][i];
        if (j >= 1) {
            const PhysicalField& S = bwp_[j - 1];  // S_{j-2}
            if (hk) accumulate_sym_outer(TwH_, S, *hk, 1.0);
            // P_{lambda,K} block = H_lambda block - H_K block
            if (hl) accumulate_sym_outer(Tmain_, S, *hl, 1.0);
            if (hk) accumulate_sym_outer(Tmain_, S, *hk, -1.0);
            // the R-term subtracts the same lo paraproduct against H_lambda
            if (hl) accumulate_sym_outer(TR_, S, *hl, -2.0);
        }
    }
    accumulate_sym_outer(TR_, pwH_, pwH_, 1.0);
    accumulate_sym_outer(TR_, pw, hl_total_, 2.0);  // 2 w (x)s H_l Xt (full product)
    accumulate_sym_outer(TR_, pw, pY_, 2.0);
    accumulate_sym_outer(TR_, pY_, pY_, 1.0);
    for (int c = 0; c < 2; ++c)  // L_lambda Xtilde = Xtilde - H_lambda Xtilde
        for (std::size_t i = 0; i < pts; ++i)
            scratch_.v[c][i] = px_.v[c][i] - hl_total_.v[c][i];
    accumulate_sym_outer(TR_, scratch_, scratch_, -1.0);

    clear_tensor(TwLnl_);
    accumulate_sym_outer(TwLnl_, pwL_, pwL_, 1.0);
    clear_tensor(Tlarge_);
    accumulate_sym_outer(Tlarge_, pwL_, pwH_, 1.0);

    ws_.analyze_tensor(TY_, tY_);
    ws_.analyze_tensor(TwH_, twH_);
    ws_.analyze_tensor(Tmain_, tmain_);
    ws_.analyze_tensor(TR_, tR_);
    ws_.analyze_tensor(TwLnl_, twLnl_);
    ws_.analyze_tensor(Tlarge_, tlarge_);
    for (TensorField* t : {&tY_, &twH_, &tmain_, &tR_, &twLnl_, &tlarge_})
        apply_dealias_mask(*t, cfg_.rule);

    SpectralField FY = leray_project(divergence(tY_));
    FY *= -1.0;
    SpectralField FwH = leray_project(divergence(twH_));
    FwH *= -2.0;
    TensorField tsum = twLnl_;
    {
        TensorField t2 = tlarge_;
        t2 *= 2.0;
        tsum += t2;
        TensorField t3 = tmain_;
        t3 *= 2.0;
        tsum += t3;
        tsum += tR_;
    }
    SpectralField FwL = leray_project(divergence(tsum));
    FwL *= -1.0;
    R_term_ = leray_project(divergence(tR_));
    R_term_ *= -1.0;

    if (has_nonfinite(FY) || has_nonfinite(FwL) || has_nonfinite(FwH))
        throw blowup_error("nonfinite forcing in ansatz step", conv_.t(), conv_.step_count());

    // ledger pairings at the pre-step state
    if (cfg_.ledger) {
        double gradsq = h1_seminorm(wL_);
        ledger_ = LedgerRow{};
        ledger_.t = conv_.t();
        ledger_.dissipation = -h * gradsq * gradsq;
        ledger_.r_pairing = h * inner_grad_tensor(wL_, tR_);
        ledger_.para_pairing = 2.0 * h * inner_grad_tensor(wL_, tmain_);
        ledger_.large_pairing = 2.0 * h * inner_grad_tensor(wL_, tlarge_);
    }
    double wl_before_half = 0.5 * inner(wL_, wL_);

    // exact OU increments of L_lambda xi_1 + xi_2, same draws as the Xtilde path
    std::fill(dz_.begin(), dz_.end(), cplx(0));
    for (int idx : sp_.half_modes()) {
        cplx eta = ou_->draw(conv_.rng(), idx, conv_.step_count());
        double weight = sp_.is_xi2_mode(idx) ? 1.0 : 1.0 - hwl[idx];
        dz_[idx] = weight * eta;
        dz_[g.conj_index(idx)] = std::conj(dz_[idx]);
    }
    SpectralField dW = amplitudes_to_field(g, dz_);
    double qv_mean = qv_mean_step_;

    lawson_update(Y_, FY, h, decay_);
    lawson_update(wH_, FwH, h, decay_);
    lawson_update(wL_, FwL, h, decay_);
    if (cfg_.ledger) {
        // martingale part: <wL, dW> plus the centered quadratic variation;
        // the deterministic mean goes into the correction entry
        ledger_.ito_correction = qv_mean;
        ledger_.ito_pairing = inner(wL_, dW) + 0.5 * inner(dW, dW) - qv_mean;
    }
    wL_ += dW;
    conv_.step(h, NoiseKind::xi1_only, cfg_.noise_substeps);
    refresh_w();

    if (cfg_.ledger) ledger_.realized = 0.5 * inner(wL_, wL_) - wl_before_half;
}

void AnsatzStepper::restore(double t, std::uint64_t step, double lambda, std::vector<cplx> z,
                            SpectralField ur, SpectralField Y, SpectralField wH,
                            SpectralField wL) {
    lambda_ = lambda;
    j_lambda_ = DyadicSystem::j_of_scale(lambda_);
    ito_rate_ = ito_correction(sp_, dyad_, lambda_);
    conv_.set_rough_init(ur);
    conv_.restore(t, step, std::move(z));
    Y_ = std::move(Y);
    wH_ = std::move(wH);
    wL_ = std::move(wL);
    refresh_w();
}

DpdStepper::DpdStepper(const DyadicSystem& dyad, const NoiseSpectrum& sp, const SolverConfig& cfg,
                       CounterRng rng)
    : dyad_(dyad),
      sp_(sp),
      cfg_(cfg),
      conv_(sp, rng),
      v_(dyad.grid()),
      decay_(make_decay(dyad.grid(), cfg.h)),
      ws_(dyad.grid(), 2),
      px_(2 * dyad.grid().n()),
      pv_(2 * dyad.grid().n()),
      T_(2 * dyad.grid().n()),
      ts_(dyad.grid()) {
    dz_.resize(dyad.grid().size());
    ou_ = std::make_unique<OuTables>(sp_, cfg_.h, cfg_.noise_substeps);
}

void DpdStepper::init(const SpectralField& u0) {
    if (u0.grid() != dyad_.grid()) throw contract_error("DpdStepper::init: grid mismatch");
    v_ = u0;
}

SpectralField DpdStepper::u() const {
    SpectralField out = v_;
    out += conv_.field_X();
    return out;
}

void DpdStepper::step() {
    const TorusGrid& g = dyad_.grid();
    double h = cfg_.h;

    SpectralField x = conv_.field_X();
    ws_.synth_field(x, px_);
    ws_.synth_field(v_, pv_);

    // the wick constant is spatially constant and killed by the divergence
    clear_tensor(T_);
    accumulate_sym_outer(T_, pv_, pv_, 1.0);
    accumulate_sym_outer(T_, pv_, px_, 2.0);
    accumulate_sym_outer(T_, px_, px_, 1.0);

    ws_.analyze_tensor(T_, ts_);
    apply_dealias_mask(ts_, cfg_.rule);
    SpectralField F = leray_project(divergence(ts_));
    F *= -1.0;
    if (has_nonfinite(F))
        throw blowup_error("nonfinite forcing in dpd step", conv_.t(), conv_.step_count());

    std::fill(dz_.begin(), dz_.end(), cplx(0));
    for (int idx : sp_.half_modes()) {
        if (!sp_.is_xi2_mode(idx)) continue;
        cplx eta = ou_->draw(conv_.rng(), idx, conv_.step_count());
        dz_[idx] = eta;
        dz_[g.conj_index(idx)] = std::conj(eta);
    }
    SpectralField dW = amplitudes_to_field(g, dz_);

    lawson_update(v_, F, h, decay_);
    v_ += dW;
    conv_.step(h, NoiseKind::xi1_only, cfg_.noise_substeps);
}

GalerkinStepper::GalerkinStepper(const TorusGrid& grid, const NoiseSpectrum& sp,
                                 const GalerkinConfig& cfg, CounterRng rng)
    : grid_(grid), sp_(sp), cfg_(cfg), rng_(rng), u_(grid), decay_(grid.size(), 1.0),
      keep_(grid.size(), false) {
    if (!cfg.viscosity && cfg.noise_on)
        throw contract_error("GalerkinStepper: noise without viscosity is not supported");
    if (cfg.viscosity)
        for (int i = 0; i < grid.size(); ++i) decay_[i] = std::exp(-cfg.h * grid.k_sq(i));
    for (int i = 0; i < grid.size(); ++i)
        keep_[i] = std::abs(grid.k1_of(i)) <= cfg.sharp_N && std::abs(grid.k2_of(i)) <= cfg.sharp_N;
}

void GalerkinStepper::init(const SpectralField& u0) {
    u_ = leray_project(u0);
    apply_sharp_mask(u_, cfg_.sharp_N);
}

void GalerkinStepper::restore(const SpectralField& u, double t, std::uint64_t step) {
    u_ = u;
    t_ = t;
    step_ = step;
}

SpectralField GalerkinStepper::nonlinear_rate() const {
    TensorField t = sym_tensor(u_, u_);
    SpectralField f = leray_project(divergence(t));
    f *= -1.0;
    apply_sharp_mask(f, cfg_.sharp_N);
    return f;
}

void GalerkinStepper::step() {
    double h = cfg_.h;
    if (cfg_.nonlinearity) {
        SpectralField F = nonlinear_rate();
        if (has_nonfinite(F)) throw blowup_error("nonfinite forcing in galerkin step", t_, step_);
        lawson_update(u_, F, h, decay_);
    } else {
        lawson_update(u_, SpectralField(grid_), h, decay_);
    }
    if (cfg_.noise_on) {
        const TorusGrid& g = grid_;
        std::vector<cplx> dz(g.size());
        for (int idx : sp_.half_modes()) {
            if (!keep_[idx]) continue;
            cplx eta = ou_increment(sp_, idx, g.k_sq(idx), h, rng_, step_);
            dz[idx] = eta;
            dz[g.conj_index(idx)] = std::conj(eta);
        }
        u_ += amplitudes_to_field(g, dz);
    }
    t_ += h;
    ++step_;
}

RunReport run_trajectory(const TrajectoryConfig& cfg, AnsatzStepper& stepper,
                         const InitialSplit& split) {
    RunReport report;
    report.seed = stepper.conv().rng().seed();
    report.config_hash = cfg.config_hash;

    const DyadicSystem& dyad = stepper.dyad();
    stepper.init(split);

    SpectralField u0 = stepper.reconstruct_u();
    LyapunovConfig lcfg;
    lcfg.alpha = cfg.alpha0;
    lcfg.kappa = cfg.solver.kappa;
    double v0 = lyapunov_V(u0, dyad, lcfg).value;
    StoppingThresholds th{std::max(2.0 * v0, 2.0), cfg.alpha0, cfg.alpha0 * cfg.alpha0};
    StoppingMonitor monitor(th);

    std::uint64_t nsteps = std::uint64_t(std::ceil(cfg.t_end / cfg.solver.h - 1e-9));
    try {
        for (std::uint64_t s = 0; s < nsteps; ++s) {
            stepper.step();
            double w2 = stepper.w_l2();
            double xc = cfg.evaluate_monitor ? stepper.x_cnorm() : 0.0;
            double yl = cfg.evaluate_monitor ? stepper.y_linf() : 0.0;
            if (cfg.report_stride > 0 && (s + 1) % std::uint64_t(cfg.report_stride) == 0) {
                RunRow row;
                row.t = stepper.t();
                row.w_l2 = w2;
                row.wl_l2 = l2_norm(stepper.wL());
                row.wl_h1 = h1_seminorm(stepper.wL());
                row.x_cnorm = xc;
                row.y_linf = yl;
                row.k_scale = stepper.K();
                row.k_saturated = stepper.k_saturated();
                if (cfg.solver.ledger) {
                    row.ledger = stepper.last_ledger();
                    row.has_ledger = true;
                }
                report.append(row);
            }
            if (!cfg.checkpoint_path.empty() && cfg.checkpoint_stride > 0 &&
                (s + 1) % cfg.checkpoint_stride == 0)
                write_checkpoint(cfg.checkpoint_path, stepper, cfg.config_hash);
            if (cfg.evaluate_monitor &&
                !monitor.observe(stepper.t(), stepper.step_count(), w2, xc, yl)) {
                report.terminal_status = "stopped";
                report.stop_cause = monitor.cause();
                report.stop_time = monitor.T();
                report.stop_step = monitor.trigger_step();
                break;
            }
        }
    } catch (const blowup_error& e) {
        report.terminal_status = std::string("blowup: ") + e.what();
    }
    return report;
}

}  // namespace sns
