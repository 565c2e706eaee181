// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_DYADIC_HPP
#define SNS_DYADIC_HPP

#include <cmath>
#include <vector>

#include "sns/field.hpp"
#include "sns/ops.hpp"

namespace sns {

// Dyadic partition of unity on the frequency lattice.
//
// chi is a radial C^inf bump equal to 1 on |x| <= 3/4 and 0 on |x| >= 4/3;
// rho_j(k) = chi(|k|/2^{j+1}) - chi(|k|/2^j).  The telescoping difference
// makes chi + sum_j rho_j = 1 exact in floating point at every lattice
// point, and rho_j(k) = rho_0(2^{-j} k) holds bit for bit.
class DyadicSystem {
  public:
    explicit DyadicSystem(const TorusGrid& grid);

    const TorusGrid& grid() const { return grid_; }
    int j_max() const { return j_max_; }

    // weight of block j (j = -1 is chi) at lattice mode idx
    double weight(int j, int idx) const {
        if (j < -1 || j > j_max_) return 0.0;
        return blocks_[j + 1][idx];
    }
    const std::vector<double>& block_weights(int j) const { return blocks_[j + 1]; }
    // lattice indices carrying nonzero weight in block j
    const std::vector<int>& block_modes(int j) const { return modes_[j + 1]; }

    // multiplier of H_lambda = sum_{j >= ceil(log2+ lambda)} Delta_j,
    // which telescopes to 1 - chi(|k| / 2^{j_lambda})
    const std::vector<double>& high_weights(int j_lambda) const;

    static int j_of_scale(double lambda) {
        // ceil(log2+(lambda)); Delta_j at real j uses the ceiling convention
        if (lambda <= 1.0) return 0;
        return int(std::ceil(std::log2(lambda)));
    }

    // radial profiles
    static double chi_profile(double r);
    static double rho_profile(double r) { return chi_profile(r / 2) - chi_profile(r); }

  private:
    TorusGrid grid_;
    int j_max_;
    std::vector<std::vector<double>> blocks_;  // [j+1][idx]
    std::vector<std::vector<int>> modes_;      // [j+1] -> indices with weight != 0
    std::vector<std::vector<double>> high_;    // [j_lambda][idx], up to j_max+1
    std::vector<double> zeros_;
};

// Littlewood-Paley block Delta_j f (j = -1 is the chi block; j > j_max gives 0).
SpectralField lp_block(const SpectralField& f, int j, const DyadicSystem& dyad);

enum class FreqProjection { H_lambda, L_lambda, P_lambda_K };

// High/low/band projections of Definition-style H_lambda, L_lambda, P_{lambda,K}.
// P with K < lambda returns the zero field (indicator convention).
SpectralField freq_project(const SpectralField& f, FreqProjection which, double lambda,
                           const DyadicSystem& dyad, double K = 0.0);

// Modewise multiply by given weights.
SpectralField apply_weights(const SpectralField& f, const std::vector<double>& w);

struct BesovIndex {
    double alpha;
    double p;  // in [1, inf]
    double q;  // in [1, inf]
};

// Besov norm via block L^p norms on an oversample-2 collocation grid
// (p=2 via Plancherel, p=inf via collocation max).
double besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicSystem& dyad,
                  int oversample = 2);

// Convenience: C^alpha = B^alpha_{inf,inf}.
double c_alpha_norm(const SpectralField& f, double alpha, const DyadicSystem& dyad);

TensorField lp_block(const TensorField& t, int j, const DyadicSystem& dyad);
double besov_norm(const TensorField& t, const BesovIndex& idx, const DyadicSystem& dyad,
                  int oversample = 2);

// ||H_M f||_{B^{alpha-eps}_{p,1}}; the verification suite compares it against
// M^{-eps} ||f||_{B^alpha_{p,inf}} over dyadic M.
double high_freq_decay(const SpectralField& f, double M, double alpha, double eps, double p,
                       const DyadicSystem& dyad);

}  // namespace sns

#endif
