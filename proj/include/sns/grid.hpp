// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_GRID_HPP
#define SNS_GRID_HPP

#include <cmath>
#include <vector>

#include "sns/common.hpp"

namespace sns {

// Fourier lattice of the unit torus, modes k in {-n/2+1, ..., n/2}^2.
//
// Convention: the Laplacian acts on mode k as multiplication by -|k|^2 and
// d/dx_j as multiplication by i*k_j, while collocation samples use the
// factors e^{2 pi i k.x} on [0,1)^2.  The two are consistent up to a fixed
// rescaling of physical space by 2 pi; all decay rates and norms in this
// library use the -|k|^2 convention.
class TorusGrid {
  public:
    explicit TorusGrid(int n) : n_(n) {
        if (n < 4 || n % 2 != 0) throw contract_error("TorusGrid: n must be even and >= 4");
    }

    int n() const { return n_; }
    int size() const { return n_ * n_; }

    // storage index of mode (k1,k2); row-major over k1 then k2
    int index(int k1, int k2) const {
        int a1 = ((k1 % n_) + n_) % n_;
        int a2 = ((k2 % n_) + n_) % n_;
        return a1 * n_ + a2;
    }

    // frequency of storage coordinate a in [0,n)
    int freq(int a) const { return a <= n_ / 2 ? a : a - n_; }

    int k1_of(int idx) const { return freq(idx / n_); }
    int k2_of(int idx) const { return freq(idx % n_); }

    double k_sq(int idx) const {
        double k1 = k1_of(idx), k2 = k2_of(idx);
        return k1 * k1 + k2 * k2;
    }
    double k_abs(int idx) const { return std::sqrt(k_sq(idx)); }

    // index of -k for the mode stored at idx
    int conj_index(int idx) const {
        int a1 = idx / n_, a2 = idx % n_;
        return ((n_ - a1) % n_) * n_ + (n_ - a2) % n_;
    }

    bool self_conjugate(int idx) const { return conj_index(idx) == idx; }

    // Modes with a component equal to n/2 alias their own conjugate row: only
    // one of +-n/2 is representable, so componentwise reality cannot hold
    // there.  Dynamic fields keep these bins zero.
    bool nyquist(int idx) const {
        return k1_of(idx) == n_ / 2 || k2_of(idx) == n_ / 2;
    }

    // largest |k| on the lattice (corner mode)
    double k_abs_max() const { return std::sqrt(2.0) * (n_ / 2); }

    bool operator==(const TorusGrid& o) const { return n_ == o.n_; }
    bool operator!=(const TorusGrid& o) const { return n_ != o.n_; }

  private:
    int n_;
};

}  // namespace sns

#endif
