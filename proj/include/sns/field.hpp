// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_FIELD_HPP
#define SNS_FIELD_HPP

#include <array>
#include <cmath>
#include <vector>

#include "sns/grid.hpp"

namespace sns {

// R^2-valued field on the torus, stored as Fourier coefficients per mode.
// Real fields satisfy coeff(-k) = conj(coeff(k)) componentwise; helpers for
// test probes may construct one-sided (complex) fields and leave the flags
// unset.
class SpectralField {
  public:
    explicit SpectralField(const TorusGrid& grid)
        : grid_(grid), c_{std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size())} {}

    const TorusGrid& grid() const { return grid_; }

    cplx& at(int comp, int idx) { return c_[comp][idx]; }
    const cplx& at(int comp, int idx) const { return c_[comp][idx]; }
    std::vector<cplx>& comp(int i) { return c_[i]; }
    const std::vector<cplx>& comp(int i) const { return c_[i]; }

    bool mean_free = true;
    bool div_free = false;

    void set_mode(int k1, int k2, cplx v1, cplx v2) {
        int idx = grid_.index(k1, k2);
        c_[0][idx] = v1;
        c_[1][idx] = v2;
    }

    // set coefficient at k and the conjugate at -k (keeps the field real)
    void set_mode_pair(int k1, int k2, cplx v1, cplx v2) {
        set_mode(k1, k2, v1, v2);
        set_mode(-k1, -k2, std::conj(v1), std::conj(v2));
    }

    double max_reality_defect() const {
        double m = 0;
        for (int idx = 0; idx < grid_.size(); ++idx) {
            int cj = grid_.conj_index(idx);
            for (int c = 0; c < 2; ++c)
                m = std::max(m, std::abs(c_[c][idx] - std::conj(c_[c][cj])));
        }
        return m;
    }

    double max_div_defect() const {
        double m = 0;
        for (int idx = 0; idx < grid_.size(); ++idx) {
            double k1 = grid_.k1_of(idx), k2 = grid_.k2_of(idx);
            m = std::max(m, std::abs(k1 * c_[0][idx] + k2 * c_[1][idx]));
        }
        return m;
    }

    SpectralField& operator+=(const SpectralField& o) {
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < grid_.size(); ++i) c_[c][i] += o.c_[c][i];
        div_free = div_free && o.div_free;
        mean_free = mean_free && o.mean_free;
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < grid_.size(); ++i) c_[c][i] -= o.c_[c][i];
        div_free = div_free && o.div_free;
        mean_free = mean_free && o.mean_free;
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < grid_.size(); ++i) c_[c][i] *= s;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  private:
    TorusGrid grid_;
    std::array<std::vector<cplx>, 2> c_;
};

// Symmetric 2x2 tensor field; components (11, 12, 22) per mode.  Symmetry
// M = M^T is exact by storage.
class TensorField {
  public:
    explicit TensorField(const TorusGrid& grid)
        : grid_(grid),
          c_{std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size()),
             std::vector<cplx>(grid.size())} {}

    const TorusGrid& grid() const { return grid_; }

    // (i,j) in {0,1}^2 mapped onto the symmetric storage
    cplx& at(int i, int j, int idx) { return c_[i + j][idx]; }
    const cplx& at(int i, int j, int idx) const { return c_[i + j][idx]; }
    std::vector<cplx>& comp(int s) { return c_[s]; }  // s = 0:11, 1:12, 2:22
    const std::vector<cplx>& comp(int s) const { return c_[s]; }

    TensorField& operator+=(const TensorField& o) {
        for (int s = 0; s < 3; ++s)
            for (int i = 0; i < grid_.size(); ++i) c_[s][i] += o.c_[s][i];
        return *this;
    }
    TensorField& operator-=(const TensorField& o) {
        for (int s = 0; s < 3; ++s)
            for (int i = 0; i < grid_.size(); ++i) c_[s][i] -= o.c_[s][i];
        return *this;
    }
    TensorField& operator*=(double a) {
        for (int s = 0; s < 3; ++s)
            for (int i = 0; i < grid_.size(); ++i) c_[s][i] *= a;
        return *this;
    }
    friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
    friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }

  private:
    TorusGrid grid_;
    std::array<std::vector<cplx>, 3> c_;
};

// Collocation samples on an m x m grid of [0,1)^2; values kept complex so the
// same pipeline serves real fields and one-sided probes.
struct PhysicalField {
    int m = 0;
    std::array<std::vector<cplx>, 2> v;
    explicit PhysicalField(int m_) : m(m_), v{std::vector<cplx>(std::size_t(m_) * m_),
                                              std::vector<cplx>(std::size_t(m_) * m_)} {}
    PhysicalField() = default;
};

struct PhysicalTensor {
    int m = 0;
    std::array<std::vector<cplx>, 3> v;  // 11, 12, 22
    explicit PhysicalTensor(int m_) : m(m_), v{std::vector<cplx>(std::size_t(m_) * m_),
                                               std::vector<cplx>(std::size_t(m_) * m_),
                                               std::vector<cplx>(std::size_t(m_) * m_)} {}
    PhysicalTensor() = default;
};

}  // namespace sns

#endif
