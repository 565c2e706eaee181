// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_PARAPRODUCT_HPP
#define SNS_PARAPRODUCT_HPP

#include "sns/dyadic.hpp"

namespace sns {

// Physical-space Littlewood-Paley blocks of a field at oversample 2, with the
// running partial sums S_i = sum_{i' <= i} Delta_{i'} used by the paraproducts.
struct PhysBlocks {
    int m = 0;
    std::vector<PhysicalField> delta;   // index j+1, j = -1..j_max
    std::vector<PhysicalField> prefix;  // S_{-1}, S_0, ..., S_{j_max}
};

PhysBlocks decompose_blocks(const SpectralField& f, const DyadicSystem& dyad, int oversample = 2,
                            bool with_prefix = true);

// f olessthan g = sum_j sum_{i <= j-2} Delta_i f (x)_s Delta_j g
TensorField para_lo(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad);
// f ogreaterthan g = g olessthan f
TensorField para_hi(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad);
// f odot g = sum_{|i-j| <= 1} Delta_i f (x)_s Delta_j g
TensorField resonant(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad);

struct BonyParts {
    TensorField lo, res, hi;
};
// all three terms from one block decomposition of each argument
BonyParts bony_parts(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad);

// || f<g + f(.)g + f>g - f (x)_s g ||_F ; completeness of the decomposition
double bony_residual(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad);

double tensor_l2_norm(const TensorField& t);

}  // namespace sns

#endif
