// SPDX-License-Identifier: Apache-2.0
#include "sns/paraproduct.hpp"

namespace sns {

PhysBlocks decompose_blocks(const SpectralField& f, const DyadicSystem& dyad, int oversample,
                            bool with_prefix) {
    const TorusGrid& g = f.grid();
    int jmax = dyad.j_max();
    PhysBlocks out;
    out.m = oversample * g.n();
    out.delta.reserve(jmax + 2);
    for (int j = -1; j <= jmax; ++j)
        out.delta.push_back(to_physical(lp_block(f, j, dyad), oversample));
    if (with_prefix) {
        out.prefix = out.delta;
        std::size_t pts = std::size_t(out.m) * out.m;
        for (int j = 0; j <= jmax; ++j)
            for (int c = 0; c < 2; ++c)
                for (std::size_t i = 0; i < pts; ++i)
                    out.prefix[j + 1].v[c][i] += out.prefix[j].v[c][i];
    }
    return out;
}

namespace {

void check_pair(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad) {
    if (f.grid() != g.grid() || f.grid() != dyad.grid())
        throw contract_error("paraproduct: grid mismatch");
}

TensorField para_lo_impl(const PhysBlocks& bf, const PhysBlocks& bg, const TorusGrid& grid) {
    int jmax = int(bg.delta.size()) - 2;
    PhysicalTensor acc(bf.m);
    for (int j = 1; j <= jmax; ++j)  // i <= j-2 needs j-2 >= -1
        accumulate_sym_outer(acc, bf.prefix[j - 1], bg.delta[j + 1]);
    return tensor_to_spectral(acc, grid);
}

TensorField resonant_impl(const PhysBlocks& bf, const PhysBlocks& bg, const TorusGrid& grid) {
    int jmax = int(bg.delta.size()) - 2;
    PhysicalTensor acc(bf.m);
    for (int j = -1; j <= jmax; ++j)
        for (int i = std::max(-1, j - 1); i <= std::min(jmax, j + 1); ++i)
            accumulate_sym_outer(acc, bf.delta[i + 1], bg.delta[j + 1]);
    return tensor_to_spectral(acc, grid);
}

}  // namespace

TensorField para_lo(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad) {
    check_pair(f, g, dyad);
    PhysBlocks bf = decompose_blocks(f, dyad, 2, true);
    PhysBlocks bg = decompose_blocks(g, dyad, 2, false);
    return para_lo_impl(bf, bg, f.grid());
}

TensorField para_hi(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad) {
    return para_lo(g, f, dyad);
}

TensorField resonant(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad) {
    check_pair(f, g, dyad);
    PhysBlocks bf = decompose_blocks(f, dyad, 2, false);
    PhysBlocks bg = decompose_blocks(g, dyad, 2, false);
    return resonant_impl(bf, bg, f.grid());
}

BonyParts bony_parts(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad) {
    check_pair(f, g, dyad);
    PhysBlocks bf = decompose_blocks(f, dyad, 2, true);
    PhysBlocks bg = decompose_blocks(g, dyad, 2, true);
    BonyParts parts{para_lo_impl(bf, bg, f.grid()), resonant_impl(bf, bg, f.grid()),
                    para_lo_impl(bg, bf, f.grid())};
    return parts;
}

double tensor_l2_norm(const TensorField& t) {
    double s = 0;
    for (int i = 0; i < t.grid().size(); ++i)
        s += std::norm(t.comp(0)[i]) + 2.0 * std::norm(t.comp(1)[i]) + std::norm(t.comp(2)[i]);
    return std::sqrt(s);
}

double bony_residual(const SpectralField& f, const SpectralField& g, const DyadicSystem& dyad) {
    BonyParts parts = bony_parts(f, g, dyad);
    TensorField sum = parts.lo;
    sum += parts.res;
    sum += parts.hi;
    sum -= sym_tensor(f, g);
    return tensor_l2_norm(sum);
}

}  // namespace sns
