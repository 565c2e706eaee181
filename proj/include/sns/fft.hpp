// SPDX-License-Identifier: Apache-2.0
#ifndef SNS_FFT_HPP
#define SNS_FFT_HPP

#include <vector>

#include "sns/common.hpp"

namespace sns {

// Thin FFTW wrapper for 2D c2c transforms of one fixed size m x m.
// backward: out(x) = sum_a in(a) e^{+2 pi i a.x/m}   (synthesis, unnormalized)
// forward:  out(a) = (1/m^2) sum_x in(x) e^{-2 pi i a.x/m}  (analysis)
// Plan creation is serialized internally; execution is thread-safe as long as
// each thread uses its own Fft instance (see fft_for_size).
class Fft {
  public:
    explicit Fft(int m);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int m() const { return m_; }
    void backward(const cplx* in, cplx* out) const;
    void forward(const cplx* in, cplx* out) const;

  private:
    int m_;
    void* plan_fwd_;
    void* plan_bwd_;
    cplx* buf_a_;
    cplx* buf_b_;
};

// Per-thread plan cache.
const Fft& fft_for_size(int m);

}  // namespace sns

#endif
