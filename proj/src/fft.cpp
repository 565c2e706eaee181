// SPDX-License-Identifier: Apache-2.0
#include "sns/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace sns {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(int m) : m_(m) {
    std::size_t pts = std::size_t(m) * m;
    buf_a_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * pts));
    buf_b_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * pts));
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps plan selection deterministic (bit-reproducible runs).
    plan_fwd_ = fftw_plan_dft_2d(m, m, reinterpret_cast<fftw_complex*>(buf_a_),
                                 reinterpret_cast<fftw_complex*>(buf_b_), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_2d(m, m, reinterpret_cast<fftw_complex*>(buf_a_),
                                 reinterpret_cast<fftw_complex*>(buf_b_), FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_a_);
    fftw_free(buf_b_);
}

void Fft::backward(const cplx* in, cplx* out) const {
    std::size_t bytes = sizeof(cplx) * std::size_t(m_) * m_;
    std::memcpy(buf_a_, in, bytes);
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    std::memcpy(out, buf_b_, bytes);
}

void Fft::forward(const cplx* in, cplx* out) const {
    std::size_t bytes = sizeof(cplx) * std::size_t(m_) * m_;
    std::memcpy(buf_a_, in, bytes);
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    double inv = 1.0 / (double(m_) * double(m_));
    for (std::size_t i = 0; i < std::size_t(m_) * m_; ++i) out[i] = buf_b_[i] * inv;
}

const Fft& fft_for_size(int m) {
    thread_local std::map<int, std::unique_ptr<Fft>> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, std::make_unique<Fft>(m)).first;
    return *it->second;
}

}  // namespace sns
