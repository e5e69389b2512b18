#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "kinlab/numerics.hpp"

namespace kinlab {

namespace {
std::mutex plan_mutex;  // FFTW planning is not thread safe
}

Fft::Fft(std::vector<int> dims, int howmany, int stride, int dist) : howmany_(howmany), stride_(stride) {
    for (int n : dims) total_ *= n;
    dist_ = dist ? dist : total_;
    std::lock_guard<std::mutex> lock(plan_mutex);
    std::size_t span = static_cast<std::size_t>(dist_) * (howmany - 1) + static_cast<std::size_t>(total_) * stride;
    auto* buf = fftw_alloc_complex(span);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), howmany, buf, nullptr, stride, dist_, buf,
                              nullptr, stride, dist_, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_many_dft(static_cast<int>(dims.size()), dims.data(), howmany, buf, nullptr, stride, dist_, buf,
                              nullptr, stride, dist_, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (!fwd_ || !bwd_) throw std::runtime_error("Fft: planning failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft::backward(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
    const double s = 1.0 / total_;
    for (int h = 0; h < howmany_; ++h)
        for (int i = 0; i < total_; ++i) data[static_cast<std::size_t>(h) * dist_ + static_cast<std::size_t>(i) * stride_] *= s;
}

RVec fft_frequencies(int n, double h, bool zero_nyquist) {
    RVec xi(n);
    const double base = 2.0 * std::numbers::pi / (n * h);
    for (int j = 0; j < n; ++j) xi[j] = base * (j <= n / 2 ? j : j - n);
    if (n % 2 == 0) xi[n / 2] = zero_nyquist ? 0.0 : base * (n / 2);
    return xi;
}

}  // namespace kinlab
