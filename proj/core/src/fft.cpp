#include "fft.hpp"

#include <mutex>

#include <fftw3.h>

#include "edi/error.hpp"

namespace edi::detail {

namespace {
// The FFTW planner is not re-entrant; execution is.
std::mutex planner_mutex;
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0) throw InvalidInputError("FFT length must be positive");
    auto* buf = fftw_alloc_complex(n);
    if (buf == nullptr) throw ResourceError("fftw_alloc_complex failed for " + std::to_string(n) + " points");
    data_ = reinterpret_cast<std::complex<double>*>(buf);
    std::lock_guard lock(planner_mutex);
    const int len = static_cast<int>(n);
    fwd_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (fwd_ == nullptr || inv_ == nullptr) {
        if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
        if (inv_) fftw_destroy_plan(static_cast<fftw_plan>(inv_));
        fftw_free(buf);
        throw ResourceError("FFTW planning failed for " + std::to_string(n) + " points");
    }
    for (std::size_t i = 0; i < n; ++i) data_[i] = 0.0;
}

Fft::~Fft() {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
    fftw_free(data_);
}

void Fft::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void Fft::inverse() { fftw_execute(static_cast<fftw_plan>(inv_)); }

}  // namespace edi::detail
