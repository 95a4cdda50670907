#pragma once

#include <complex>
#include <cstddef>

namespace edi::detail {

/// In-place complex FFT of fixed length over an FFTW-aligned buffer.
/// Forward uses e^{-j2πkn/N}; inverse is unnormalized.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::complex<double>* data() noexcept { return data_; }
    const std::complex<double>* data() const noexcept { return data_; }
    std::complex<double>& operator[](std::size_t i) noexcept { return data_[i]; }

    void forward();
    void inverse();

private:
    std::size_t n_;
    std::complex<double>* data_ = nullptr;
    void* fwd_ = nullptr;
    void* inv_ = nullptr;
};

}  // namespace edi::detail
