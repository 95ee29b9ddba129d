#include "hosa/fft.hpp"

#include <algorithm>
#include <cstring>

#include <fftw3.h>

#include "hosa/errors.hpp"

namespace hosa {

RealFft::RealFft(int n) : n_(n) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "FFT length must be >= 2");
    in_ = fftw_alloc_real(static_cast<std::size_t>(n));
    out_ = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    plan_ = fftw_plan_dft_r2c_1d(n, in_, static_cast<fftw_complex*>(out_), FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(in_);
    fftw_free(static_cast<fftw_complex*>(out_));
}

std::vector<std::complex<double>> RealFft::transform(std::span<const double> input) const {
    if (static_cast<int>(input.size()) > n_)
        throw Error(ErrorKind::InvalidArgument, "input longer than FFT length");
    std::copy(input.begin(), input.end(), in_);
    std::fill(in_ + input.size(), in_ + n_, 0.0);
    fftw_execute(static_cast<fftw_plan>(plan_));

    std::vector<std::complex<double>> result(static_cast<std::size_t>(bins()));
    auto* raw = static_cast<fftw_complex*>(out_);
    for (int k = 0; k < bins(); ++k) result[static_cast<std::size_t>(k)] = {raw[k][0], raw[k][1]};
    return result;
}

std::complex<double> spectrum_bin(const std::vector<std::complex<double>>& half_spectrum,
                                  int fft_len, int k) {
    k %= fft_len;
    if (k < 0) k += fft_len;
    if (k <= fft_len / 2) return half_spectrum[static_cast<std::size_t>(k)];
    return std::conj(half_spectrum[static_cast<std::size_t>(fft_len - k)]);
}

} // namespace hosa
