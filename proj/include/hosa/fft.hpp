#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hosa {

// Forward real-to-complex FFT (FFTW backend). Produces n/2 + 1 bins; the
// remaining bins of a real signal follow from Y(n - k) = conj(Y(k)).
class RealFft {
public:
    explicit RealFft(int n);
    ~RealFft();

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    int size() const { return n_; }
    int bins() const { return n_ / 2 + 1; }

    // Input shorter than n is zero-padded.
    std::vector<std::complex<double>> transform(std::span<const double> input) const;

private:
    int n_;
    void* plan_;
    double* in_;
    void* out_;
};

// Bin accessor over the half spectrum for arbitrary (wrapped) index k.
std::complex<double> spectrum_bin(const std::vector<std::complex<double>>& half_spectrum,
                                  int fft_len, int k);

} // namespace hosa
