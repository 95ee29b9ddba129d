#pragma once

#include <complex>
#include <cstddef>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "hosa/audio_io.hpp"

namespace hosa {

// Square grid over bifrequency indices (m, n), m, n in [0, half].
template <typename T>
class Grid2 {
public:
    Grid2() = default;
    explicit Grid2(int half, T fill = T{}) : half_(half), v_(std::size_t(half + 1) * (half + 1), fill) {}

    int half() const { return half_; }
    T& at(int m, int n) { return v_[std::size_t(m) * (half_ + 1) + n]; }
    const T& at(int m, int n) const { return v_[std::size_t(m) * (half_ + 1) + n]; }
    const std::vector<T>& data() const { return v_; }
    std::vector<T>& data() { return v_; }

private:
    int half_ = -1;
    std::vector<T> v_;
};

enum class WindowKind { none, rao_gabr };

// 2-D frequency-domain smoothing stencil. Weights are nonnegative, sum to 1,
// and are supported on the hexagon max(|dm|, |dn|, |dm+dn|) <= radius.
struct SmoothingWindow {
    WindowKind kind = WindowKind::none;
    int bandwidth = 1;

    struct Tap {
        int dm;
        int dn;
        double weight;
    };
    std::vector<Tap> taps{{0, 0, 1.0}};

    static SmoothingWindow none() { return SmoothingWindow{}; }
};

SmoothingWindow rao_gabr_window(int bandwidth);

struct BispectrumGrid {
    Grid2<std::complex<double>> values;
    int fft_len = 0;
    int segment_count = 0;
    SmoothingWindow smoothing;
};

struct BicoherenceGrid {
    Grid2<double> magnitude;
    Grid2<double> phase;
    int fft_len = 0;
    int segment_count = 0;
    SmoothingWindow smoothing;
};

// Averaged per-segment spectral products, the common core of the bispectrum,
// bicoherence, and frame-statistic estimators:
//   num = mean of Y(m) Y(n) Y*(m+n)
//   p12 = mean of |Y(m) Y(n)|^2
//   p3  = mean of |Y(m+n)|^2
struct TripleAccum {
    Grid2<std::complex<double>> num;
    Grid2<double> p12;
    Grid2<double> p3;
    int fft_len = 0;
    int segments = 0;
};

// Per-segment mean removal, F-point transform, triple products averaged over
// segments. Grids are filled on the full square via exchange symmetry.
TripleAccum accumulate_triple_products(const FrameSequence& frames, int fft_len);

// Third-order cumulant of a single frame at integer lags (k1, k2), estimated
// as the biased sample average of x~[n] x~[n+k1] x~[n+k2] on the mean-removed
// frame.
double third_order_cumulant(std::span<const double> frame, int k1, int k2);

// Direct FFT-method bispectrum: per-segment mean removal, F-point transform,
// triple-product accumulation averaged over segments, then 2-D smoothing.
BispectrumGrid estimate_bispectrum_direct(const FrameSequence& frames, int fft_len,
                                          const SmoothingWindow& smoothing);

// Power-normalized bicoherence. Magnitude lies in [0, 1]; phase is the
// argument of the (smoothed) averaged triple product.
BicoherenceGrid estimate_bicoherence(const FrameSequence& frames, int fft_len,
                                     const SmoothingWindow& smoothing);

// Non-redundant triangle {0 <= n <= m, m + n <= F/2}, the region all summary
// statistics are computed over.
std::vector<std::pair<int, int>> principal_domain_mask(int fft_len);

double mean_principal_domain_magnitude(const BicoherenceGrid& grid);

// CSV export over the principal domain, header "m,n,magnitude,phase",
// row-major in m then n.
void export_grid_csv(const BicoherenceGrid& grid, std::ostream& out);

} // namespace hosa
