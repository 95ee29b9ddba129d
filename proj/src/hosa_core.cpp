#include "hosa/hosa_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hosa/errors.hpp"
#include "hosa/fft.hpp"

namespace hosa {

namespace {

std::vector<double> remove_mean(const std::vector<double>& frame) {
    double mean = 0.0;
    for (double s : frame) mean += s;
    mean /= static_cast<double>(frame.size());
    std::vector<double> centered(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) centered[i] = frame[i] - mean;
    return centered;
}

// Stencil convolution with truncation at the grid edge; the in-bounds weights
// are renormalized so every output point sees unit total weight. Computed on
// the lower triangle and mirrored, which keeps exchange symmetry exact.
template <typename T>
Grid2<T> smooth_grid(const Grid2<T>& in, const SmoothingWindow& window) {
    if (window.taps.size() == 1 && window.taps[0].dm == 0 && window.taps[0].dn == 0)
        return in;
    const int half = in.half();
    Grid2<T> out(half);
    for (int m = 0; m <= half; ++m) {
        for (int n = 0; n <= m; ++n) {
            T acc{};
            double wsum = 0.0;
            for (const auto& tap : window.taps) {
                const int mm = m + tap.dm;
                const int nn = n + tap.dn;
                if (mm < 0 || mm > half || nn < 0 || nn > half) continue;
                acc += in.at(mm, nn) * tap.weight;
                wsum += tap.weight;
            }
            out.at(m, n) = wsum > 0.0 ? acc * (1.0 / wsum) : T{};
            out.at(n, m) = out.at(m, n);
        }
    }
    return out;
}

void require_even_fft(int fft_len) {
    if (fft_len < 4 || fft_len % 2 != 0)
        throw Error(ErrorKind::ParameterOutOfRange, "FFT length must be even and >= 4");
}

} // namespace

TripleAccum accumulate_triple_products(const FrameSequence& frames, int fft_len) {
    if (frames.frames.empty())
        throw Error(ErrorKind::NoActiveFrames, "no segments to accumulate");
    if (fft_len < static_cast<int>(frames.frame_len))
        throw Error(ErrorKind::InvalidArgument, "FFT length shorter than segment length");

    const int half = fft_len / 2;
    TripleAccum acc;
    acc.fft_len = fft_len;
    acc.segments = static_cast<int>(frames.count());
    acc.num = Grid2<std::complex<double>>(half);
    acc.p12 = Grid2<double>(half);
    acc.p3 = Grid2<double>(half);

    RealFft fft(fft_len);
    for (const auto& frame : frames.frames) {
        const auto centered = remove_mean(frame);
        auto spectrum = fft.transform(centered);
        // Mean removal makes the DC bin zero in exact arithmetic; clearing the
        // rounding residue keeps the n = 0 rows at the 0/0 -> 0 convention
        // instead of amplifying noise ratios.
        spectrum[0] = 0.0;
        for (int m = 0; m <= half; ++m) {
            const std::complex<double> ym = spectrum[static_cast<std::size_t>(m)];
            for (int n = 0; n <= m; ++n) {
                const std::complex<double> yn = spectrum[static_cast<std::size_t>(n)];
                const std::complex<double> y3 = spectrum_bin(spectrum, fft_len, m + n);
                const std::complex<double> pair = ym * yn;
                acc.num.at(m, n) += pair * std::conj(y3);
                acc.p12.at(m, n) += std::norm(pair);
                acc.p3.at(m, n) += std::norm(y3);
            }
        }
    }

    const double inv = 1.0 / acc.segments;
    for (int m = 0; m <= half; ++m) {
        for (int n = 0; n <= m; ++n) {
            acc.num.at(m, n) *= inv;
            acc.p12.at(m, n) *= inv;
            acc.p3.at(m, n) *= inv;
            // mirror: the triple product is symmetric under (m, n) exchange
            acc.num.at(n, m) = acc.num.at(m, n);
            acc.p12.at(n, m) = acc.p12.at(m, n);
            acc.p3.at(n, m) = acc.p3.at(m, n);
        }
    }
    return acc;
}

double third_order_cumulant(std::span<const double> frame, int k1, int k2) {
    const int n = static_cast<int>(frame.size());
    const int reach = std::max(std::abs(k1), std::abs(k2));
    if (n < reach + 1)
        throw Error(ErrorKind::LagOutOfRange, "lag exceeds frame length");

    double mean = 0.0;
    for (double s : frame) mean += s;
    mean /= n;

    const int lo = std::max({0, -k1, -k2});
    const int hi = n - std::max({0, k1, k2});
    double acc = 0.0;
    for (int i = lo; i < hi; ++i)
        acc += (frame[static_cast<std::size_t>(i)] - mean) *
               (frame[static_cast<std::size_t>(i + k1)] - mean) *
               (frame[static_cast<std::size_t>(i + k2)] - mean);
    return acc / n;  // biased estimate
}

SmoothingWindow rao_gabr_window(int bandwidth) {
    if (bandwidth < 1)
        throw Error(ErrorKind::ParameterOutOfRange, "bandwidth must be >= 1");

    const int width = bandwidth % 2 == 0 ? bandwidth + 1 : bandwidth;
    const int radius = (width - 1) / 2;

    SmoothingWindow window;
    window.kind = WindowKind::rao_gabr;
    window.bandwidth = bandwidth;
    window.taps.clear();

    // Parabolic profile on the hexagonal support of the bispectral plane.
    const double scale = static_cast<double>((radius + 1) * (radius + 1));
    double total = 0.0;
    for (int dm = -radius; dm <= radius; ++dm) {
        for (int dn = -radius; dn <= radius; ++dn) {
            if (std::max({std::abs(dm), std::abs(dn), std::abs(dm + dn)}) > radius) continue;
            const double q = dm * dm + dn * dn + dm * dn;
            const double w = 1.0 - q / scale;
            window.taps.push_back({dm, dn, w});
            total += w;
        }
    }
    for (auto& tap : window.taps) tap.weight /= total;
    return window;
}

BispectrumGrid estimate_bispectrum_direct(const FrameSequence& frames, int fft_len,
                                          const SmoothingWindow& smoothing) {
    require_even_fft(fft_len);
    const auto acc = accumulate_triple_products(frames, fft_len);

    BispectrumGrid grid;
    grid.fft_len = fft_len;
    grid.segment_count = acc.segments;
    grid.smoothing = smoothing;
    grid.values = smooth_grid(acc.num, smoothing);
    return grid;
}

BicoherenceGrid estimate_bicoherence(const FrameSequence& frames, int fft_len,
                                     const SmoothingWindow& smoothing) {
    require_even_fft(fft_len);
    if (frames.count() < 2)
        throw Error(ErrorKind::TooFewSegments, "bicoherence needs >= 2 segments");
    const auto acc = accumulate_triple_products(frames, fft_len);

    // The same stencil is applied to numerator and both power terms, which
    // keeps the Cauchy-Schwarz bound |b| <= 1 intact.
    const auto num = smooth_grid(acc.num, smoothing);
    const auto p12 = smooth_grid(acc.p12, smoothing);
    const auto p3 = smooth_grid(acc.p3, smoothing);

    const int half = fft_len / 2;
    BicoherenceGrid grid;
    grid.fft_len = fft_len;
    grid.segment_count = acc.segments;
    grid.smoothing = smoothing;
    grid.magnitude = Grid2<double>(half);
    grid.phase = Grid2<double>(half);

    for (int m = 0; m <= half; ++m) {
        for (int n = 0; n <= m; ++n) {
            const double denom = p12.at(m, n) * p3.at(m, n);
            double mag = 0.0;
            double ph = 0.0;
            if (denom > 0.0) {
                const std::complex<double> b = num.at(m, n);
                mag = std::abs(b) / std::sqrt(denom);
                ph = std::arg(b);
            }
            grid.magnitude.at(m, n) = mag;
            grid.magnitude.at(n, m) = mag;
            grid.phase.at(m, n) = ph;
            grid.phase.at(n, m) = ph;
        }
    }
    return grid;
}

std::vector<std::pair<int, int>> principal_domain_mask(int fft_len) {
    require_even_fft(fft_len);
    const int half = fft_len / 2;
    std::vector<std::pair<int, int>> mask;
    for (int m = 0; m <= half; ++m)
        for (int n = 0; n <= m && m + n <= half; ++n)
            mask.emplace_back(m, n);
    return mask;
}

double mean_principal_domain_magnitude(const BicoherenceGrid& grid) {
    const auto mask = principal_domain_mask(grid.fft_len);
    double acc = 0.0;
    for (const auto& [m, n] : mask) acc += grid.magnitude.at(m, n);
    return acc / static_cast<double>(mask.size());
}

void export_grid_csv(const BicoherenceGrid& grid, std::ostream& out) {
    out << "m,n,magnitude,phase\n";
    char line[128];
    for (const auto& [m, n] : principal_domain_mask(grid.fft_len)) {
        std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g\n", m, n, grid.magnitude.at(m, n),
                      grid.phase.at(m, n));
        out << line;
    }
}

} // namespace hosa
