#include "hosa/qpc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hosa/errors.hpp"

namespace hosa {

namespace {

bool strictly_exceeds_neighbors(const Grid2<double>& mag, int m, int n) {
    const int half = mag.half();
    const double center = mag.at(m, n);
    for (int dm = -1; dm <= 1; ++dm) {
        for (int dn = -1; dn <= 1; ++dn) {
            if (dm == 0 && dn == 0) continue;
            const int mm = m + dm;
            const int nn = n + dn;
            if (mm < 0 || mm > half || nn < 0 || nn > half) continue;
            if (mag.at(mm, nn) >= center) return false;
        }
    }
    return true;
}

// Directional mean nearest-neighbour distance between pooled location sets.
double directional_mean(const std::vector<QpcPeak>& from, const std::vector<QpcPeak>& to) {
    double total = 0.0;
    for (const auto& a : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : to) {
            const double d1 = a.f1 - b.f1;
            const double d2 = a.f2 - b.f2;
            best = std::min(best, std::sqrt(d1 * d1 + d2 * d2));
        }
        total += best;
    }
    return total / static_cast<double>(from.size());
}

} // namespace

std::size_t QpcScatter::total_peaks() const {
    std::size_t count = 0;
    for (const auto& frame : frames) count += frame.peaks.size();
    return count;
}

std::vector<QpcPeak> QpcScatter::all_peaks() const {
    std::vector<QpcPeak> pooled;
    pooled.reserve(total_peaks());
    for (const auto& frame : frames)
        pooled.insert(pooled.end(), frame.peaks.begin(), frame.peaks.end());
    return pooled;
}

std::vector<QpcPeak> detect_qpc_peaks(const BicoherenceGrid& grid, double threshold,
                                      std::size_t max_peaks) {
    if (!(threshold > 0.0) || !(threshold < 1.0))
        throw Error(ErrorKind::ParameterOutOfRange, "peak threshold must be in (0, 1)");

    struct Candidate {
        int m;
        int n;
        double magnitude;
        double phase;
    };
    std::vector<Candidate> found;
    for (const auto& [m, n] : principal_domain_mask(grid.fft_len)) {
        const double mag = grid.magnitude.at(m, n);
        if (mag < threshold) continue;
        if (!strictly_exceeds_neighbors(grid.magnitude, m, n)) continue;
        found.push_back({m, n, mag, grid.phase.at(m, n)});
    }

    std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
        if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
        if (a.m != b.m) return a.m < b.m;
        return a.n < b.n;
    });
    if (found.size() > max_peaks) found.resize(max_peaks);

    std::vector<QpcPeak> peaks;
    peaks.reserve(found.size());
    const double fft_len = static_cast<double>(grid.fft_len);
    for (const auto& c : found)
        peaks.push_back({c.m / fft_len, c.n / fft_len, c.magnitude, c.phase});
    return peaks;
}

QpcScatter qpc_scatter(const FrameSequence& frames, const QpcScatterConfig& config,
                       double threshold) {
    if (frames.frames.empty())
        throw Error(ErrorKind::NoActiveFrames, "no frames to analyze");

    const auto activity = gate_silence(frames, config.silence_threshold_db);
    const int fft_len =
        config.fft_len > 0 ? config.fft_len : static_cast<int>(config.sub_segment_len);

    QpcScatter scatter;
    for (std::size_t i = 0; i < frames.count(); ++i) {
        if (!activity.active[i]) continue;
        const auto sub =
            frame_signal(std::span<const double>(frames.frames[i]), config.sub_segment_len,
                         config.sub_overlap, frames.source_rate_hz);
        const auto grid = estimate_bicoherence(sub, fft_len, config.smoothing);
        FramePeaks entry;
        entry.frame_index = i;
        entry.peaks = detect_qpc_peaks(grid, threshold, config.max_peaks);
        scatter.frames.push_back(std::move(entry));
    }
    return scatter;
}

double qpc_shift_metric(const QpcScatter& reference, const QpcScatter& candidate) {
    const auto ref_peaks = reference.all_peaks();
    const auto cand_peaks = candidate.all_peaks();
    if (ref_peaks.empty() || cand_peaks.empty())
        throw Error(ErrorKind::EmptyScatter, "shift metric needs peaks on both sides");
    return 0.5 * (directional_mean(ref_peaks, cand_peaks) +
                  directional_mean(cand_peaks, ref_peaks));
}

void export_scatter_csv(const QpcScatter& scatter, std::ostream& out) {
    out << "frame,f1,f2,magnitude\n";
    char line[160];
    for (const auto& frame : scatter.frames) {
        for (const auto& peak : frame.peaks) {
            std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g\n", frame.frame_index,
                          peak.f1, peak.f2, peak.magnitude);
            out << line;
        }
    }
}

} // namespace hosa
