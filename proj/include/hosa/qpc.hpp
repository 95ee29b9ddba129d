#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "hosa/audio_io.hpp"
#include "hosa/hosa_core.hpp"

namespace hosa {

// One phase-coupling peak in normalized bifrequency, f in [0, 0.5].
struct QpcPeak {
    double f1 = 0.0;
    double f2 = 0.0;
    double magnitude = 0.0;
    double phase = 0.0;
};

struct FramePeaks {
    std::size_t frame_index = 0;
    std::vector<QpcPeak> peaks;
};

struct QpcScatter {
    std::vector<FramePeaks> frames;
    std::string label;

    std::size_t total_peaks() const;
    std::vector<QpcPeak> all_peaks() const;
};

struct QpcScatterConfig {
    std::size_t sub_segment_len = 256;
    double sub_overlap = 0.5;
    int fft_len = 0;  // 0 -> sub_segment_len
    // Peak localization wants unsmeared grids, so scatter runs unsmoothed.
    SmoothingWindow smoothing = SmoothingWindow::none();
    double silence_threshold_db = kDefaultSilenceThresholdDb;
    std::size_t max_peaks = 8;
};

// Local maxima of the principal-domain magnitude with value >= threshold,
// sorted by descending magnitude (ties broken by lowest (m, n)), truncated
// to max_peaks. A local maximum strictly exceeds its 8-neighborhood.
std::vector<QpcPeak> detect_qpc_peaks(const BicoherenceGrid& grid, double threshold,
                                      std::size_t max_peaks);

// Per-frame peak detection: each active frame is sub-segmented, its
// bicoherence estimated, and peaks recorded. Silent frames contribute nothing.
QpcScatter qpc_scatter(const FrameSequence& frames, const QpcScatterConfig& config,
                       double threshold);

// Symmetric Chamfer distance between the two pooled peak-location sets:
// the average of the two directional mean nearest-neighbour distances.
// Zero iff the location sets coincide.
double qpc_shift_metric(const QpcScatter& reference, const QpcScatter& candidate);

// CSV export, header "frame,f1,f2,magnitude".
void export_scatter_csv(const QpcScatter& scatter, std::ostream& out);

} // namespace hosa
