#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hosa/audio_io.hpp"
#include "hosa/hinich.hpp"
#include "hosa/hosa_core.hpp"
#include "hosa/qpc.hpp"

namespace hosa {

enum class Verdict { genuine, replay };

const char* to_string(Verdict v);

struct DetectorConfig {
    std::size_t frame_len = 1024;
    double overlap = 0.5;
    double silence_threshold_db = kDefaultSilenceThresholdDb;

    // Within-frame analysis segments. 75% overlap yields 29 segments per
    // 1024-sample frame; the overlap biases every frame's statistics the same
    // way, and the thresholds below are calibrated with it in place.
    std::size_t sub_segment_len = 128;
    double sub_overlap = 0.75;
    int fft_len = 0;  // 0 -> sub_segment_len
    int smoothing_bandwidth = 5;

    double alpha = 0.05;
    double linearity_factor = 1.85;
    int hinich_resolution = 5;

    double qpc_threshold = 0.5;
    std::size_t qpc_max_peaks = 8;

    double decision_threshold = 0.5;
    // A frame fails (H1) only when both tests reject; set false to count a
    // single rejection as failure for sensitivity studies.
    bool require_both_tests = true;

    bool operator==(const DetectorConfig&) const = default;
};

// Features of one active (non-silent) frame.
struct FrameFeatures {
    std::size_t frame_index = 0;
    double energy_db = 0.0;
    double mean_bicoherence_magnitude = 0.0;
    double phase_bias_score = 0.0;
    HinichResult hinich;
    std::size_t qpc_peak_count = 0;
    bool failed = false;  // H1 under the configured rule
};

struct DetectionReport {
    DetectorConfig config;
    int sample_rate_hz = 0;
    std::size_t total_frame_count = 0;
    std::size_t active_frame_count = 0;
    std::vector<FrameFeatures> frames;  // active frames only
    double failing_fraction = 0.0;
    double mean_bicoherence_magnitude = 0.0;  // mean of per-frame means
    double mean_phase_bias_score = 0.0;
    QpcScatter scatter;
    Verdict verdict = Verdict::genuine;
};

struct CompareSummary {
    double delta_mean_bicoherence = 0.0;  // candidate minus reference
    double delta_phase_bias = 0.0;
    double delta_failing_fraction = 0.0;
    bool qpc_shift_valid = false;
    double qpc_shift = 0.0;
    std::vector<std::string> warnings;
};

// Magnitude-weighted fraction of principal-domain points whose phase lies
// within +-pi/16 of 0 or of pi/2. Zero-weight grids score 0.
double phase_bias_score(const BicoherenceGrid& grid);

// Full per-frame pipeline: framing, silence gate, per-frame bicoherence,
// Hinich tests, peak count and phase bias, then aggregation.
DetectionReport analyze_recording(const AudioBuffer& buf, const DetectorConfig& config);

Verdict classify(const DetectionReport& report, double decision_threshold);

// Per-feature deltas (candidate minus reference); the QPC shift is computed
// from the two reports' peak scatters when both are nonempty.
CompareSummary compare_recordings(const DetectionReport& reference,
                                  const DetectionReport& candidate);

// JSON serialization with stable field names; round-trips through
// report_from_json preserve the verdict and all aggregate fields.
std::string report_to_json(const DetectionReport& report);
DetectionReport report_from_json(const std::string& text);

std::string hinich_records_json(const DetectionReport& report);
std::string compare_to_json(const CompareSummary& summary);

} // namespace hosa
