#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace hosa {

// Mono PCM audio, samples nominally in [-1, 1].
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate_hz = 16000;
};

// Fixed-length analysis windows cut from a source signal.
// Frame i starts at sample i * hop; a trailing partial window is discarded.
struct FrameSequence {
    std::vector<std::vector<double>> frames;
    std::size_t frame_len = 0;
    std::size_t hop = 0;
    int source_rate_hz = 0;

    std::size_t count() const { return frames.size(); }
};

// Per-frame silence gate result. energy_db is RMS relative to full scale,
// clamped to a -120 dB floor for all-zero frames.
struct FrameActivity {
    std::vector<bool> active;
    std::vector<double> energy_db;

    std::size_t active_count() const;
};

inline constexpr double kEnergyFloorDb = -120.0;
inline constexpr double kDefaultSilenceThresholdDb = -40.0;

// Reads a RIFF/WAVE file (PCM16 or IEEE float32). Multi-channel input is
// averaged to mono; samples are scaled to [-1, 1].
AudioBuffer read_wav(const std::filesystem::path& path);

// Writes mono PCM16. Samples are clamped to [-1, 1] before quantization.
void write_wav_pcm16(const std::filesystem::path& path, const AudioBuffer& buf);

FrameSequence frame_signal(const AudioBuffer& buf, std::size_t frame_len,
                           double overlap_fraction = 0.5);

// Same segmentation over a raw sample span (used for within-frame analysis).
FrameSequence frame_signal(std::span<const double> samples, std::size_t frame_len,
                           double overlap_fraction, int source_rate_hz);

FrameActivity gate_silence(const FrameSequence& frames,
                           double silence_threshold_db = kDefaultSilenceThresholdDb);

double rms_db(std::span<const double> samples);

} // namespace hosa
