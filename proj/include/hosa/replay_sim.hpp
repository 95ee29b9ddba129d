#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hosa {

// Parallel linear + quadratic convolution branches approximating one
// nonlinear device (mic or speaker): y = g1 * x + qgain * (g2 * x^2).
struct HammersteinModel {
    std::vector<double> linear_kernel{1.0};
    std::vector<double> quadratic_kernel{0.0};
    double quadratic_gain = 0.0;

    static HammersteinModel identity();
    // 32-tap low-pass (0.45 normalized cutoff) linear branch, delta quadratic
    // branch with gain 0.05: a mild but measurable device nonlinearity.
    static HammersteinModel default_device();
};

struct MsmChainConfig {
    HammersteinModel speaker = HammersteinModel::default_device();
    HammersteinModel mic = HammersteinModel::default_device();
    std::optional<double> noise_snr_db;   // additive white Gaussian noise
    std::optional<double> band_limit;     // normalized low-pass cutoff in (0, 0.5)
    int replay_order = 1;                 // 2 = replay of a replay
    bool clip = false;

    static MsmChainConfig default_chain();
    static MsmChainConfig identity_chain();
};

std::vector<double> hammerstein_apply(std::span<const double> x, const HammersteinModel& model,
                                      bool clip = false);

// Speaker -> optional band limit -> optional noise -> mic, repeated
// replay_order times. Deterministic for fixed (x, config, seed).
std::vector<double> simulate_msm_chain(std::span<const double> x, const MsmChainConfig& config,
                                       std::uint64_t seed);

// Three sinusoids at f1, f2, f1+f2 with per-block random phases. When coupled,
// the third phase is the sum of the first two; otherwise it is drawn
// independently. Block length should match the analysis segment length.
std::vector<double> synthesize_qpc_signal(double f1, double f2, bool coupled, std::size_t n,
                                          std::uint64_t seed, std::size_t segment_len = 1024);

// Harmonic stack with randomized amplitudes plus mean-removed exponential
// noise, peak-normalized to 0.9. A deterministic stand-in for voiced speech.
std::vector<double> synthesize_speech_like(double f0, int harmonics, double noise_mix,
                                           std::size_t n, std::uint64_t seed);

// Windowed-sinc low-pass FIR, unit DC gain.
std::vector<double> design_lowpass_fir(double cutoff, std::size_t taps);

// Flat key-value chain config format. Keys: speaker.g1, speaker.g2,
// speaker.qgain, mic.g1, mic.g2, mic.qgain, snr_db, band_limit, order, clip.
MsmChainConfig parse_chain_config(const std::string& text);
MsmChainConfig read_chain_config(const std::string& path);
std::string format_chain_config(const MsmChainConfig& config);

} // namespace hosa
