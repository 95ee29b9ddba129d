#include "hosa/fixtures.hpp"

#include <random>

namespace hosa::fixtures {

AudioBuffer standard_clean(std::uint64_t seed) {
    AudioBuffer buf;
    buf.sample_rate_hz = kSampleRate;
    buf.samples =
        synthesize_speech_like(kSpeechF0, kSpeechHarmonics, kSpeechNoiseMix, kSpeechLen, seed);
    return buf;
}

AudioBuffer standard_replay(std::uint64_t seed, int order) {
    const AudioBuffer clean = standard_clean(seed);
    MsmChainConfig chain = MsmChainConfig::default_chain();
    chain.replay_order = order;
    AudioBuffer buf;
    buf.sample_rate_hz = clean.sample_rate_hz;
    buf.samples = simulate_msm_chain(clean.samples, chain, kChainSeedBase + seed);
    return buf;
}

AudioBuffer white_gaussian(std::size_t n, std::uint64_t seed, double sigma) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    AudioBuffer buf;
    buf.sample_rate_hz = kSampleRate;
    buf.samples.resize(n);
    for (double& s : buf.samples) s = gauss(rng);
    return buf;
}

AudioBuffer linear_non_gaussian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> innovations(n);
    for (double& s : innovations) s = expo(rng) - 1.0;

    // Fixed mixing filter; any FIR works, the innovations carry the skewness.
    HammersteinModel fir;
    fir.linear_kernel = {1.0, 0.6, 0.3, -0.2, 0.1};
    fir.quadratic_kernel = {0.0};
    fir.quadratic_gain = 0.0;

    AudioBuffer buf;
    buf.sample_rate_hz = kSampleRate;
    buf.samples = hammerstein_apply(innovations, fir);
    // Drive level chosen so a quadratic device fed with this signal produces
    // distortion well above the numerical floor of short-segment estimates.
    for (double& s : buf.samples) s *= 2.0;
    return buf;
}

} // namespace hosa::fixtures
