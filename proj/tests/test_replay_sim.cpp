#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hosa/detector.hpp"
#include "hosa/errors.hpp"
#include "hosa/fixtures.hpp"
#include "hosa/hinich.hpp"
#include "hosa/replay_sim.hpp"
#include "test_util.hpp"

using namespace hosa;
using testutil::error_kind;

namespace {

// single-bin DFT magnitude, mean removed so DC leakage cannot mask a line
double bin_magnitude(const std::vector<double>& x, std::size_t bin) {
    std::complex<double> acc{0.0, 0.0};
    const double w = -2.0 * std::numbers::pi * double(bin) / double(x.size());
    for (std::size_t n = 0; n < x.size(); ++n)
        acc += x[n] * std::polar(1.0, w * double(n));
    return std::abs(acc);
}

std::vector<double> two_tone(std::size_t n, std::size_t k1, std::size_t k2, double amp) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * double(i) / double(n);
        x[i] = amp * std::cos(t * double(k1)) + amp * std::cos(t * double(k2));
    }
    return x;
}

} // namespace

TEST_CASE("the identity model passes samples through untouched") {
    const auto buf = fixtures::white_gaussian(512, 100);
    const auto y = hammerstein_apply(buf.samples, HammersteinModel::identity());
    CHECK(y == buf.samples);
}

TEST_CASE("a single-tap delayed kernel shifts the signal by one sample") {
    HammersteinModel model;
    model.linear_kernel = {0.0, 1.0};
    const auto buf = fixtures::white_gaussian(64, 101);
    const auto y = hammerstein_apply(buf.samples, model);
    REQUIRE(y.size() == buf.samples.size());
    CHECK(y[0] == 0.0);
    for (std::size_t n = 1; n < y.size(); ++n)
        CHECK(y[n] == doctest::Approx(buf.samples[n - 1]).epsilon(1e-15));
}

TEST_CASE("with the quadratic branch disabled the model is linear") {
    HammersteinModel model = HammersteinModel::default_device();
    model.quadratic_gain = 0.0;

    const auto a = fixtures::white_gaussian(2048, 102);
    const auto b = fixtures::white_gaussian(2048, 103);
    std::vector<double> mix(a.samples.size());
    for (std::size_t i = 0; i < mix.size(); ++i)
        mix[i] = 0.7 * a.samples[i] + 0.3 * b.samples[i];

    const auto ya = hammerstein_apply(a.samples, model);
    const auto yb = hammerstein_apply(b.samples, model);
    const auto ymix = hammerstein_apply(mix, model);
    for (std::size_t i = 0; i < ymix.size(); ++i)
        CHECK(ymix[i] == doctest::Approx(0.7 * ya[i] + 0.3 * yb[i]).epsilon(1e-9));
}

TEST_CASE("a quadratic device turns one tone into DC plus the octave") {
    HammersteinModel model;
    model.linear_kernel = {1.0};
    model.quadratic_kernel = {1.0};
    model.quadratic_gain = 0.1;

    const std::size_t n = 2048, k = 100;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = 0.5 * std::cos(2.0 * std::numbers::pi * double(k) * double(i) / double(n));
    const auto y = hammerstein_apply(x, model);

    const double half = double(n) / 2.0;
    // y = x + 0.1 x^2 = 0.0125 + 0.5 cos + 0.0125 cos(2.)
    CHECK(bin_magnitude(y, k) == doctest::Approx(0.5 * half).epsilon(1e-9));
    CHECK(bin_magnitude(y, 2 * k) == doctest::Approx(0.0125 * half).epsilon(1e-9));
    CHECK(bin_magnitude(y, 0) == doctest::Approx(0.0125 * double(n)).epsilon(1e-9));
    for (std::size_t off : {k + 1, k - 1, 2 * k + 1, 3 * k}) CHECK(bin_magnitude(y, off) < 1e-6);
}

TEST_CASE("two tones produce the full intermodulation family, and only then") {
    HammersteinModel model;
    model.linear_kernel = {1.0};
    model.quadratic_kernel = {1.0};
    model.quadratic_gain = 0.1;

    const std::size_t n = 4096, k1 = 300, k2 = 90;
    const auto x = two_tone(n, k1, k2, 0.4);
    const auto y = hammerstein_apply(x, model);

    const double half = double(n) / 2.0;
    // 0.1 x^2 contributes 0.016 at k1 +- k2, 0.008 at 2 k1 and 2 k2, 0.016 DC
    CHECK(bin_magnitude(y, k1 + k2) == doctest::Approx(0.016 * half).epsilon(1e-9));
    CHECK(bin_magnitude(y, k1 - k2) == doctest::Approx(0.016 * half).epsilon(1e-9));
    CHECK(bin_magnitude(y, 2 * k1) == doctest::Approx(0.008 * half).epsilon(1e-9));
    CHECK(bin_magnitude(y, 2 * k2) == doctest::Approx(0.008 * half).epsilon(1e-9));
    CHECK(bin_magnitude(y, 0) == doctest::Approx(0.016 * double(n)).epsilon(1e-9));
    for (std::size_t off : {k1 + k2 + 1, k1 - k2 - 1, 2 * k1 + 3, 7u * k2 / 2}) // off-family bins
        CHECK(bin_magnitude(y, off) < 1e-6);

    model.quadratic_gain = 0.0;
    const auto clean = hammerstein_apply(x, model);
    for (std::size_t line : {k1 + k2, k1 - k2, 2 * k1, 2 * k2})
        CHECK(bin_magnitude(clean, line) < 1e-6);
}

TEST_CASE("clipping keeps an overdriven signal inside full scale") {
    const std::vector<double> hot{2.0, -3.0, 0.25, 1.5};
    const auto y = hammerstein_apply(hot, HammersteinModel::identity(), true);
    REQUIRE(y.size() == hot.size());
    for (double v : y) CHECK(std::abs(v) <= 1.0);
    CHECK(y[2] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("the identity chain is a no-op at either replay order") {
    const auto buf = fixtures::white_gaussian(4096, 104);
    MsmChainConfig config = MsmChainConfig::identity_chain();

    config.replay_order = 1;
    CHECK(simulate_msm_chain(buf.samples, config, 5) == buf.samples);
    config.replay_order = 2;
    CHECK(simulate_msm_chain(buf.samples, config, 5) == buf.samples);
}

TEST_CASE("the chain is deterministic for a fixed seed") {
    const auto buf = fixtures::white_gaussian(8192, 105);
    const auto config = MsmChainConfig::default_chain();
    const auto once = simulate_msm_chain(buf.samples, config, 777);
    const auto again = simulate_msm_chain(buf.samples, config, 777);
    CHECK(once == again);
    const auto other = simulate_msm_chain(buf.samples, config, 778);
    CHECK(once != other);
}

TEST_CASE("chain parameters are validated before any processing") {
    const std::vector<double> x(1024, 0.1);

    MsmChainConfig bad_order = MsmChainConfig::identity_chain();
    bad_order.replay_order = 3;
    CHECK(error_kind([&] { simulate_msm_chain(x, bad_order, 1); }) ==
          ErrorKind::ParameterOutOfRange);

    MsmChainConfig bad_snr = MsmChainConfig::identity_chain();
    bad_snr.noise_snr_db = -3.0;
    CHECK(error_kind([&] { simulate_msm_chain(x, bad_snr, 1); }) ==
          ErrorKind::ParameterOutOfRange);

    MsmChainConfig bad_band = MsmChainConfig::identity_chain();
    bad_band.band_limit = 0.7;
    CHECK(error_kind([&] { simulate_msm_chain(x, bad_band, 1); }) ==
          ErrorKind::ParameterOutOfRange);
}

TEST_CASE("injected chain noise lands on the requested SNR") {
    const auto x = synthesize_speech_like(fixtures::kSpeechF0, fixtures::kSpeechHarmonics, 0.01,
                                          32768, 99);
    MsmChainConfig config = MsmChainConfig::identity_chain();
    config.noise_snr_db = 20.0;

    const auto y = simulate_msm_chain(x, config, 99);
    REQUIRE(y.size() == x.size());
    double ps = 0.0, pn = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ps += x[i] * x[i];
        pn += (y[i] - x[i]) * (y[i] - x[i]);
    }
    const double snr_db = 10.0 * std::log10(ps / pn);
    CHECK(snr_db == doctest::Approx(20.0).epsilon(0.025)); // +- 0.5 dB
}

TEST_CASE("each pass through the chain adds measurable phase coupling") {
    double direct = 0.0, replay1 = 0.0, replay2 = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const DetectorConfig config;
        direct += analyze_recording(fixtures::standard_clean(seed), config)
                      .mean_bicoherence_magnitude;
        replay1 += analyze_recording(fixtures::standard_replay(seed, 1), config)
                       .mean_bicoherence_magnitude;
        replay2 += analyze_recording(fixtures::standard_replay(seed, 2), config)
                       .mean_bicoherence_magnitude;
    }
    CHECK(direct < replay1);
    CHECK(replay1 <= replay2);
}

TEST_CASE("coupled synthesis is reproducible and seed-sensitive") {
    const auto a = synthesize_qpc_signal(0.09, 0.05, true, 4096, 42, 256);
    const auto b = synthesize_qpc_signal(0.09, 0.05, true, 4096, 42, 256);
    CHECK(a == b);
    const auto c = synthesize_qpc_signal(0.09, 0.05, true, 4096, 43, 256);
    CHECK(a != c);
}

TEST_CASE("QPC synthesis rejects bifrequencies outside the valid triangle") {
    CHECK(error_kind([&] { synthesize_qpc_signal(0.30, 0.25, true, 4096, 1, 256); }) ==
          ErrorKind::FrequencyOutOfRange);
    CHECK(error_kind([&] { synthesize_qpc_signal(0.0, 0.1, true, 4096, 1, 256); }) ==
          ErrorKind::FrequencyOutOfRange);
    CHECK(error_kind([&] { synthesize_qpc_signal(0.1, -0.05, true, 4096, 1, 256); }) ==
          ErrorKind::FrequencyOutOfRange);
    CHECK(error_kind([&] { synthesize_qpc_signal(0.1, 0.05, true, 4096, 1, 0); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("speech-like synthesis is peak-normalized") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto x = synthesize_speech_like(fixtures::kSpeechF0, fixtures::kSpeechHarmonics,
                                              fixtures::kSpeechNoiseMix, 16384, seed);
        double peak = 0.0;
        for (double v : x) peak = std::max(peak, std::abs(v));
        CHECK(peak == doctest::Approx(0.9).epsilon(1e-6));
    }
}

TEST_CASE("a one-harmonic noiseless stack is a pure tone") {
    const std::size_t n = 32768;
    const auto x = synthesize_speech_like(fixtures::kSpeechF0, 1, 0.0, n, 7);
    const std::size_t bin = 1280; // f0 * n
    const double tone = bin_magnitude(x, bin);
    CHECK(tone >= 0.8 * double(n) / 2.0);
    for (std::size_t off : {bin - 1, bin + 1, bin / 2, 3 * bin})
        CHECK(bin_magnitude(x, off) < 1e-6 * tone);
}

TEST_CASE("speech parameters are validated") {
    CHECK(error_kind([&] { synthesize_speech_like(0.0, 5, 0.01, 4096, 1); }) ==
          ErrorKind::ParameterOutOfRange);
    CHECK(error_kind([&] { synthesize_speech_like(0.3, 2, 0.01, 4096, 1); }) ==
          ErrorKind::ParameterOutOfRange); // second harmonic would alias
    CHECK(error_kind([&] { synthesize_speech_like(0.04, 0, 0.01, 4096, 1); }) ==
          ErrorKind::ParameterOutOfRange);
    CHECK(error_kind([&] { synthesize_speech_like(0.04, 5, -0.1, 4096, 1); }) ==
          ErrorKind::ParameterOutOfRange);
}

TEST_CASE("the clean fixture is strongly non-Gaussian") {
    HinichConfig config;
    config.fft_len = 128;
    int rejected = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto buf = fixtures::standard_clean(seed);
        const auto result =
            gaussianity_test(testutil::segments_of(buf.samples, 128), config, 0.05);
        rejected += result.gaussianity_rejected ? 1 : 0;
    }
    CHECK(rejected >= 45);
}

TEST_CASE("chain configs survive a format/parse round trip") {
    MsmChainConfig config = MsmChainConfig::default_chain();
    config.noise_snr_db = 30.0;
    config.band_limit = 0.2;
    config.replay_order = 2;
    config.clip = true;

    const std::string text = format_chain_config(config);
    const MsmChainConfig parsed = parse_chain_config(text);
    CHECK(format_chain_config(parsed) == text);
    CHECK(parsed.replay_order == 2);
    CHECK(parsed.clip);
    REQUIRE(parsed.noise_snr_db.has_value());
    CHECK(*parsed.noise_snr_db == 30.0);
    REQUIRE(parsed.band_limit.has_value());
    CHECK(*parsed.band_limit == 0.2);
    CHECK(parsed.speaker.linear_kernel == config.speaker.linear_kernel);
    CHECK(parsed.mic.quadratic_gain == config.mic.quadratic_gain);
}

TEST_CASE("chain config texts are validated line by line") {
    CHECK(error_kind([&] { parse_chain_config("order=3\n"); }) == ErrorKind::ParameterOutOfRange);
    CHECK(error_kind([&] { parse_chain_config("snr_db=-5\n"); }) ==
          ErrorKind::ParameterOutOfRange);
    CHECK(error_kind([&] { parse_chain_config("band_limit=0.7\n"); }) ==
          ErrorKind::ParameterOutOfRange);
    CHECK(error_kind([&] { parse_chain_config("just words\n"); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { parse_chain_config("clip=maybe\n"); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { parse_chain_config("gremlin=1\n"); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { parse_chain_config("mic.qgain=abc\n"); }) ==
          ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { parse_chain_config("speaker.g1=\n"); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { read_chain_config("/nonexistent/chain.cfg"); }) ==
          ErrorKind::NotFound);
}

TEST_CASE("the low-pass designer returns a symmetric unit-DC-gain kernel") {
    const auto taps = design_lowpass_fir(0.45, 32);
    REQUIRE(taps.size() == 32);
    double sum = 0.0;
    for (double t : taps) sum += t;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < taps.size(); ++i)
        CHECK(taps[i] == doctest::Approx(taps[taps.size() - 1 - i]).epsilon(1e-12));

    CHECK(error_kind([&] { design_lowpass_fir(0.5, 32); }) == ErrorKind::ParameterOutOfRange);
    CHECK(error_kind([&] { design_lowpass_fir(0.0, 32); }) == ErrorKind::ParameterOutOfRange);
    CHECK(error_kind([&] { design_lowpass_fir(0.45, 0); }) == ErrorKind::ParameterOutOfRange);
}
