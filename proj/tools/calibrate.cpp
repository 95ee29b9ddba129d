// Measures the statistical behavior that the calibrated bands pin down.
// Run by hand after any change to the estimators, fixtures, or defaults;
// the printed numbers are the source for hosa/calibration.hpp.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "hosa/detector.hpp"
#include "hosa/fixtures.hpp"
#include "hosa/hinich.hpp"
#include "hosa/hosa_core.hpp"
#include "hosa/qpc.hpp"
#include "hosa/replay_sim.hpp"

using namespace hosa;
namespace fx = hosa::fixtures;

namespace {

FrameSequence segments_of(const AudioBuffer& buf, std::size_t len) {
    return frame_signal(std::span<const double>(buf.samples), len, 0.0, buf.sample_rate_hz);
}

void gaussian_null() {
    // Three disjoint seed blocks; the frozen band has to cover all of them.
    for (const std::uint64_t base : {1000ULL, 40000ULL, 90000ULL}) {
        HinichConfig config;
        config.fft_len = 128;
        int rejects = 0;
        std::vector<double> pvalues;
        for (int trial = 0; trial < 200; ++trial) {
            const auto buf = fx::white_gaussian(16384, base + static_cast<std::uint64_t>(trial));
            const auto result = gaussianity_test(segments_of(buf, 128), config, 0.05);
            rejects += result.gaussianity_rejected ? 1 : 0;
            pvalues.push_back(result.gaussianity_pvalue);
        }
        std::sort(pvalues.begin(), pvalues.end());
        std::printf(
            "gaussian-null seeds %llu+: reject rate %.3f over 200, p quartiles %.3f %.3f %.3f\n",
            static_cast<unsigned long long>(base), rejects / 200.0, pvalues[50], pvalues[100],
            pvalues[150]);
    }
}

void linearity_sweep() {
    const double factors[] = {1.55, 1.70, 1.85, 2.00, 2.15};
    for (const double factor : factors) {
        HinichConfig config;
        config.fft_len = 128;
        config.linearity_factor = factor;
        int linear = 0;
        int nonlinear = 0;
        int gauss_lin = 0;
        int gauss_non = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const std::uint64_t s = 50000 + static_cast<std::uint64_t>(trial);
            const auto lin_buf = fx::linear_non_gaussian(16384, s);
            const auto lin_result = run_hinich_tests(segments_of(lin_buf, 128), config);
            linear += lin_result.decision == HinichDecision::non_gaussian_linear ? 1 : 0;
            gauss_lin += lin_result.gaussianity_rejected ? 1 : 0;

            AudioBuffer non_buf;
            non_buf.sample_rate_hz = lin_buf.sample_rate_hz;
            non_buf.samples =
                hammerstein_apply(lin_buf.samples, HammersteinModel::default_device());
            const auto non_result = run_hinich_tests(segments_of(non_buf, 128), config);
            nonlinear += non_result.decision == HinichDecision::non_gaussian_nonlinear ? 1 : 0;
            gauss_non += non_result.gaussianity_rejected ? 1 : 0;
        }
        std::printf("linearity factor %.2f: linear-accept %.2f (gauss-reject %.2f), "
                    "nonlinear-reject %.2f (gauss-reject %.2f)\n",
                    factor, linear / 50.0, gauss_lin / 50.0, nonlinear / 50.0, gauss_non / 50.0);
    }
}

void operating_point() {
    DetectorConfig config;
    double clean_max = 0.0;
    double replay1_min = 1.0;
    double replay2_min = 1.0;
    double mag_direct = 0.0;
    double mag_r1 = 0.0;
    double mag_r2 = 0.0;
    int clean_gaussian = 0;
    int clean_linear = 0;
    int clean_nonlinear = 0;
    int clean_frames = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto clean = analyze_recording(fx::standard_clean(seed), config);
        const auto r1 = analyze_recording(fx::standard_replay(seed, 1), config);
        const auto r2 = analyze_recording(fx::standard_replay(seed, 2), config);
        clean_max = std::max(clean_max, clean.failing_fraction);
        replay1_min = std::min(replay1_min, r1.failing_fraction);
        replay2_min = std::min(replay2_min, r2.failing_fraction);
        mag_direct += clean.mean_bicoherence_magnitude;
        mag_r1 += r1.mean_bicoherence_magnitude;
        mag_r2 += r2.mean_bicoherence_magnitude;
        for (const auto& f : clean.frames) {
            ++clean_frames;
            switch (f.hinich.decision) {
            case HinichDecision::gaussian: ++clean_gaussian; break;
            case HinichDecision::non_gaussian_linear: ++clean_linear; break;
            case HinichDecision::non_gaussian_nonlinear: ++clean_nonlinear; break;
            }
        }
        std::printf("  seed %llu: clean %.3f r1 %.3f r2 %.3f | mag %.4f %.4f %.4f\n",
                    static_cast<unsigned long long>(seed), clean.failing_fraction,
                    r1.failing_fraction, r2.failing_fraction, clean.mean_bicoherence_magnitude,
                    r1.mean_bicoherence_magnitude, r2.mean_bicoherence_magnitude);
    }
    std::printf("operating-point: clean max %.3f, r1 min %.3f, r2 min %.3f\n", clean_max,
                replay1_min, replay2_min);
    std::printf("order-separation means: direct %.4f r1 %.4f r2 %.4f\n", mag_direct / 10.0,
                mag_r1 / 10.0, mag_r2 / 10.0);
    std::printf("clean frame decisions: gaussian %.3f linear %.3f nonlinear %.3f\n",
                static_cast<double>(clean_gaussian) / clean_frames,
                static_cast<double>(clean_linear) / clean_frames,
                static_cast<double>(clean_nonlinear) / clean_frames);
}

void quadratic_gain_ladder() {
    DetectorConfig config;
    for (const double qgain : {0.0, 0.02, 0.05, 0.10}) {
        double sum = 0.0;
        double lo = 1.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto clean = fx::standard_clean(seed);
            MsmChainConfig chain = MsmChainConfig::default_chain();
            chain.speaker.quadratic_gain = qgain;
            chain.mic.quadratic_gain = qgain;
            AudioBuffer buf;
            buf.sample_rate_hz = clean.sample_rate_hz;
            buf.samples = simulate_msm_chain(clean.samples, chain, fx::kChainSeedBase + seed);
            const auto report = analyze_recording(buf, config);
            sum += report.failing_fraction;
            lo = std::min(lo, report.failing_fraction);
        }
        std::printf("qgain %.2f: failing fraction mean %.3f min %.3f\n", qgain, sum / 10.0, lo);
    }
}

void qpc_peaks() {
    constexpr double kF1 = 96.0 / 1024.0;
    constexpr double kF2 = 64.0 / 1024.0;
    double coupled_min = 1.0;
    double uncoupled_max = 0.0;
    int located = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint64_t s = 31 + static_cast<std::uint64_t>(trial);
        const auto coupled = synthesize_qpc_signal(kF1, kF2, true, 64 * 1024, s);
        const auto uncoupled = synthesize_qpc_signal(kF1, kF2, false, 64 * 1024, s);
        AudioBuffer cb{coupled, fx::kSampleRate};
        AudioBuffer ub{uncoupled, fx::kSampleRate};
        const auto gc = estimate_bicoherence(segments_of(cb, 1024), 1024, SmoothingWindow::none());
        const auto gu = estimate_bicoherence(segments_of(ub, 1024), 1024, SmoothingWindow::none());
        coupled_min = std::min(coupled_min, gc.magnitude.at(96, 64));
        uncoupled_max = std::max(uncoupled_max, gu.magnitude.at(96, 64));
        const auto peaks = detect_qpc_peaks(gc, 0.5, 1);
        located += (!peaks.empty() && peaks[0].f1 == kF1 && peaks[0].f2 == kF2) ? 1 : 0;
    }
    std::printf("qpc peaks: coupled min %.4f, uncoupled max %.4f, located %d/50\n", coupled_min,
                uncoupled_max, located);
}

void noise_scatter() {
    QpcScatterConfig config;
    config.sub_segment_len = 256;
    config.sub_overlap = 0.0;
    std::size_t total = 0;
    std::size_t empty = 0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto buf = fx::white_gaussian(4 * 16384, 13 + static_cast<std::uint64_t>(trial));
        const auto scatter =
            qpc_scatter(frame_signal(std::span<const double>(buf.samples), 16384, 0.0,
                                     buf.sample_rate_hz),
                        config, 0.5);
        for (const auto& frame : scatter.frames) {
            ++total;
            empty += frame.peaks.empty() ? 1 : 0;
        }
    }
    std::printf("noise scatter: zero-peak fraction %.3f over %zu frames\n",
                static_cast<double>(empty) / static_cast<double>(total), total);
}

void clean_scatter_shift() {
    QpcScatterConfig config;  // frame-level defaults: 256-sample subs, 50% overlap
    double shift_min = 1e9;
    double shift_max = 0.0;
    std::size_t clean_peaks_min = static_cast<std::size_t>(-1);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto clean = fx::standard_clean(seed);
        const auto replayed = fx::standard_replay(seed, 1);
        const auto sc = qpc_scatter(frame_signal(clean, 1024, 0.5), config, 0.5);
        const auto sr = qpc_scatter(frame_signal(replayed, 1024, 0.5), config, 0.5);
        clean_peaks_min = std::min(clean_peaks_min, sc.total_peaks());
        if (sc.total_peaks() > 0 && sr.total_peaks() > 0) {
            const double shift = qpc_shift_metric(sc, sr);
            shift_min = std::min(shift_min, shift);
            shift_max = std::max(shift_max, shift);
        } else {
            std::printf("  seed %llu: empty side (clean %zu, replay %zu)\n",
                        static_cast<unsigned long long>(seed), sc.total_peaks(),
                        sr.total_peaks());
        }
    }
    std::printf("clean-vs-replay shift: min %.5f max %.5f, clean peaks min %zu\n", shift_min,
                shift_max, clean_peaks_min);
}

void phase_bias_uniform() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
    double lo = 1.0;
    double hi = 0.0;
    double mean = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        BicoherenceGrid grid;
        grid.fft_len = 256;
        grid.segment_count = 1;
        grid.smoothing = SmoothingWindow::none();
        grid.magnitude = Grid2<double>(128);
        grid.phase = Grid2<double>(128);
        for (int m = 0; m <= 128; ++m) {
            for (int n = 0; n <= m; ++n) {
                const double phi = uniform(rng);
                grid.magnitude.at(m, n) = 1.0;
                grid.magnitude.at(n, m) = 1.0;
                grid.phase.at(m, n) = phi;
                grid.phase.at(n, m) = phi;
            }
        }
        const double score = phase_bias_score(grid);
        lo = std::min(lo, score);
        hi = std::max(hi, score);
        mean += score;
    }
    std::printf("phase-bias uniform: min %.4f max %.4f mean %.4f\n", lo, hi, mean / 50.0);
}

void snr_accuracy() {
    for (const double target : {10.0, 20.0, 40.0}) {
        std::vector<double> x(16384);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = 0.5 * std::sin(2.0 * std::numbers::pi * 0.05 * static_cast<double>(i));
        MsmChainConfig chain = MsmChainConfig::identity_chain();
        chain.noise_snr_db = target;
        const auto y = simulate_msm_chain(x, chain, 99);
        double sig = 0.0;
        double noise = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sig += x[i] * x[i];
            noise += (y[i] - x[i]) * (y[i] - x[i]);
        }
        std::printf("snr target %.0f dB: measured %.3f dB\n", target,
                    10.0 * std::log10(sig / noise));
    }
}

} // namespace

int main() {
    gaussian_null();
    linearity_sweep();
    qpc_peaks();
    noise_scatter();
    phase_bias_uniform();
    snr_accuracy();
    operating_point();
    quadratic_gain_ladder();
    clean_scatter_shift();
    return 0;
}
