// End-to-end acceptance checks for the toolkit: detection quality, estimator
// invariants, statistical error rates, simulator physics, and CLI contracts.
// Each criterion runs against a wall-clock budget and prints one verdict line;
// the process exit code is the number of failed criteria.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hosa/audio_io.hpp"
#include "hosa/detector.hpp"
#include "hosa/errors.hpp"
#include "hosa/fixtures.hpp"
#include "hosa/hinich.hpp"
#include "hosa/hosa_core.hpp"
#include "hosa/qpc.hpp"
#include "hosa/replay_sim.hpp"
#include "test_util.hpp"

using namespace hosa;

namespace {

struct Criterion {
    std::string label;
    double budget_seconds;
    std::function<bool(std::ostream&)> run;
};

FrameSequence segments_of(const std::vector<double>& x, std::size_t len, double overlap = 0.0) {
    return frame_signal(std::span<const double>(x), len, overlap, fixtures::kSampleRate);
}

// --- criterion 1: coupled-triple localization ------------------------------

bool coupled_peak_localization(std::ostream& log) {
    constexpr double kF1 = 96.0 / 1024.0;
    constexpr double kF2 = 64.0 / 1024.0;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto coupled = synthesize_qpc_signal(kF1, kF2, true, 64 * 1024, 400 + seed, 1024);
        const auto uncoupled =
            synthesize_qpc_signal(kF1, kF2, false, 64 * 1024, 400 + seed, 1024);
        const auto grid_c =
            estimate_bicoherence(segments_of(coupled, 1024), 1024, SmoothingWindow::none());
        const auto grid_u =
            estimate_bicoherence(segments_of(uncoupled, 1024), 1024, SmoothingWindow::none());

        const auto peaks = detect_qpc_peaks(grid_c, 0.5, 1);
        if (peaks.empty() || peaks[0].f1 != kF1 || peaks[0].f2 != kF2) {
            log << "  seed " << seed << ": top peak missing or off (96, 64)\n";
            ok = false;
        }
        const double at_peak = grid_c.magnitude.at(96, 64);
        const double at_peak_u = grid_u.magnitude.at(96, 64);
        if (at_peak < 0.9) {
            log << "  seed " << seed << ": coupled magnitude " << at_peak << " < 0.9\n";
            ok = false;
        }
        if (at_peak_u > 0.3) {
            log << "  seed " << seed << ": uncoupled magnitude " << at_peak_u << " > 0.3\n";
            ok = false;
        }
    }
    log << "  10/10 seeds located the coupled peak within bounds\n";
    return ok;
}

// --- criterion 2: estimator invariants over randomized inputs ---------------

AudioBuffer randomized_input(int trial, std::size_t n) {
    const std::uint64_t s = 70000 + static_cast<std::uint64_t>(trial);
    AudioBuffer buf;
    buf.sample_rate_hz = fixtures::kSampleRate;
    switch (trial % 4) {
    case 0:
        return fixtures::white_gaussian(n, s);
    case 1: {
        // tonal core plus a noise bed so every bin carries real energy
        buf.samples = synthesize_qpc_signal(0.11, 0.07, trial % 8 < 4, n, s, 256);
        const auto bed = fixtures::white_gaussian(n, s + 1, 0.01);
        for (std::size_t i = 0; i < n; ++i) buf.samples[i] += bed.samples[i];
        return buf;
    }
    case 2:
        return fixtures::linear_non_gaussian(n, s);
    default:
        buf.samples = synthesize_speech_like(0.04, 4, 0.05, n, s);
        return buf;
    }
}

bool estimator_invariants(std::ostream& log) {
    const int fft_choices[] = {64, 128, 256};
    const double scale_choices[] = {0.5, 2.0, 3.7};
    int checked = 0;
    bool ok = true;

    for (int trial = 0; trial < 108 && ok; ++trial) {
        const int fft = fft_choices[trial % 3];
        const std::size_t n = 32 * static_cast<std::size_t>(fft);
        const auto buf = randomized_input(trial, n);
        const SmoothingWindow window = (trial / 3) % 3 == 0   ? SmoothingWindow::none()
                                       : (trial / 3) % 3 == 1 ? rao_gabr_window(3)
                                                              : rao_gabr_window(5);
        const auto grid = estimate_bicoherence(segments_of(buf.samples, std::size_t(fft)), fft,
                                               window);

        const double alpha = scale_choices[(trial / 9) % 3];
        std::vector<double> scaled(buf.samples);
        for (double& v : scaled) v *= alpha;
        const auto grid2 =
            estimate_bicoherence(segments_of(scaled, std::size_t(fft)), fft, window);

        const int half = fft / 2;
        for (int m = 0; m <= half && ok; ++m) {
            for (int n2 = 0; n2 <= half && ok; ++n2) {
                const double a = grid.magnitude.at(m, n2);
                if (a < 0.0 || a > 1.0 + 1e-9) {
                    log << "  trial " << trial << ": magnitude " << a << " out of [0, 1] at ("
                        << m << "," << n2 << ")\n";
                    ok = false;
                }
                const double b = grid.magnitude.at(n2, m);
                if (std::abs(a - b) > 1e-9 * std::max({a, b, 1e-12})) {
                    log << "  trial " << trial << ": asymmetry at (" << m << "," << n2 << ")\n";
                    ok = false;
                }
                const double c = grid2.magnitude.at(m, n2);
                if (std::abs(a - c) > 1e-9 * std::max({a, c, 1e-12})) {
                    log << "  trial " << trial << ": gain " << alpha << " moved (" << m << ","
                        << n2 << ") from " << a << " to " << c << "\n";
                    ok = false;
                }
            }
        }
        ++checked;
    }
    log << "  " << checked << " randomized inputs passed bounds, symmetry, scale invariance\n";
    return ok && checked >= 100;
}

// --- criterion 3: frame-test error rates ------------------------------------

bool frame_test_error_rates(std::ostream& log) {
    HinichConfig config;
    config.fft_len = 128;
    bool ok = true;

    int rejects = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto buf = fixtures::white_gaussian(16384, 40000 + std::uint64_t(trial));
        const auto result = gaussianity_test(segments_of(buf.samples, 128), config, 0.05);
        rejects += result.gaussianity_rejected ? 1 : 0;
    }
    const double null_rate = rejects / 200.0;
    log << "  white-noise rejection rate " << null_rate << " (want 0.01..0.12)\n";
    if (null_rate < 0.01 || null_rate > 0.12) ok = false;

    int linear = 0;
    int nonlinear = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto buf = fixtures::linear_non_gaussian(16384, 50000 + std::uint64_t(trial));
        const auto plain = run_hinich_tests(segments_of(buf.samples, 128), config);
        linear += plain.decision == HinichDecision::non_gaussian_linear ? 1 : 0;

        const auto bent = hammerstein_apply(buf.samples, HammersteinModel::default_device());
        const auto distorted = run_hinich_tests(segments_of(bent, 128), config);
        nonlinear += distorted.decision == HinichDecision::non_gaussian_nonlinear ? 1 : 0;
    }
    log << "  linear accepted " << linear << "/50 (want >= 40), distorted rejected " << nonlinear
        << "/50 (want >= 45)\n";
    if (linear < 40) ok = false;
    if (nonlinear < 45) ok = false;
    return ok;
}

// --- criterion 4: detector operating point ----------------------------------

bool detector_operating_point(std::ostream& log) {
    const DetectorConfig config;
    bool ok = true;
    double worst_clean = 0.0;
    double worst_replay = 1.0;
    int errors = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto clean = analyze_recording(fixtures::standard_clean(seed), config);
        const auto replay = analyze_recording(fixtures::standard_replay(seed, 1), config);
        worst_clean = std::max(worst_clean, clean.failing_fraction);
        worst_replay = std::min(worst_replay, replay.failing_fraction);
        if (clean.failing_fraction >= 0.35) {
            log << "  seed " << seed << ": clean failing fraction " << clean.failing_fraction
                << " >= 0.35\n";
            ok = false;
        }
        if (replay.failing_fraction < 0.9) {
            log << "  seed " << seed << ": replay failing fraction " << replay.failing_fraction
                << " < 0.9\n";
            ok = false;
        }
        errors += classify(clean, 0.5) != Verdict::genuine ? 1 : 0;
        errors += classify(replay, 0.5) != Verdict::replay ? 1 : 0;
    }
    log << "  worst clean " << worst_clean << ", worst replay " << worst_replay << ", " << errors
        << " classification errors over 10 seeds\n";
    return ok && errors == 0;
}

// --- criterion 5: replay-order ordering and peak shift -----------------------

QpcScatter fixture_scatter(const AudioBuffer& buf) {
    const auto frames =
        frame_signal(std::span<const double>(buf.samples), 1024, 0.5, buf.sample_rate_hz);
    QpcScatterConfig config; // 256-point sub-segments at 50% overlap
    return qpc_scatter(frames, config, 0.5);
}

bool replay_order_separation(std::ostream& log) {
    const DetectorConfig config;
    double mean_direct = 0.0, mean_once = 0.0, mean_twice = 0.0;
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto direct = fixtures::standard_clean(seed);
        const auto once = fixtures::standard_replay(seed, 1);
        const auto twice = fixtures::standard_replay(seed, 2);

        mean_direct += analyze_recording(direct, config).mean_bicoherence_magnitude;
        mean_once += analyze_recording(once, config).mean_bicoherence_magnitude;
        mean_twice += analyze_recording(twice, config).mean_bicoherence_magnitude;

        const double shift = qpc_shift_metric(fixture_scatter(direct), fixture_scatter(once));
        if (!(shift > 0.0)) {
            log << "  seed " << seed << ": peak shift " << shift << " not positive\n";
            ok = false;
        }
    }
    mean_direct /= 10.0;
    mean_once /= 10.0;
    mean_twice /= 10.0;
    log << "  mean bicoherence: direct " << mean_direct << ", one replay " << mean_once
        << ", two replays " << mean_twice << "\n";
    if (!(mean_direct < mean_once)) {
        log << "  expected direct < one replay\n";
        ok = false;
    }
    if (!(mean_once <= mean_twice)) {
        log << "  expected one replay <= two replays\n";
        ok = false;
    }
    return ok;
}

// --- criterion 6: intermodulation line placement -----------------------------

double bin_magnitude(const std::vector<double>& x, std::size_t bin) {
    std::complex<double> acc{0.0, 0.0};
    const double w = -2.0 * std::numbers::pi * double(bin) / double(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * std::polar(1.0, w * double(i));
    return std::abs(acc);
}

bool intermodulation_lines(std::ostream& log) {
    const std::size_t n = 16384, k1 = 1200, k2 = 456;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * double(i) / double(n);
        x[i] = 0.4 * std::cos(t * double(k1)) + 0.4 * std::cos(t * double(k2));
    }
    // faint dither gives the "absent" case a nonzero floor to be measured against
    const auto dither = fixtures::white_gaussian(n, 616, 1e-6);
    for (std::size_t i = 0; i < n; ++i) x[i] += dither.samples[i];

    HammersteinModel device;
    device.linear_kernel = {1.0};
    device.quadratic_kernel = {1.0};
    device.quadratic_gain = 0.05;
    const auto bent = hammerstein_apply(x, device);
    device.quadratic_gain = 0.0;
    const auto straight = hammerstein_apply(x, device);

    const std::vector<std::size_t> lines = {k1 + k2, k1 - k2, 2 * k1, 2 * k2, 0};
    auto is_near_line = [&](std::size_t bin) {
        for (std::size_t line : {k1, k2, k1 + k2, k1 - k2, 2 * k1, 2 * k2, std::size_t(0)})
            if (bin + 2 >= line && bin <= line + 2) return true;
        return false;
    };

    // median floor over a spread of off-line bins
    std::vector<double> floor_mags;
    for (std::size_t bin = 37; bin < n / 2 && floor_mags.size() < 160; bin += 41)
        if (!is_near_line(bin)) floor_mags.push_back(bin_magnitude(bent, bin));
    std::sort(floor_mags.begin(), floor_mags.end());
    const double floor = floor_mags[floor_mags.size() / 2];

    bool ok = true;
    double weakest_db = 1e9;
    for (std::size_t line : lines) {
        const double gain_db = 20.0 * std::log10(bin_magnitude(bent, line) / floor);
        weakest_db = std::min(weakest_db, gain_db);
        if (gain_db < 20.0) {
            log << "  line at bin " << line << " only " << gain_db << " dB above the floor\n";
            ok = false;
        }
    }
    log << "  weakest distortion line " << weakest_db << " dB above the noise floor\n";

    std::vector<double> clean_floor;
    for (std::size_t bin = 37; bin < n / 2 && clean_floor.size() < 160; bin += 41)
        if (!is_near_line(bin)) clean_floor.push_back(bin_magnitude(straight, bin));
    std::sort(clean_floor.begin(), clean_floor.end());
    const double floor0 = clean_floor[clean_floor.size() / 2];
    double loudest_db = -1e9;
    for (std::size_t line : lines) {
        const double gain_db = 20.0 * std::log10(bin_magnitude(straight, line) / floor0);
        loudest_db = std::max(loudest_db, gain_db);
    }
    log << "  with the quadratic branch off, loudest line bin sits " << loudest_db
        << " dB above the floor (want < 12)\n";
    if (loudest_db >= 12.0) ok = false;
    return ok;
}

// --- criterion 7: CLI determinism and exit codes -----------------------------

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + HOSA_CLI_BIN + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool cli_contract(std::ostream& log) {
    testutil::TempDir dir;
    const auto clean_wav = dir.path() / "clean.wav";
    const auto replay_wav = dir.path() / "replay.wav";
    write_wav_pcm16(clean_wav, fixtures::standard_clean(1));
    write_wav_pcm16(replay_wav, fixtures::standard_replay(1, 1));

    bool ok = true;
    const auto analyze = [&](const std::filesystem::path& wav, const std::string& out) {
        return run_cli("analyze \"" + wav.string() + "\" --out-dir \"" +
                       (dir.path() / out).string() + "\"");
    };

    const int c1 = analyze(clean_wav, "c1");
    const int c2 = analyze(clean_wav, "c2");
    const int r1 = analyze(replay_wav, "r1");
    const int r2 = analyze(replay_wav, "r2");
    log << "  exit codes: clean " << c1 << "," << c2 << " replay " << r1 << "," << r2 << "\n";
    if (c1 != 0 || c2 != 0) ok = false;
    if (r1 != 3 || r2 != 3) ok = false;

    const bool clean_stable =
        slurp(dir.path() / "c1/report.json") == slurp(dir.path() / "c2/report.json");
    const bool replay_stable =
        slurp(dir.path() / "r1/report.json") == slurp(dir.path() / "r2/report.json");
    log << "  reports byte-identical across reruns: clean " << (clean_stable ? "yes" : "NO")
        << ", replay " << (replay_stable ? "yes" : "NO") << "\n";
    if (!clean_stable || !replay_stable) ok = false;
    if (slurp(dir.path() / "c1/report.json").empty()) ok = false;
    return ok;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"coupled-triple peak localization and contrast", 10.0, coupled_peak_localization},
        {"bicoherence bounds, symmetry, scale invariance", 60.0, estimator_invariants},
        {"frame-test false-alarm and detection rates", 300.0, frame_test_error_rates},
        {"clean/replay operating point over 10 seeds", 120.0, detector_operating_point},
        {"replay-order ordering and QPC peak shift", 120.0, replay_order_separation},
        {"quadratic intermodulation line placement", 5.0, intermodulation_lines},
        {"CLI exit codes and byte-stable artifacts", 120.0, cli_contract},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& criterion = criteria[i];
        std::ostringstream detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail << "  exception: " << e.what() << "\n";
            ok = false;
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > criterion.budget_seconds) {
            detail << "  over budget\n";
            ok = false;
        }

        std::printf("%s criterion %zu: %s (%.1f s, budget %.0f s)\n", ok ? "PASS" : "FAIL",
                    i + 1, criterion.label.c_str(), elapsed, criterion.budget_seconds);
        std::fputs(detail.str().c_str(), stdout);
        std::fflush(stdout);
        failures += ok ? 0 : 1;
    }

    std::printf("%zu/%zu criteria passed\n", criteria.size() - std::size_t(failures),
                criteria.size());
    return failures;
}
