#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hosa/calibration.hpp"
#include "hosa/detector.hpp"
#include "hosa/errors.hpp"
#include "hosa/fixtures.hpp"
#include "hosa/hinich.hpp"
#include "hosa/hosa_core.hpp"
#include "hosa/qpc.hpp"
#include "hosa/replay_sim.hpp"

namespace fs = std::filesystem;
using namespace hosa;

namespace {

constexpr int kExitGenuine = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitReplay = 3;

constexpr std::uint64_t kDefaultSeed = 12345;

// Invocation-level problems (bad flag combinations, malformed configs) that
// should exit 2 rather than 1.
struct UsageFailure {
    std::string message;
};

// Temp file + rename so a crashed run never leaves a truncated artifact.
void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::IoFailure, "cannot write: " + tmp.string());
        out << content;
        if (!out) throw Error(ErrorKind::IoFailure, "write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed_flag) {
    if (seed_given) return seed_flag;
    if (const char* env = std::getenv("HOSA_REPLAY_SEED")) {
        try {
            std::size_t used = 0;
            const std::uint64_t parsed = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
            return parsed;
        } catch (const std::exception&) {
            throw UsageFailure{"HOSA_REPLAY_SEED is not an unsigned integer"};
        }
    }
    return kDefaultSeed;
}

struct AnalyzeOptions {
    std::string input;
    std::string out_dir = ".";
    std::size_t frame_len = 1024;
    int fft_len = 0;
    double overlap = 0.5;
    int smoothing = 5;
    double alpha = 0.05;
    double silence_db = kDefaultSilenceThresholdDb;
    double threshold = 0.5;
};

DetectorConfig detector_config(const AnalyzeOptions& opt) {
    if (opt.frame_len < 16 || opt.frame_len % 2 != 0)
        throw UsageFailure{"--frame-len must be even and >= 16"};
    DetectorConfig config;
    config.frame_len = opt.frame_len;
    config.overlap = opt.overlap;
    config.silence_threshold_db = opt.silence_db;
    config.fft_len = opt.fft_len;
    config.smoothing_bandwidth = opt.smoothing;
    config.alpha = opt.alpha;
    config.decision_threshold = opt.threshold;
    return config;
}

SmoothingWindow window_for(int bandwidth) {
    return bandwidth > 1 ? rao_gabr_window(bandwidth) : SmoothingWindow::none();
}

DetectionReport analyze_file(const std::string& path, const DetectorConfig& config) {
    const AudioBuffer buf = read_wav(path);
    DetectionReport report = analyze_recording(buf, config);
    report.scatter.label = fs::path(path).stem().string();
    return report;
}

// Whole-recording grid over the active frames; written alongside the report
// for plotting. A single active frame cannot support an estimate, so the
// export degrades to the bare header.
std::string recording_grid_csv(const std::string& path, const DetectorConfig& config) {
    const AudioBuffer buf = read_wav(path);
    const auto frames = frame_signal(buf, config.frame_len, config.overlap);
    const auto activity = gate_silence(frames, config.silence_threshold_db);

    FrameSequence active;
    active.frame_len = frames.frame_len;
    active.hop = frames.hop;
    active.source_rate_hz = frames.source_rate_hz;
    for (std::size_t i = 0; i < frames.count(); ++i)
        if (activity.active[i]) active.frames.push_back(frames.frames[i]);

    std::ostringstream out;
    if (active.count() >= 2) {
        const auto grid = estimate_bicoherence(active, static_cast<int>(config.frame_len),
                                               window_for(config.smoothing_bandwidth));
        export_grid_csv(grid, out);
    } else {
        out << "m,n,magnitude,phase\n";
    }
    return out.str();
}

int run_analyze(const AnalyzeOptions& opt) {
    const DetectorConfig config = detector_config(opt);
    const DetectionReport report = analyze_file(opt.input, config);

    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);
    atomic_write(out_dir / "report.json", report_to_json(report));
    atomic_write(out_dir / "hinich.json", hinich_records_json(report));
    atomic_write(out_dir / "bicoherence.csv", recording_grid_csv(opt.input, config));

    std::cout << "verdict: " << to_string(report.verdict)
              << " (failing_fraction=" << report.failing_fraction
              << ", active_frames=" << report.active_frame_count << "/"
              << report.total_frame_count << ")\n";
    return report.verdict == Verdict::replay ? kExitReplay : kExitGenuine;
}

int run_compare(const AnalyzeOptions& opt, const std::string& input_b) {
    const DetectorConfig config = detector_config(opt);
    const DetectionReport ref = analyze_file(opt.input, config);
    const DetectionReport cand = analyze_file(input_b, config);
    const CompareSummary summary = compare_recordings(ref, cand);

    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);
    atomic_write(out_dir / "compare.json", compare_to_json(summary));

    std::cout << "delta_mean_bicoherence=" << summary.delta_mean_bicoherence
              << " delta_failing_fraction=" << summary.delta_failing_fraction;
    if (summary.qpc_shift_valid) std::cout << " qpc_shift=" << summary.qpc_shift;
    std::cout << "\n";
    for (const auto& warning : summary.warnings) std::cerr << "warning: " << warning << "\n";
    return kExitGenuine;
}

int run_simulate(const std::string& input, const std::string& output,
                 const std::string& chain_path, int order, bool order_given, bool seed_given,
                 std::uint64_t seed_flag) {
    MsmChainConfig chain = MsmChainConfig::default_chain();
    if (!chain_path.empty()) {
        try {
            chain = read_chain_config(chain_path);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::NotFound) throw;
            throw UsageFailure{std::string("chain config: ") + e.what()};
        }
    }
    if (order_given) chain.replay_order = order;

    const std::uint64_t seed = resolve_seed(seed_given, seed_flag);
    const AudioBuffer in = read_wav(input);
    AudioBuffer out;
    out.sample_rate_hz = in.sample_rate_hz;
    out.samples = simulate_msm_chain(in.samples, chain, seed);
    write_wav_pcm16(output, out);

    std::cout << format_chain_config(chain);
    std::cout << "seed=" << seed << "\n" << "wrote " << output << "\n";
    return kExitGenuine;
}

int run_scatter(const AnalyzeOptions& opt, double peak_threshold) {
    if (opt.frame_len < 16 || opt.frame_len % 2 != 0)
        throw UsageFailure{"--frame-len must be even and >= 16"};
    const AudioBuffer buf = read_wav(opt.input);
    const auto frames = frame_signal(buf, opt.frame_len, opt.overlap);

    QpcScatterConfig config;
    config.silence_threshold_db = opt.silence_db;
    config.smoothing = window_for(opt.smoothing);
    if (opt.fft_len > 0) config.fft_len = opt.fft_len;

    QpcScatter scatter = qpc_scatter(frames, config, peak_threshold);
    scatter.label = fs::path(opt.input).stem().string();

    const fs::path out_dir(opt.out_dir);
    fs::create_directories(out_dir);
    std::ostringstream csv;
    export_scatter_csv(scatter, csv);
    atomic_write(out_dir / "scatter.csv", csv.str());

    std::cout << "frames=" << scatter.frames.size() << " peaks=" << scatter.total_peaks()
              << "\n";
    return kExitGenuine;
}

// ---------------------------------------------------------------------------
// Self-test: the calibrated statistical properties, runnable from the shipped
// binary so a deployment can validate itself without the test tree.

struct Property {
    const char* name;
    std::function<bool(std::uint64_t, std::ostream&)> run;
};

bool prop_bicoherence_bounds(std::uint64_t seed, std::ostream& log) {
    namespace fx = hosa::fixtures;
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(trial);
        AudioBuffer buf;
        switch (trial % 3) {
        case 0: buf = fx::white_gaussian(8192, s); break;
        case 1: buf = fx::standard_clean(s); break;
        default: buf = fx::standard_replay(s, 1); break;
        }
        const auto frames =
            frame_signal(std::span<const double>(buf.samples), 512, 0.5, buf.sample_rate_hz);
        const auto window = trial % 2 == 0 ? rao_gabr_window(5) : SmoothingWindow::none();
        const auto grid = estimate_bicoherence(frames, 512, window);

        std::vector<double> doubled(buf.samples);
        for (double& v : doubled) v *= 2.0;
        const auto frames2 =
            frame_signal(std::span<const double>(doubled), 512, 0.5, buf.sample_rate_hz);
        const auto grid2 = estimate_bicoherence(frames2, 512, window);

        const int half = grid.fft_len / 2;
        for (int m = 0; m <= half && ok; ++m) {
            for (int n = 0; n <= half && ok; ++n) {
                const double mag = grid.magnitude.at(m, n);
                if (mag < 0.0 || mag > 1.0 + 1e-9) {
                    log << "  magnitude out of range at (" << m << "," << n << "): " << mag
                        << "\n";
                    ok = false;
                }
                if (grid.magnitude.at(m, n) != grid.magnitude.at(n, m)) {
                    log << "  symmetry breach at (" << m << "," << n << ")\n";
                    ok = false;
                }
                if (std::abs(mag - grid2.magnitude.at(m, n)) > 1e-9) {
                    log << "  scale variance at (" << m << "," << n << ")\n";
                    ok = false;
                }
            }
        }
    }
    return ok;
}

bool prop_gaussian_null_band(std::uint64_t seed, std::ostream& log) {
    namespace cal = hosa::calibration;
    HinichConfig config;
    config.fft_len = 128;
    int rejects = 0;
    for (int trial = 0; trial < cal::kGaussNullTrials; ++trial) {
        const auto buf =
            fixtures::white_gaussian(16384, seed * 1000 + static_cast<std::uint64_t>(trial));
        const auto segments =
            frame_signal(std::span<const double>(buf.samples), 128, 0.0, buf.sample_rate_hz);
        const auto result = gaussianity_test(segments, config, 0.05);
        rejects += result.gaussianity_rejected ? 1 : 0;
    }
    const double rate = static_cast<double>(rejects) / cal::kGaussNullTrials;
    log << "  rejection rate " << rate << " (band " << cal::kGaussNullRejectLo << ".."
        << cal::kGaussNullRejectHi << ")\n";
    return rate >= cal::kGaussNullRejectLo && rate <= cal::kGaussNullRejectHi;
}

bool prop_linear_accept(std::uint64_t seed, std::ostream& log) {
    namespace cal = hosa::calibration;
    HinichConfig config;
    config.fft_len = 128;
    int linear = 0;
    for (int trial = 0; trial < cal::kLinearityTrials; ++trial) {
        const auto buf =
            fixtures::linear_non_gaussian(16384, seed * 77 + static_cast<std::uint64_t>(trial));
        const auto segments =
            frame_signal(std::span<const double>(buf.samples), 128, 0.0, buf.sample_rate_hz);
        const auto result = run_hinich_tests(segments, config);
        linear += result.decision == HinichDecision::non_gaussian_linear ? 1 : 0;
    }
    const double rate = static_cast<double>(linear) / cal::kLinearityTrials;
    log << "  linear-accept rate " << rate << " (min " << cal::kLinearAcceptMin << ")\n";
    return rate >= cal::kLinearAcceptMin;
}

bool prop_nonlinear_reject(std::uint64_t seed, std::ostream& log) {
    namespace cal = hosa::calibration;
    HinichConfig config;
    config.fft_len = 128;
    int nonlinear = 0;
    for (int trial = 0; trial < cal::kLinearityTrials; ++trial) {
        const std::uint64_t s = seed * 77 + static_cast<std::uint64_t>(trial);
        const auto buf = fixtures::linear_non_gaussian(16384, s);
        const auto distorted = hammerstein_apply(buf.samples, HammersteinModel::default_device());
        const auto segments =
            frame_signal(std::span<const double>(distorted), 128, 0.0, buf.sample_rate_hz);
        const auto result = run_hinich_tests(segments, config);
        nonlinear += result.decision == HinichDecision::non_gaussian_nonlinear ? 1 : 0;
    }
    const double rate = static_cast<double>(nonlinear) / cal::kLinearityTrials;
    log << "  nonlinear-reject rate " << rate << " (min " << cal::kNonlinearRejectMin << ")\n";
    return rate >= cal::kNonlinearRejectMin;
}

bool prop_coupled_peak_bounds(std::uint64_t seed, std::ostream& log) {
    namespace cal = hosa::calibration;
    constexpr double kF1 = 96.0 / 1024.0;
    constexpr double kF2 = 64.0 / 1024.0;
    const std::size_t n = static_cast<std::size_t>(cal::kQpcSegments) * 1024;
    bool ok = true;
    for (int trial = 0; trial < 8; ++trial) {
        const std::uint64_t s = seed * 31 + static_cast<std::uint64_t>(trial);
        const auto coupled = synthesize_qpc_signal(kF1, kF2, true, n, s);
        const auto uncoupled = synthesize_qpc_signal(kF1, kF2, false, n, s);
        const auto seg_c =
            frame_signal(std::span<const double>(coupled), 1024, 0.0, fixtures::kSampleRate);
        const auto seg_u =
            frame_signal(std::span<const double>(uncoupled), 1024, 0.0, fixtures::kSampleRate);
        const auto grid_c = estimate_bicoherence(seg_c, 1024, SmoothingWindow::none());
        const auto grid_u = estimate_bicoherence(seg_u, 1024, SmoothingWindow::none());

        const auto peaks = detect_qpc_peaks(grid_c, 0.5, 1);
        if (peaks.empty() || peaks[0].f1 != kF1 || peaks[0].f2 != kF2) {
            log << "  coupled peak missing or mislocated (trial " << trial << ")\n";
            ok = false;
        }
        if (grid_c.magnitude.at(96, 64) < cal::kCoupledPeakMin) {
            log << "  coupled magnitude " << grid_c.magnitude.at(96, 64) << " below bound\n";
            ok = false;
        }
        if (grid_u.magnitude.at(96, 64) > cal::kUncoupledPeakMax) {
            log << "  uncoupled magnitude " << grid_u.magnitude.at(96, 64) << " above bound\n";
            ok = false;
        }
    }
    return ok;
}

bool prop_noise_scatter_sparsity(std::uint64_t seed, std::ostream& log) {
    namespace cal = hosa::calibration;
    // 64 non-overlapping sub-segments per frame; spurious-peak odds collapse
    // with segment count, so the sparsity bound is tied to this geometry.
    QpcScatterConfig config;
    config.sub_segment_len = 256;
    config.sub_overlap = 0.0;
    std::size_t frames_total = 0;
    std::size_t frames_empty = 0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto buf =
            fixtures::white_gaussian(4 * 16384, seed * 13 + static_cast<std::uint64_t>(trial));
        const auto frames =
            frame_signal(std::span<const double>(buf.samples), 16384, 0.0, buf.sample_rate_hz);
        const auto scatter = qpc_scatter(frames, config, 0.5);
        for (const auto& frame : scatter.frames) {
            ++frames_total;
            frames_empty += frame.peaks.empty() ? 1 : 0;
        }
    }
    const double fraction =
        frames_total ? static_cast<double>(frames_empty) / static_cast<double>(frames_total) : 0;
    log << "  zero-peak fraction " << fraction << " (min " << cal::kNoiseZeroPeakFractionMin
        << ") over " << frames_total << " frames\n";
    return fraction >= cal::kNoiseZeroPeakFractionMin;
}

bool prop_phase_bias_uniform(std::uint64_t seed, std::ostream& log) {
    namespace cal = hosa::calibration;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
    double mean = 0.0;
    constexpr int kGrids = 50;
    for (int trial = 0; trial < kGrids; ++trial) {
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
        mean += phase_bias_score(grid);
    }
    mean /= kGrids;
    log << "  mean uniform-phase score " << mean << " (center "
        << cal::kPhaseBiasUniformCenter << " +- " << cal::kPhaseBiasUniformTol << ")\n";
    return std::abs(mean - cal::kPhaseBiasUniformCenter) <= cal::kPhaseBiasUniformTol;
}

bool prop_chain_snr(std::uint64_t seed, std::ostream& log) {
    namespace cal = hosa::calibration;
    constexpr double kTarget = 20.0;
    std::vector<double> x(16384);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = 0.5 * std::sin(2.0 * std::numbers::pi * 0.05 * static_cast<double>(i));

    MsmChainConfig chain = MsmChainConfig::identity_chain();
    chain.noise_snr_db = kTarget;
    const auto y = simulate_msm_chain(x, chain, seed);

    double sig = 0.0;
    double noise = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sig += x[i] * x[i];
        const double r = y[i] - x[i];
        noise += r * r;
    }
    const double measured = 10.0 * std::log10(sig / noise);
    log << "  measured SNR " << measured << " dB (target " << kTarget << " +- "
        << cal::kSnrToleranceDb << ")\n";
    return std::abs(measured - kTarget) <= cal::kSnrToleranceDb;
}

bool prop_operating_point(std::uint64_t seed, std::ostream& log) {
    namespace cal = hosa::calibration;
    (void)seed;  // the operating bands belong to the frozen fixture set, so the
                 // fixture seeds stay pinned; arbitrary seeds drive the other
                 // properties, whose bands carry Monte-Carlo slack
    DetectorConfig config;
    bool ok = true;
    for (std::uint64_t s = 1; s <= 3; ++s) {
        const auto clean_report = analyze_recording(fixtures::standard_clean(s), config);
        const auto replay_report = analyze_recording(fixtures::standard_replay(s, 1), config);
        log << "  seed " << s << ": clean=" << clean_report.failing_fraction
            << " replay=" << replay_report.failing_fraction << "\n";
        if (clean_report.failing_fraction >= cal::kCleanFailingMax) ok = false;
        if (replay_report.failing_fraction < cal::kReplayFailingMin) ok = false;
        if (clean_report.verdict != Verdict::genuine) ok = false;
        if (replay_report.verdict != Verdict::replay) ok = false;
    }
    return ok;
}

const std::vector<Property>& property_registry() {
    static const std::vector<Property> registry = {
        {"bicoherence-bounds", prop_bicoherence_bounds},
        {"gaussian-null-band", prop_gaussian_null_band},
        {"linear-accept-rate", prop_linear_accept},
        {"nonlinear-reject-rate", prop_nonlinear_reject},
        {"coupled-peak-bounds", prop_coupled_peak_bounds},
        {"noise-scatter-sparsity", prop_noise_scatter_sparsity},
        {"phase-bias-uniform-band", prop_phase_bias_uniform},
        {"chain-snr-accuracy", prop_chain_snr},
        {"operating-point-separation", prop_operating_point},
    };
    return registry;
}

int run_selftest(bool list_only, bool seed_given, std::uint64_t seed_flag) {
    if (list_only) {
        for (const auto& prop : property_registry()) std::cout << prop.name << "\n";
        return kExitGenuine;
    }
    const std::uint64_t seed = resolve_seed(seed_given, seed_flag);
    std::vector<std::string> failed;
    for (const auto& prop : property_registry()) {
        std::ostringstream log;
        const bool ok = prop.run(seed, log);
        std::cout << (ok ? "PASS " : "FAIL ") << prop.name << "\n" << log.str();
        if (!ok) failed.push_back(prop.name);
    }
    if (failed.empty()) {
        std::cout << "all properties hold\n";
        return kExitGenuine;
    }
    std::cout << failed.size() << " propert" << (failed.size() == 1 ? "y" : "ies")
              << " violated:";
    for (const auto& name : failed) std::cout << " " << name;
    std::cout << "\n";
    return kExitReplay;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"higher-order spectral analysis toolkit for replay-attack detection"};
    app.require_subcommand(1);

    AnalyzeOptions opt;
    std::string input_b;
    std::string output;
    std::string chain_path;
    int order = 1;
    std::uint64_t seed_flag = kDefaultSeed;
    double peak_threshold = 0.5;
    bool list_only = false;

    auto add_analysis_flags = [&](CLI::App* cmd) {
        cmd->add_option("--frame-len", opt.frame_len, "analysis frame length in samples");
        cmd->add_option("--fft-len", opt.fft_len, "FFT length for within-frame analysis")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--overlap", opt.overlap, "frame overlap fraction")
            ->check(CLI::Range(0.0, 0.95));
        cmd->add_option("--smoothing", opt.smoothing,
                        "frequency smoothing bandwidth in bins (0 or 1 disables)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--alpha", opt.alpha, "significance level for the frame tests")
            ->check(CLI::Range(1e-6, 0.5));
        cmd->add_option("--silence-db", opt.silence_db, "silence gate threshold in dBFS");
        cmd->add_option("--out-dir", opt.out_dir, "artifact output directory");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "analyze a WAV and emit a verdict");
    analyze->add_option("input", opt.input, "input WAV path")->required();
    add_analysis_flags(analyze);
    analyze->add_option("--threshold", opt.threshold,
                        "failing-fraction decision threshold (verdict: replay when >=)")
        ->check(CLI::Range(0.0, 1.0));

    CLI::App* compare = app.add_subcommand("compare", "feature deltas between two WAVs");
    compare->add_option("reference", opt.input, "reference WAV path")->required();
    compare->add_option("candidate", input_b, "candidate WAV path")->required();
    add_analysis_flags(compare);
    compare->add_option("--threshold", opt.threshold, "failing-fraction decision threshold")
        ->check(CLI::Range(0.0, 1.0));

    CLI::App* simulate = app.add_subcommand("simulate", "pass a WAV through a replay chain");
    simulate->add_option("input", opt.input, "input WAV path")->required();
    simulate->add_option("output", output, "output WAV path")->required();
    simulate->add_option("--chain-config", chain_path, "chain config file (key=value lines)");
    CLI::Option* order_opt = simulate->add_option("--order", order, "replay order")
                                 ->check(CLI::Range(1, 2));
    CLI::Option* sim_seed = simulate->add_option("--seed", seed_flag, "noise RNG seed");

    CLI::App* scatter = app.add_subcommand("scatter", "per-frame QPC peak scatter CSV");
    scatter->add_option("input", opt.input, "input WAV path")->required();
    add_analysis_flags(scatter);
    scatter->add_option("--threshold", peak_threshold, "peak magnitude threshold")
        ->check(CLI::Range(0.0, 1.0));

    CLI::App* selftest = app.add_subcommand("selftest", "run the calibrated property suite");
    selftest->add_flag("--list", list_only, "print property names without running");
    CLI::Option* st_seed = selftest->add_option("--seed", seed_flag, "base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*analyze) return run_analyze(opt);
        if (*compare) return run_compare(opt, input_b);
        if (*simulate)
            return run_simulate(opt.input, output, chain_path, order, order_opt->count() > 0,
                                sim_seed->count() > 0, seed_flag);
        if (*scatter) {
            if (!(peak_threshold > 0.0) || !(peak_threshold < 1.0))
                throw UsageFailure{"--threshold must be inside (0, 1) for scatter"};
            return run_scatter(opt, peak_threshold);
        }
        if (*selftest) return run_selftest(list_only, st_seed->count() > 0, seed_flag);
    } catch (const UsageFailure& e) {
        std::cerr << "usage error: " << e.message << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
