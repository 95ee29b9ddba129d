#include "hosa/detector.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

#include "hosa/errors.hpp"

namespace hosa {

namespace {

using nlohmann::json;

HinichDecision decision_from_string(const std::string& text) {
    if (text == "gaussian") return HinichDecision::gaussian;
    if (text == "non_gaussian_linear") return HinichDecision::non_gaussian_linear;
    if (text == "non_gaussian_nonlinear") return HinichDecision::non_gaussian_nonlinear;
    throw Error(ErrorKind::InvalidArgument, "unknown decision value: " + text);
}

json config_to_json(const DetectorConfig& c) {
    return json{{"frame_len", c.frame_len},
                {"overlap", c.overlap},
                {"silence_threshold_db", c.silence_threshold_db},
                {"sub_segment_len", c.sub_segment_len},
                {"sub_overlap", c.sub_overlap},
                {"fft_len", c.fft_len},
                {"smoothing_bandwidth", c.smoothing_bandwidth},
                {"alpha", c.alpha},
                {"linearity_factor", c.linearity_factor},
                {"hinich_resolution", c.hinich_resolution},
                {"qpc_threshold", c.qpc_threshold},
                {"qpc_max_peaks", c.qpc_max_peaks},
                {"decision_threshold", c.decision_threshold},
                {"require_both_tests", c.require_both_tests}};
}

DetectorConfig config_from_json(const json& j) {
    DetectorConfig c;
    c.frame_len = j.at("frame_len").get<std::size_t>();
    c.overlap = j.at("overlap").get<double>();
    c.silence_threshold_db = j.at("silence_threshold_db").get<double>();
    c.sub_segment_len = j.at("sub_segment_len").get<std::size_t>();
    c.sub_overlap = j.at("sub_overlap").get<double>();
    c.fft_len = j.at("fft_len").get<int>();
    c.smoothing_bandwidth = j.at("smoothing_bandwidth").get<int>();
    c.alpha = j.at("alpha").get<double>();
    c.linearity_factor = j.at("linearity_factor").get<double>();
    c.hinich_resolution = j.at("hinich_resolution").get<int>();
    c.qpc_threshold = j.at("qpc_threshold").get<double>();
    c.qpc_max_peaks = j.at("qpc_max_peaks").get<std::size_t>();
    c.decision_threshold = j.at("decision_threshold").get<double>();
    c.require_both_tests = j.at("require_both_tests").get<bool>();
    return c;
}

json hinich_to_json(const HinichResult& r) {
    return json{{"gaussianity_stat", r.gaussianity_stat},
                {"gaussianity_dof", r.gaussianity_dof},
                {"gaussianity_pvalue", r.gaussianity_pvalue},
                {"gaussianity_evaluated", r.gaussianity_evaluated},
                {"gaussianity_rejected", r.gaussianity_rejected},
                {"linearity_stat", r.linearity_stat},
                {"linearity_reference", r.linearity_reference},
                {"linearity_evaluated", r.linearity_evaluated},
                {"linearity_rejected", r.linearity_rejected},
                {"decision", to_string(r.decision)}};
}

HinichResult hinich_from_json(const json& j) {
    HinichResult r;
    r.gaussianity_stat = j.at("gaussianity_stat").get<double>();
    r.gaussianity_dof = j.at("gaussianity_dof").get<int>();
    r.gaussianity_pvalue = j.at("gaussianity_pvalue").get<double>();
    r.gaussianity_evaluated = j.at("gaussianity_evaluated").get<bool>();
    r.gaussianity_rejected = j.at("gaussianity_rejected").get<bool>();
    r.linearity_stat = j.at("linearity_stat").get<double>();
    r.linearity_reference = j.at("linearity_reference").get<double>();
    r.linearity_evaluated = j.at("linearity_evaluated").get<bool>();
    r.linearity_rejected = j.at("linearity_rejected").get<bool>();
    r.decision = decision_from_string(j.at("decision").get<std::string>());
    return r;
}

json scatter_to_json(const QpcScatter& s) {
    json frames = json::array();
    for (const auto& frame : s.frames) {
        json peaks = json::array();
        for (const auto& p : frame.peaks)
            peaks.push_back(json{{"f1", p.f1},
                                 {"f2", p.f2},
                                 {"magnitude", p.magnitude},
                                 {"phase", p.phase}});
        frames.push_back(json{{"frame_index", frame.frame_index}, {"peaks", peaks}});
    }
    return json{{"label", s.label}, {"frames", frames}};
}

QpcScatter scatter_from_json(const json& j) {
    QpcScatter s;
    s.label = j.at("label").get<std::string>();
    for (const auto& jf : j.at("frames")) {
        FramePeaks frame;
        frame.frame_index = jf.at("frame_index").get<std::size_t>();
        for (const auto& jp : jf.at("peaks"))
            frame.peaks.push_back({jp.at("f1").get<double>(), jp.at("f2").get<double>(),
                                   jp.at("magnitude").get<double>(),
                                   jp.at("phase").get<double>()});
        s.frames.push_back(std::move(frame));
    }
    return s;
}

} // namespace

const char* to_string(Verdict v) {
    return v == Verdict::replay ? "replay" : "genuine";
}

double phase_bias_score(const BicoherenceGrid& grid) {
    constexpr double kBand = std::numbers::pi / 16.0;
    constexpr double kHalfPi = std::numbers::pi / 2.0;
    double weight_total = 0.0;
    double weight_in_band = 0.0;
    for (const auto& [m, n] : principal_domain_mask(grid.fft_len)) {
        const double w = grid.magnitude.at(m, n);
        const double phase = grid.phase.at(m, n);
        weight_total += w;
        if (std::abs(phase) <= kBand || std::abs(phase - kHalfPi) <= kBand)
            weight_in_band += w;
    }
    return weight_total > 0.0 ? weight_in_band / weight_total : 0.0;
}

DetectionReport analyze_recording(const AudioBuffer& buf, const DetectorConfig& config) {
    const auto frames = frame_signal(buf, config.frame_len, config.overlap);
    const auto activity = gate_silence(frames, config.silence_threshold_db);
    if (activity.active_count() == 0)
        throw Error(ErrorKind::NoActiveFrames, "every frame is below the silence gate");

    const int fft_len =
        config.fft_len > 0 ? config.fft_len : static_cast<int>(config.sub_segment_len);
    const SmoothingWindow smoothing = config.smoothing_bandwidth > 1
                                          ? rao_gabr_window(config.smoothing_bandwidth)
                                          : SmoothingWindow::none();
    HinichConfig hinich_config;
    hinich_config.fft_len = fft_len;
    hinich_config.resolution = config.hinich_resolution;
    hinich_config.alpha = config.alpha;
    hinich_config.linearity_factor = config.linearity_factor;

    DetectionReport report;
    report.config = config;
    report.sample_rate_hz = buf.sample_rate_hz;
    report.total_frame_count = frames.count();
    report.active_frame_count = activity.active_count();

    std::size_t failing = 0;
    double mag_sum = 0.0;
    double bias_sum = 0.0;
    for (std::size_t i = 0; i < frames.count(); ++i) {
        if (!activity.active[i]) continue;

        const auto sub =
            frame_signal(std::span<const double>(frames.frames[i]), config.sub_segment_len,
                         config.sub_overlap, frames.source_rate_hz);
        const auto smoothed = estimate_bicoherence(sub, fft_len, smoothing);
        const auto raw = estimate_bicoherence(sub, fft_len, SmoothingWindow::none());

        FrameFeatures features;
        features.frame_index = i;
        features.energy_db = activity.energy_db[i];
        features.mean_bicoherence_magnitude = mean_principal_domain_magnitude(smoothed);
        features.phase_bias_score = phase_bias_score(smoothed);
        features.hinich = run_hinich_tests(sub, hinich_config);
        if (config.require_both_tests) {
            features.failed = decide_hypothesis(features.hinich) == Hypothesis::H1;
        } else {
            features.failed = features.hinich.gaussianity_rejected ||
                              (features.hinich.linearity_evaluated &&
                               features.hinich.linearity_rejected);
        }

        const auto peaks = detect_qpc_peaks(raw, config.qpc_threshold, config.qpc_max_peaks);
        features.qpc_peak_count = peaks.size();
        report.scatter.frames.push_back({i, peaks});

        failing += features.failed ? 1 : 0;
        mag_sum += features.mean_bicoherence_magnitude;
        bias_sum += features.phase_bias_score;
        report.frames.push_back(std::move(features));
    }

    const double active = static_cast<double>(report.active_frame_count);
    report.failing_fraction = static_cast<double>(failing) / active;
    report.mean_bicoherence_magnitude = mag_sum / active;
    report.mean_phase_bias_score = bias_sum / active;
    report.verdict = classify(report, config.decision_threshold);
    return report;
}

Verdict classify(const DetectionReport& report, double decision_threshold) {
    // boundary inclusive
    return report.failing_fraction >= decision_threshold ? Verdict::replay : Verdict::genuine;
}

CompareSummary compare_recordings(const DetectionReport& reference,
                                  const DetectionReport& candidate) {
    if (!(reference.config == candidate.config))
        throw Error(ErrorKind::ConfigMismatch, "reports built with different analysis settings");

    CompareSummary summary;
    summary.delta_mean_bicoherence =
        candidate.mean_bicoherence_magnitude - reference.mean_bicoherence_magnitude;
    summary.delta_phase_bias = candidate.mean_phase_bias_score - reference.mean_phase_bias_score;
    summary.delta_failing_fraction = candidate.failing_fraction - reference.failing_fraction;

    if (reference.sample_rate_hz != candidate.sample_rate_hz)
        summary.warnings.push_back("sample rate mismatch: " +
                                   std::to_string(reference.sample_rate_hz) + " Hz vs " +
                                   std::to_string(candidate.sample_rate_hz) + " Hz");

    if (reference.scatter.total_peaks() > 0 && candidate.scatter.total_peaks() > 0) {
        summary.qpc_shift = qpc_shift_metric(reference.scatter, candidate.scatter);
        summary.qpc_shift_valid = true;
    } else {
        summary.warnings.push_back("QPC shift skipped: no peaks on at least one side");
    }
    return summary;
}

std::string report_to_json(const DetectionReport& report) {
    json frames = json::array();
    for (const auto& f : report.frames)
        frames.push_back(json{{"frame_index", f.frame_index},
                              {"energy_db", f.energy_db},
                              {"mean_bicoherence_magnitude", f.mean_bicoherence_magnitude},
                              {"phase_bias_score", f.phase_bias_score},
                              {"hinich", hinich_to_json(f.hinich)},
                              {"qpc_peak_count", f.qpc_peak_count},
                              {"failed", f.failed}});

    const json j{{"config", config_to_json(report.config)},
                 {"sample_rate_hz", report.sample_rate_hz},
                 {"total_frame_count", report.total_frame_count},
                 {"active_frame_count", report.active_frame_count},
                 {"frames", frames},
                 {"failing_fraction", report.failing_fraction},
                 {"mean_bicoherence_magnitude", report.mean_bicoherence_magnitude},
                 {"mean_phase_bias_score", report.mean_phase_bias_score},
                 {"scatter", scatter_to_json(report.scatter)},
                 {"verdict", to_string(report.verdict)}};
    return j.dump(2) + "\n";
}

DetectionReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("bad report JSON: ") + e.what());
    }
    try {
        DetectionReport report;
        report.config = config_from_json(j.at("config"));
        report.sample_rate_hz = j.at("sample_rate_hz").get<int>();
        report.total_frame_count = j.at("total_frame_count").get<std::size_t>();
        report.active_frame_count = j.at("active_frame_count").get<std::size_t>();
        for (const auto& jf : j.at("frames")) {
            FrameFeatures f;
            f.frame_index = jf.at("frame_index").get<std::size_t>();
            f.energy_db = jf.at("energy_db").get<double>();
            f.mean_bicoherence_magnitude = jf.at("mean_bicoherence_magnitude").get<double>();
            f.phase_bias_score = jf.at("phase_bias_score").get<double>();
            f.hinich = hinich_from_json(jf.at("hinich"));
            f.qpc_peak_count = jf.at("qpc_peak_count").get<std::size_t>();
            f.failed = jf.at("failed").get<bool>();
            report.frames.push_back(std::move(f));
        }
        report.failing_fraction = j.at("failing_fraction").get<double>();
        report.mean_bicoherence_magnitude = j.at("mean_bicoherence_magnitude").get<double>();
        report.mean_phase_bias_score = j.at("mean_phase_bias_score").get<double>();
        report.scatter = scatter_from_json(j.at("scatter"));
        report.verdict = j.at("verdict").get<std::string>() == "replay" ? Verdict::replay
                                                                        : Verdict::genuine;
        return report;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string("report JSON missing fields: ") + e.what());
    }
}

std::string hinich_records_json(const DetectionReport& report) {
    json records = json::array();
    for (const auto& f : report.frames)
        records.push_back(json{{"frame_index", f.frame_index},
                               {"gaussianity_stat", f.hinich.gaussianity_stat},
                               {"gaussianity_pvalue", f.hinich.gaussianity_pvalue},
                               {"linearity_stat", f.hinich.linearity_stat},
                               {"linearity_reference", f.hinich.linearity_reference},
                               {"decision", to_string(f.hinich.decision)}});
    return records.dump(2) + "\n";
}

std::string compare_to_json(const CompareSummary& summary) {
    const json j{{"delta_mean_bicoherence", summary.delta_mean_bicoherence},
                 {"delta_phase_bias", summary.delta_phase_bias},
                 {"delta_failing_fraction", summary.delta_failing_fraction},
                 {"qpc_shift_valid", summary.qpc_shift_valid},
                 {"qpc_shift", summary.qpc_shift},
                 {"warnings", summary.warnings}};
    return j.dump(2) + "\n";
}

} // namespace hosa
