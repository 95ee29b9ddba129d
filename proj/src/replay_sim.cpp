#include "hosa/replay_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "hosa/errors.hpp"

namespace hosa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> convolve_causal(std::span<const double> x, const std::vector<double>& kernel) {
    std::vector<double> y(x.size(), 0.0);
    const std::size_t klen = kernel.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        const std::size_t kmax = std::min(klen, i + 1);
        for (std::size_t k = 0; k < kmax; ++k) acc += kernel[k] * x[i - k];
        y[i] = acc;
    }
    return y;
}

// Distinct RNG stream per chain pass so order-2 noise is not a repeat of the
// order-1 noise. SplitMix64 step over the base seed.
std::uint64_t derive_seed(std::uint64_t seed, int pass) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(pass + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void add_noise_at_snr(std::vector<double>& y, double snr_db, std::uint64_t seed) {
    double power = 0.0;
    for (double s : y) power += s * s;
    power /= static_cast<double>(y.size());
    if (power <= 0.0) return;

    const double noise_power = power / std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(noise_power);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (double& s : y) s += gauss(rng);
}

std::vector<double> parse_tap_list(const std::string& value, const std::string& key) {
    std::vector<double> taps;
    std::stringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t used = 0;
            const double tap = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            taps.push_back(tap);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidArgument, "bad tap value for " + key + ": " + item);
        }
    }
    if (taps.empty())
        throw Error(ErrorKind::InvalidArgument, "empty tap list for " + key);
    return taps;
}

double parse_number(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        while (used < value.size() && std::isspace(static_cast<unsigned char>(value[used])))
            ++used;
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "bad numeric value for " + key + ": " + value);
    }
}

std::string format_tap_list(const std::vector<double>& taps) {
    std::string joined;
    char buf[64];
    for (std::size_t i = 0; i < taps.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", taps[i]);
        if (i > 0) joined += ',';
        joined += buf;
    }
    return joined;
}

} // namespace

HammersteinModel HammersteinModel::identity() {
    HammersteinModel model;
    model.linear_kernel = {1.0};
    model.quadratic_kernel = {0.0};
    model.quadratic_gain = 0.0;
    return model;
}

HammersteinModel HammersteinModel::default_device() {
    HammersteinModel model;
    model.linear_kernel = design_lowpass_fir(0.45, 32);
    model.quadratic_kernel = {1.0};
    model.quadratic_gain = 0.05;
    return model;
}

MsmChainConfig MsmChainConfig::default_chain() {
    // No extra band limit by default: a long sharp FIR correlates neighbouring
    // DFT bins of the short analysis segments, which reads as spurious phase
    // coupling at harmonic lines regardless of the quadratic gain. The device
    // kernels already roll off the top of the band. The mild noise floor keeps
    // the per-bin power estimates away from zero.
    MsmChainConfig config;
    config.noise_snr_db = 50.0;
    return config;
}

MsmChainConfig MsmChainConfig::identity_chain() {
    MsmChainConfig config;
    config.speaker = HammersteinModel::identity();
    config.mic = HammersteinModel::identity();
    config.noise_snr_db.reset();
    config.band_limit.reset();
    config.replay_order = 1;
    config.clip = false;
    return config;
}

std::vector<double> hammerstein_apply(std::span<const double> x, const HammersteinModel& model,
                                      bool clip) {
    auto y = convolve_causal(x, model.linear_kernel);
    if (model.quadratic_gain != 0.0 && !model.quadratic_kernel.empty()) {
        std::vector<double> squared(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) squared[i] = x[i] * x[i];
        const auto quad = convolve_causal(squared, model.quadratic_kernel);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += model.quadratic_gain * quad[i];
    }
    if (clip)
        for (double& s : y) s = std::clamp(s, -1.0, 1.0);
    return y;
}

std::vector<double> simulate_msm_chain(std::span<const double> x, const MsmChainConfig& config,
                                       std::uint64_t seed) {
    if (config.replay_order != 1 && config.replay_order != 2)
        throw Error(ErrorKind::ParameterOutOfRange, "replay order must be 1 or 2");
    if (config.noise_snr_db && *config.noise_snr_db <= 0.0)
        throw Error(ErrorKind::ParameterOutOfRange, "noise SNR must be positive");

    std::vector<double> y(x.begin(), x.end());
    for (int pass = 0; pass < config.replay_order; ++pass) {
        y = hammerstein_apply(y, config.speaker, config.clip);
        if (config.band_limit) {
            const auto fir = design_lowpass_fir(*config.band_limit, 63);
            y = convolve_causal(y, fir);
        }
        if (config.noise_snr_db && !y.empty())
            add_noise_at_snr(y, *config.noise_snr_db, derive_seed(seed, pass));
        y = hammerstein_apply(y, config.mic, config.clip);
    }
    return y;
}

std::vector<double> synthesize_qpc_signal(double f1, double f2, bool coupled, std::size_t n,
                                          std::uint64_t seed, std::size_t segment_len) {
    if (!(f1 > 0.0) || !(f2 > 0.0) || !(f1 + f2 < 0.5))
        throw Error(ErrorKind::FrequencyOutOfRange,
                    "need 0 < f1, 0 < f2, f1 + f2 < 0.5");
    if (segment_len == 0)
        throw Error(ErrorKind::InvalidArgument, "segment length must be positive");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    const double f3 = f1 + f2;
    constexpr double kAmp = 0.3;

    std::vector<double> x(n);
    for (std::size_t start = 0; start < n; start += segment_len) {
        const double t1 = phase(rng);
        const double t2 = phase(rng);
        const double t3 = coupled ? t1 + t2 : phase(rng);
        const std::size_t stop = std::min(n, start + segment_len);
        for (std::size_t i = start; i < stop; ++i) {
            const double t = static_cast<double>(i);
            x[i] = kAmp * std::cos(kTwoPi * f1 * t + t1) + kAmp * std::cos(kTwoPi * f2 * t + t2) +
                   kAmp * std::cos(kTwoPi * f3 * t + t3);
        }
    }
    return x;
}

std::vector<double> synthesize_speech_like(double f0, int harmonics, double noise_mix,
                                           std::size_t n, std::uint64_t seed) {
    if (!(f0 > 0.0) || harmonics < 1 || !(f0 * harmonics < 0.5))
        throw Error(ErrorKind::ParameterOutOfRange, "need f0 > 0 and f0 * harmonics < 0.5");
    if (noise_mix < 0.0 || noise_mix > 1.0)
        throw Error(ErrorKind::ParameterOutOfRange, "noise mix must be in [0, 1]");
    if (n == 0) return {};

    std::mt19937_64 rng(seed);
    // Narrow amplitude range keeps every harmonic line well above the noise
    // bed for any seed; intermodulation products of those lines are what the
    // downstream nonlinearity tests have to resolve.
    std::uniform_real_distribution<double> amp(0.8, 1.0);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::exponential_distribution<double> expo(1.0);

    std::vector<double> amps(static_cast<std::size_t>(harmonics));
    std::vector<double> phases(static_cast<std::size_t>(harmonics));
    for (int h = 0; h < harmonics; ++h) {
        amps[static_cast<std::size_t>(h)] = amp(rng) / (h + 1);
        phases[static_cast<std::size_t>(h)] = phase(rng);
    }

    std::vector<double> voiced(n, 0.0);
    double voiced_peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int h = 0; h < harmonics; ++h)
            s += amps[static_cast<std::size_t>(h)] *
                 std::cos(kTwoPi * f0 * (h + 1) * static_cast<double>(i) +
                          phases[static_cast<std::size_t>(h)]);
        voiced[i] = s;
        voiced_peak = std::max(voiced_peak, std::abs(s));
    }

    // Exponential noise is skewed, so the fixture stays non-Gaussian even at
    // high mix ratios. Mean removal keeps the signal zero-centered.
    std::vector<double> noise(n, 0.0);
    double noise_rms = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        noise[i] = expo(rng) - 1.0;
        noise_rms += noise[i] * noise[i];
    }
    noise_rms = std::sqrt(noise_rms / static_cast<double>(n));

    std::vector<double> x(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = voiced_peak > 0.0 ? voiced[i] / voiced_peak : 0.0;
        const double w = noise_rms > 0.0 ? noise[i] / noise_rms : 0.0;
        x[i] = (1.0 - noise_mix) * v + noise_mix * w;
        peak = std::max(peak, std::abs(x[i]));
    }
    if (peak > 0.0)
        for (double& s : x) s *= 0.9 / peak;
    return x;
}

std::vector<double> design_lowpass_fir(double cutoff, std::size_t taps) {
    if (!(cutoff > 0.0) || !(cutoff < 0.5))
        throw Error(ErrorKind::ParameterOutOfRange, "cutoff must be in (0, 0.5)");
    if (taps == 0)
        throw Error(ErrorKind::ParameterOutOfRange, "tap count must be positive");

    const double center = (static_cast<double>(taps) - 1.0) / 2.0;
    std::vector<double> h(taps);
    double sum = 0.0;
    for (std::size_t i = 0; i < taps; ++i) {
        const double t = static_cast<double>(i) - center;
        const double arg = kTwoPi * cutoff * t;
        const double sinc = t == 0.0 ? 1.0 : std::sin(arg) / arg;
        const double hamming =
            taps == 1 ? 1.0
                      : 0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(i) /
                                               (static_cast<double>(taps) - 1.0));
        h[i] = 2.0 * cutoff * sinc * hamming;
        sum += h[i];
    }
    // unit DC gain
    for (double& tap : h) tap /= sum;
    return h;
}

MsmChainConfig parse_chain_config(const std::string& text) {
    MsmChainConfig config = MsmChainConfig::identity_chain();
    std::stringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::InvalidArgument, "expected key=value, got: " + line);

        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "speaker.g1") {
            config.speaker.linear_kernel = parse_tap_list(value, key);
        } else if (key == "speaker.g2") {
            config.speaker.quadratic_kernel = parse_tap_list(value, key);
        } else if (key == "speaker.qgain") {
            config.speaker.quadratic_gain = parse_number(value, key);
        } else if (key == "mic.g1") {
            config.mic.linear_kernel = parse_tap_list(value, key);
        } else if (key == "mic.g2") {
            config.mic.quadratic_kernel = parse_tap_list(value, key);
        } else if (key == "mic.qgain") {
            config.mic.quadratic_gain = parse_number(value, key);
        } else if (key == "snr_db") {
            const double snr = parse_number(value, key);
            if (snr <= 0.0)
                throw Error(ErrorKind::ParameterOutOfRange, "snr_db must be positive");
            config.noise_snr_db = snr;
        } else if (key == "band_limit") {
            const double cutoff = parse_number(value, key);
            if (!(cutoff > 0.0) || !(cutoff < 0.5))
                throw Error(ErrorKind::ParameterOutOfRange, "band_limit must be in (0, 0.5)");
            config.band_limit = cutoff;
        } else if (key == "order") {
            const double order = parse_number(value, key);
            if (order != 1.0 && order != 2.0)
                throw Error(ErrorKind::ParameterOutOfRange, "order must be 1 or 2");
            config.replay_order = static_cast<int>(order);
        } else if (key == "clip") {
            if (value == "1" || value == "true") {
                config.clip = true;
            } else if (value == "0" || value == "false") {
                config.clip = false;
            } else {
                throw Error(ErrorKind::InvalidArgument, "clip must be 0/1/true/false");
            }
        } else {
            throw Error(ErrorKind::InvalidArgument, "unknown chain config key: " + key);
        }
    }
    return config;
}

MsmChainConfig read_chain_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::NotFound, "cannot open chain config: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_chain_config(buffer.str());
}

std::string format_chain_config(const MsmChainConfig& config) {
    std::string out;
    char buf[64];
    out += "speaker.g1=" + format_tap_list(config.speaker.linear_kernel) + "\n";
    out += "speaker.g2=" + format_tap_list(config.speaker.quadratic_kernel) + "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", config.speaker.quadratic_gain);
    out += std::string("speaker.qgain=") + buf + "\n";
    out += "mic.g1=" + format_tap_list(config.mic.linear_kernel) + "\n";
    out += "mic.g2=" + format_tap_list(config.mic.quadratic_kernel) + "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", config.mic.quadratic_gain);
    out += std::string("mic.qgain=") + buf + "\n";
    if (config.noise_snr_db) {
        std::snprintf(buf, sizeof(buf), "%.17g", *config.noise_snr_db);
        out += std::string("snr_db=") + buf + "\n";
    }
    if (config.band_limit) {
        std::snprintf(buf, sizeof(buf), "%.17g", *config.band_limit);
        out += std::string("band_limit=") + buf + "\n";
    }
    out += "order=" + std::to_string(config.replay_order) + "\n";
    out += std::string("clip=") + (config.clip ? "1" : "0") + "\n";
    return out;
}

} // namespace hosa
