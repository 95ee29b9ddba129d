#include "hosa/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hosa/errors.hpp"

namespace hosa {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}

std::uint16_t read_u16(const unsigned char* p) {
    return std::uint16_t(p[0] | p[1] << 8);
}

} // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        throw Error(ErrorKind::NotFound, path.string());

    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::NotFound, path.string());

    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error(ErrorKind::MalformedHeader, path.string() + ": not a RIFF/WAVE file");

    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
    bool have_fmt = false;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* chunk = bytes.data() + pos;
        std::uint32_t chunk_size = read_u32(chunk + 4);
        std::size_t body = pos + 8;
        if (body + chunk_size > bytes.size())
            throw Error(ErrorKind::MalformedHeader, path.string() + ": truncated chunk");

        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (chunk_size < 16)
                throw Error(ErrorKind::MalformedHeader, path.string() + ": short fmt chunk");
            format = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            sample_rate = read_u32(bytes.data() + body + 4);
            bits_per_sample = read_u16(bytes.data() + body + 14);
            if (format == kFormatExtensible) {
                // Subformat GUID starts with the base format tag.
                if (chunk_size < 40)
                    throw Error(ErrorKind::MalformedHeader,
                                path.string() + ": short extensible fmt chunk");
                format = read_u16(bytes.data() + body + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = chunk_size;
        }
        pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr)
        throw Error(ErrorKind::MalformedHeader, path.string() + ": missing fmt or data chunk");
    if (channels == 0 || sample_rate == 0)
        throw Error(ErrorKind::MalformedHeader, path.string() + ": bad fmt fields");

    const bool pcm16 = format == kFormatPcm && bits_per_sample == 16;
    const bool float32 = format == kFormatIeeeFloat && bits_per_sample == 32;
    if (!pcm16 && !float32)
        throw Error(ErrorKind::UnsupportedEncoding,
                    path.string() + ": only PCM16 and float32 are supported");

    const std::size_t bytes_per_sample = bits_per_sample / 8;
    const std::size_t stride = bytes_per_sample * channels;
    const std::size_t n_frames = data_size / stride;

    AudioBuffer buf;
    buf.sample_rate_hz = static_cast<int>(sample_rate);
    buf.samples.resize(n_frames);
    const double channel_scale = 1.0 / channels;
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
            const unsigned char* p = data + i * stride + c * bytes_per_sample;
            if (pcm16) {
                std::int16_t v = static_cast<std::int16_t>(p[0] | p[1] << 8);
                acc += v / 32768.0;
            } else {
                float v;
                std::memcpy(&v, p, 4);
                acc += v;
            }
        }
        buf.samples[i] = acc * channel_scale;
    }
    return buf;
}

void write_wav_pcm16(const std::filesystem::path& path, const AudioBuffer& buf) {
    if (buf.sample_rate_hz <= 0)
        throw Error(ErrorKind::InvalidArgument, "sample rate must be positive");

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());

    const std::uint32_t n = static_cast<std::uint32_t>(buf.samples.size());
    const std::uint32_t data_size = n * 2;
    const std::uint32_t rate = static_cast<std::uint32_t>(buf.sample_rate_hz);
    const std::uint32_t byte_rate = rate * 2;

    auto put_u32 = [&](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
        file.write(reinterpret_cast<const char*>(b), 4);
    };
    auto put_u16 = [&](std::uint16_t v) {
        unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
        file.write(reinterpret_cast<const char*>(b), 2);
    };

    file.write("RIFF", 4);
    put_u32(36 + data_size);
    file.write("WAVE", 4);
    file.write("fmt ", 4);
    put_u32(16);
    put_u16(kFormatPcm);
    put_u16(1);  // mono
    put_u32(rate);
    put_u32(byte_rate);
    put_u16(2);   // block align
    put_u16(16);  // bits per sample
    file.write("data", 4);
    put_u32(data_size);

    for (double s : buf.samples) {
        // Scale symmetric to the reader's 1/32768 so a PCM16 round trip is
        // sample-exact; +1.0 saturates at the int16 ceiling.
        const double clamped = std::clamp(s, -1.0, 1.0);
        const long q = std::clamp(std::lrint(clamped * 32768.0), -32768L, 32767L);
        put_u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    if (!file) throw Error(ErrorKind::IoFailure, "write failed: " + path.string());
}

FrameSequence frame_signal(std::span<const double> samples, std::size_t frame_len,
                           double overlap_fraction, int source_rate_hz) {
    if (frame_len < 2)
        throw Error(ErrorKind::InvalidArgument, "frame length must be >= 2");
    if (overlap_fraction < 0.0 || overlap_fraction >= 1.0)
        throw Error(ErrorKind::InvalidArgument, "overlap must lie in [0, 1)");
    if (samples.size() < frame_len)
        throw Error(ErrorKind::InputTooShort, "signal shorter than one frame");

    FrameSequence seq;
    seq.frame_len = frame_len;
    seq.hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(frame_len * (1.0 - overlap_fraction))));
    seq.source_rate_hz = source_rate_hz;

    const std::size_t count = (samples.size() - frame_len) / seq.hop + 1;
    seq.frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double* start = samples.data() + i * seq.hop;
        seq.frames.emplace_back(start, start + frame_len);
    }
    return seq;
}

FrameSequence frame_signal(const AudioBuffer& buf, std::size_t frame_len,
                           double overlap_fraction) {
    return frame_signal(std::span<const double>(buf.samples), frame_len, overlap_fraction,
                        buf.sample_rate_hz);
}

double rms_db(std::span<const double> samples) {
    if (samples.empty()) return kEnergyFloorDb;
    double acc = 0.0;
    for (double s : samples) acc += s * s;
    const double rms = std::sqrt(acc / samples.size());
    if (rms <= 0.0) return kEnergyFloorDb;
    return std::max(kEnergyFloorDb, 20.0 * std::log10(rms));
}

FrameActivity gate_silence(const FrameSequence& frames, double silence_threshold_db) {
    if (frames.frames.empty())
        throw Error(ErrorKind::InvalidArgument, "empty frame sequence");

    FrameActivity activity;
    activity.active.reserve(frames.count());
    activity.energy_db.reserve(frames.count());
    for (const auto& frame : frames.frames) {
        const double db = rms_db(frame);
        activity.energy_db.push_back(db);
        activity.active.push_back(db >= silence_threshold_db);
    }
    return activity;
}

std::size_t FrameActivity::active_count() const {
    return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

} // namespace hosa
