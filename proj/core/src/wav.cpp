#include "debatekit/wav.hpp"

#include "debatekit/util.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace debatekit {

namespace {

template <typename T>
T read_le(const unsigned char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    static_assert(std::endian::native == std::endian::little,
                  "WAV reader assumes a little-endian host");
    return v;
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
    const std::string raw = read_file(path);
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
    const std::size_t n = raw.size();

    if (n < 44 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0) {
        throw Error("malformed-wav", path.string() + ": not a RIFF/WAVE file");
    }

    int channels = 0;
    int rate = 0;
    int bits = 0;
    int format = 0;
    const unsigned char* data = nullptr;
    std::size_t data_len = 0;

    std::size_t off = 12;
    while (off + 8 <= n) {
        const std::uint32_t chunk_len = read_le<std::uint32_t>(p + off + 4);
        const unsigned char* body = p + off + 8;
        if (off + 8 + chunk_len > n) break;
        if (std::memcmp(p + off, "fmt ", 4) == 0 && chunk_len >= 16) {
            format = read_le<std::uint16_t>(body);
            channels = read_le<std::uint16_t>(body + 2);
            rate = static_cast<int>(read_le<std::uint32_t>(body + 4));
            bits = read_le<std::uint16_t>(body + 14);
        } else if (std::memcmp(p + off, "data", 4) == 0) {
            data = body;
            data_len = chunk_len;
        }
        off += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }

    if (channels <= 0 || rate <= 0 || data == nullptr) {
        throw Error("malformed-wav", path.string() + ": missing fmt/data chunk");
    }

    const bool pcm16 = format == 1 && bits == 16;
    const bool f32 = format == 3 && bits == 32;
    if (!pcm16 && !f32) {
        throw Error("malformed-wav", path.string() + ": only 16-bit PCM and float32 supported");
    }

    const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
    const std::size_t frame_bytes = bytes_per_sample * static_cast<std::size_t>(channels);
    const std::size_t frames = data_len / frame_bytes;

    AudioBuffer out;
    out.sample_rate_hz = rate;
    out.samples.resize(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (int c = 0; c < channels; ++c) {
            const unsigned char* s = data + f * frame_bytes + bytes_per_sample * static_cast<std::size_t>(c);
            if (pcm16) {
                acc += read_le<std::int16_t>(s) / 32768.0;
            } else {
                acc += read_le<float>(s);
            }
        }
        out.samples[f] = acc / channels;
    }
    return out;
}

AudioBuffer resample_linear(const AudioBuffer& in, int target_rate_hz) {
    if (in.sample_rate_hz == target_rate_hz || in.samples.empty()) {
        AudioBuffer out = in;
        out.sample_rate_hz = target_rate_hz;
        return out;
    }
    const double ratio = static_cast<double>(in.sample_rate_hz) / target_rate_hz;
    const auto out_len = static_cast<std::size_t>(
        std::floor(static_cast<double>(in.samples.size() - 1) / ratio)) + 1;

    AudioBuffer out;
    out.sample_rate_hz = target_rate_hz;
    out.samples.resize(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
        const double pos = i * ratio;
        const auto lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, in.samples.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        out.samples[i] = in.samples[lo] * (1.0 - frac) + in.samples[hi] * frac;
    }
    return out;
}

AudioBuffer load_audio(const std::filesystem::path& path, int target_rate_hz) {
    return resample_linear(read_wav(path), target_rate_hz);
}

void write_wav_pcm16(const std::filesystem::path& path,
                     const std::vector<double>& samples, int sample_rate_hz) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("write-failed", path.string());

    const std::uint32_t data_len = static_cast<std::uint32_t>(samples.size() * 2);
    auto put16 = [&](std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
    auto put32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };

    out.write("RIFF", 4);
    put32(36 + data_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put32(16);
    put16(1);  // PCM
    put16(1);  // mono
    put32(static_cast<std::uint32_t>(sample_rate_hz));
    put32(static_cast<std::uint32_t>(sample_rate_hz * 2));
    put16(2);
    put16(16);
    out.write("data", 4);
    put32(data_len);
    for (double s : samples) {
        const double clamped = std::clamp(s, -1.0, 1.0);
        put16(static_cast<std::uint16_t>(static_cast<std::int16_t>(
            std::lround(clamped * 32767.0))));
    }
}

}  // namespace debatekit
