#pragma once

#include <filesystem>
#include <vector>

namespace debatekit {

struct AudioBuffer {
    std::vector<double> samples;  // mono, [-1, 1]
    int sample_rate_hz = 0;

    double duration_s() const {
        return sample_rate_hz > 0
                   ? static_cast<double>(samples.size()) / sample_rate_hz
                   : 0.0;
    }
};

/// Reads 16-bit PCM or 32-bit float WAV. Multi-channel input is downmixed by
/// averaging. Throws Error("malformed-wav") on anything else.
AudioBuffer read_wav(const std::filesystem::path& path);

/// Linear-interpolation resampling.
AudioBuffer resample_linear(const AudioBuffer& in, int target_rate_hz);

/// read_wav + resample to the analysis rate in one step.
AudioBuffer load_audio(const std::filesystem::path& path, int target_rate_hz);

void write_wav_pcm16(const std::filesystem::path& path,
                     const std::vector<double>& samples, int sample_rate_hz);

}  // namespace debatekit
