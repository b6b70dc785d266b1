#include "debatekit/mfcc.hpp"

#include "debatekit/util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace debatekit {

int MfccConfig::frame_len() const {
    return static_cast<int>(std::lround(frame_len_s * sample_rate_hz));
}

int MfccConfig::hop_len() const {
    return static_cast<int>(std::lround(hop_s * sample_rate_hz));
}

void MfccConfig::validate() const {
    if (sample_rate_hz <= 0 || frame_len() <= 0 || hop_len() <= 0) {
        throw Error("invalid-config", "nonpositive sample rate, frame, or hop");
    }
    if (frame_len() > fft_size) {
        throw Error("invalid-config", "frame length exceeds fft_size");
    }
    if (n_mfcc > n_mels) {
        throw Error("invalid-config", "n_mfcc exceeds n_mels");
    }
    if ((fft_size & (fft_size - 1)) != 0) {
        throw Error("invalid-config", "fft_size must be a power of two");
    }
}

namespace {

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

}  // namespace

MelFilterbank MelFilterbank::make(const MfccConfig& cfg) {
    MelFilterbank fb;
    fb.n_bins = cfg.fft_size / 2 + 1;

    const double mel_lo = hz_to_mel(0.0);
    const double mel_hi = hz_to_mel(cfg.sample_rate_hz / 2.0);
    std::vector<double> hz(static_cast<std::size_t>(cfg.n_mels) + 2);
    for (std::size_t k = 0; k < hz.size(); ++k) {
        const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(k) /
                                        static_cast<double>(cfg.n_mels + 1);
        hz[k] = mel_to_hz(mel);
    }

    fb.weights.assign(static_cast<std::size_t>(cfg.n_mels),
                      std::vector<double>(static_cast<std::size_t>(fb.n_bins), 0.0));
    fb.center_hz.resize(static_cast<std::size_t>(cfg.n_mels));
    const double bin_hz = static_cast<double>(cfg.sample_rate_hz) / cfg.fft_size;
    for (int k = 0; k < cfg.n_mels; ++k) {
        const double lo = hz[static_cast<std::size_t>(k)];
        const double c = hz[static_cast<std::size_t>(k) + 1];
        const double hi = hz[static_cast<std::size_t>(k) + 2];
        fb.center_hz[static_cast<std::size_t>(k)] = c;
        for (int i = 0; i < fb.n_bins; ++i) {
            const double f = i * bin_hz;
            double w = 0.0;
            if (f > lo && f <= c) {
                w = (f - lo) / (c - lo);
            } else if (f > c && f < hi) {
                w = (hi - f) / (hi - c);
            }
            fb.weights[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = w;
        }
    }
    return fb;
}

std::vector<double> MelFilterbank::apply(std::span<const double> magnitude_spectrum) const {
    std::vector<double> out(weights.size(), 0.0);
    for (std::size_t k = 0; k < weights.size(); ++k) {
        double acc = 0.0;
        const auto& w = weights[k];
        for (std::size_t i = 0; i < w.size() && i < magnitude_spectrum.size(); ++i) {
            acc += w[i] * magnitude_spectrum[i];
        }
        out[k] = acc;
    }
    return out;
}

void fft_radix2(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw Error("invalid-argument", "fft size must be a power of two");
    }
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

namespace {

struct FrameLayout {
    std::size_t n_frames;
    int frame_len;
    int hop_len;
};

FrameLayout layout_frames(std::size_t n_samples, const MfccConfig& cfg) {
    cfg.validate();
    const int w = cfg.frame_len();
    const int h = cfg.hop_len();
    if (n_samples < static_cast<std::size_t>(w)) {
        throw Error("too-short-input",
                    "need at least " + std::to_string(w) + " samples, got " +
                        std::to_string(n_samples));
    }
    const std::size_t n_frames = (n_samples - static_cast<std::size_t>(w)) /
                                     static_cast<std::size_t>(h) + 1;
    return {n_frames, w, h};
}

/// log mel energies for one frame; `frame` holds raw samples of frame_len.
void frame_log_energies(std::span<const double> frame, const MfccConfig& cfg,
                        const MelFilterbank& fb, std::span<const double> window,
                        std::vector<std::complex<double>>& fft_buf,
                        std::vector<double>& spectrum, std::span<double> out) {
    const std::size_t w = frame.size();
    fft_buf.assign(static_cast<std::size_t>(cfg.fft_size), {0.0, 0.0});
    for (std::size_t i = 0; i < w; ++i) {
        // per-frame pre-emphasis keeps frames independent of their context,
        // so hop-aligned shifts reproduce rows exactly
        const double emphasized = i > 0 ? frame[i] - cfg.preemphasis * frame[i - 1]
                                        : frame[0] * (1.0 - cfg.preemphasis);
        fft_buf[i] = emphasized * window[i];
    }
    fft_radix2(fft_buf);

    spectrum.resize(static_cast<std::size_t>(cfg.fft_size) / 2 + 1);
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        spectrum[i] = std::abs(fft_buf[i]);
    }
    const auto energies = fb.apply(spectrum);
    for (std::size_t k = 0; k < energies.size(); ++k) {
        out[k] = std::log(std::max(energies[k], 1e-10));
    }
}

std::vector<double> hamming(std::size_t w) {
    std::vector<double> window(w);
    for (std::size_t i = 0; i < w; ++i) {
        window[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                           static_cast<double>(w - 1));
    }
    return window;
}

}  // namespace

Matrix filterbank_energies(std::span<const double> samples, const MfccConfig& cfg) {
    const auto [n_frames, w, h] = layout_frames(samples.size(), cfg);
    const MelFilterbank fb = MelFilterbank::make(cfg);
    const auto window = hamming(static_cast<std::size_t>(w));

    Matrix out(n_frames, static_cast<std::size_t>(cfg.n_mels));
    std::vector<std::complex<double>> fft_buf;
    std::vector<double> spectrum;
    for (std::size_t f = 0; f < n_frames; ++f) {
        frame_log_energies(samples.subspan(f * static_cast<std::size_t>(h),
                                           static_cast<std::size_t>(w)),
                           cfg, fb, window, fft_buf, spectrum, out.row(f));
    }
    return out;
}

Matrix extract_mfcc(std::span<const double> samples, const MfccConfig& cfg) {
    const Matrix logmel = filterbank_energies(samples, cfg);

    // orthonormal DCT-II over the mel axis
    const auto m = static_cast<std::size_t>(cfg.n_mels);
    const auto n_out = static_cast<std::size_t>(cfg.n_mfcc);
    Matrix dct(n_out, m);
    for (std::size_t k = 0; k < n_out; ++k) {
        const double scale = k == 0 ? std::sqrt(1.0 / static_cast<double>(m))
                                    : std::sqrt(2.0 / static_cast<double>(m));
        for (std::size_t j = 0; j < m; ++j) {
            dct.at(k, j) = scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                                            (2.0 * static_cast<double>(j) + 1.0) /
                                            (2.0 * static_cast<double>(m)));
        }
    }

    Matrix out(logmel.rows, n_out);
    for (std::size_t f = 0; f < logmel.rows; ++f) {
        for (std::size_t k = 0; k < n_out; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                acc += dct.at(k, j) * logmel.at(f, j);
            }
            out.at(f, k) = acc;
        }
    }
    return out;
}

Matrix standard_scale(const Matrix& features) {
    if (features.rows < 2) {
        throw Error("too-few-frames", "standard scaling needs at least 2 frames");
    }
    Matrix out(features.rows, features.cols);
    for (std::size_t c = 0; c < features.cols; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < features.rows; ++r) mean += features.at(r, c);
        mean /= static_cast<double>(features.rows);
        double var = 0.0;
        for (std::size_t r = 0; r < features.rows; ++r) {
            const double d = features.at(r, c) - mean;
            var += d * d;
        }
        var /= static_cast<double>(features.rows);
        const double denom = std::sqrt(var) + 1e-8;
        for (std::size_t r = 0; r < features.rows; ++r) {
            out.at(r, c) = (features.at(r, c) - mean) / denom;
        }
    }
    return out;
}

std::vector<FeatureBlock> make_blocks(const Matrix& features, const std::string& video_id,
                                      std::size_t frames_per_block, double block_len_s) {
    std::vector<FeatureBlock> blocks;
    const std::size_t n = features.rows / frames_per_block;
    blocks.reserve(n);
    for (std::size_t b = 0; b < n; ++b) {
        FeatureBlock block;
        block.video_id = video_id;
        block.block_start_s = static_cast<double>(b) * block_len_s;
        block.features = Matrix(frames_per_block, features.cols);
        for (std::size_t r = 0; r < frames_per_block; ++r) {
            for (std::size_t c = 0; c < features.cols; ++c) {
                block.features.at(r, c) = features.at(b * frames_per_block + r, c);
            }
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

}  // namespace debatekit
