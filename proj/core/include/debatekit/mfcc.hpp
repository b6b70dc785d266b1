#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace debatekit {

/// Dense row-major matrix of doubles; just enough linear algebra for the
/// feature and classifier code.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
};

struct MfccConfig {
    int sample_rate_hz = 16000;
    double frame_len_s = 0.025;
    double hop_s = 0.010;
    int n_mfcc = 26;
    int n_mels = 40;
    int fft_size = 512;
    double preemphasis = 0.97;

    int frame_len() const;
    int hop_len() const;
    /// frame_len <= fft_size and n_mfcc <= n_mels must hold.
    void validate() const;
};

/// Triangular mel filterbank on FFT bin centers, HTK mel scale.
struct MelFilterbank {
    int n_bins = 0;                        // fft_size/2 + 1
    std::vector<double> center_hz;         // one per filter
    std::vector<std::vector<double>> weights;  // filter x bin

    static MelFilterbank make(const MfccConfig& cfg);
    std::vector<double> apply(std::span<const double> magnitude_spectrum) const;
};

/// In-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a);

/// Frames x n_mels log filterbank energies (pre-DCT stage, exposed so the
/// filterbank can be checked directly against tones).
Matrix filterbank_energies(std::span<const double> samples, const MfccConfig& cfg);

/// Frames x n_mfcc coefficients: per-frame pre-emphasis, Hamming window,
/// magnitude spectrum, mel filterbank, log floored at 1e-10, orthonormal
/// DCT-II. Throws Error("too-short-input") when the signal is shorter than
/// one frame.
Matrix extract_mfcc(std::span<const double> samples, const MfccConfig& cfg);

/// Per-coefficient standardization over the whole audio: (x - mean) /
/// (std + 1e-8), population std. Throws Error("too-few-frames") below 2 rows.
Matrix standard_scale(const Matrix& features);

struct FeatureBlock {
    Matrix features;  // block_frames x n_mfcc
    std::string video_id;
    double block_start_s = 0.0;
};

/// Non-overlapping runs of `frames_per_block` rows; the trailing partial run
/// is dropped.
std::vector<FeatureBlock> make_blocks(const Matrix& features,
                                      const std::string& video_id = "",
                                      std::size_t frames_per_block = 100,
                                      double block_len_s = 1.0);

}  // namespace debatekit
