#pragma once

#include "debatekit/mfcc.hpp"
#include "debatekit/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace debatekit {

struct ConvBlockSpec {
    int out_channels = 16;
    int kernel = 3;       // odd; same zero padding
    double dropout = 0.1;
};

/// 1-D convolutional stack over the time axis: per block conv + ReLU +
/// max-pool(2) + dropout, then one dense sigmoid unit.
struct ShoutNetSpec {
    int input_frames = 100;
    int input_coeffs = 26;
    std::vector<ConvBlockSpec> blocks = {
        {16, 3, 0.1}, {16, 3, 0.1}, {32, 3, 0.1}, {32, 3, 0.1}};

    std::size_t param_count() const;
    int output_frames() const;  // time length after all poolings
};

struct TrainingMeta {
    int epochs = 0;
    std::uint32_t seed = 0;
    std::vector<double> loss_curve;  // mean train BCE per epoch
};

class ShoutModel {
public:
    ShoutModel() = default;
    explicit ShoutModel(ShoutNetSpec spec);  // zero-initialized weights

    static ShoutModel random_init(const ShoutNetSpec& spec, std::uint32_t seed);

    const ShoutNetSpec& spec() const { return spec_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    TrainingMeta& meta() { return meta_; }
    const TrainingMeta& meta() const { return meta_; }

    /// Deterministic inference probability. Throws Error("shape-mismatch")
    /// unless the block is input_frames x input_coeffs.
    double predict(const Matrix& block) const;

    /// BCE loss for one sample with gradient accumulated into grad (same
    /// layout as params). When rng is non-null, dropout masks are sampled and
    /// applied; the returned gradient is exact for those masks.
    double loss_and_grad(const Matrix& block, double label, std::span<double> grad,
                         std::mt19937* rng) const;

    std::string serialize() const;  // JSON container, float32 tensors
    static ShoutModel deserialize(const std::string& bytes);
    void save(const std::filesystem::path& path) const;
    static ShoutModel load(const std::filesystem::path& path);

private:
    ShoutNetSpec spec_;
    std::vector<double> params_;
    TrainingMeta meta_;
};

struct ShoutTrainOptions {
    int epochs = 30;
    int batch_size = 32;
    double learning_rate = 1e-3;
    std::uint32_t seed = 0;
    ShoutNetSpec spec;
};

/// Adam on mean BCE. Deterministic for a fixed seed. Throws
/// Error("single-class-labels") when labels are constant and
/// Error("non-finite-loss") if the loss diverges.
ShoutModel train_shout_model(const std::vector<FeatureBlock>& blocks,
                             const std::vector<int>& labels,
                             const ShoutTrainOptions& opts);

double predict_shout(const ShoutModel& model, const FeatureBlock& block);

/// Majority-vote relabeling over a centered window, then maximal runs of
/// positive seconds merged into [start, end) segments. Truncated edge windows
/// scale the vote requirement proportionally (ceil).
std::vector<std::pair<double, double>> smooth_segments(const std::vector<int>& per_second_labels,
                                                       int window = 5, int min_votes = 3);

/// Sum of segment lengths over the video duration.
double shouting_fraction(const std::vector<std::pair<double, double>>& segments,
                         double duration_s);

/// Overlapped speech duration over total speech duration; 0 when there is no
/// speech.
double overlap_fraction(const std::vector<TranscriptSegment>& segments);

}  // namespace debatekit
