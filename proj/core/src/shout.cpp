#include "debatekit/shout.hpp"

#include "debatekit/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

namespace debatekit {

using nlohmann::json;

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Layout {
    struct Block {
        std::size_t w_off;   // [out][in][k]
        std::size_t b_off;   // [out]
        int in_channels;
        int out_channels;
        int kernel;
        int in_len;          // time length entering the conv
        int pooled_len;      // after max-pool(2)
        double dropout;
    };
    std::vector<Block> blocks;
    std::size_t dense_w_off;
    std::size_t dense_b_off;
    std::size_t flat_dim;
    std::size_t total;
};

Layout make_layout(const ShoutNetSpec& spec) {
    Layout l;
    std::size_t off = 0;
    int channels = spec.input_coeffs;
    int len = spec.input_frames;
    for (const auto& b : spec.blocks) {
        Layout::Block lb;
        lb.in_channels = channels;
        lb.out_channels = b.out_channels;
        lb.kernel = b.kernel;
        lb.in_len = len;
        lb.pooled_len = len / 2;
        lb.dropout = b.dropout;
        lb.w_off = off;
        off += static_cast<std::size_t>(b.out_channels) * static_cast<std::size_t>(channels) *
               static_cast<std::size_t>(b.kernel);
        lb.b_off = off;
        off += static_cast<std::size_t>(b.out_channels);
        l.blocks.push_back(lb);
        channels = b.out_channels;
        len = lb.pooled_len;
    }
    l.flat_dim = static_cast<std::size_t>(channels) * static_cast<std::size_t>(len);
    l.dense_w_off = off;
    off += l.flat_dim;
    l.dense_b_off = off;
    off += 1;
    l.total = off;
    return l;
}

// Channel-major activation plane: [channels][time].
struct Plane {
    int channels = 0;
    int len = 0;
    std::vector<double> v;

    Plane() = default;
    Plane(int c, int t) : channels(c), len(t), v(static_cast<std::size_t>(c) * t, 0.0) {}
    double& at(int c, int t) { return v[static_cast<std::size_t>(c) * len + t]; }
    double at(int c, int t) const { return v[static_cast<std::size_t>(c) * len + t]; }
};

struct BlockState {
    Plane pre;       // conv output before ReLU
    Plane pooled;    // after ReLU + pool (+ dropout when training)
    std::vector<int> argmax;       // per pooled cell, winning t index
    std::vector<double> dropmask;  // inverted-dropout scale per pooled cell
};

void conv_forward(const Layout::Block& lb, std::span<const double> params,
                  const Plane& in, Plane& out) {
    const int pad = lb.kernel / 2;
    out = Plane(lb.out_channels, lb.in_len);
    for (int o = 0; o < lb.out_channels; ++o) {
        const double bias = params[lb.b_off + static_cast<std::size_t>(o)];
        for (int t = 0; t < lb.in_len; ++t) {
            double acc = bias;
            for (int i = 0; i < lb.in_channels; ++i) {
                const std::size_t w_base =
                    lb.w_off + (static_cast<std::size_t>(o) * lb.in_channels + i) *
                                   static_cast<std::size_t>(lb.kernel);
                for (int k = 0; k < lb.kernel; ++k) {
                    const int src = t + k - pad;
                    if (src >= 0 && src < lb.in_len) {
                        acc += params[w_base + static_cast<std::size_t>(k)] * in.at(i, src);
                    }
                }
            }
            out.at(o, t) = acc;
        }
    }
}

double forward_impl(const Layout& layout, std::span<const double> params,
                    const Matrix& block, std::vector<BlockState>* states,
                    std::mt19937* rng, double* logit_out) {
    // input plane: channels = coefficients, time = frames
    Plane a(static_cast<int>(block.cols), static_cast<int>(block.rows));
    for (std::size_t t = 0; t < block.rows; ++t) {
        for (std::size_t c = 0; c < block.cols; ++c) {
            a.at(static_cast<int>(c), static_cast<int>(t)) = block.at(t, c);
        }
    }

    for (std::size_t bi = 0; bi < layout.blocks.size(); ++bi) {
        const auto& lb = layout.blocks[bi];
        BlockState st;
        conv_forward(lb, params, a, st.pre);

        st.pooled = Plane(lb.out_channels, lb.pooled_len);
        st.argmax.assign(static_cast<std::size_t>(lb.out_channels) * lb.pooled_len, 0);
        st.dropmask.assign(st.argmax.size(), 1.0);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int o = 0; o < lb.out_channels; ++o) {
            for (int t = 0; t < lb.pooled_len; ++t) {
                const double l = std::max(st.pre.at(o, 2 * t), 0.0);
                const double r = std::max(st.pre.at(o, 2 * t + 1), 0.0);
                const int win = r > l ? 2 * t + 1 : 2 * t;
                double val = std::max(l, r);
                const std::size_t cell = static_cast<std::size_t>(o) * lb.pooled_len + t;
                st.argmax[cell] = win;
                if (rng != nullptr && lb.dropout > 0.0) {
                    if (uni(*rng) < lb.dropout) {
                        st.dropmask[cell] = 0.0;
                        val = 0.0;
                    } else {
                        st.dropmask[cell] = 1.0 / (1.0 - lb.dropout);
                        val *= st.dropmask[cell];
                    }
                }
                st.pooled.at(o, t) = val;
            }
        }
        a = st.pooled;
        if (states != nullptr) states->push_back(std::move(st));
    }

    double logit = params[layout.dense_b_off];
    for (std::size_t i = 0; i < layout.flat_dim; ++i) {
        logit += params[layout.dense_w_off + i] * a.v[i];
    }
    if (logit_out != nullptr) *logit_out = logit;
    return sigmoid(logit);
}

}  // namespace

std::size_t ShoutNetSpec::param_count() const {
    return make_layout(*this).total;
}

int ShoutNetSpec::output_frames() const {
    int len = input_frames;
    for (std::size_t i = 0; i < blocks.size(); ++i) len /= 2;
    return len;
}

ShoutModel::ShoutModel(ShoutNetSpec spec) : spec_(std::move(spec)) {
    if (spec_.input_frames <= 0 || spec_.input_coeffs <= 0 || spec_.blocks.empty()) {
        throw Error("invalid-config", "shout net needs positive dims and >= 1 block");
    }
    for (const auto& b : spec_.blocks) {
        if (b.kernel <= 0 || b.kernel % 2 == 0 || b.out_channels <= 0 ||
            b.dropout < 0.0 || b.dropout >= 1.0) {
            throw Error("invalid-config", "bad conv block spec");
        }
    }
    if (spec_.output_frames() < 1) {
        throw Error("invalid-config", "too many poolings for the input length");
    }
    params_.assign(spec_.param_count(), 0.0);
}

ShoutModel ShoutModel::random_init(const ShoutNetSpec& spec, std::uint32_t seed) {
    ShoutModel m(spec);
    const Layout layout = make_layout(spec);
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (const auto& lb : layout.blocks) {
        const double fan_in = static_cast<double>(lb.in_channels) * lb.kernel;
        const double scale = std::sqrt(2.0 / fan_in);  // He init for ReLU
        const std::size_t w_count = static_cast<std::size_t>(lb.out_channels) *
                                    lb.in_channels * static_cast<std::size_t>(lb.kernel);
        for (std::size_t i = 0; i < w_count; ++i) {
            m.params_[lb.w_off + i] = scale * normal(rng);
        }
        // biases stay zero
    }
    const double scale = std::sqrt(1.0 / static_cast<double>(layout.flat_dim));
    for (std::size_t i = 0; i < layout.flat_dim; ++i) {
        m.params_[layout.dense_w_off + i] = scale * normal(rng);
    }
    return m;
}

double ShoutModel::predict(const Matrix& block) const {
    if (block.rows != static_cast<std::size_t>(spec_.input_frames) ||
        block.cols != static_cast<std::size_t>(spec_.input_coeffs)) {
        throw Error("shape-mismatch",
                    "expected " + std::to_string(spec_.input_frames) + "x" +
                        std::to_string(spec_.input_coeffs) + ", got " +
                        std::to_string(block.rows) + "x" + std::to_string(block.cols));
    }
    const Layout layout = make_layout(spec_);
    return forward_impl(layout, params_, block, nullptr, nullptr, nullptr);
}

double ShoutModel::loss_and_grad(const Matrix& block, double label, std::span<double> grad,
                                 std::mt19937* rng) const {
    if (block.rows != static_cast<std::size_t>(spec_.input_frames) ||
        block.cols != static_cast<std::size_t>(spec_.input_coeffs)) {
        throw Error("shape-mismatch", "bad block shape");
    }
    const Layout layout = make_layout(spec_);
    std::vector<BlockState> states;
    states.reserve(layout.blocks.size());
    double logit = 0.0;
    const double p = forward_impl(layout, params_, block, &states, rng, &logit);

    const double eps = 1e-12;
    const double loss = -(label * std::log(std::max(p, eps)) +
                          (1.0 - label) * std::log(std::max(1.0 - p, eps)));

    // dL/dlogit for BCE-with-sigmoid
    const double dlogit = p - label;

    // dense layer
    const Plane& last = states.back().pooled;
    grad[layout.dense_b_off] += dlogit;
    std::vector<double> da(layout.flat_dim);
    for (std::size_t i = 0; i < layout.flat_dim; ++i) {
        grad[layout.dense_w_off + i] += dlogit * last.v[i];
        da[i] = dlogit * params_[layout.dense_w_off + i];
    }

    // walk blocks backwards
    for (std::size_t bi = layout.blocks.size(); bi-- > 0;) {
        const auto& lb = layout.blocks[bi];
        const BlockState& st = states[bi];

        // through dropout + pool + relu into d(pre-activation)
        Plane dpre(lb.out_channels, lb.in_len);
        for (int o = 0; o < lb.out_channels; ++o) {
            for (int t = 0; t < lb.pooled_len; ++t) {
                const std::size_t cell = static_cast<std::size_t>(o) * lb.pooled_len + t;
                double g = da[cell] * st.dropmask[cell];
                const int win = st.argmax[cell];
                if (st.pre.at(o, win) > 0.0) {
                    dpre.at(o, win) += g;
                }
            }
        }

        // conv backward: weight grads and input grads
        const Plane* in_plane = nullptr;
        Plane input_plane;  // for block 0 rebuild the input
        if (bi == 0) {
            input_plane = Plane(static_cast<int>(block.cols), static_cast<int>(block.rows));
            for (std::size_t t = 0; t < block.rows; ++t) {
                for (std::size_t c = 0; c < block.cols; ++c) {
                    input_plane.at(static_cast<int>(c), static_cast<int>(t)) = block.at(t, c);
                }
            }
            in_plane = &input_plane;
        } else {
            in_plane = &states[bi - 1].pooled;
        }

        const int pad = lb.kernel / 2;
        std::vector<double> din;
        if (bi > 0) din.assign(static_cast<std::size_t>(lb.in_channels) * lb.in_len, 0.0);
        for (int o = 0; o < lb.out_channels; ++o) {
            for (int t = 0; t < lb.in_len; ++t) {
                const double g = dpre.at(o, t);
                if (g == 0.0) continue;
                grad[lb.b_off + static_cast<std::size_t>(o)] += g;
                for (int i = 0; i < lb.in_channels; ++i) {
                    const std::size_t w_base =
                        lb.w_off + (static_cast<std::size_t>(o) * lb.in_channels + i) *
                                       static_cast<std::size_t>(lb.kernel);
                    for (int k = 0; k < lb.kernel; ++k) {
                        const int src = t + k - pad;
                        if (src < 0 || src >= lb.in_len) continue;
                        grad[w_base + static_cast<std::size_t>(k)] += g * in_plane->at(i, src);
                        if (bi > 0) {
                            din[static_cast<std::size_t>(i) * lb.in_len + src] +=
                                g * params_[w_base + static_cast<std::size_t>(k)];
                        }
                    }
                }
            }
        }
        da = std::move(din);
    }
    return loss;
}

ShoutModel train_shout_model(const std::vector<FeatureBlock>& blocks,
                             const std::vector<int>& labels,
                             const ShoutTrainOptions& opts) {
    if (blocks.size() != labels.size() || blocks.empty()) {
        throw Error("invalid-argument", "blocks and labels must align and be nonempty");
    }
    const bool has0 = std::find(labels.begin(), labels.end(), 0) != labels.end();
    const bool has1 = std::find(labels.begin(), labels.end(), 1) != labels.end();
    if (!has0 || !has1) {
        throw Error("single-class-labels", "training labels contain a single class");
    }

    ShoutModel model = ShoutModel::random_init(opts.spec, opts.seed);
    auto& params = model.params();
    const std::size_t n_params = params.size();

    std::vector<double> m(n_params, 0.0), v(n_params, 0.0), grad(n_params, 0.0);
    const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    long step = 0;

    std::mt19937 shuffle_rng(opts.seed + 1);
    std::mt19937 dropout_rng(opts.seed + 2);
    std::vector<std::size_t> order(blocks.size());
    std::iota(order.begin(), order.end(), 0);

    model.meta().epochs = opts.epochs;
    model.meta().seed = opts.seed;

    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(opts.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(opts.batch_size));
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                const std::size_t idx = order[i];
                batch_loss += model.loss_and_grad(blocks[idx].features,
                                                  static_cast<double>(labels[idx]), grad,
                                                  &dropout_rng);
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            batch_loss *= inv;
            epoch_loss += batch_loss * static_cast<double>(end - start);
            if (!std::isfinite(batch_loss)) {
                throw Error("non-finite-loss", "loss diverged at epoch " +
                                                   std::to_string(epoch));
            }
            ++step;
            const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            for (std::size_t pi = 0; pi < n_params; ++pi) {
                const double g = grad[pi] * inv;
                m[pi] = beta1 * m[pi] + (1.0 - beta1) * g;
                v[pi] = beta2 * v[pi] + (1.0 - beta2) * g * g;
                params[pi] -= opts.learning_rate * (m[pi] / bc1) /
                              (std::sqrt(v[pi] / bc2) + adam_eps);
            }
        }
        model.meta().loss_curve.push_back(epoch_loss / static_cast<double>(order.size()));
    }
    return model;
}

double predict_shout(const ShoutModel& model, const FeatureBlock& block) {
    return model.predict(block.features);
}

std::vector<std::pair<double, double>> smooth_segments(const std::vector<int>& per_second_labels,
                                                       int window, int min_votes) {
    if (window <= 0 || window % 2 == 0) {
        throw Error("invalid-argument", "window must be odd and positive");
    }
    if (min_votes <= 0 || min_votes > window) {
        throw Error("invalid-argument", "min_votes must be in [1, window]");
    }
    const int n = static_cast<int>(per_second_labels.size());
    const int half = window / 2;
    std::vector<int> relabeled(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        const int size = hi - lo + 1;
        int votes = 0;
        for (int j = lo; j <= hi; ++j) votes += per_second_labels[static_cast<std::size_t>(j)];
        // truncated windows need proportionally fewer votes
        const int needed = static_cast<int>(
            std::ceil(static_cast<double>(min_votes) * size / window - 1e-12));
        relabeled[static_cast<std::size_t>(i)] = votes >= needed ? 1 : 0;
    }

    std::vector<std::pair<double, double>> segments;
    int run_start = -1;
    for (int i = 0; i <= n; ++i) {
        const bool on = i < n && relabeled[static_cast<std::size_t>(i)] == 1;
        if (on && run_start < 0) run_start = i;
        if (!on && run_start >= 0) {
            segments.emplace_back(static_cast<double>(run_start), static_cast<double>(i));
            run_start = -1;
        }
    }
    return segments;
}

double shouting_fraction(const std::vector<std::pair<double, double>>& segments,
                         double duration_s) {
    if (!(duration_s > 0.0)) throw Error("zero-duration", "duration must be positive");
    double total = 0.0;
    for (const auto& [s, e] : segments) total += e - s;
    return total / duration_s;
}

double overlap_fraction(const std::vector<TranscriptSegment>& segments) {
    double speech = 0.0;
    double overlapped = 0.0;
    for (const auto& seg : segments) {
        speech += seg.duration();
        if (seg.overlapped) overlapped += seg.duration();
    }
    return speech > 0.0 ? overlapped / speech : 0.0;
}

namespace {

json tensor_json(const char* name, std::vector<std::size_t> shape,
                 std::span<const double> values) {
    std::vector<float> f32(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        f32[i] = static_cast<float>(values[i]);
    }
    json t;
    t["name"] = name;
    t["shape"] = shape;
    t["dtype"] = "float32-le";
    t["data_b64"] = base64_encode(reinterpret_cast<const unsigned char*>(f32.data()),
                                  f32.size() * sizeof(float));
    return t;
}

std::vector<double> tensor_values(const json& t, std::size_t expected) {
    const auto bytes = base64_decode(t.at("data_b64").get<std::string>());
    if (bytes.size() != expected * sizeof(float)) {
        throw Error("malformed-model", "tensor size mismatch");
    }
    std::vector<float> f32(expected);
    std::memcpy(f32.data(), bytes.data(), bytes.size());
    return {f32.begin(), f32.end()};
}

}  // namespace

std::string ShoutModel::serialize() const {
    json j;
    j["format"] = "debatekit-shout-model";
    j["version"] = 1;
    json spec;
    spec["input_frames"] = spec_.input_frames;
    spec["input_coeffs"] = spec_.input_coeffs;
    spec["blocks"] = json::array();
    for (const auto& b : spec_.blocks) {
        spec["blocks"].push_back(
            {{"out_channels", b.out_channels}, {"kernel", b.kernel}, {"dropout", b.dropout}});
    }
    j["spec"] = spec;
    j["training"] = {{"epochs", meta_.epochs},
                     {"seed", meta_.seed},
                     {"loss_curve", meta_.loss_curve}};
    j["tensors"] = json::array();
    j["tensors"].push_back(tensor_json("params", {params_.size()}, params_));
    return j.dump(2) + "\n";
}

ShoutModel ShoutModel::deserialize(const std::string& bytes) {
    json j = json::parse(bytes, nullptr, false);
    if (j.is_discarded() || j.value("format", "") != "debatekit-shout-model") {
        throw Error("malformed-model", "not a shout model container");
    }
    ShoutNetSpec spec;
    spec.input_frames = j.at("spec").at("input_frames").get<int>();
    spec.input_coeffs = j.at("spec").at("input_coeffs").get<int>();
    spec.blocks.clear();
    for (const auto& b : j.at("spec").at("blocks")) {
        spec.blocks.push_back({b.at("out_channels").get<int>(), b.at("kernel").get<int>(),
                               b.at("dropout").get<double>()});
    }
    ShoutModel m(spec);
    m.params_ = tensor_values(j.at("tensors").at(0), spec.param_count());
    if (j.contains("training")) {
        m.meta_.epochs = j["training"].value("epochs", 0);
        m.meta_.seed = j["training"].value("seed", 0u);
        if (j["training"].contains("loss_curve")) {
            m.meta_.loss_curve = j["training"]["loss_curve"].get<std::vector<double>>();
        }
    }
    return m;
}

void ShoutModel::save(const std::filesystem::path& path) const {
    write_file_atomic(path, serialize());
}

ShoutModel ShoutModel::load(const std::filesystem::path& path) {
    return deserialize(read_file(path));
}

}  // namespace debatekit
