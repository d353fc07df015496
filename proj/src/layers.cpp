#include "malvis/layers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "malvis/rng.hpp"

namespace malvis::nn {

std::string shape_to_string(std::span<const Index> shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

std::string to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv2d: return "conv2d";
        case LayerKind::MaxPool2d: return "maxpool2d";
        case LayerKind::Dense: return "dense";
        case LayerKind::Relu: return "relu";
        case LayerKind::LeakyRelu: return "leaky_relu";
        case LayerKind::Sigmoid: return "sigmoid";
        case LayerKind::Softmax: return "softmax";
        case LayerKind::Flatten: return "flatten";
        case LayerKind::Upsample: return "upsample";
    }
    throw ConfigError("unknown layer kind");
}

LayerKind parse_layer_kind(std::string_view text) {
    if (text == "conv2d") return LayerKind::Conv2d;
    if (text == "maxpool2d") return LayerKind::MaxPool2d;
    if (text == "dense") return LayerKind::Dense;
    if (text == "relu") return LayerKind::Relu;
    if (text == "leaky_relu") return LayerKind::LeakyRelu;
    if (text == "sigmoid") return LayerKind::Sigmoid;
    if (text == "softmax") return LayerKind::Softmax;
    if (text == "flatten") return LayerKind::Flatten;
    if (text == "upsample") return LayerKind::Upsample;
    throw ConfigError("unknown layer kind: " + std::string(text));
}

LayerSpec LayerSpec::conv2d(int in_ch, int out_ch, int kernel, int stride) {
    LayerSpec s;
    s.kind = LayerKind::Conv2d;
    s.in_channels = in_ch;
    s.out_channels = out_ch;
    s.kernel_size = kernel;
    s.stride = stride;
    return s;
}
LayerSpec LayerSpec::maxpool2d(int size, int stride) {
    LayerSpec s;
    s.kind = LayerKind::MaxPool2d;
    s.pool_size = size;
    s.pool_stride = stride;
    return s;
}
LayerSpec LayerSpec::dense(int in, int out) {
    LayerSpec s;
    s.kind = LayerKind::Dense;
    s.in_features = in;
    s.out_features = out;
    return s;
}
LayerSpec LayerSpec::relu() { return {LayerKind::Relu}; }
LayerSpec LayerSpec::leaky_relu(Scalar slope) {
    LayerSpec s;
    s.kind = LayerKind::LeakyRelu;
    s.negative_slope = slope;
    return s;
}
LayerSpec LayerSpec::sigmoid() { return {LayerKind::Sigmoid}; }
LayerSpec LayerSpec::softmax() { return {LayerKind::Softmax}; }
LayerSpec LayerSpec::flatten() { return {LayerKind::Flatten}; }
LayerSpec LayerSpec::upsample() { return {LayerKind::Upsample}; }

void LayerSpec::validate() const {
    switch (kind) {
        case LayerKind::Conv2d:
            if (in_channels < 1 || out_channels < 1)
                throw ConfigError("conv2d: channel counts must be >= 1");
            if (kernel_size < 1 || kernel_size % 2 == 0)
                throw ConfigError("conv2d: kernel size must be odd and >= 1");
            if (stride < 1) throw ConfigError("conv2d: stride must be >= 1");
            break;
        case LayerKind::MaxPool2d:
            if (pool_size < 1 || pool_stride < 1)
                throw ConfigError("maxpool2d: size and stride must be >= 1");
            break;
        case LayerKind::Dense:
            if (in_features < 1 || out_features < 1)
                throw ConfigError("dense: feature counts must be >= 1");
            break;
        default:
            break;
    }
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw StageError(msg);
}

std::string shape_msg(const char* layer, const std::string& expected,
                      std::span<const Index> actual) {
    return std::string(layer) + ": expected " + expected + ", got input " +
           shape_to_string(actual);
}

// ---------------------------------------------------------------- dense

class DenseLayer final : public Layer {
public:
    DenseLayer(const LayerSpec& spec, Rng& rng) : spec_(spec) {
        const Index in = spec.in_features, out = spec.out_features;
        weight_.name = "weight";
        weight_.value = Tensor::zeros({out, in});
        const Scalar bound = std::sqrt(6.0 / static_cast<Scalar>(in + out));
        for (Index i = 0; i < weight_.value.size(); ++i)
            weight_.value.data[i] = rng.uniform(-bound, bound);
        weight_.value.ensure_grad();
        bias_.name = "bias";
        bias_.value = Tensor::zeros({out});
        bias_.value.ensure_grad();
    }

    LayerSpec spec() const override { return spec_; }

    Tensor forward(const Tensor& x) override {
        require(x.rank() == 2 && x.dim(1) == spec_.in_features,
                shape_msg("dense",
                          "[batch, " + std::to_string(spec_.in_features) + "]",
                          x.shape));
        input_ = x;
        const Index n = x.dim(0);
        Tensor y = Tensor::zeros({n, spec_.out_features});
        auto y_m = y.as_matrix(n, spec_.out_features);
        y_m.noalias() =
            x.as_matrix(n, spec_.in_features) *
            weight_.value.as_matrix(spec_.out_features, spec_.in_features)
                .transpose();
        y_m.rowwise() += Eigen::Map<const Eigen::VectorXd>(
                             bias_.value.data.data(), spec_.out_features)
                             .transpose();
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        const Index n = input_.dim(0);
        auto dy_m = dy.as_matrix(n, spec_.out_features);
        auto x_m = input_.as_matrix(n, spec_.in_features);
        MatMap dw(weight_.value.grad->data(), spec_.out_features,
                  spec_.in_features);
        dw.noalias() += dy_m.transpose() * x_m;
        Eigen::Map<Eigen::VectorXd>(bias_.value.grad->data(),
                                    spec_.out_features) +=
            dy_m.colwise().sum().transpose();

        Tensor dx = Tensor::zeros(input_.shape);
        dx.as_matrix(n, spec_.in_features).noalias() =
            dy_m * weight_.value.as_matrix(spec_.out_features,
                                           spec_.in_features);
        return dx;
    }

    std::vector<Parameter*> parameters() override {
        return {&weight_, &bias_};
    }

private:
    LayerSpec spec_;
    Parameter weight_, bias_;
    Tensor input_;
};

// ---------------------------------------------------------------- conv2d

class Conv2dLayer final : public Layer {
public:
    Conv2dLayer(const LayerSpec& spec, Rng& rng) : spec_(spec) {
        const Index k = spec.kernel_size;
        const Index fan_in = spec.in_channels * k * k;
        const Index fan_out = spec.out_channels * k * k;
        kernel_.name = "kernel";
        kernel_.value = Tensor::zeros(
            {spec.out_channels, spec.in_channels, k, k});
        const Scalar bound =
            std::sqrt(6.0 / static_cast<Scalar>(fan_in + fan_out));
        for (Index i = 0; i < kernel_.value.size(); ++i)
            kernel_.value.data[i] = rng.uniform(-bound, bound);
        kernel_.value.ensure_grad();
        bias_.name = "bias";
        bias_.value = Tensor::zeros({spec.out_channels});
        bias_.value.ensure_grad();
    }

    LayerSpec spec() const override { return spec_; }

    Tensor forward(const Tensor& x) override {
        require(x.rank() == 4 && x.dim(1) == spec_.in_channels,
                shape_msg("conv2d",
                          "[batch, " + std::to_string(spec_.in_channels) +
                              ", h, w]",
                          x.shape));
        input_ = x;
        const Index n = x.dim(0), h = x.dim(2), w = x.dim(3);
        const Index k = spec_.kernel_size, s = spec_.stride;
        const Index pad = (k - 1) / 2;
        const Index ho = (h + 2 * pad - k) / s + 1;
        const Index wo = (w + 2 * pad - k) / s + 1;
        require(ho >= 1 && wo >= 1,
                "conv2d: input too small for kernel, input " +
                    shape_to_string(x.shape));

        Tensor y = Tensor::zeros({n, spec_.out_channels, ho, wo});
        RowMat cols(spec_.in_channels * k * k, ho * wo);
        auto kernel_m = kernel_.value.as_matrix(spec_.out_channels,
                                                spec_.in_channels * k * k);
        for (Index img = 0; img < n; ++img) {
            im2col(x, img, cols);
            MatMap out(y.data.data() + img * spec_.out_channels * ho * wo,
                       spec_.out_channels, ho * wo);
            out.noalias() = kernel_m * cols;
            out.colwise() += Eigen::Map<const Eigen::VectorXd>(
                bias_.value.data.data(), spec_.out_channels);
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        const Index n = input_.dim(0);
        const Index k = spec_.kernel_size;
        const Index ho = dy.dim(2), wo = dy.dim(3);

        Tensor dx = Tensor::zeros(input_.shape);
        RowMat cols(spec_.in_channels * k * k, ho * wo);
        RowMat dcols(spec_.in_channels * k * k, ho * wo);
        MatMap dkernel(kernel_.value.grad->data(), spec_.out_channels,
                       spec_.in_channels * k * k);
        auto kernel_m = kernel_.value.as_matrix(spec_.out_channels,
                                                spec_.in_channels * k * k);
        Eigen::Map<Eigen::VectorXd> dbias(bias_.value.grad->data(),
                                          spec_.out_channels);

        for (Index img = 0; img < n; ++img) {
            ConstMatMap dy_m(
                dy.data.data() + img * spec_.out_channels * ho * wo,
                spec_.out_channels, ho * wo);
            im2col(input_, img, cols);
            dkernel.noalias() += dy_m * cols.transpose();
            dbias += dy_m.rowwise().sum();
            dcols.noalias() = kernel_m.transpose() * dy_m;
            col2im(dcols, img, dx);
        }
        return dx;
    }

    std::vector<Parameter*> parameters() override {
        return {&kernel_, &bias_};
    }

private:
    void im2col(const Tensor& x, Index img, RowMat& cols) const {
        const Index h = x.dim(2), w = x.dim(3);
        const Index k = spec_.kernel_size, s = spec_.stride;
        const Index pad = (k - 1) / 2;
        const Index ho = (h + 2 * pad - k) / s + 1;
        const Index wo = (w + 2 * pad - k) / s + 1;
        const Scalar* base =
            x.data.data() + img * spec_.in_channels * h * w;
        for (Index c = 0; c < spec_.in_channels; ++c) {
            for (Index kh = 0; kh < k; ++kh) {
                for (Index kw = 0; kw < k; ++kw) {
                    const Index row = (c * k + kh) * k + kw;
                    Scalar* dst = cols.data() + row * ho * wo;
                    for (Index oh = 0; oh < ho; ++oh) {
                        const Index ih = oh * s - pad + kh;
                        if (ih < 0 || ih >= h) {
                            std::fill(dst, dst + wo, Scalar(0));
                            dst += wo;
                            continue;
                        }
                        const Scalar* src = base + (c * h + ih) * w;
                        for (Index ow = 0; ow < wo; ++ow) {
                            const Index iw = ow * s - pad + kw;
                            *dst++ = (iw < 0 || iw >= w) ? Scalar(0)
                                                         : src[iw];
                        }
                    }
                }
            }
        }
    }

    void col2im(const RowMat& dcols, Index img, Tensor& dx) const {
        const Index h = dx.dim(2), w = dx.dim(3);
        const Index k = spec_.kernel_size, s = spec_.stride;
        const Index pad = (k - 1) / 2;
        const Index ho = (h + 2 * pad - k) / s + 1;
        const Index wo = (w + 2 * pad - k) / s + 1;
        Scalar* base = dx.data.data() + img * spec_.in_channels * h * w;
        for (Index c = 0; c < spec_.in_channels; ++c) {
            for (Index kh = 0; kh < k; ++kh) {
                for (Index kw = 0; kw < k; ++kw) {
                    const Index row = (c * k + kh) * k + kw;
                    const Scalar* src = dcols.data() + row * ho * wo;
                    for (Index oh = 0; oh < ho; ++oh) {
                        const Index ih = oh * s - pad + kh;
                        if (ih < 0 || ih >= h) {
                            src += wo;
                            continue;
                        }
                        Scalar* dst = base + (c * h + ih) * w;
                        for (Index ow = 0; ow < wo; ++ow) {
                            const Index iw = ow * s - pad + kw;
                            if (iw >= 0 && iw < w) dst[iw] += src[ow];
                        }
                        src += wo;
                    }
                }
            }
        }
    }

    LayerSpec spec_;
    Parameter kernel_, bias_;
    Tensor input_;
};

// ------------------------------------------------------------- maxpool2d

class MaxPool2dLayer final : public Layer {
public:
    MaxPool2dLayer(const LayerSpec& spec) : spec_(spec) {}

    LayerSpec spec() const override { return spec_; }

    Tensor forward(const Tensor& x) override {
        require(x.rank() == 4,
                shape_msg("maxpool2d", "[batch, c, h, w]", x.shape));
        const Index p = spec_.pool_size, s = spec_.pool_stride;
        require(x.dim(2) >= p && x.dim(3) >= p,
                "maxpool2d: input smaller than pool window, input " +
                    shape_to_string(x.shape));
        in_shape_ = x.shape;
        const Index n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
        const Index ho = (h - p) / s + 1, wo = (w - p) / s + 1;
        Tensor y = Tensor::zeros({n, c, ho, wo});
        argmax_.resize(static_cast<std::size_t>(y.size()));

        Index out_idx = 0;
        for (Index img = 0; img < n; ++img) {
            for (Index ch = 0; ch < c; ++ch) {
                const Scalar* plane = x.data.data() + (img * c + ch) * h * w;
                for (Index oh = 0; oh < ho; ++oh) {
                    for (Index ow = 0; ow < wo; ++ow) {
                        Index best = (oh * s) * w + ow * s;
                        Scalar best_v = plane[best];
                        for (Index ph = 0; ph < p; ++ph) {
                            for (Index pw = 0; pw < p; ++pw) {
                                const Index idx =
                                    (oh * s + ph) * w + (ow * s + pw);
                                if (plane[idx] > best_v) {
                                    best_v = plane[idx];
                                    best = idx;
                                }
                            }
                        }
                        y.data[out_idx] = best_v;
                        argmax_[static_cast<std::size_t>(out_idx)] =
                            (img * c + ch) * h * w + best;
                        ++out_idx;
                    }
                }
            }
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx = Tensor::zeros(in_shape_);
        for (Index i = 0; i < dy.size(); ++i)
            dx.data[argmax_[static_cast<std::size_t>(i)]] += dy.data[i];
        return dx;
    }

private:
    LayerSpec spec_;
    std::vector<Index> in_shape_;
    std::vector<Index> argmax_;
};

// ----------------------------------------------------------- activations

class ReluLayer final : public Layer {
public:
    explicit ReluLayer(const LayerSpec& spec) : spec_(spec) {}
    LayerSpec spec() const override { return spec_; }

    Tensor forward(const Tensor& x) override {
        input_ = x;
        Tensor y = x;
        y.grad.reset();
        y.data = x.data.max(Scalar(0));
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx = Tensor::zeros(input_.shape);
        dx.data = (input_.data > Scalar(0)).select(dy.data, Scalar(0));
        return dx;
    }

private:
    LayerSpec spec_;
    Tensor input_;
};

class LeakyReluLayer final : public Layer {
public:
    explicit LeakyReluLayer(const LayerSpec& spec) : spec_(spec) {}
    LayerSpec spec() const override { return spec_; }

    Tensor forward(const Tensor& x) override {
        input_ = x;
        Tensor y = x;
        y.grad.reset();
        y.data = (x.data > Scalar(0))
                     .select(x.data, spec_.negative_slope * x.data);
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx = Tensor::zeros(input_.shape);
        dx.data = (input_.data > Scalar(0))
                      .select(dy.data, spec_.negative_slope * dy.data);
        return dx;
    }

private:
    LayerSpec spec_;
    Tensor input_;
};

class SigmoidLayer final : public Layer {
public:
    explicit SigmoidLayer(const LayerSpec& spec) : spec_(spec) {}
    LayerSpec spec() const override { return spec_; }

    Tensor forward(const Tensor& x) override {
        output_ = x;
        output_.grad.reset();
        output_.data = Scalar(1) / (Scalar(1) + (-x.data).exp());
        return output_;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx = Tensor::zeros(output_.shape);
        dx.data = dy.data * output_.data * (Scalar(1) - output_.data);
        return dx;
    }

private:
    LayerSpec spec_;
    Tensor output_;
};

class SoftmaxLayer final : public Layer {
public:
    explicit SoftmaxLayer(const LayerSpec& spec) : spec_(spec) {}
    LayerSpec spec() const override { return spec_; }

    Tensor forward(const Tensor& x) override {
        require(x.rank() == 2,
                shape_msg("softmax", "[batch, classes]", x.shape));
        const Index n = x.dim(0), k = x.dim(1);
        output_ = Tensor::zeros(x.shape);
        for (Index i = 0; i < n; ++i) {
            auto row = x.data.segment(i * k, k);
            Array shifted = row - row.maxCoeff();
            Array e = shifted.exp();
            output_.data.segment(i * k, k) = e / e.sum();
        }
        return output_;
    }

    Tensor backward(const Tensor& dy) override {
        const Index n = output_.dim(0), k = output_.dim(1);
        Tensor dx = Tensor::zeros(output_.shape);
        for (Index i = 0; i < n; ++i) {
            auto y = output_.data.segment(i * k, k);
            auto g = dy.data.segment(i * k, k);
            const Scalar dot = (y * g).sum();
            dx.data.segment(i * k, k) = y * (g - dot);
        }
        return dx;
    }

private:
    LayerSpec spec_;
    Tensor output_;
};

// -------------------------------------------------------- shape adapters

class FlattenLayer final : public Layer {
public:
    explicit FlattenLayer(const LayerSpec& spec) : spec_(spec) {}
    LayerSpec spec() const override { return spec_; }

    Tensor forward(const Tensor& x) override {
        require(x.rank() >= 2, shape_msg("flatten", "rank >= 2", x.shape));
        in_shape_ = x.shape;
        Tensor y;
        y.shape = {x.dim(0), x.size() / x.dim(0)};
        y.data = x.data;
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        Tensor dx;
        dx.shape = in_shape_;
        dx.data = dy.data;
        return dx;
    }

private:
    LayerSpec spec_;
    std::vector<Index> in_shape_;
};

class UpsampleLayer final : public Layer {
public:
    explicit UpsampleLayer(const LayerSpec& spec) : spec_(spec) {}
    LayerSpec spec() const override { return spec_; }

    Tensor forward(const Tensor& x) override {
        require(x.rank() == 4,
                shape_msg("upsample", "[batch, c, h, w]", x.shape));
        in_shape_ = x.shape;
        const Index n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
        Tensor y = Tensor::zeros({n, c, 2 * h, 2 * w});
        for (Index plane = 0; plane < n * c; ++plane) {
            const Scalar* src = x.data.data() + plane * h * w;
            Scalar* dst = y.data.data() + plane * 4 * h * w;
            for (Index r = 0; r < 2 * h; ++r) {
                const Scalar* src_row = src + (r / 2) * w;
                Scalar* dst_row = dst + r * 2 * w;
                for (Index col = 0; col < 2 * w; ++col)
                    dst_row[col] = src_row[col / 2];
            }
        }
        return y;
    }

    Tensor backward(const Tensor& dy) override {
        const Index n = in_shape_[0], c = in_shape_[1], h = in_shape_[2],
                    w = in_shape_[3];
        Tensor dx = Tensor::zeros(in_shape_);
        for (Index plane = 0; plane < n * c; ++plane) {
            const Scalar* src = dy.data.data() + plane * 4 * h * w;
            Scalar* dst = dx.data.data() + plane * h * w;
            for (Index r = 0; r < 2 * h; ++r) {
                const Scalar* src_row = src + r * 2 * w;
                Scalar* dst_row = dst + (r / 2) * w;
                for (Index col = 0; col < 2 * w; ++col)
                    dst_row[col / 2] += src_row[col];
            }
        }
        return dx;
    }

private:
    LayerSpec spec_;
    std::vector<Index> in_shape_;
};

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, Rng& rng) {
    spec.validate();
    switch (spec.kind) {
        case LayerKind::Conv2d:
            return std::make_unique<Conv2dLayer>(spec, rng);
        case LayerKind::MaxPool2d:
            return std::make_unique<MaxPool2dLayer>(spec);
        case LayerKind::Dense:
            return std::make_unique<DenseLayer>(spec, rng);
        case LayerKind::Relu: return std::make_unique<ReluLayer>(spec);
        case LayerKind::LeakyRelu:
            return std::make_unique<LeakyReluLayer>(spec);
        case LayerKind::Sigmoid:
            return std::make_unique<SigmoidLayer>(spec);
        case LayerKind::Softmax:
            return std::make_unique<SoftmaxLayer>(spec);
        case LayerKind::Flatten:
            return std::make_unique<FlattenLayer>(spec);
        case LayerKind::Upsample:
            return std::make_unique<UpsampleLayer>(spec);
    }
    throw ConfigError("unknown layer kind");
}

}  // namespace

// ----------------------------------------------------------------- Network

Network::Network(std::vector<LayerSpec> specs, std::uint64_t init_seed)
    : specs_(std::move(specs)) {
    layers_.reserve(specs_.size());
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        Rng rng(derive_seed(init_seed, "init", i));
        layers_.push_back(make_layer(specs_[i], rng));
    }
}

Tensor Network::forward(const Tensor& input) {
    input.check();
    Tensor activation = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        try {
            activation = layers_[i]->forward(activation);
        } catch (const StageError& err) {
            throw StageError("layer " + std::to_string(i) + ": " +
                             err.what());
        }
    }
    if (!activation.data.allFinite())
        throw StageError("non-finite values in forward output");
    forward_done_ = true;
    last_output_shape_ = activation.shape;
    return activation;
}

Tensor Network::backward_impl(const Tensor& grad, std::size_t skip_trailing) {
    if (!forward_done_)
        throw StageError("backward called before forward");
    if (grad.shape != last_output_shape_)
        throw StageError("backward: gradient shape " +
                         shape_to_string(grad.shape) +
                         " does not match last output " +
                         shape_to_string(last_output_shape_));
    Tensor g = grad;
    for (std::size_t i = layers_.size() - skip_trailing; i-- > 0;) {
        try {
            g = layers_[i]->backward(g);
        } catch (const StageError& err) {
            throw StageError("layer " + std::to_string(i) + ": " +
                             err.what());
        }
    }
    if (!g.data.allFinite())
        throw StageError("non-finite values in input gradient");
    for (Parameter* p : parameters())
        if (!p->value.grad->allFinite())
            throw StageError("non-finite gradient for parameter " + p->name);
    return g;
}

Tensor Network::backward(const Tensor& output_grad) {
    return backward_impl(output_grad, 0);
}

Tensor Network::backward_from_logits(const Tensor& logit_grad) {
    if (layers_.empty() || specs_.back().kind != LayerKind::Softmax)
        throw StageError(
            "backward_from_logits requires a trailing softmax layer");
    return backward_impl(logit_grad, 1);
}

std::vector<Parameter*> Network::parameters() {
    std::vector<Parameter*> out;
    for (auto& layer : layers_)
        for (Parameter* p : layer->parameters()) out.push_back(p);
    return out;
}

void Network::zero_grad() {
    for (Parameter* p : parameters()) p->value.zero_grad();
}

// -------------------------------------------------------------- checkpoint

namespace {

nlohmann::ordered_json spec_to_json(const LayerSpec& s) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(s.kind);
    switch (s.kind) {
        case LayerKind::Conv2d:
            j["in_channels"] = s.in_channels;
            j["out_channels"] = s.out_channels;
            j["kernel_size"] = s.kernel_size;
            j["stride"] = s.stride;
            break;
        case LayerKind::MaxPool2d:
            j["pool_size"] = s.pool_size;
            j["pool_stride"] = s.pool_stride;
            break;
        case LayerKind::Dense:
            j["in_features"] = s.in_features;
            j["out_features"] = s.out_features;
            break;
        case LayerKind::LeakyRelu:
            j["negative_slope"] = s.negative_slope;
            break;
        default:
            break;
    }
    return j;
}

LayerSpec spec_from_json(const nlohmann::json& j) {
    LayerSpec s;
    s.kind = parse_layer_kind(j.at("kind").get<std::string>());
    switch (s.kind) {
        case LayerKind::Conv2d:
            s.in_channels = j.at("in_channels").get<int>();
            s.out_channels = j.at("out_channels").get<int>();
            s.kernel_size = j.at("kernel_size").get<int>();
            s.stride = j.at("stride").get<int>();
            break;
        case LayerKind::MaxPool2d:
            s.pool_size = j.at("pool_size").get<int>();
            s.pool_stride = j.at("pool_stride").get<int>();
            break;
        case LayerKind::Dense:
            s.in_features = j.at("in_features").get<int>();
            s.out_features = j.at("out_features").get<int>();
            break;
        case LayerKind::LeakyRelu:
            s.negative_slope = j.at("negative_slope").get<Scalar>();
            break;
        default:
            break;
    }
    return s;
}

}  // namespace

void Network::save(const std::filesystem::path& base) const {
    static_assert(std::endian::native == std::endian::little,
                  "checkpoint blobs are little-endian");
    nlohmann::ordered_json arch;
    arch["format"] = "malvis-network-v1";
    arch["layers"] = nlohmann::ordered_json::array();
    for (const LayerSpec& s : specs_) arch["layers"].push_back(spec_to_json(s));

    std::ofstream json_out(base.string() + ".json", std::ios::binary);
    if (!json_out)
        throw StageError("cannot write checkpoint: " + base.string() +
                         ".json");
    json_out << arch.dump(2) << "\n";

    std::ofstream blob(base.string() + ".params", std::ios::binary);
    if (!blob)
        throw StageError("cannot write checkpoint: " + base.string() +
                         ".params");
    for (const auto& layer : layers_) {
        auto params = const_cast<Layer&>(*layer).parameters();
        std::sort(params.begin(), params.end(),
                  [](const Parameter* a, const Parameter* b) {
                      return a->name < b->name;
                  });
        for (const Parameter* p : params)
            blob.write(reinterpret_cast<const char*>(p->value.data.data()),
                       static_cast<std::streamsize>(p->value.size() *
                                                    sizeof(Scalar)));
    }
}

Network Network::load(const std::filesystem::path& base) {
    std::ifstream json_in(base.string() + ".json");
    if (!json_in)
        throw StageError("missing checkpoint: " + base.string() + ".json");
    const auto arch = nlohmann::json::parse(json_in);
    if (arch.value("format", "") != "malvis-network-v1")
        throw StageError("unrecognized checkpoint format in " +
                         base.string() + ".json");

    std::vector<LayerSpec> specs;
    for (const auto& j : arch.at("layers")) specs.push_back(spec_from_json(j));

    Network net(std::move(specs), /*init_seed=*/0);

    std::ifstream blob(base.string() + ".params", std::ios::binary);
    if (!blob)
        throw StageError("missing checkpoint: " + base.string() + ".params");
    for (auto& layer : net.layers_) {
        auto params = layer->parameters();
        std::sort(params.begin(), params.end(),
                  [](const Parameter* a, const Parameter* b) {
                      return a->name < b->name;
                  });
        for (Parameter* p : params) {
            blob.read(reinterpret_cast<char*>(p->value.data.data()),
                      static_cast<std::streamsize>(p->value.size() *
                                                   sizeof(Scalar)));
            if (blob.gcount() !=
                static_cast<std::streamsize>(p->value.size() * sizeof(Scalar)))
                throw StageError("truncated checkpoint blob: " +
                                 base.string() + ".params");
        }
    }
    blob.peek();
    if (!blob.eof())
        throw StageError("checkpoint blob larger than architecture: " +
                         base.string() + ".params");
    return net;
}

}  // namespace malvis::nn
