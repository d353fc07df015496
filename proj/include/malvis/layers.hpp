#ifndef MALVIS_LAYERS_HPP
#define MALVIS_LAYERS_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "malvis/tensor.hpp"

namespace malvis::nn {

enum class LayerKind : int {
    Conv2d,
    MaxPool2d,
    Dense,
    Relu,
    LeakyRelu,
    Sigmoid,
    Softmax,
    Flatten,
    Upsample,
};

std::string to_string(LayerKind kind);
LayerKind parse_layer_kind(std::string_view text);

// Declarative layer description; networks are built from a list of
// these and they round-trip through checkpoints.
struct LayerSpec {
    LayerKind kind = LayerKind::Relu;
    int in_channels = 0;   // conv2d
    int out_channels = 0;  // conv2d
    int kernel_size = 3;   // conv2d; padding is (kernel_size - 1) / 2
    int stride = 1;        // conv2d
    int pool_size = 2;     // maxpool2d
    int pool_stride = 2;   // maxpool2d
    int in_features = 0;   // dense
    int out_features = 0;  // dense
    Scalar negative_slope = 0.2;  // leaky_relu

    static LayerSpec conv2d(int in_ch, int out_ch, int kernel = 3,
                            int stride = 1);
    static LayerSpec maxpool2d(int size = 2, int stride = 2);
    static LayerSpec dense(int in, int out);
    static LayerSpec relu();
    static LayerSpec leaky_relu(Scalar slope = 0.2);
    static LayerSpec sigmoid();
    static LayerSpec softmax();
    static LayerSpec flatten();
    static LayerSpec upsample();  // nearest-neighbor 2x

    void validate() const;
};

// Trainable tensor with a stable name; names order the checkpoint blob.
struct Parameter {
    std::string name;
    Tensor value;  // grad always allocated
};

class Layer {
public:
    virtual ~Layer() = default;
    virtual LayerSpec spec() const = 0;
    virtual Tensor forward(const Tensor& input) = 0;
    virtual Tensor backward(const Tensor& output_grad) = 0;
    virtual std::vector<Parameter*> parameters() { return {}; }
};

// Feed-forward stack with reverse-mode gradients. forward caches the
// per-layer activations backward consumes; backward accumulates into
// each parameter's grad buffer and returns the input gradient.
class Network {
public:
    Network() = default;
    Network(std::vector<LayerSpec> specs, std::uint64_t init_seed);

    Tensor forward(const Tensor& input);
    // Full-chain backprop from the output gradient.
    Tensor backward(const Tensor& output_grad);
    // Backprop for a fused softmax + cross-entropy head: the gradient is
    // taken with respect to the logits, so the final Softmax layer is
    // skipped. Requires the last layer to be Softmax.
    Tensor backward_from_logits(const Tensor& logit_grad);

    std::vector<Parameter*> parameters();
    void zero_grad();
    std::size_t layer_count() const { return layers_.size(); }
    const std::vector<LayerSpec>& specs() const { return specs_; }

    // Checkpoint: <base>.json architecture descriptor plus <base>.params
    // raw little-endian doubles ordered by (layer index, parameter name
    // lexicographic, row-major).
    void save(const std::filesystem::path& base) const;
    static Network load(const std::filesystem::path& base);

private:
    Tensor backward_impl(const Tensor& grad, std::size_t skip_trailing);

    std::vector<LayerSpec> specs_;
    std::vector<std::unique_ptr<Layer>> layers_;
    std::vector<Index> last_output_shape_;
    bool forward_done_ = false;
};

}  // namespace malvis::nn

#endif  // MALVIS_LAYERS_HPP
