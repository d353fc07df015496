#ifndef MALVIS_LOSSES_HPP
#define MALVIS_LOSSES_HPP

#include <span>

#include "malvis/tensor.hpp"

namespace malvis::nn {

struct LossValue {
    Scalar value = 0;
    Tensor grad;
};

// Softmax cross-entropy over class probabilities of shape
// [batch, classes]. The loss is the batch mean of -log p[target]; the
// gradient is taken with respect to the logits, (p - onehot) / batch,
// for use with Network::backward_from_logits.
LossValue cross_entropy(const Tensor& probs, std::span<const int> targets);

// Binary cross-entropy on predictions of shape [batch, 1] (or [batch])
// against a single 0/1 target shared by the batch. Predictions are
// clamped to [1e-7, 1 - 1e-7]; the gradient is with respect to the
// predictions.
LossValue binary_cross_entropy(const Tensor& preds, Scalar target);

}  // namespace malvis::nn

#endif  // MALVIS_LOSSES_HPP
