#include "malvis/losses.hpp"

#include <cmath>

namespace malvis::nn {

LossValue cross_entropy(const Tensor& probs, std::span<const int> targets) {
    if (probs.rank() != 2)
        throw StageError("cross_entropy: expected [batch, classes], got " +
                         shape_to_string(probs.shape));
    const Index n = probs.dim(0), k = probs.dim(1);
    if (static_cast<Index>(targets.size()) != n)
        throw StageError("cross_entropy: target count does not match batch");

    LossValue out;
    out.grad = Tensor::zeros(probs.shape);
    const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);
    for (Index i = 0; i < n; ++i) {
        const int t = targets[static_cast<std::size_t>(i)];
        if (t < 0 || t >= k)
            throw StageError("cross_entropy: target class " +
                             std::to_string(t) + " out of range");
        auto row = probs.data.segment(i * k, k);
        const Scalar sum = row.sum();
        if (std::abs(sum - Scalar(1)) > 1e-6)
            throw StageError(
                "cross_entropy: probabilities do not sum to 1 (got " +
                std::to_string(sum) + ")");
        const Scalar p = std::max(row[t], Scalar(1e-12));
        out.value += -std::log(p) * inv_n;
        out.grad.data.segment(i * k, k) = row * inv_n;
        out.grad.data[i * k + t] -= inv_n;
    }
    return out;
}

LossValue binary_cross_entropy(const Tensor& preds, Scalar target) {
    if (target != Scalar(0) && target != Scalar(1))
        throw StageError("binary_cross_entropy: target must be 0 or 1");
    const bool ok_shape =
        preds.rank() == 1 || (preds.rank() == 2 && preds.dim(1) == 1);
    if (!ok_shape)
        throw StageError("binary_cross_entropy: expected [batch, 1], got " +
                         shape_to_string(preds.shape));

    constexpr Scalar eps = 1e-7;
    const Index n = preds.dim(0);
    const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);

    LossValue out;
    out.grad = Tensor::zeros(preds.shape);
    for (Index i = 0; i < n; ++i) {
        const Scalar p =
            std::clamp(preds.data[i], eps, Scalar(1) - eps);
        out.value += -(target * std::log(p) +
                       (Scalar(1) - target) * std::log(Scalar(1) - p)) *
                     inv_n;
        out.grad.data[i] =
            ((p - target) / (p * (Scalar(1) - p))) * inv_n;
    }
    return out;
}

}  // namespace malvis::nn
