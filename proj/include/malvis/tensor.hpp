#ifndef MALVIS_TENSOR_HPP
#define MALVIS_TENSOR_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "malvis/common.hpp"

namespace malvis::nn {

using Scalar = double;
using Index = Eigen::Index;
using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
using RowMat =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;

inline Index shape_product(std::span<const Index> shape) {
    Index n = 1;
    for (Index d : shape) n *= d;
    return n;
}

std::string shape_to_string(std::span<const Index> shape);

// Dense n-dimensional array of doubles, row-major, with an optional
// gradient buffer of the same length. The substrate for every network.
struct Tensor {
    std::vector<Index> shape;
    Array data;
    std::optional<Array> grad;

    Tensor() = default;
    Tensor(std::vector<Index> s, Array d) : shape(std::move(s)), data(std::move(d)) {
        check();
    }

    static Tensor zeros(std::vector<Index> shape) {
        Tensor t;
        t.data = Array::Zero(shape_product(shape));
        t.shape = std::move(shape);
        return t;
    }

    Index size() const { return data.size(); }
    Index rank() const { return static_cast<Index>(shape.size()); }
    Index dim(std::size_t i) const { return shape[i]; }

    void check() const {
        for (Index d : shape)
            if (d <= 0)
                throw StageError("tensor has non-positive dimension: " +
                                 shape_to_string(shape));
        if (data.size() != shape_product(shape))
            throw StageError("tensor data length does not match shape " +
                             shape_to_string(shape));
        if (grad && grad->size() != data.size())
            throw StageError("tensor gradient length does not match data");
    }

    void ensure_grad() {
        if (!grad) grad = Array::Zero(data.size());
    }

    void zero_grad() {
        if (grad) grad->setZero();
    }

    // Reinterpret the flat buffer as a (rows x cols) row-major matrix.
    MatMap as_matrix(Index rows, Index cols) {
        return MatMap(data.data(), rows, cols);
    }
    ConstMatMap as_matrix(Index rows, Index cols) const {
        return ConstMatMap(data.data(), rows, cols);
    }
};

}  // namespace malvis::nn

#endif  // MALVIS_TENSOR_HPP
