#pragma once

#include "fpde/error.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace fpde {

// Dense row-major tensor (last index fastest).
template <class Scalar>
class BasicTensor {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using RowMajorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    BasicTensor() = default;
    explicit BasicTensor(std::vector<int> shape, Scalar fill = Scalar(0)) : shape_(std::move(shape))
    {
        for (int s : shape_)
            if (s < 1)
                throw DomainError("tensor extents must be positive");
        data_.assign(count(shape_), fill);
    }

    const std::vector<int>& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    int extent(int mode) const { return shape_.at(mode); }
    std::size_t size() const { return data_.size(); }

    std::vector<Scalar>& data() { return data_; }
    const std::vector<Scalar>& data() const { return data_; }
    Scalar& operator[](std::size_t i) { return data_[i]; }
    const Scalar& operator[](std::size_t i) const { return data_[i]; }

    std::size_t offset(const std::vector<int>& idx) const
    {
        std::size_t off = 0;
        for (std::size_t k = 0; k < shape_.size(); ++k)
            off = off * shape_[k] + idx[k];
        return off;
    }
    Scalar& at(const std::vector<int>& idx) { return data_[offset(idx)]; }
    const Scalar& at(const std::vector<int>& idx) const { return data_[offset(idx)]; }

    // Y = X x_mode A: contracts `mode` with the columns of A (A is rows x extent(mode)).
    template <class Derived>
    BasicTensor mode_product(int mode, const Eigen::MatrixBase<Derived>& A) const
    {
        if (A.cols() != extent(mode))
            throw DomainError("mode_product: matrix has " + std::to_string(A.cols()) + " columns, mode "
                              + std::to_string(mode) + " has extent " + std::to_string(extent(mode)));
        std::vector<int> out_shape = shape_;
        out_shape[mode] = static_cast<int>(A.rows());
        BasicTensor out(out_shape);
        const Eigen::Index outer = std::accumulate(shape_.begin(), shape_.begin() + mode, Eigen::Index(1),
                                                   std::multiplies<>());
        const Eigen::Index inner = std::accumulate(shape_.begin() + mode + 1, shape_.end(), Eigen::Index(1),
                                                   std::multiplies<>());
        const Eigen::Index n_in = extent(mode);
        const Eigen::Index n_out = A.rows();
        const Matrix Ad = A.template cast<Scalar>();
        for (Eigen::Index o = 0; o < outer; ++o) {
            Eigen::Map<const RowMajorMatrix> src(data_.data() + o * n_in * inner, n_in, inner);
            Eigen::Map<RowMajorMatrix> dst(out.data_.data() + o * n_out * inner, n_out, inner);
            dst.noalias() = Ad * src;
        }
        return out;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto& v : data_)
            m = std::max(m, static_cast<double>(std::abs(v)));
        return m;
    }

    static std::size_t count(const std::vector<int>& shape)
    {
        return std::accumulate(shape.begin(), shape.end(), std::size_t(1),
                               [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
    }

private:
    std::vector<int> shape_;
    std::vector<Scalar> data_;
};

using Tensor = BasicTensor<double>;
using ComplexTensor = BasicTensor<std::complex<double>>;

} // namespace fpde
