// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace msp {

/// Dense row-major tensor. Images are CHW, batches NCHW, masks HW.
template <typename T>
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<int64_t> shape)
        : shape_(std::move(shape)), data_(checked_numel(shape_)) {}

    Tensor(std::vector<int64_t> shape, T value)
        : shape_(std::move(shape)), data_(checked_numel(shape_), value) {}

    static Tensor zeros(std::vector<int64_t> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<int64_t> shape, T value) { return Tensor(std::move(shape), value); }

    const std::vector<int64_t>& shape() const { return shape_; }
    int64_t ndim() const { return static_cast<int64_t>(shape_.size()); }
    int64_t dim(int i) const { return shape_.at(static_cast<size_t>(i)); }
    int64_t numel() const { return static_cast<int64_t>(data_.size()); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    T& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
    const T& operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

    // NCHW
    T& at(int64_t n, int64_t c, int64_t h, int64_t w) {
        return data_[static_cast<size_t>(((n * dim(1) + c) * dim(2) + h) * dim(3) + w)];
    }
    const T& at(int64_t n, int64_t c, int64_t h, int64_t w) const {
        return data_[static_cast<size_t>(((n * dim(1) + c) * dim(2) + h) * dim(3) + w)];
    }
    // CHW
    T& at3(int64_t c, int64_t h, int64_t w) {
        return data_[static_cast<size_t>((c * dim(1) + h) * dim(2) + w)];
    }
    const T& at3(int64_t c, int64_t h, int64_t w) const {
        return data_[static_cast<size_t>((c * dim(1) + h) * dim(2) + w)];
    }
    // HW
    T& at2(int64_t h, int64_t w) { return data_[static_cast<size_t>(h * dim(1) + w)]; }
    const T& at2(int64_t h, int64_t w) const { return data_[static_cast<size_t>(h * dim(1) + w)]; }

    void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    void reshape(std::vector<int64_t> shape) {
        if (checked_numel(shape) != numel())
            throw std::invalid_argument("Tensor::reshape: element count mismatch");
        shape_ = std::move(shape);
    }

    template <typename U>
    Tensor<U> cast() const {
        Tensor<U> out(shape_);
        for (int64_t i = 0; i < numel(); ++i) out[i] = static_cast<U>(data_[static_cast<size_t>(i)]);
        return out;
    }

private:
    static int64_t checked_numel(const std::vector<int64_t>& shape) {
        int64_t n = 1;
        for (int64_t d : shape) {
            if (d < 0) throw std::invalid_argument("Tensor: negative dimension");
            n *= d;
        }
        return n;
    }

    std::vector<int64_t> shape_;
    std::vector<T> data_;
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;
using MaskU8 = Tensor<uint8_t>;

inline std::string shape_str(const std::vector<int64_t>& s) {
    std::string out = "[";
    for (size_t i = 0; i < s.size(); ++i) {
        out += std::to_string(s[i]);
        if (i + 1 < s.size()) out += ",";
    }
    return out + "]";
}

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                                    " vs " + shape_str(b.shape()));
}

}  // namespace msp
