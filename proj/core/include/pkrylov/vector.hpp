#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pkrylov {

/// Contiguous real64 vector. Holds solution, residual, search directions and
/// Krylov basis vectors.
class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(std::size_t len, double fill = 0.0) : data_(len, fill) {}
    DenseVector(std::initializer_list<double> init) : data_(init) {}
    explicit DenseVector(std::vector<double> data) : data_(std::move(data)) {}

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<double> span() noexcept { return data_; }
    std::span<const double> span() const noexcept { return data_; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    const std::vector<double>& values() const noexcept { return data_; }

    friend bool operator==(const DenseVector&, const DenseVector&) = default;

private:
    std::vector<double> data_;
};

}  // namespace pkrylov
