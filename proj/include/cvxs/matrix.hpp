#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cvxs {

/// Dense row-major matrix of doubles. All numeric code in the project works
/// in 64-bit floating point.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    /// New matrix holding the given rows of this one, in the given order.
    Matrix gather_rows(std::span<const std::size_t> indices) const {
        Matrix out(indices.size(), cols_);
        for (std::size_t r = 0; r < indices.size(); ++r) {
            const auto src = row(indices[r]);
            std::copy(src.begin(), src.end(), out.row(r).begin());
        }
        return out;
    }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace cvxs
