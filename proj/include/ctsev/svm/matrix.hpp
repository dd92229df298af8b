#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ctsev::svm {

// Row-major float feature matrix; one sample per row.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), values_(rows * cols, 0.0f) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<float> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        if (values_.size() != rows_ * cols_) throw std::invalid_argument("Matrix: value count does not match shape");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const float> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    std::span<float> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

    void append_row(std::span<const float> r) {
        if (rows_ == 0 && cols_ == 0) cols_ = r.size();
        if (r.size() != cols_) throw std::invalid_argument("Matrix: row length does not match column count");
        values_.insert(values_.end(), r.begin(), r.end());
        ++rows_;
    }

    // Copy of the given rows, in the given order.
    Matrix select(std::span<const std::size_t> indices) const {
        Matrix out;
        out.cols_ = cols_;
        out.values_.reserve(indices.size() * cols_);
        for (std::size_t i : indices) {
            const auto r = row(i);
            out.values_.insert(out.values_.end(), r.begin(), r.end());
        }
        out.rows_ = indices.size();
        return out;
    }

    std::span<const float> values() const noexcept { return values_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<float> values_;
};

}  // namespace ctsev::svm
