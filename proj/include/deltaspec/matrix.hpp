#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace deltaspec {

/// Dense square matrix of doubles, row-major. Sized for the N <= 64 center
/// counts this library targets; no expression templates.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < n_ && j < n_);
        return data_[i * n_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < n_ && j < n_);
        return data_[i * n_ + j];
    }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
    std::span<const double> data() const { return data_; }

    double max_abs() const;
    double frobenius() const;
    /// Largest |M_ij - M_ji| relative to max_abs(); zero for an empty matrix.
    double asymmetry() const;

    Matrix transpose() const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator*(double s) const;

    std::vector<double> apply(std::span<const double> v) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace deltaspec
