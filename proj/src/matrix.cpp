#include "deltaspec/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace deltaspec {

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double Matrix::frobenius() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double Matrix::asymmetry() const {
    const double scale = max_abs();
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst / scale;
}

Matrix Matrix::transpose() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("Matrix: size mismatch");
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double a = (*this)(i, k);
            for (std::size_t j = 0; j < n_; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("Matrix: size mismatch");
    Matrix r(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
    return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("Matrix: size mismatch");
    Matrix r(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
    return r;
}

Matrix Matrix::operator*(double s) const {
    Matrix r(*this);
    for (double& x : r.data_) x *= s;
    return r;
}

std::vector<double> Matrix::apply(std::span<const double> v) const {
    if (v.size() != n_) throw std::invalid_argument("Matrix: size mismatch");
    std::vector<double> r(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) r[i] = dot(row(i), v);
    return r;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace deltaspec
