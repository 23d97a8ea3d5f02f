#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sato/coeffs.hpp"
#include "sato/errors.hpp"
#include "sato/series.hpp"

namespace sato {

/// Dense row-major matrix over a commutative ring-like T.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T()) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) fail(ErrorKind::InvalidArgument, "ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1L);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same(a, b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] + b.data_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same(a, b);
        Matrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = a.data_[k] - b.data_[k];
        return r;
    }
    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.data_) x = -x;
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) fail(ErrorKind::InvalidArgument, "matrix shape mismatch in product");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& x = a(i, k);
                if (is_zero_entry(x)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    if (is_zero_entry(b(k, j))) continue;
                    r(i, j) = r(i, j) + x * b(k, j);
                }
            }
        return r;
    }
    friend Matrix operator*(const CycScalar& s, const Matrix& a) {
        Matrix r = a;
        for (auto& x : r.data_) x = s * x;
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    template <class F>
    auto map(F&& f) const {
        using U = decltype(f(std::declval<const T&>()));
        Matrix<U> r(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;

    static void check_same(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::InvalidArgument, "matrix shape mismatch");
    }
    static bool is_zero_entry(const T& x) {
        if constexpr (std::is_same_v<T, Series>) return x.is_exact_zero();
        else return x.is_zero();
    }
};

using ScalarMatrix = Matrix<CycScalar>;
using SeriesMatrix = Matrix<Series>;

inline ScalarMatrix lift(const ScalarMatrix& m, int order) {
    return m.map([order](const CycScalar& c) { return c.lift(order); });
}
inline SeriesMatrix lift(const SeriesMatrix& m, int order) {
    return m.map([order](const Series& s) { return s.lift(order); });
}

inline int field_order(const SeriesMatrix& m) {
    int o = 1;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) o = common_order(o, m(i, j).field_order());
    return o;
}

inline SeriesMatrix to_series(const ScalarMatrix& m) {
    return m.map([](const CycScalar& c) { return Series(c); });
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> row_reduce(ScalarMatrix& a) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t p = row;
        while (p < a.rows() && a(p, col).is_zero()) ++p;
        if (p == a.rows()) continue;
        if (p != row)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
        const CycScalar inv = a(row, col).inverse();
        for (std::size_t j = col; j < a.cols(); ++j) a(row, j) = a(row, j) * inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, col).is_zero()) continue;
            const CycScalar f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j) a(i, j) = a(i, j) - f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

/// Basis of the right kernel {v : a v = 0}.
inline std::vector<std::vector<CycScalar>> kernel(ScalarMatrix a) {
    auto pivots = row_reduce(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<CycScalar>> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<CycScalar> v(a.cols());
        v[free] = CycScalar(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline ScalarMatrix inverse(const ScalarMatrix& a) {
    if (!a.square()) fail(ErrorKind::InvalidArgument, "inverse of a non-square matrix");
    const std::size_t n = a.rows();
    ScalarMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = CycScalar(1);
    }
    auto pivots = row_reduce(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) fail(ErrorKind::DivisionByZero, "matrix is singular");
    ScalarMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
    return r;
}

/// Derivative of every entry.
inline SeriesMatrix derivative(const SeriesMatrix& m) {
    return m.map([](const Series& s) { return derivative(s); });
}

/// Coefficient matrix at exponent numerator num.
inline ScalarMatrix coefficient_matrix(const SeriesMatrix& m, long num) {
    return m.map([num](const Series& s) { return s.coeff(num); });
}

}  // namespace sato
