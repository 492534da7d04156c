#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qhd {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using IntVector = std::vector<long long>;

/// Dense row-major matrix. Only what the lattice code needs.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T & fill = T()) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static auto identity(std::size_t n) -> Matrix
    {
        Matrix m(n, n, T(0));
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

    auto rows() const -> std::size_t { return rows_; }
    auto cols() const -> std::size_t { return cols_; }

    auto operator()(std::size_t r, std::size_t c) -> T & { return data_[r * cols_ + c]; }
    auto operator()(std::size_t r, std::size_t c) const -> const T & { return data_[r * cols_ + c]; }

    auto row(std::size_t r) -> std::span<T> { return {data_.data() + r * cols_, cols_}; }
    auto row(std::size_t r) const -> std::span<const T> { return {data_.data() + r * cols_, cols_}; }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap((*this)(a, c), (*this)(b, c));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t r = 0; r < rows_; ++r)
            std::swap((*this)(r, a), (*this)(r, b));
    }

    friend auto operator==(const Matrix &, const Matrix &) -> bool = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <typename T, typename U>
auto convert(const Matrix<U> & m) -> Matrix<T>
{
    Matrix<T> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = T(m(i, j));
    return out;
}

auto multiply(const Matrix<Integer> & a, const Matrix<Integer> & b) -> Matrix<Integer>;

/// Canonical "a/b" form in lowest terms (denominator always printed).
auto to_string(const Rational & q) -> std::string;
auto to_string(const Integer & z) -> std::string;

/// Accepts "a/b" or a plain integer; throws std::invalid_argument otherwise.
auto parse_rational(std::string_view text) -> Rational;

/// Representative of q mod 1 in [0, 1).
auto mod_one(const Rational & q) -> Rational;

auto is_perfect_square(const Integer & z) -> bool;

auto to_long(const Integer & z) -> long long;

auto dot(std::span<const Rational> a, std::span<const Rational> b) -> Rational;

} // namespace qhd
