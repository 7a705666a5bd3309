#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace ssg {

namespace detail {

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
T conjugate(const T& v) {
    if constexpr (is_complex<T>::value) {
        return std::conj(v);
    } else {
        return v;
    }
}

}  // namespace detail

/**
 * Row-major sparse matrix with exact zero pruning. Scalars are either exact
 * integers (relation checks) or complex doubles (linear combinations).
 */
template <class T>
class SparseMatrix {
public:
    using Row = std::map<std::size_t, T>;

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

    static SparseMatrix identity(std::size_t n) {
        SparseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, T(1));
        return m;
    }

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    const Row& row(std::size_t r) const { return rows_.at(r); }

    T get(std::size_t r, std::size_t c) const {
        const auto& row = rows_.at(r);
        auto it = row.find(c);
        return it == row.end() ? T(0) : it->second;
    }

    void set(std::size_t r, std::size_t c, T value) {
        check(r, c);
        if (value == T(0)) {
            rows_[r].erase(c);
        } else {
            rows_[r][c] = value;
        }
    }

    void add_to(std::size_t r, std::size_t c, T value) {
        check(r, c);
        auto& row = rows_[r];
        auto [it, fresh] = row.try_emplace(c, value);
        if (!fresh) it->second += value;
        if (it->second == T(0)) row.erase(it);
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& row : rows_) n += row.size();
        return n;
    }

    bool is_zero() const { return nonzeros() == 0; }

    T trace() const {
        T sum(0);
        for (std::size_t i = 0; i < rows_.size() && i < cols_; ++i) sum += get(i, i);
        return sum;
    }

    SparseMatrix adjoint() const {
        SparseMatrix out(cols_, rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            for (const auto& [c, v] : rows_[r]) out.rows_[c][r] = detail::conjugate(v);
        }
        return out;
    }

    SparseMatrix transpose() const {
        SparseMatrix out(cols_, rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            for (const auto& [c, v] : rows_[r]) out.rows_[c][r] = v;
        }
        return out;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: inner dimensions differ");
        SparseMatrix out(a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (const auto& [k, av] : a.rows_[i]) {
                for (const auto& [j, bv] : b.rows_[k]) out.add_to(i, j, av * bv);
            }
        }
        return out;
    }

    friend SparseMatrix operator+(SparseMatrix a, const SparseMatrix& b) {
        if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum: shapes differ");
        for (std::size_t i = 0; i < b.rows(); ++i) {
            for (const auto& [j, v] : b.rows_[i]) a.add_to(i, j, v);
        }
        return a;
    }

    friend SparseMatrix operator*(T s, SparseMatrix m) {
        for (auto& row : m.rows_) {
            for (auto it = row.begin(); it != row.end();) {
                it->second *= s;
                it = it->second == T(0) ? row.erase(it) : std::next(it);
            }
        }
        return m;
    }

    std::vector<T> multiply(std::span<const T> x) const {
        if (x.size() != cols_) throw std::invalid_argument("matrix-vector product: size mismatch");
        std::vector<T> y(rows_.size(), T(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (const auto& [j, v] : rows_[i]) y[i] += v * x[j];
        }
        return y;
    }

    /// y = A^* x
    std::vector<T> multiply_adjoint(std::span<const T> x) const {
        if (x.size() != rows_.size()) throw std::invalid_argument("adjoint product: size mismatch");
        std::vector<T> y(cols_, T(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (const auto& [j, v] : rows_[i]) y[j] += detail::conjugate(v) * x[i];
        }
        return y;
    }

    bool operator==(const SparseMatrix&) const = default;

private:
    void check(std::size_t r, std::size_t c) const {
        if (r >= rows_.size() || c >= cols_) throw std::out_of_range("matrix index out of range");
    }

    std::size_t cols_ = 0;
    std::vector<Row> rows_;
};

}  // namespace ssg
