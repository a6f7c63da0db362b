#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

#include "permres/prime_field.hpp"

namespace permres {

/// Column vector over F_p, entries canonical residues.
using Vec = std::vector<std::uint64_t>;

inline bool is_zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x == 0; });
}

/// Odometer over F_p^n in little-endian digit order; returns false once
/// the enumeration wraps back to zero.
inline bool next_vec(Vec& v, std::uint64_t p) {
    for (auto& digit : v) {
        if (++digit < p) return true;
        digit = 0;
    }
    return false;
}

/// Dense matrix over F_p, row-major. Value type: all operations return
/// fresh matrices and never mutate their inputs, so instances can be
/// shared freely across threads.
class Matrix {
public:
    Matrix(PrimeField field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

    static Matrix identity(PrimeField field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

    /// Build from signed integer rows, reducing entries mod p.
    static Matrix from_rows(PrimeField field,
                            const std::vector<std::vector<long long>>& rows) {
        std::size_t r = rows.size();
        std::size_t c = r == 0 ? 0 : rows.front().size();
        Matrix m(field, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < c; ++j) m.set(i, j, field.reduce(rows[i][j]));
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const PrimeField& field() const noexcept { return field_; }
    std::uint64_t p() const noexcept { return field_.p(); }

    std::uint64_t operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    void set(std::size_t i, std::size_t j, std::uint64_t value) {
        entries_[i * cols_ + j] = value % field_.p();
    }

    /// Copy `block` into this matrix with top-left corner at (r0, c0).
    void paste(std::size_t r0, std::size_t c0, const Matrix& block) {
        if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_)
            throw std::invalid_argument("paste out of range");
        for (std::size_t i = 0; i < block.rows(); ++i)
            for (std::size_t j = 0; j < block.cols(); ++j)
                entries_[(r0 + i) * cols_ + c0 + j] = block(i, j);
    }

    bool is_zero() const {
        return std::all_of(entries_.begin(), entries_.end(),
                           [](std::uint64_t x) { return x == 0; });
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
               a.entries_ == b.entries_;
    }

    Matrix operator+(const Matrix& o) const {
        require_same_shape(o);
        Matrix r(field_, rows_, cols_);
        for (std::size_t k = 0; k < entries_.size(); ++k)
            r.entries_[k] = field_.add(entries_[k], o.entries_[k]);
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        require_same_shape(o);
        Matrix r(field_, rows_, cols_);
        for (std::size_t k = 0; k < entries_.size(); ++k)
            r.entries_[k] = field_.sub(entries_[k], o.entries_[k]);
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                std::uint64_t a = entries_[i * cols_ + k];
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    std::uint64_t& cell = r.entries_[i * o.cols_ + j];
                    cell = field_.add(cell, field_.mul(a, o.entries_[k * o.cols_ + j]));
                }
            }
        }
        return r;
    }

    Vec operator*(const Vec& v) const {
        if (cols_ != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
        Vec r(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < cols_; ++j)
                acc = field_.add(acc, field_.mul(entries_[i * cols_ + j], v[j]));
            r[i] = acc;
        }
        return r;
    }

    Matrix scaled(std::uint64_t c) const {
        Matrix r(field_, rows_, cols_);
        for (std::size_t k = 0; k < entries_.size(); ++k)
            r.entries_[k] = field_.mul(entries_[k], c % field_.p());
        return r;
    }

    Matrix transpose() const {
        Matrix r(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.set(j, i, (*this)(i, j));
        return r;
    }

    Matrix pow(std::size_t e) const {
        if (rows_ != cols_) throw std::invalid_argument("power of non-square matrix");
        Matrix r = identity(field_, rows_);
        for (std::size_t i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    Vec column(std::size_t j) const {
        Vec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    std::size_t rank() const {
        Matrix copy = *this;
        return copy.reduce_in_place().size();
    }

    /// Some x with A x = b, if the system is consistent.
    std::optional<Vec> solve(const Vec& b) const {
        if (b.size() != rows_) throw std::invalid_argument("solve: rhs length mismatch");
        Matrix aug(field_, rows_, cols_ + 1);
        aug.paste(0, 0, *this);
        for (std::size_t i = 0; i < rows_; ++i) aug.set(i, cols_, b[i]);
        std::vector<std::size_t> pivots = aug.reduce_in_place();
        for (std::size_t c : pivots)
            if (c == cols_) return std::nullopt;  // pivot in rhs column
        Vec x(cols_, 0);
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, cols_);
        return x;
    }

    /// Basis of the null space {x : A x = 0}, one vector per free column.
    std::vector<Vec> kernel_basis() const {
        Matrix red = *this;
        std::vector<std::size_t> pivots = red.reduce_in_place();
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t c : pivots) is_pivot[c] = true;
        std::vector<Vec> basis;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (is_pivot[j]) continue;
            Vec v(cols_, 0);
            v[j] = 1;
            for (std::size_t r = 0; r < pivots.size(); ++r)
                v[pivots[r]] = field_.neg(red(r, j));
            basis.push_back(std::move(v));
        }
        return basis;
    }

    std::optional<Matrix> inverse() const {
        if (rows_ != cols_) return std::nullopt;
        Matrix aug(field_, rows_, 2 * cols_);
        aug.paste(0, 0, *this);
        aug.paste(0, cols_, identity(field_, rows_));
        std::vector<std::size_t> pivots = aug.reduce_in_place();
        if (pivots.size() != rows_) return std::nullopt;
        for (std::size_t r = 0; r < rows_; ++r)
            if (pivots[r] != r) return std::nullopt;  // singular
        Matrix inv(field_, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) inv.set(i, j, aug(i, cols_ + j));
        return inv;
    }

private:
    void require_same_shape(const Matrix& o) const {
        if (!(field_ == o.field_) || rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape/field mismatch");
    }

    /// In-place reduced row echelon form; returns pivot columns in order.
    std::vector<std::size_t> reduce_in_place() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t sel = row;
            while (sel < rows_ && (*this)(sel, col) == 0) ++sel;
            if (sel == rows_) continue;
            if (sel != row)
                for (std::size_t j = 0; j < cols_; ++j)
                    std::swap(entries_[sel * cols_ + j], entries_[row * cols_ + j]);
            std::uint64_t inv = field_.inv((*this)(row, col));
            for (std::size_t j = col; j < cols_; ++j)
                set(row, j, field_.mul((*this)(row, j), inv));
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == row) continue;
                std::uint64_t f = (*this)(i, col);
                if (f == 0) continue;
                for (std::size_t j = col; j < cols_; ++j)
                    set(i, j, field_.sub((*this)(i, j), field_.mul(f, (*this)(row, j))));
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    PrimeField field_;
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> entries_;
};

inline Matrix matrix_from_columns(PrimeField field, std::size_t rows,
                                  const std::vector<Vec>& cols) {
    Matrix m(field, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
        for (std::size_t i = 0; i < rows; ++i) m.set(i, j, cols[j][i]);
    }
    return m;
}

/// Kronecker product; basis e_i (x) e_k ordered lexicographically by (i, k).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    if (!(a.field() == b.field())) throw std::invalid_argument("kron: field mismatch");
    Matrix r(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) == 0) continue;
            r.paste(i * b.rows(), j * b.cols(), b.scaled(a(i, j)));
        }
    return r;
}

inline Matrix block_diag(PrimeField field, const std::vector<Matrix>& blocks) {
    std::size_t r = 0, c = 0;
    for (const Matrix& b : blocks) {
        r += b.rows();
        c += b.cols();
    }
    Matrix m(field, r, c);
    std::size_t i = 0, j = 0;
    for (const Matrix& b : blocks) {
        m.paste(i, j, b);
        i += b.rows();
        j += b.cols();
    }
    return m;
}

/// Incrementally maintained row-echelon basis of a span of vectors.
/// Used wherever many membership / independence queries hit one subspace.
class EchelonSpan {
public:
    EchelonSpan(PrimeField field, std::size_t dim) : field_(field), dim_(dim) {}

    /// Add v to the span. Returns true if the rank grew.
    bool insert(Vec v) {
        if (v.size() != dim_) throw std::invalid_argument("EchelonSpan: dim mismatch");
        reduce(v);
        std::size_t lead = leading(v);
        if (lead == dim_) return false;
        std::uint64_t inv = field_.inv(v[lead]);
        for (auto& x : v) x = field_.mul(x, inv);
        rows_.push_back(std::move(v));
        std::sort(rows_.begin(), rows_.end(), [this](const Vec& a, const Vec& b) {
            return leading(a) < leading(b);
        });
        return true;
    }

    bool contains(Vec v) const {
        if (v.size() != dim_) throw std::invalid_argument("EchelonSpan: dim mismatch");
        reduce(v);
        return leading(v) == dim_;
    }

    std::size_t rank() const noexcept { return rows_.size(); }
    std::size_t dim() const noexcept { return dim_; }

private:
    std::size_t leading(const Vec& v) const {
        for (std::size_t i = 0; i < dim_; ++i)
            if (v[i] != 0) return i;
        return dim_;
    }

    void reduce(Vec& v) const {
        for (const Vec& row : rows_) {
            std::size_t lead = leading(row);
            if (v[lead] == 0) continue;
            std::uint64_t f = v[lead];
            for (std::size_t i = lead; i < dim_; ++i)
                v[i] = field_.sub(v[i], field_.mul(f, row[i]));
        }
    }

    PrimeField field_;
    std::size_t dim_;
    std::vector<Vec> rows_;
};

}  // namespace permres
