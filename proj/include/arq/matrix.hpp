#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "arq/error.hpp"
#include "arq/scalar.hpp"

namespace arq {

/* Dense row-major matrix over an exact field. */
template <FieldLike K>
struct Matrix {
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<K> d;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), d(r * c, field_traits<K>::zero()) {}
    Matrix(std::initializer_list<std::initializer_list<K>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        d.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            ARQ_CHECK(r.size() == cols_, "ragged matrix initializer");
            for (const auto& x : r) d.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field_traits<K>::one();
        return m;
    }
    static Matrix zero(std::size_t r, std::size_t c) { return Matrix(r, c); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    K& at(std::size_t i, std::size_t j) {
        ARQ_CHECK(i < rows_ && j < cols_, "matrix index out of range");
        return d[i * cols_ + j];
    }
    const K& at(std::size_t i, std::size_t j) const {
        ARQ_CHECK(i < rows_ && j < cols_, "matrix index out of range");
        return d[i * cols_ + j];
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d == b.d;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        ARQ_CHECK(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix addition shape mismatch");
        Matrix r = a;
        for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] = r.d[i] + b.d[i];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        ARQ_CHECK(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix subtraction shape mismatch");
        Matrix r = a;
        for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] = r.d[i] - b.d[i];
        return r;
    }
    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.d) x = -x;
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        ARQ_CHECK(a.cols_ == b.rows_, "matrix product shape mismatch");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const K& aik = a.d[i * a.cols_ + k];
                if (arq::is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    r.d[i * r.cols_ + j] += aik * b.d[k * b.cols_ + j];
            }
        return r;
    }
    friend Matrix operator*(const K& k, const Matrix& a) {
        Matrix r = a;
        for (auto& x : r.d) x = k * x;
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    bool is_zero_matrix() const {
        for (const auto& x : d)
            if (!arq::is_zero(x)) return false;
        return true;
    }
    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                const K want = i == j ? field_traits<K>::one() : field_traits<K>::zero();
                if (!(at(i, j) == want)) return false;
            }
        return true;
    }

    K trace() const {
        ARQ_CHECK(rows_ == cols_, "trace of non-square matrix");
        K t = field_traits<K>::zero();
        for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        ARQ_CHECK(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
        Matrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b.at(i, j) = at(r0 + i, c0 + j);
        return b;
    }
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        ARQ_CHECK(r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_, "set_block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) at(r0 + i, c0 + j) = b.at(i, j);
    }

    std::vector<K> row(std::size_t i) const {
        std::vector<K> r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
        return r;
    }
    std::vector<K> col(std::size_t j) const {
        std::vector<K> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) r[i] = at(i, j);
        return r;
    }

    /* entrywise field conversion */
    template <class L, class F>
    Matrix<L> map(F&& f) const {
        Matrix<L> r(rows_, cols_);
        for (std::size_t i = 0; i < d.size(); ++i) r.d[i] = f(d[i]);
        return r;
    }
};

template <FieldLike K>
Matrix<K> hstack(const Matrix<K>& a, const Matrix<K>& b) {
    ARQ_CHECK(a.rows() == b.rows(), "hstack row mismatch");
    Matrix<K> r(a.rows(), a.cols() + b.cols());
    r.set_block(0, 0, a);
    r.set_block(0, a.cols(), b);
    return r;
}

template <FieldLike K>
Matrix<K> vstack(const Matrix<K>& a, const Matrix<K>& b) {
    ARQ_CHECK(a.cols() == b.cols(), "vstack column mismatch");
    Matrix<K> r(a.rows() + b.rows(), a.cols());
    r.set_block(0, 0, a);
    r.set_block(a.rows(), 0, b);
    return r;
}

template <FieldLike K>
Matrix<K> diag_join(const Matrix<K>& a, const Matrix<K>& b) {
    Matrix<K> r(a.rows() + b.rows(), a.cols() + b.cols());
    r.set_block(0, 0, a);
    r.set_block(a.rows(), a.cols(), b);
    return r;
}

template <FieldLike K>
std::vector<K> mat_vec(const Matrix<K>& a, const std::vector<K>& v) {
    ARQ_CHECK(a.cols() == v.size(), "mat_vec shape mismatch");
    std::vector<K> r(a.rows(), field_traits<K>::zero());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a.at(i, j) * v[j];
    return r;
}

/* In-place reduced row echelon form.  Deterministic: pivots are chosen as the
 * first row (top to bottom) with a nonzero entry, scanning columns left to
 * right.  Returns the pivot columns in order. */
template <FieldLike K>
std::vector<std::size_t> rref_inplace(Matrix<K>& m) {
    std::vector<std::size_t> pivots;
    std::size_t pr = 0;
    for (std::size_t c = 0; c < m.cols() && pr < m.rows(); ++c) {
        std::size_t sel = pr;
        while (sel < m.rows() && arq::is_zero(m.at(sel, c))) ++sel;
        if (sel == m.rows()) continue;
        if (sel != pr)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(pr, j));
        K inv = field_traits<K>::one() / m.at(pr, c);
        for (std::size_t j = c; j < m.cols(); ++j) m.at(pr, j) = inv * m.at(pr, j);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == pr || arq::is_zero(m.at(i, c))) continue;
            K f = m.at(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m.at(i, j) = m.at(i, j) - f * m.at(pr, j);
        }
        pivots.push_back(c);
        ++pr;
    }
    return pivots;
}

template <FieldLike K>
std::size_t rank(Matrix<K> m) {
    return rref_inplace(m).size();
}

/* Basis of the right kernel, one vector per free column; vector for free column
 * j has a 1 in slot j, making the basis echelonized and canonical. */
template <FieldLike K>
std::vector<std::vector<K>> kernel_basis(Matrix<K> m) {
    const std::size_t n = m.cols();
    auto pivots = rref_inplace(m);
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<K>> basis;
    for (std::size_t j = 0; j < n; ++j) {
        if (is_pivot[j]) continue;
        std::vector<K> v(n, field_traits<K>::zero());
        v[j] = field_traits<K>::one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(r, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

template <FieldLike K>
struct LinearSolution {
    bool consistent = false;
    std::vector<K> particular;              /* one solution of A x = b (free vars = 0) */
    std::vector<std::vector<K>> kernel;     /* echelonized basis of A x = 0 */
};

template <FieldLike K>
LinearSolution<K> solve_linear(const Matrix<K>& a, const std::vector<K>& b) {
    ARQ_REQUIRE(a.rows() == b.size(), "solve_linear: right-hand side length mismatch");
    Matrix<K> aug(a.rows(), a.cols() + 1);
    aug.set_block(0, 0, a);
    for (std::size_t i = 0; i < a.rows(); ++i) aug.at(i, a.cols()) = b[i];
    auto pivots = rref_inplace(aug);
    LinearSolution<K> sol;
    if (!pivots.empty() && pivots.back() == a.cols()) return sol; /* pivot in the b column */
    sol.consistent = true;
    sol.particular.assign(a.cols(), field_traits<K>::zero());
    for (std::size_t r = 0; r < pivots.size(); ++r) sol.particular[pivots[r]] = aug.at(r, a.cols());
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        if (is_pivot[j]) continue;
        std::vector<K> v(a.cols(), field_traits<K>::zero());
        v[j] = field_traits<K>::one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -aug.at(r, j);
        sol.kernel.push_back(std::move(v));
    }
    return sol;
}

template <FieldLike K>
std::optional<Matrix<K>> try_inverse(const Matrix<K>& m) {
    ARQ_REQUIRE(m.rows() == m.cols(), "inverse of non-square matrix");
    Matrix<K> aug = hstack(m, Matrix<K>::identity(m.rows()));
    auto pivots = rref_inplace(aug);
    if (pivots.size() != m.rows()) return std::nullopt;
    for (std::size_t r = 0; r < pivots.size(); ++r)
        if (pivots[r] != r) return std::nullopt;
    return aug.block(0, m.cols(), m.rows(), m.cols());
}

template <FieldLike K>
Matrix<K> inverse(const Matrix<K>& m) {
    auto inv = try_inverse(m);
    ARQ_REQUIRE(inv.has_value(), "matrix is not invertible");
    return *inv;
}

template <FieldLike K>
K det(Matrix<K> m) {
    ARQ_REQUIRE(m.rows() == m.cols(), "determinant of non-square matrix");
    const std::size_t n = m.rows();
    K result = field_traits<K>::one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = c;
        while (sel < n && arq::is_zero(m.at(sel, c))) ++sel;
        if (sel == n) return field_traits<K>::zero();
        if (sel != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(sel, j), m.at(c, j));
            result = -result;
        }
        result = result * m.at(c, c);
        K inv = field_traits<K>::one() / m.at(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (arq::is_zero(m.at(i, c))) continue;
            K f = inv * m.at(i, c);
            for (std::size_t j = c; j < n; ++j) m.at(i, j) = m.at(i, j) - f * m.at(c, j);
        }
    }
    return result;
}

/* rank of the span of a set of row vectors */
template <FieldLike K>
std::size_t span_rank(const std::vector<std::vector<K>>& vs, std::size_t width) {
    Matrix<K> m(vs.size(), width);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        ARQ_CHECK(vs[i].size() == width, "span_rank width mismatch");
        for (std::size_t j = 0; j < width; ++j) m.at(i, j) = vs[i][j];
    }
    return rank(std::move(m));
}

/* columns of m restricted to a subset of column indices, as a new matrix */
template <FieldLike K>
Matrix<K> select_columns(const Matrix<K>& m, const std::vector<std::size_t>& cols) {
    Matrix<K> r(m.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) r.at(i, j) = m.at(i, cols[j]);
    return r;
}

/* Kronecker product: block (i,j) of the result is a[i][j] * b */
template <FieldLike K>
Matrix<K> kron(const Matrix<K>& a, const Matrix<K>& b) {
    Matrix<K> r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (arq::is_zero(a.at(i, j))) continue;
            for (std::size_t bi = 0; bi < b.rows(); ++bi)
                for (std::size_t bj = 0; bj < b.cols(); ++bj)
                    r.at(i * b.rows() + bi, j * b.cols() + bj) = a.at(i, j) * b.at(bi, bj);
        }
    return r;
}

} // namespace arq
