#pragma once

#include <initializer_list>
#include <vector>

#include "conecell/numeric.hpp"

namespace conecell {

// Dense integer matrix with arbitrary-precision entries, row-major.
// Empty shapes (0 rows and/or 0 columns) are legal and represent zero modules.
class IntMatrix {
  public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) fail("SHAPE_MISMATCH", "ragged initializer");
            for (long long v : row) a_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }
    bool operator<(const IntMatrix& o) const {
        if (rows_ != o.rows_) return rows_ < o.rows_;
        if (cols_ != o.cols_) return cols_ < o.cols_;
        return a_ < o.a_;
    }

    bool is_zero() const {
        for (const Int& v : a_)
            if (v != 0) return false;
        return true;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_) fail("SHAPE_MISMATCH", "matrix product shape");
        IntMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& v = (*this)(i, k);
                if (v == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
            }
        return r;
    }

    IntMatrix operator-() const {
        IntMatrix r = *this;
        for (Int& v : r.a_) v = -v;
        return r;
    }

    IntMatrix scaled(const Int& c) const {
        IntMatrix r = *this;
        for (Int& v : r.a_) v *= c;
        return r;
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }
    // row i += c * row j
    void add_row(std::size_t i, std::size_t j, const Int& c) {
        for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) += c * (*this)(j, k);
    }
    void add_col(std::size_t i, std::size_t j, const Int& c) {
        for (std::size_t k = 0; k < rows_; ++k) (*this)(k, i) += c * (*this)(k, j);
    }
    void negate_row(std::size_t i) {
        for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = -(*this)(i, k);
    }

    std::vector<Int> col(std::size_t j) const {
        std::vector<Int> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<Int> a_;
};

// Columns of `cols` assembled into a matrix; all columns length `height`.
inline IntMatrix from_columns(std::size_t height, const std::vector<std::vector<Int>>& cols) {
    IntMatrix m(height, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != height) fail("SHAPE_MISMATCH", "column height");
        for (std::size_t i = 0; i < height; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

inline IntMatrix from_rows(std::size_t width, const std::vector<std::vector<Int>>& rows) {
    IntMatrix m(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width) fail("SHAPE_MISMATCH", "row width");
        for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

}  // namespace conecell
