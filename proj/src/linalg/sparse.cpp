#include "mgoc/linalg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mgoc::linalg {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

SparseMatrix::SparseMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {
    require(rows >= 0 && cols >= 0, "SparseMatrix: negative dimension");
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols,
                                         std::span<const Triplet> entries) {
    SparseMatrix m(rows, cols);
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw std::invalid_argument("SparseMatrix::from_triplets: index (" +
                                        std::to_string(t.row) + ", " + std::to_string(t.col) +
                                        ") out of range");
        ++m.row_ptr_[t.row + 1];
    }
    std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());

    std::vector<Index> cols_tmp(entries.size());
    std::vector<double> vals_tmp(entries.size());
    std::vector<Index> next(m.row_ptr_.begin(), m.row_ptr_.end() - 1);
    for (const auto& t : entries) {
        const Index k = next[t.row]++;
        cols_tmp[k] = t.col;
        vals_tmp[k] = t.value;
    }

    // Sort each row by column and merge duplicates.
    std::vector<Index> new_ptr(static_cast<std::size_t>(rows) + 1, 0);
    std::vector<std::pair<Index, double>> row_buf;
    for (Index r = 0; r < rows; ++r) {
        row_buf.clear();
        for (Index k = m.row_ptr_[r]; k < m.row_ptr_[r + 1]; ++k)
            row_buf.emplace_back(cols_tmp[k], vals_tmp[k]);
        std::sort(row_buf.begin(), row_buf.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < row_buf.size(); ++i) {
            if (!m.col_idx_.empty() && static_cast<Index>(m.col_idx_.size()) > new_ptr[r] &&
                m.col_idx_.back() == row_buf[i].first) {
                m.values_.back() += row_buf[i].second;
            } else {
                m.col_idx_.push_back(row_buf[i].first);
                m.values_.push_back(row_buf[i].second);
            }
        }
        new_ptr[r + 1] = static_cast<Index>(m.col_idx_.size());
    }
    m.row_ptr_ = std::move(new_ptr);
    return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
    std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
    const auto n = static_cast<Index>(d.size());
    SparseMatrix m(n, n);
    m.col_idx_.resize(d.size());
    m.values_.assign(d.begin(), d.end());
    for (Index i = 0; i < n; ++i) {
        m.col_idx_[i] = i;
        m.row_ptr_[i + 1] = i + 1;
    }
    return m;
}

SparseMatrix SparseMatrix::from_dense(Index rows, Index cols, std::span<const double> row_major,
                                      double drop_tol) {
    require(static_cast<Index>(row_major.size()) == rows * cols,
            "SparseMatrix::from_dense: size mismatch");
    SparseMatrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) {
            const double v = row_major[r * cols + c];
            if (std::abs(v) > drop_tol) {
                m.col_idx_.push_back(c);
                m.values_.push_back(v);
            }
        }
        m.row_ptr_[r + 1] = static_cast<Index>(m.col_idx_.size());
    }
    return m;
}

double SparseMatrix::coeff(Index r, Index c) const {
    require(r >= 0 && r < rows_ && c >= 0 && c < cols_, "SparseMatrix::coeff: out of range");
    const auto first = col_idx_.begin() + row_ptr_[r];
    const auto last = col_idx_.begin() + row_ptr_[r + 1];
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

SparseMatrix SparseMatrix::block(Index r0, Index r1, Index c0, Index c1) const {
    require(0 <= r0 && r0 <= r1 && r1 <= rows_ && 0 <= c0 && c0 <= c1 && c1 <= cols_,
            "SparseMatrix::block: range out of bounds");
    SparseMatrix m(r1 - r0, c1 - c0);
    for (Index r = r0; r < r1; ++r) {
        for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const Index c = col_idx_[k];
            if (c >= c0 && c < c1) {
                m.col_idx_.push_back(c - c0);
                m.values_.push_back(values_[k]);
            }
        }
        m.row_ptr_[r - r0 + 1] = static_cast<Index>(m.col_idx_.size());
    }
    return m;
}

std::vector<Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(values_.size());
    for (Index r = 0; r < rows_; ++r)
        for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            out.push_back({r, col_idx_[k], values_[k]});
    return out;
}

std::vector<double> SparseMatrix::to_dense() const {
    std::vector<double> d(static_cast<std::size_t>(rows_ * cols_), 0.0);
    for (Index r = 0; r < rows_; ++r)
        for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d[r * cols_ + col_idx_[k]] = values_[k];
    return d;
}

SparseMatrix SparseMatrix::abs() const {
    SparseMatrix m = *this;
    for (auto& v : m.values_) v = std::abs(v);
    return m;
}

SparseMatrix SparseMatrix::scaled(double s) const {
    SparseMatrix m = *this;
    for (auto& v : m.values_) v *= s;
    return m;
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
    Vector y(static_cast<std::size_t>(a.rows()), 0.0);
    spmv_add(a, x, y, 1.0);
    return y;
}

void spmv_add(const SparseMatrix& a, std::span<const double> x, std::span<double> y,
              double alpha) {
    if (static_cast<Index>(x.size()) != a.cols() || static_cast<Index>(y.size()) != a.rows())
        throw std::invalid_argument("spmv: dimension mismatch (" + std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + " times " +
                                    std::to_string(x.size()) + ")");
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto va = a.values();
    for (Index r = 0; r < a.rows(); ++r) {
        double s = 0.0;
        for (Index k = rp[r]; k < rp[r + 1]; ++k) s += va[k] * x[ci[k]];
        y[r] += alpha * s;
    }
}

Vector spmv_transposed(const SparseMatrix& a, std::span<const double> x) {
    if (static_cast<Index>(x.size()) != a.rows())
        throw std::invalid_argument("spmv_transposed: dimension mismatch");
    Vector y(static_cast<std::size_t>(a.cols()), 0.0);
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto va = a.values();
    for (Index r = 0; r < a.rows(); ++r)
        for (Index k = rp[r]; k < rp[r + 1]; ++k) y[ci[k]] += va[k] * x[r];
    return y;
}

SparseMatrix sp_add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("sp_add: dimension mismatch");
    SparseMatrix m(a.rows_, a.cols_);
    m.col_idx_.reserve(a.col_idx_.size() + b.col_idx_.size());
    m.values_.reserve(a.col_idx_.size() + b.col_idx_.size());
    for (Index r = 0; r < a.rows_; ++r) {
        Index ka = a.row_ptr_[r], kb = b.row_ptr_[r];
        const Index ea = a.row_ptr_[r + 1], eb = b.row_ptr_[r + 1];
        while (ka < ea || kb < eb) {
            const Index ca = ka < ea ? a.col_idx_[ka] : a.cols_;
            const Index cb = kb < eb ? b.col_idx_[kb] : b.cols_;
            if (ca == cb) {
                m.col_idx_.push_back(ca);
                m.values_.push_back(alpha * a.values_[ka++] + beta * b.values_[kb++]);
            } else if (ca < cb) {
                m.col_idx_.push_back(ca);
                m.values_.push_back(alpha * a.values_[ka++]);
            } else {
                m.col_idx_.push_back(cb);
                m.values_.push_back(beta * b.values_[kb++]);
            }
        }
        m.row_ptr_[r + 1] = static_cast<Index>(m.col_idx_.size());
    }
    return m;
}

SparseMatrix sp_mul(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("sp_mul: dimension mismatch");
    SparseMatrix m(a.rows_, b.cols_);
    // Gustavson's algorithm with a dense accumulator.
    std::vector<double> acc(static_cast<std::size_t>(b.cols_), 0.0);
    std::vector<Index> marker(static_cast<std::size_t>(b.cols_), -1);
    std::vector<Index> pattern;
    for (Index r = 0; r < a.rows_; ++r) {
        pattern.clear();
        for (Index ka = a.row_ptr_[r]; ka < a.row_ptr_[r + 1]; ++ka) {
            const Index j = a.col_idx_[ka];
            const double av = a.values_[ka];
            for (Index kb = b.row_ptr_[j]; kb < b.row_ptr_[j + 1]; ++kb) {
                const Index c = b.col_idx_[kb];
                if (marker[c] != r) {
                    marker[c] = r;
                    acc[c] = 0.0;
                    pattern.push_back(c);
                }
                acc[c] += av * b.values_[kb];
            }
        }
        std::sort(pattern.begin(), pattern.end());
        for (Index c : pattern) {
            m.col_idx_.push_back(c);
            m.values_.push_back(acc[c]);
        }
        m.row_ptr_[r + 1] = static_cast<Index>(m.col_idx_.size());
    }
    return m;
}

SparseMatrix transpose(const SparseMatrix& a) {
    SparseMatrix t(a.cols_, a.rows_);
    for (Index c : a.col_idx_) ++t.row_ptr_[c + 1];
    std::partial_sum(t.row_ptr_.begin(), t.row_ptr_.end(), t.row_ptr_.begin());
    t.col_idx_.resize(a.col_idx_.size());
    t.values_.resize(a.values_.size());
    std::vector<Index> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
    // Rows of `a` are visited in order, so columns of `t` come out sorted.
    for (Index r = 0; r < a.rows_; ++r) {
        for (Index k = a.row_ptr_[r]; k < a.row_ptr_[r + 1]; ++k) {
            const Index dst = next[a.col_idx_[k]]++;
            t.col_idx_[dst] = r;
            t.values_[dst] = a.values_[k];
        }
    }
    return t;
}

Vector diag(const SparseMatrix& a) {
    const Index n = std::min(a.rows(), a.cols());
    Vector d(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i) d[i] = a.coeff(i, i);
    return d;
}

Vector row_lump(const SparseMatrix& a) {
    Vector s(static_cast<std::size_t>(a.rows()), 0.0);
    const auto rp = a.row_ptr();
    const auto va = a.values();
    for (Index r = 0; r < a.rows(); ++r)
        for (Index k = rp[r]; k < rp[r + 1]; ++k) s[r] += va[k];
    return s;
}

double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b) {
    return max_abs(sp_add(a, b, 1.0, -1.0));
}

double max_abs(const SparseMatrix& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace mgoc::linalg
