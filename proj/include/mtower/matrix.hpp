#pragma once

#include "mtower/ring.hpp"

#include <cassert>
#include <initializer_list>
#include <sstream>
#include <vector>

namespace mtower {

/// Dense matrix with exact entries in a declared coefficient ring.
/// Entries are kept reduced (in [0, m)) when the ring is Z/m.
class ExactMatrix {
public:
    ExactMatrix() : ring_(RingSpec::integers()), rows_(0), cols_(0) {}

    ExactMatrix(RingSpec ring, int rows, int cols)
        : ring_(std::move(ring)), rows_(rows), cols_(cols), e_(size_t(rows) * cols, mpz_class(0)) {
        if (rows < 0 || cols < 0) throw ring_error("negative matrix dimension");
    }

    ExactMatrix(RingSpec ring, int rows, int cols, std::vector<mpz_class> entries)
        : ring_(std::move(ring)), rows_(rows), cols_(cols), e_(std::move(entries)) {
        if (e_.size() != size_t(rows) * cols) throw ring_error("entry count mismatch");
        for (auto& v : e_) v = ring_.reduce(v);
    }

    static ExactMatrix identity(const RingSpec& ring, int n) {
        ExactMatrix m(ring, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static ExactMatrix from_rows(const RingSpec& ring,
                                 std::initializer_list<std::initializer_list<long>> rows) {
        int r = int(rows.size());
        int c = r ? int(rows.begin()->size()) : 0;
        ExactMatrix m(ring, r, c);
        int i = 0;
        for (auto& row : rows) {
            if (int(row.size()) != c) throw ring_error("ragged initializer");
            int j = 0;
            for (long v : row) m.at(i, j++) = ring.reduce(mpz_class(v));
            ++i;
        }
        return m;
    }

    const RingSpec& ring() const { return ring_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    mpz_class& at(int r, int c) {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return e_[size_t(r) * cols_ + c];
    }
    const mpz_class& at(int r, int c) const {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return e_[size_t(r) * cols_ + c];
    }

    const std::vector<mpz_class>& entries() const { return e_; }

    void reduce_entries() {
        for (auto& v : e_) v = ring_.reduce(v);
    }

    /// Same entries, reinterpreted over another ring (reducing as needed).
    ExactMatrix with_ring(const RingSpec& ring) const {
        return ExactMatrix(ring, rows_, cols_, e_);
    }

    bool is_zero() const {
        for (const auto& v : e_)
            if (v != 0) return false;
        return true;
    }

    bool operator==(const ExactMatrix& o) const {
        return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }

    ExactMatrix operator*(const ExactMatrix& o) const {
        require_same_ring(ring_, o.ring_, "matrix product");
        if (cols_ != o.rows_) throw ring_error("dimension mismatch in matrix product");
        ExactMatrix r(ring_, rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const mpz_class& a = at(i, k);
                if (a == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r.at(i, j) += a * o.at(k, j);
            }
        r.reduce_entries();
        return r;
    }

    ExactMatrix operator+(const ExactMatrix& o) const {
        require_same_ring(ring_, o.ring_, "matrix sum");
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ring_error("dimension mismatch in matrix sum");
        ExactMatrix r(ring_, rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = ring_.reduce(e_[i] + o.e_[i]);
        return r;
    }

    ExactMatrix operator-(const ExactMatrix& o) const {
        require_same_ring(ring_, o.ring_, "matrix difference");
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ring_error("dimension mismatch in matrix difference");
        ExactMatrix r(ring_, rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = ring_.reduce(e_[i] - o.e_[i]);
        return r;
    }

    ExactMatrix operator-() const {
        ExactMatrix r(ring_, rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = ring_.reduce(-e_[i]);
        return r;
    }

    ExactMatrix scaled(const mpz_class& a) const {
        ExactMatrix r(ring_, rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = ring_.reduce(a * e_[i]);
        return r;
    }

    ExactMatrix transpose() const {
        ExactMatrix r(ring_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    ExactMatrix submatrix(int r0, int c0, int nr, int nc) const {
        ExactMatrix r(ring_, nr, nc);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j) r.at(i, j) = at(r0 + i, c0 + j);
        return r;
    }

    std::vector<mpz_class> column(int j) const {
        std::vector<mpz_class> v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }

    void set_column(int j, const std::vector<mpz_class>& v) {
        assert(int(v.size()) == rows_);
        for (int i = 0; i < rows_; ++i) at(i, j) = ring_.reduce(v[i]);
    }

    std::vector<mpz_class> apply(const std::vector<mpz_class>& x) const {
        if (int(x.size()) != cols_) throw ring_error("apply: length mismatch");
        std::vector<mpz_class> y(rows_, mpz_class(0));
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j)
                if (at(i, j) != 0) y[i] += at(i, j) * x[j];
            y[i] = ring_.reduce(y[i]);
        }
        return y;
    }

    /// [A | B] side by side.
    static ExactMatrix hcat(const ExactMatrix& a, const ExactMatrix& b) {
        require_same_ring(a.ring_, b.ring_, "hcat");
        if (a.rows_ != b.rows_) throw ring_error("hcat row mismatch");
        ExactMatrix r(a.ring_, a.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
            for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
        }
        return r;
    }

    /// [A ; B] stacked.
    static ExactMatrix vcat(const ExactMatrix& a, const ExactMatrix& b) {
        require_same_ring(a.ring_, b.ring_, "vcat");
        if (a.cols_ != b.cols_) throw ring_error("vcat col mismatch");
        ExactMatrix r(a.ring_, a.rows_ + b.rows_, a.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
        return r;
    }

    static ExactMatrix block_diag(const ExactMatrix& a, const ExactMatrix& b) {
        require_same_ring(a.ring_, b.ring_, "block_diag");
        ExactMatrix r(a.ring_, a.rows_ + b.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) r.at(a.rows_ + i, a.cols_ + j) = b.at(i, j);
        return r;
    }

    /// Kronecker product A (x) I_n.
    static ExactMatrix kron_identity(const ExactMatrix& a, int n) {
        ExactMatrix r(a.ring(), a.rows_ * n, a.cols_ * n);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j)
                if (a.at(i, j) != 0)
                    for (int k = 0; k < n; ++k) r.at(i * n + k, j * n + k) = a.at(i, j);
        return r;
    }

    /// Fraction-free determinant (Bareiss). Square matrices only.
    mpz_class det() const {
        if (rows_ != cols_) throw ring_error("det of non-square matrix");
        int n = rows_;
        if (n == 0) return 1;
        std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[i][j] = at(i, j);
        mpz_class prev = 1;
        int sign = 1;
        for (int k = 0; k < n - 1; ++k) {
            if (a[k][k] == 0) {
                int p = -1;
                for (int i = k + 1; i < n; ++i)
                    if (a[i][k] != 0) { p = i; break; }
                if (p < 0) return 0;
                std::swap(a[k], a[p]);
                sign = -sign;
            }
            for (int i = k + 1; i < n; ++i)
                for (int j = k + 1; j < n; ++j) {
                    a[i][j] = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                    mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
                }
            prev = a[k][k];
        }
        return ring_.reduce(sign * a[n - 1][n - 1]);
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (int i = 0; i < rows_; ++i) {
            os << (i ? "; " : "");
            for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).get_str();
        }
        os << "]";
        return os.str();
    }

private:
    RingSpec ring_;
    int rows_, cols_;
    std::vector<mpz_class> e_;
};

} // namespace mtower
