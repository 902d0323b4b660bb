#pragma once

#include "jr/padic.hpp"

#include <cassert>
#include <vector>

namespace jr {

struct SingularMatrix : std::domain_error {
    using std::domain_error::domain_error;
};

// zero/one "like a given sample" so QuadElem can carry its d through
// generic code.
inline Rat zero_like(const Rat&) { return Rat(0); }
inline Rat one_like(const Rat&) { return Rat(1); }
inline Rat conj_of(const Rat& x) { return x; }
inline QuadElem zero_like(const QuadElem& s) { return QuadElem::zero(s.d); }
inline QuadElem one_like(const QuadElem& s) { return QuadElem::one(s.d); }
inline QuadElem conj_of(const QuadElem& x) { return x.conj(); }
inline bool is_zero_elem(const Rat& x) { return x == 0; }
inline bool is_zero_elem(const QuadElem& x) { return x.is_zero(); }

template <class T>
class Mat {
  public:
    Mat() : r_(0), c_(0) {}
    Mat(int r, int c, const T& fill) : r_(r), c_(c), a_(static_cast<size_t>(r) * c, fill) {}
    // Zero matrix shaped like `sample`'s field.
    static Mat zeros(int r, int c, const T& sample) { return Mat(r, c, zero_like(sample)); }
    static Mat identity(int n, const T& sample) {
        Mat m = zeros(n, n, sample);
        for (int i = 0; i < n; ++i) m(i, i) = one_like(sample);
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    T sample() const {
        assert(!a_.empty());
        return a_[0];
    }

    Mat transpose() const {
        Mat m = zeros(c_, r_, sample());
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    Mat conj() const {
        Mat m = *this;
        for (auto& x : m.a_) x = conj_of(x);
        return m;
    }
    Mat conj_transpose() const { return conj().transpose(); }

    friend Mat operator+(const Mat& x, const Mat& y) {
        assert(x.r_ == y.r_ && x.c_ == y.c_);
        Mat m = x;
        for (size_t k = 0; k < m.a_.size(); ++k) m.a_[k] = m.a_[k] + y.a_[k];
        return m;
    }
    friend Mat operator-(const Mat& x, const Mat& y) {
        assert(x.r_ == y.r_ && x.c_ == y.c_);
        Mat m = x;
        for (size_t k = 0; k < m.a_.size(); ++k) m.a_[k] = m.a_[k] - y.a_[k];
        return m;
    }
    Mat operator-() const {
        Mat m = *this;
        for (auto& x : m.a_) x = zero_like(x) - x;
        return m;
    }
    friend Mat operator*(const Mat& x, const Mat& y) {
        assert(x.c_ == y.r_);
        Mat m = zeros(x.r_, y.c_, x.sample());
        for (int i = 0; i < x.r_; ++i)
            for (int k = 0; k < x.c_; ++k) {
                const T& xik = x(i, k);
                if (is_zero_elem(xik)) continue;
                for (int j = 0; j < y.c_; ++j) m(i, j) = m(i, j) + xik * y(k, j);
            }
        return m;
    }
    friend Mat operator*(const T& c, const Mat& x) {
        Mat m = x;
        for (auto& v : m.a_) v = c * v;
        return m;
    }
    friend bool operator==(const Mat& x, const Mat& y) {
        return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
    }
    friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!is_zero_elem(x)) return false;
        return true;
    }

    // Gaussian elimination; returns (det, inverse) when square+invertible.
    T det() const {
        assert(r_ == c_);
        Mat m = *this;
        T d = one_like(sample());
        for (int col = 0; col < c_; ++col) {
            int piv = -1;
            for (int i = col; i < r_; ++i)
                if (!is_zero_elem(m(i, col))) {
                    piv = i;
                    break;
                }
            if (piv < 0) return zero_like(sample());
            if (piv != col) {
                for (int j = 0; j < c_; ++j) std::swap(m(piv, j), m(col, j));
                d = zero_like(d) - d;
            }
            d = d * m(col, col);
            T inv = one_like(d) / m(col, col);
            for (int i = col + 1; i < r_; ++i) {
                if (is_zero_elem(m(i, col))) continue;
                T f = m(i, col) * inv;
                for (int j = col; j < c_; ++j) m(i, j) = m(i, j) - f * m(col, j);
            }
        }
        return d;
    }

    Mat inverse() const {
        assert(r_ == c_);
        Mat m = *this;
        Mat inv = identity(r_, sample());
        for (int col = 0; col < c_; ++col) {
            int piv = -1;
            for (int i = col; i < r_; ++i)
                if (!is_zero_elem(m(i, col))) {
                    piv = i;
                    break;
                }
            if (piv < 0) throw SingularMatrix("singular matrix");
            if (piv != col)
                for (int j = 0; j < c_; ++j) {
                    std::swap(m(piv, j), m(col, j));
                    std::swap(inv(piv, j), inv(col, j));
                }
            T f = one_like(sample()) / m(col, col);
            for (int j = 0; j < c_; ++j) {
                m(col, j) = f * m(col, j);
                inv(col, j) = f * inv(col, j);
            }
            for (int i = 0; i < r_; ++i) {
                if (i == col || is_zero_elem(m(i, col))) continue;
                T g = m(i, col);
                for (int j = 0; j < c_; ++j) {
                    m(i, j) = m(i, j) - g * m(col, j);
                    inv(i, j) = inv(i, j) - g * inv(col, j);
                }
            }
        }
        return inv;
    }

    std::vector<T> solve(const std::vector<T>& rhs) const {
        Mat inv = inverse();
        return inv.apply(rhs);
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        assert(static_cast<int>(v.size()) == c_);
        std::vector<T> out(r_, zero_like(sample()));
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out[i] = out[i] + (*this)(i, j) * v[j];
        return out;
    }

    std::vector<T> col(int j) const {
        std::vector<T> v;
        v.reserve(r_);
        for (int i = 0; i < r_; ++i) v.push_back((*this)(i, j));
        return v;
    }
    std::vector<T> row(int i) const {
        std::vector<T> v;
        v.reserve(c_);
        for (int j = 0; j < c_; ++j) v.push_back((*this)(i, j));
        return v;
    }
    void set_col(int j, const std::vector<T>& v) {
        for (int i = 0; i < r_; ++i) (*this)(i, j) = v[i];
    }

    Mat block(int i0, int j0, int nr, int nc) const {
        Mat m = zeros(nr, nc, sample());
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
        return m;
    }

  private:
    int r_, c_;
    std::vector<T> a_;
};

using QMat = Mat<Rat>;
using FMat = Mat<QuadElem>;

// Q(sqrt d)-matrix as pair of rational matrices: M = A + B*sqrt(d).
inline void split_parts(const FMat& m, QMat& A, QMat& B) {
    A = QMat(m.rows(), m.cols(), Rat(0));
    B = QMat(m.rows(), m.cols(), Rat(0));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            A(i, j) = m(i, j).a;
            B(i, j) = m(i, j).b;
        }
}

inline FMat join_parts(long d, const QMat& A, const QMat& B) {
    FMat m(A.rows(), A.cols(), QuadElem::zero(d));
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) m(i, j) = QuadElem(d, A(i, j), B(i, j));
    return m;
}

inline FMat lift_to_quad(long d, const QMat& A) {
    FMat m(A.rows(), A.cols(), QuadElem::zero(d));
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) m(i, j) = QuadElem(d, A(i, j));
    return m;
}

// Characteristic polynomial det(T*I - A), monic, by the Faddeev-LeVerrier
// recursion (valid over any Q-algebra).  Returned low-to-high.
template <class T>
std::vector<T> charpoly(const Mat<T>& A) {
    int n = A.rows();
    assert(n == A.cols());
    T one = one_like(A.sample());
    std::vector<T> c(static_cast<size_t>(n) + 1, zero_like(A.sample()));
    c[n] = one;
    Mat<T> M = Mat<T>::zeros(n, n, A.sample());
    for (int k = 1; k <= n; ++k) {
        M = A * M;
        for (int i = 0; i < n; ++i) M(i, i) = M(i, i) + c[n - k + 1];
        T tr = zero_like(A.sample());
        Mat<T> AM = A * M;
        for (int i = 0; i < n; ++i) tr = tr + AM(i, i);
        Rat mk(-1, k);
        c[n - k] = mk * tr;
    }
    return c;
}

}  // namespace jr
