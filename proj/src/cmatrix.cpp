#include "pcone/cmatrix.hpp"

#include <cmath>

namespace pcone {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix m(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

CMatrix CMatrix::conj() const {
    CMatrix m(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = std::conj((*this)(i, j));
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    check_same_dim(*this, o);
    for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    check_same_dim(*this, o);
    for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

CMatrix& CMatrix::operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    check_same_dim(a, b);
    const int n = a.n();
    CMatrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double CMatrix::frobenius() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

cplx CMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

bool CMatrix::all_finite() const {
    for (const auto& v : data_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double trace_dot(const CMatrix& a, const CMatrix& b) {
    check_same_dim(a, b);
    double s = 0.0;
    const int n = a.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx v = std::conj(a(i, j)) * b(i, j);
            s += v.real();
        }
    return s;
}

} // namespace pcone
