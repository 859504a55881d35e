#pragma once

#include <complex>
#include <vector>
#include <cstddef>

#include "pcone/errors.hpp"

namespace pcone {

using cplx = std::complex<double>;

/// Dense complex square matrix, row-major. Value type; all arithmetic is
/// out-of-place.
class CMatrix {
public:
    CMatrix() : n_(0) {}
    explicit CMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * n) {}

    static CMatrix identity(int n);
    static CMatrix zero(int n) { return CMatrix(n); }

    int n() const { return n_; }

    cplx& operator()(int i, int j) { return data_[static_cast<size_t>(i) * n_ + j]; }
    const cplx& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * n_ + j]; }

    const std::vector<cplx>& data() const { return data_; }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    CMatrix conj() const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s);
    CMatrix& operator*=(double s);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { a += b; return a; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { a -= b; return a; }
    friend CMatrix operator*(CMatrix a, double s) { a *= s; return a; }
    friend CMatrix operator*(double s, CMatrix a) { a *= s; return a; }
    friend CMatrix operator*(CMatrix a, cplx s) { a *= s; return a; }
    friend CMatrix operator*(cplx s, CMatrix a) { a *= s; return a; }
    friend CMatrix operator-(CMatrix a) { a *= -1.0; return a; }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

    bool operator==(const CMatrix& o) const { return n_ == o.n_ && data_ == o.data_; }

    /// max_{ij} |a_ij|
    double max_abs() const;
    double frobenius() const;
    cplx trace() const;

    bool all_finite() const;

private:
    int n_;
    std::vector<cplx> data_;
};

inline void check_same_dim(const CMatrix& a, const CMatrix& b) {
    if (a.n() != b.n()) throw DimensionMismatch("matrix dimensions differ");
}

/// Re tr(a* b) — the real trace inner product.
double trace_dot(const CMatrix& a, const CMatrix& b);

} // namespace pcone
