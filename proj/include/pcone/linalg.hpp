#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "pcone/cmatrix.hpp"

namespace pcone {

/// Relative positive-definiteness guard: fractional powers amplify
/// conditioning, so anything with min-eig <= eps_pd * max-eig is rejected.
inline constexpr double kEpsPd = 1e-12;

/// Complex square matrix with exact Hermitian symmetry, enforced by
/// construction-time symmetrization (A + A*)/2.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const CMatrix& a);

    static HermitianMatrix zero(int n) { return HermitianMatrix(CMatrix::zero(n)); }
    static HermitianMatrix identity(int n) { return HermitianMatrix(CMatrix::identity(n)); }

    int n() const { return m_.n(); }
    const CMatrix& mat() const { return m_; }
    const cplx& operator()(int i, int j) const { return m_(i, j); }

    HermitianMatrix& operator+=(const HermitianMatrix& o) { m_ += o.m_; return *this; }
    HermitianMatrix& operator-=(const HermitianMatrix& o) { m_ -= o.m_; return *this; }
    HermitianMatrix& operator*=(double s) { m_ *= s; return *this; }
    friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { a += b; return a; }
    friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { a -= b; return a; }
    friend HermitianMatrix operator*(HermitianMatrix a, double s) { a *= s; return a; }
    friend HermitianMatrix operator*(double s, HermitianMatrix a) { a *= s; return a; }
    friend HermitianMatrix operator-(HermitianMatrix a) { a *= -1.0; return a; }

    bool operator==(const HermitianMatrix& o) const { return m_ == o.m_; }

private:
    CMatrix m_;
};

struct EigenDecomposition {
    std::vector<double> eigenvalues; // ascending
    CMatrix U;                       // unitary, columns are eigenvectors

    CMatrix reconstruct() const;
};

/// eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
/// Deterministic for fixed input; throws NoConvergence if the off-diagonal
/// norm fails to drop below 1e-13 * ||A||_F within 60 sweeps.
EigenDecomposition eigh(const HermitianMatrix& A);

/// U diag(f(lambda)) U*. Throws DomainError if f is non-finite on the
/// spectrum.
HermitianMatrix matrix_fn(const HermitianMatrix& A, const std::function<double(double)>& f);

/// Point of the positive cone: Hermitian with strictly positive spectrum.
/// Carries its eigendecomposition so powers and logs are cheap.
class PosDefMatrix {
public:
    explicit PosDefMatrix(const HermitianMatrix& h);
    explicit PosDefMatrix(const CMatrix& a) : PosDefMatrix(HermitianMatrix(a)) {}

    static PosDefMatrix identity(int n) { return PosDefMatrix(HermitianMatrix::identity(n)); }

    int n() const { return h_.n(); }
    const HermitianMatrix& hermitian() const { return h_; }
    const CMatrix& mat() const { return h_.mat(); }
    const EigenDecomposition& eig() const { return eig_; }

    HermitianMatrix power(double t) const;
    HermitianMatrix sqrt() const { return power(0.5); }
    HermitianMatrix inv_sqrt() const { return power(-0.5); }
    HermitianMatrix inverse() const { return power(-1.0); }
    HermitianMatrix log() const;

    bool operator==(const PosDefMatrix& o) const { return h_ == o.h_; }

private:
    PosDefMatrix(HermitianMatrix h, EigenDecomposition eig)
        : h_(std::move(h)), eig_(std::move(eig)) {}
    friend PosDefMatrix exp_of(const HermitianMatrix&);

    HermitianMatrix h_;
    EigenDecomposition eig_;
};

/// exp of a Hermitian matrix is positive definite; reuses the spectral data
/// instead of re-decomposing.
PosDefMatrix exp_of(const HermitianMatrix& A);

/// Schatten-p norm selector. Real(p) requires p > 1; One and Inf are the
/// trace and operator norms. Real p carries the uniform-convexity metadata
/// (exponent max(p,2), constant K = 1 for p >= 2).
class SchattenP {
public:
    enum class Tag { One, Real, Inf };

    static SchattenP one() { return SchattenP(Tag::One, 1.0); }
    static SchattenP inf() { return SchattenP(Tag::Inf, 0.0); }
    static SchattenP real(double p);

    Tag tag() const { return tag_; }
    double value() const { return p_; } // meaningful for Real only
    bool is_real() const { return tag_ == Tag::Real; }
    bool strictly_convex() const { return tag_ == Tag::Real; }

    double convexity_exponent() const; // max(p, 2); throws for One/Inf
    double convexity_constant() const; // K = 1 for p >= 2

    std::string label() const;

private:
    SchattenP(Tag t, double p) : tag_(t), p_(p) {}
    Tag tag_;
    double p_;
};

/// p-norm of a vector of (signed) eigenvalues.
double schatten_of_eigenvalues(const std::vector<double>& eigs, const SchattenP& p);

double schatten_norm(const HermitianMatrix& A, const SchattenP& p);

/// p-norm of the singular values of a general square matrix.
double schatten_norm_general(const CMatrix& A, const SchattenP& p);

/// g = exp(w) u with w Hermitian (= ln(g g*) / 2) and u unitary.
/// Throws Singular when min singular value <= eps_pd * max.
std::pair<HermitianMatrix, CMatrix> polar(const CMatrix& g);

/// vw - wv; skew-Hermitian for Hermitian inputs.
CMatrix commutator(const HermitianMatrix& v, const HermitianMatrix& w);

/// [v, [v, w]] — Hermitian for Hermitian inputs.
HermitianMatrix double_ad(const HermitianMatrix& v, const HermitianMatrix& w);

/// (1/12) [v+w, [w, v]] — the third-order term of the geodesic-distance
/// expansion. Antisymmetric under swapping v and w.
HermitianMatrix bch_curvature_term(const HermitianMatrix& v, const HermitianMatrix& w);

/// f(ad v) applied to w through the eigenbasis of v: entrywise multiplier
/// f(lambda_i - lambda_j) on U* w U. f must be finite at every spectral gap.
HermitianMatrix ad_fn(const HermitianMatrix& v, const HermitianMatrix& w,
                      const std::function<double(double)>& f);

/// sinh(x)/x with the analytic value 1 at x = 0.
double sinhc(double x);

} // namespace pcone
