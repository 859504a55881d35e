#pragma once

#include "pcone/linalg.hpp"

namespace pcone {

/// Tangent vector at a base point. The Finsler norm is base-dependent, so
/// operations reject mismatched bases instead of re-basing silently.
struct TangentAt {
    PosDefMatrix base;
    HermitianMatrix u;

    TangentAt(const PosDefMatrix& b, const HermitianMatrix& v) : base(b), u(v) {
        if (b.n() != v.n()) throw DimensionMismatch("tangent dimension differs from base");
    }

    /// ||base^{-1/2} u base^{-1/2}||_p
    double norm(const SchattenP& p) const;

    /// base^{-1/2} u base^{-1/2} — the representative used by the tangent norm.
    HermitianMatrix rep() const;
};

inline void check_base(const TangentAt& v, const PosDefMatrix& x) {
    if (!(v.base == x)) throw BaseMismatch("tangent vector based at a different point");
}

/// Geodesic through a and b; the eigendecomposition of a^{-1/2} b a^{-1/2}
/// is cached at construction so evaluation at any t is read-only.
class Geodesic {
public:
    Geodesic(const PosDefMatrix& a, const PosDefMatrix& b);

    const PosDefMatrix& a() const { return a_; }
    const PosDefMatrix& b() const { return b_; }

    PosDefMatrix eval(double t) const;

    /// velocity at parameter t: a^{1/2} c^t ln(c) a^{1/2}
    TangentAt velocity(double t) const;

    /// length over [0,1] in the Schatten-p metric = distance(a, b, p)
    double length(const SchattenP& p) const;

private:
    PosDefMatrix a_;
    PosDefMatrix b_;
    HermitianMatrix a_half_;
    HermitianMatrix a_ihalf_;
    PosDefMatrix c_; // a^{-1/2} b a^{-1/2}
};

/// log-eigenvalues of a^{-1/2} b a^{-1/2}; the distance for every p is a
/// norm of this vector.
std::vector<double> distance_spectrum(const PosDefMatrix& a, const PosDefMatrix& b);

double distance(const PosDefMatrix& a, const PosDefMatrix& b, const SchattenP& p);

PosDefMatrix geodesic_eval(const Geodesic& geo, double t);

PosDefMatrix exp_point(const PosDefMatrix& x, const TangentAt& v);

TangentAt log_point(const PosDefMatrix& x, const PosDefMatrix& y);

/// Parallel transport along geo from its start to its end:
/// u -> m u m* with m = a^{1/2} c^{1/2} a^{-1/2}.
TangentAt transport(const Geodesic& geo, const TangentAt& u);

/// The isometric action x -> g x g*.
PosDefMatrix congruence(const CMatrix& g, const PosDefMatrix& x);
TangentAt congruence_tangent(const CMatrix& g, const TangentAt& v);

} // namespace pcone
