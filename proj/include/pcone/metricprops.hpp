#pragma once

#include <string>
#include <vector>

#include "pcone/cone.hpp"

namespace pcone {

/// One verified inequality instance. pass <=> gap >= -tolerance_used.
struct GapReport {
    std::string name;
    double gap = 0.0;
    std::string inputs_digest;
    double tolerance_used = 0.0;

    bool pass() const { return gap >= -tolerance_used; }
    std::string json_line() const;
};

/// FNV-1a digest over the raw entries of the listed matrices.
std::string digest_of(const std::vector<const CMatrix*>& ms);

/// d(exp_x v, exp_x w) - ||v - w||_x; nonnegative for every p.
double emi_gap(const PosDefMatrix& x, const TangentAt& v, const TangentAt& w,
               const SchattenP& p);

/// (1/2)(d(x,y)^p + d(x,z)^p) - d(x, midpoint(y,z))^p - d(y,z)^p / (2K)^p.
/// Requires Real p >= 2.
double pparallelogram_gap(const PosDefMatrix& x, const PosDefMatrix& y,
                          const PosDefMatrix& z, const SchattenP& p, double K);

/// Midpoint convexity of f(t) = d(geoA(t), geoB(t)):
/// (1/2)(f(0) + f(1)) - f(1/2).
double geodesic_convexity_gap(const Geodesic& geoA, const Geodesic& geoB,
                              const SchattenP& p);

/// t d(a,b) - || ln(a^{-t/2} b^t a^{-t/2}) ||_p for t in [0,1].
double loewner_heinz_gap(const PosDefMatrix& a, const PosDefMatrix& b, double t,
                         const SchattenP& p);

/// (r ||v-w||_x - d(exp_x(rv), exp_x(rw))) / (r^2 d(exp_x v, exp_x w));
/// nonpositive for every r > 0.
double curvature_estimate(const PosDefMatrix& x, const TangentAt& v,
                          const TangentAt& w, double r, const SchattenP& p);

struct CurvatureLimit {
    double s;           // Richardson-extrapolated limit of the estimate
    double lower_bound; // -||R(v,w)||_p / ||v-w||_p
};

/// Extrapolates the estimate from r in {1e-2, 5e-3, 2.5e-3}.
CurvatureLimit curvature_limit(const PosDefMatrix& x, const TangentAt& v,
                               const TangentAt& w, const SchattenP& p);

/// | d(exp(rv), exp(rw)) - || r(w-v) + r^3 R(v,w) ||_p |. Requires the
/// series regime ||rv||_inf, ||rw||_inf <= 1/2.
double bch_distance_remainder(const HermitianMatrix& v, const HermitianMatrix& w,
                              double r, const SchattenP& p);

struct BirkhoffResult {
    double gap;
    HermitianMatrix witness; // the subspace element attaining the estimated min
};

/// Estimates min_{s in span(basis)} ||v + s||_p - ||v||_p by multi-start
/// coordinate descent (5 starts, 200 iterations, step shrink 0.5). Always
/// <= 0; a value >= -tol certifies Birkhoff orthogonality.
BirkhoffResult birkhoff_gap(const HermitianMatrix& v,
                            const std::vector<HermitianMatrix>& basis,
                            const SchattenP& p);

/// Smallest K over sampled pairs satisfying the weak Clarkson inequality
/// 2(K^{-p} ||v||^p + ||w||^p) <= ||v+w||^p + ||v-w||^p, clamped to >= 1.
double convexity_constant_estimate(const SchattenP& p, int n, int trials,
                                   std::uint64_t seed = 2024);

} // namespace pcone
