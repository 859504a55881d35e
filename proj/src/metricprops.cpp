#include "pcone/metricprops.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "pcone/rng.hpp"

namespace pcone {

std::string GapReport::json_line() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"name\":\"" << name << "\",\"gap\":" << gap
       << ",\"inputs_digest\":\"" << inputs_digest
       << "\",\"tolerance_used\":" << tolerance_used
       << ",\"pass\":" << (pass() ? "true" : "false") << "}";
    return os.str();
}

std::string digest_of(const std::vector<const CMatrix*>& ms) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](double x) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        for (int k = 0; k < 8; ++k) {
            h ^= (bits >> (8 * k)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (const CMatrix* m : ms)
        for (const cplx& v : m->data()) {
            mix(v.real());
            mix(v.imag());
        }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

double emi_gap(const PosDefMatrix& x, const TangentAt& v, const TangentAt& w,
               const SchattenP& p) {
    check_base(v, x);
    check_base(w, x);
    const double lhs = schatten_norm(HermitianMatrix(v.rep() - w.rep()), p);
    const double rhs = distance(exp_point(x, v), exp_point(x, w), p);
    return rhs - lhs;
}

double pparallelogram_gap(const PosDefMatrix& x, const PosDefMatrix& y,
                          const PosDefMatrix& z, const SchattenP& p, double K) {
    if (!p.is_real() || p.value() < 2.0)
        throw UnsupportedNorm("p-parallelogram gap requires Real p >= 2");
    if (!(K > 0.0)) throw DomainError("convexity constant must be positive");
    const double pv = p.value();
    const Geodesic geo(y, z);
    const double dxy = distance(x, y, p);
    const double dxz = distance(x, z, p);
    const double dxm = distance(x, geo.eval(0.5), p);
    const double dyz = distance(y, z, p);
    return 0.5 * (std::pow(dxy, pv) + std::pow(dxz, pv)) - std::pow(dxm, pv) -
           std::pow(dyz / (2.0 * K), pv);
}

double geodesic_convexity_gap(const Geodesic& geoA, const Geodesic& geoB,
                              const SchattenP& p) {
    if (geoA.a().n() != geoB.a().n())
        throw DimensionMismatch("geodesics live in different dimensions");
    const double f0 = distance(geoA.a(), geoB.a(), p);
    const double f1 = distance(geoA.b(), geoB.b(), p);
    const double fh = distance(geoA.eval(0.5), geoB.eval(0.5), p);
    return 0.5 * (f0 + f1) - fh;
}

double loewner_heinz_gap(const PosDefMatrix& a, const PosDefMatrix& b, double t,
                         const SchattenP& p) {
    if (t < 0.0 || t > 1.0) throw RangeError("loewner-heinz exponent must lie in [0,1]");
    const double full = distance(a, b, p);
    const HermitianMatrix at_ih = a.power(-t / 2.0);
    const HermitianMatrix bt = b.power(t);
    const PosDefMatrix inner{HermitianMatrix(at_ih.mat() * bt.mat() * at_ih.mat())};
    const double part = schatten_norm(inner.log(), p);
    return t * full - part;
}

double curvature_estimate(const PosDefMatrix& x, const TangentAt& v,
                          const TangentAt& w, double r, const SchattenP& p) {
    check_base(v, x);
    check_base(w, x);
    if (!(r > 0.0)) throw RangeError("curvature estimate requires r > 0");
    const HermitianMatrix diff(v.rep() - w.rep());
    const double nd = schatten_norm(diff, p);
    if (nd < 1e-10) throw DegenerateInput("curvature estimate requires v != w");
    const double denom = distance(exp_point(x, v), exp_point(x, w), p);
    const TangentAt rv(x, v.u * r), rw(x, w.u * r);
    const double dr = distance(exp_point(x, rv), exp_point(x, rw), p);
    return (r * nd - dr) / (r * r * denom);
}

CurvatureLimit curvature_limit(const PosDefMatrix& x, const TangentAt& v,
                               const TangentAt& w, const SchattenP& p) {
    const double s1 = curvature_estimate(x, v, w, 1e-2, p);
    const double s2 = curvature_estimate(x, v, w, 5e-3, p);
    const double s3 = curvature_estimate(x, v, w, 2.5e-3, p);
    // the estimate is odd in r; two Richardson stages remove the r and r^3 terms
    const double e1 = 2.0 * s2 - s1;
    const double e2 = 2.0 * s3 - s2;
    const double s = (8.0 * e2 - e1) / 7.0;
    const HermitianMatrix rv = v.rep(), rw = w.rep();
    const HermitianMatrix R = bch_curvature_term(rv, rw);
    const double lb = -schatten_norm(R, p) / schatten_norm(HermitianMatrix(rv - rw), p);
    return {s, lb};
}

double bch_distance_remainder(const HermitianMatrix& v, const HermitianMatrix& w,
                              double r, const SchattenP& p) {
    check_same_dim(v.mat(), w.mat());
    const double nv = schatten_norm(v, SchattenP::inf());
    const double nw = schatten_norm(w, SchattenP::inf());
    if (std::abs(r) * std::max(nv, nw) > 0.5 + 1e-15)
        throw RangeError("series regime requires ||rv||_inf, ||rw||_inf <= 1/2");
    const double d = distance(exp_of(v * r), exp_of(w * r), p);
    const HermitianMatrix R = bch_curvature_term(v, w);
    const HermitianMatrix model((w - v) * r + R * (r * r * r));
    return std::abs(d - schatten_norm(model, p));
}

namespace {

struct GramCheck {
    std::vector<HermitianMatrix> basis; // Frobenius-normalized
};

GramCheck checked_basis(const std::vector<HermitianMatrix>& basis) {
    if (basis.empty()) throw DegenerateBasis("empty basis");
    GramCheck out;
    out.basis.reserve(basis.size());
    for (const auto& b : basis) {
        const double f = b.mat().frobenius();
        if (f <= 0.0) throw DegenerateBasis("zero basis element");
        out.basis.push_back(b * (1.0 / f));
    }
    const int k = static_cast<int>(basis.size());
    CMatrix gram(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            gram(i, j) = trace_dot(out.basis[i].mat(), out.basis[j].mat());
    const EigenDecomposition dec = eigh(HermitianMatrix(gram));
    if (dec.eigenvalues.front() <= 1e-10 * dec.eigenvalues.back())
        throw DegenerateBasis("basis is numerically dependent (Gram rank deficient)");
    return out;
}

} // namespace

BirkhoffResult birkhoff_gap(const HermitianMatrix& v,
                            const std::vector<HermitianMatrix>& basis,
                            const SchattenP& p) {
    const GramCheck gc = checked_basis(basis);
    const int k = static_cast<int>(gc.basis.size());
    const double nv = schatten_norm(v, p);

    auto objective = [&](const std::vector<double>& c) {
        HermitianMatrix s = v;
        for (int i = 0; i < k; ++i) s += gc.basis[i] * c[i];
        return schatten_norm(s, p);
    };

    Rng rng = derive_rng(101, "birkhoff-multistart", static_cast<std::uint64_t>(k));
    std::vector<double> best_c(k, 0.0);
    double best_val = nv;

    const double step0 = 1.0 + nv;
    for (int start = 0; start < 5; ++start) {
        std::vector<double> c(k, 0.0);
        if (start > 0)
            for (int i = 0; i < k; ++i) c[i] = rng.next_gaussian() * 0.5 * step0;
        double val = objective(c);
        double step = step0;
        for (int iter = 0; iter < 200; ++iter) {
            bool improved = false;
            for (int i = 0; i < k; ++i) {
                for (double dir : {+1.0, -1.0}) {
                    for (;;) {
                        c[i] += dir * step;
                        const double cand = objective(c);
                        if (cand < val - 1e-16 * (1.0 + std::abs(val))) {
                            val = cand;
                            improved = true;
                        } else {
                            c[i] -= dir * step;
                            break;
                        }
                    }
                }
            }
            if (!improved) {
                step *= 0.5;
                if (step < 1e-12 * step0) break;
            }
        }
        if (val < best_val) {
            best_val = val;
            best_c = c;
        }
    }

    HermitianMatrix witness = HermitianMatrix::zero(v.n());
    for (int i = 0; i < k; ++i) witness += gc.basis[i] * best_c[i];
    return {best_val - nv, witness};
}

double convexity_constant_estimate(const SchattenP& p, int n, int trials,
                                   std::uint64_t seed) {
    if (!p.is_real()) throw UnsupportedNorm("convexity constant defined for Real p only");
    const double pv = p.value();
    double sup = 1.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = derive_rng(seed, "convexity-constant", static_cast<std::uint64_t>(t));
        const HermitianMatrix v = random_hermitian(n, rng);
        HermitianMatrix w = random_hermitian(n, rng);
        w *= rng.next_double(); // vary the relative scale
        const double nvp = std::pow(schatten_norm(v, p), pv);
        const double nwp = std::pow(schatten_norm(w, p), pv);
        const double plus = std::pow(schatten_norm(v + w, p), pv);
        const double minus = std::pow(schatten_norm(v - w, p), pv);
        const double denom = 0.5 * (plus + minus) - nwp;
        if (denom <= 0.0) return std::numeric_limits<double>::infinity();
        const double k = std::pow(nvp / denom, 1.0 / pv);
        sup = std::max(sup, k);
    }
    return sup;
}

} // namespace pcone
