#include "pcone/convexopt.hpp"

#include <algorithm>
#include <cmath>

namespace pcone {

namespace {

constexpr double kGolden = 0.6180339887498949; // (sqrt(5)-1)/2

std::vector<HermitianMatrix> orthonormalize(std::vector<HermitianMatrix> basis) {
    if (basis.empty()) throw DegenerateBasis("empty basis");
    std::vector<HermitianMatrix> out;
    for (auto& b : basis) {
        const double scale0 = b.mat().frobenius();
        if (scale0 <= 0.0) throw DegenerateBasis("zero basis element");
        HermitianMatrix v = b;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : out) v -= q * trace_dot(q.mat(), v.mat());
        const double nv = v.mat().frobenius();
        if (nv <= 1e-10 * scale0)
            throw DegenerateBasis("basis is numerically dependent");
        out.push_back(v * (1.0 / nv));
    }
    return out;
}

/// One-dimensional minimization of a continuous convex-ish function:
/// expanding bracket around 0 followed by golden-section to width tol.
/// Returns (t*, f(t*)).
std::pair<double, double> line_min(const std::function<double(double)>& f,
                                   double h0, double tol) {
    auto eval = [&](double t) {
        const double v = f(t);
        if (!std::isfinite(v)) throw NonFinite("objective returned a non-finite value");
        return v;
    };
    const double f0 = eval(0.0);
    double lo = -h0, hi = h0;
    double flo = eval(lo), fhi = eval(hi);
    if (fhi < f0) {
        while (true) {
            const double next = hi * 2.0;
            const double fn = eval(next);
            if (fn >= fhi || std::abs(next) > 1e8) break;
            lo = hi; flo = fhi;
            hi = next; fhi = fn;
        }
        hi *= 2.0;
        fhi = eval(hi);
    } else if (flo < f0) {
        while (true) {
            const double next = lo * 2.0;
            const double fn = eval(next);
            if (fn >= flo || std::abs(next) > 1e8) break;
            hi = lo; fhi = flo;
            lo = next; flo = fn;
        }
        lo *= 2.0;
        flo = eval(lo);
    }
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = eval(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = eval(x2);
        }
    }
    const double t = 0.5 * (a + b);
    const double ft = eval(t);
    if (f0 <= ft) return {0.0, f0};
    return {t, ft};
}

} // namespace

ConvexSubmanifold::ConvexSubmanifold(int n, std::vector<HermitianMatrix> basis)
    : n_(n), basis_(std::move(basis)) {
    for (const auto& b : basis_)
        if (b.n() != n) throw DimensionMismatch("basis dimension mismatch");
    const StructureCheck chk = is_lie_triple(basis_);
    if (chk.defect > 1e-10)
        throw DomainError("subspace is not closed under the double bracket");
}

ConvexSubmanifold ConvexSubmanifold::block_diagonal(const BlockPartition& part) {
    return ConvexSubmanifold(part.n(), part.hermitian_basis());
}

ConvexSubmanifold ConvexSubmanifold::linear_subspace(std::vector<HermitianMatrix> basis) {
    if (basis.empty()) throw DegenerateBasis("empty basis");
    const int n = basis.front().n();
    return ConvexSubmanifold(n, orthonormalize(std::move(basis)));
}

PosDefMatrix ConvexSubmanifold::point(const std::vector<double>& coeffs) const {
    if (coeffs.size() != basis_.size()) throw DimensionMismatch("coefficient count mismatch");
    HermitianMatrix z = HermitianMatrix::zero(n_);
    for (size_t i = 0; i < basis_.size(); ++i) z += basis_[i] * coeffs[i];
    return exp_of(z);
}

std::vector<double> ConvexSubmanifold::project_coefficients(const HermitianMatrix& X) const {
    std::vector<double> c(basis_.size());
    for (size_t i = 0; i < basis_.size(); ++i) c[i] = trace_dot(basis_[i].mat(), X.mat());
    return c;
}

bool ConvexSubmanifold::contains(const PosDefMatrix& x, double tol) const {
    if (x.n() != n_) return false;
    const HermitianMatrix z = x.log();
    const std::vector<double> c = project_coefficients(z);
    HermitianMatrix r = z;
    for (size_t i = 0; i < basis_.size(); ++i) r -= basis_[i] * c[i];
    return r.mat().frobenius() <= tol * std::max(1.0, z.mat().frobenius());
}

std::pair<double, double> minimize_along_geodesic(
    const std::function<double(const PosDefMatrix&)>& f, const PosDefMatrix& a,
    const PosDefMatrix& b, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const Geodesic geo(a, b);
    auto eval = [&](double t) {
        const double v = f(geo.eval(t));
        if (!std::isfinite(v)) throw NonFinite("objective returned a non-finite value");
        return v;
    };
    double lo = 0.0, hi = 1.0;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = eval(x1), f2 = eval(x2);
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = eval(x2);
        }
    }
    const double t = 0.5 * (lo + hi);
    return {t, eval(t)};
}

MinimizerResult best_approximation(const PosDefMatrix& x, const ConvexSubmanifold& C,
                                   const SchattenP& p, double tol,
                                   const std::optional<std::vector<double>>& initial,
                                   const TraceSink& trace) {
    if (!p.is_real())
        throw UnsupportedNorm("best approximation requires a strictly convex norm (Real p)");
    if (x.n() != C.n()) throw DimensionMismatch("point dimension differs from submanifold");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

    const size_t k = C.basis().size();
    std::vector<double> c;
    if (initial) {
        if (initial->size() != k) throw DimensionMismatch("initial coefficient count mismatch");
        c = *initial;
    } else {
        c = C.project_coefficients(x.log()); // warm start; exact in the commuting case
    }

    auto phi = [&](const std::vector<double>& cc) { return distance(x, C.point(cc), p); };
    double value = phi(c);
    const double line_tol = 0.25 * tol;

    int outer = 0;
    for (; outer < 500; ++outer) {
        double step_norm = 0.0;
        for (size_t i = 0; i < k; ++i) {
            auto g = [&](double t) {
                std::vector<double> cc = c;
                cc[i] += t;
                return phi(cc);
            };
            const auto [t, ft] = line_min(g, 0.5, line_tol);
            if (t != 0.0) {
                c[i] += t;
                value = ft;
                step_norm = std::max(step_norm, std::abs(t));
            }
        }
        if (trace) trace(outer, value, step_norm);
        if (step_norm < tol) break;
    }
    if (outer >= 500) throw NoConvergence("best approximation exceeded 500 outer iterations");

    const PosDefMatrix point = C.point(c);
    const HermitianMatrix ih = point.inv_sqrt();
    const PosDefMatrix conj{HermitianMatrix(ih.mat() * x.mat() * ih.mat())};
    const HermitianMatrix vlog = conj.log();
    const double fog = birkhoff_gap(vlog, C.basis(), p).gap;
    return {point, value, outer + 1, fog};
}

std::pair<PosDefMatrix, double> moreau_yoshida_resolvent(
    const std::function<double(const PosDefMatrix&)>& F, const PosDefMatrix& x0,
    double lambda, const SchattenP& p, double tol, const TraceSink& trace,
    const std::optional<PosDefMatrix>& initial) {
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (!p.is_real() || p.value() < 2.0)
        throw UnsupportedNorm("moreau-yoshida resolvent requires Real p >= 2");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const double pv = p.value();

    auto objective = [&](const PosDefMatrix& y) {
        const double fy = F(y);
        const double v = lambda * fy + std::pow(distance(x0, y, p), pv);
        if (!std::isfinite(v)) throw NonFinite("objective returned a non-finite value");
        return v;
    };

    const int n = x0.n();
    // orthonormal Hermitian coordinate directions with cached decompositions
    std::vector<HermitianMatrix> dirs;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        CMatrix e(n);
        e(i, i) = 1.0;
        dirs.emplace_back(e);
        for (int j = i + 1; j < n; ++j) {
            CMatrix re(n), im(n);
            re(i, j) = inv_sqrt2;
            re(j, i) = inv_sqrt2;
            im(i, j) = cplx(0.0, inv_sqrt2);
            im(j, i) = cplx(0.0, -inv_sqrt2);
            dirs.emplace_back(re);
            dirs.emplace_back(im);
        }
    }
    std::vector<EigenDecomposition> dir_eig;
    dir_eig.reserve(dirs.size());
    for (const auto& B : dirs) dir_eig.push_back(eigh(B));
    auto exp_dir = [&](size_t j, double t) {
        const EigenDecomposition& dec = dir_eig[j];
        CMatrix lam(n);
        for (int i = 0; i < n; ++i) lam(i, i) = std::exp(t * dec.eigenvalues[i]);
        return dec.U * lam * dec.U.adjoint();
    };

    PosDefMatrix y = initial ? *initial : x0;
    if (y.n() != n) throw DimensionMismatch("initial point dimension mismatch");
    double val = objective(y);
    double line_tol = 0.02; // tightened as the iterate settles
    int outer = 0;
    for (; outer < 500; ++outer) {
        double step_norm = 0.0;
        for (size_t j = 0; j < dirs.size(); ++j) {
            const HermitianMatrix yh = y.sqrt();
            // geodesic through y in direction y^{1/2} B y^{1/2}
            auto g = [&](double t) {
                return objective(
                    PosDefMatrix(HermitianMatrix(yh.mat() * exp_dir(j, t) * yh.mat())));
            };
            const auto [t, ft] = line_min(g, 0.5, line_tol);
            if (t != 0.0) {
                y = PosDefMatrix(HermitianMatrix(yh.mat() * exp_dir(j, t) * yh.mat()));
                val = ft;
                step_norm = std::max(step_norm, std::abs(t));
            }
        }
        if (trace) trace(outer, val, step_norm);
        if (step_norm < tol && line_tol <= 0.25 * tol) break;
        line_tol = std::max(0.25 * tol, std::min(line_tol, 0.02 * std::max(step_norm, tol)));
    }
    if (outer >= 500) throw NoConvergence("moreau-yoshida descent exceeded 500 outer iterations");
    return {y, val};
}

std::pair<PosDefMatrix, double> circumcenter(const std::vector<PosDefMatrix>& S,
                                             const SchattenP& p, double tol,
                                             const TraceSink& trace) {
    if (S.empty()) throw EmptySet("circumcenter of an empty set");
    if (!p.is_real() || p.value() < 2.0)
        throw UnsupportedNorm("circumcenter requires Real p >= 2");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    for (const auto& s : S)
        if (s.n() != S.front().n()) throw DimensionMismatch("mixed dimensions in point set");

    auto radius_at = [&](const PosDefMatrix& x) {
        double r = 0.0;
        int far = 0;
        for (size_t i = 0; i < S.size(); ++i) {
            const double d = distance(x, S[i], p);
            if (d > r) {
                r = d;
                far = static_cast<int>(i);
            }
        }
        return std::make_pair(r, far);
    };

    PosDefMatrix x = S.front();
    auto [r, far] = radius_at(x);
    PosDefMatrix best_x = x;
    double best_r = r;
    int stall = 0;
    for (int k = 0; stall < 20 && k < 100000; ++k) {
        if (best_r <= tol) break; // single point or coincident set
        const double step = 1.0 / (k + 2.0);
        x = Geodesic(x, S[far]).eval(step);
        std::tie(r, far) = radius_at(x);
        if (r < best_r - tol) {
            best_r = r;
            best_x = x;
            stall = 0;
        } else {
            if (r < best_r) { best_r = r; best_x = x; }
            ++stall;
        }
        if (trace) trace(k, r, step);
    }
    return {best_x, best_r};
}

std::vector<HermitianMatrix> tangent_basis(const ConvexSubmanifold& C,
                                           const PosDefMatrix& at) {
    if (at.n() != C.n()) throw DimensionMismatch("point dimension differs from submanifold");
    if (!C.contains(at, 1e-8)) throw NotInSubmanifold("base point does not lie on the submanifold");
    const HermitianMatrix h = at.sqrt();
    std::vector<HermitianMatrix> out;
    out.reserve(C.basis().size());
    for (const auto& s : C.basis())
        out.emplace_back(HermitianMatrix(h.mat() * s.mat() * h.mat()));
    return out;
}

} // namespace pcone
