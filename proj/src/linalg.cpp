#include "pcone/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pcone {

HermitianMatrix::HermitianMatrix(const CMatrix& a) : m_(a.n()) {
    const int n = a.n();
    for (int i = 0; i < n; ++i) {
        m_(i, i) = cplx(0.5 * (a(i, i).real() + a(i, i).real()), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            m_(i, j) = v;
            m_(j, i) = std::conj(v);
        }
    }
}

CMatrix EigenDecomposition::reconstruct() const {
    const int n = U.n();
    CMatrix lam(n);
    for (int i = 0; i < n; ++i) lam(i, i) = eigenvalues[i];
    return U * lam * U.adjoint();
}

namespace {

double off_diagonal_frobenius(const CMatrix& a) {
    const int n = a.n();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace

EigenDecomposition eigh(const HermitianMatrix& A) {
    const int n = A.n();
    CMatrix a = A.mat();
    CMatrix u = CMatrix::identity(n);

    const double norm_f = a.frobenius();
    EigenDecomposition dec;
    dec.eigenvalues.resize(n);
    if (n == 0) { dec.U = u; return dec; }
    if (norm_f == 0.0) {
        dec.U = u;
        return dec;
    }

    const double target = 1e-13 * norm_f;
    const double skip = target / (16.0 * n * n);
    const int max_sweeps = 60;

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        if (off_diagonal_frobenius(a) <= target) { converged = true; break; }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= skip) continue;

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cplx phase = apq / r; // e^{i phi}

                const double theta = (aqq - app) / (2.0 * r);
                double t;
                if (theta >= 0.0)
                    t = 1.0 / (theta + std::sqrt(1.0 + theta * theta));
                else
                    t = -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sph = s * phase;            // s e^{i phi}
                const cplx sphc = s * std::conj(phase); // s e^{-i phi}

                // rows p,q of a <- J* a
                for (int j = 0; j < n; ++j) {
                    const cplx ap = a(p, j), aq = a(q, j);
                    a(p, j) = c * ap - sph * aq;
                    a(q, j) = s * ap + c * phase * aq;
                }
                // columns p,q of a <- a J
                for (int i = 0; i < n; ++i) {
                    const cplx ap = a(i, p), aq = a(i, q);
                    a(i, p) = c * ap - sphc * aq;
                    a(i, q) = s * ap + c * std::conj(phase) * aq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
                // accumulate u <- u J
                for (int i = 0; i < n; ++i) {
                    const cplx up = u(i, p), uq = u(i, q);
                    u(i, p) = c * up - sphc * uq;
                    u(i, q) = s * up + c * std::conj(phase) * uq;
                }
            }
        }
    }
    if (!converged && off_diagonal_frobenius(a) > target)
        throw NoConvergence("jacobi eigensolver failed to converge in 60 sweeps");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    dec.U = CMatrix(n);
    for (int k = 0; k < n; ++k) {
        dec.eigenvalues[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) dec.U(i, k) = u(i, order[k]);
    }
    return dec;
}

namespace {

HermitianMatrix apply_spectral(const EigenDecomposition& dec,
                               const std::function<double(double)>& f) {
    const int n = dec.U.n();
    std::vector<double> fv(n);
    for (int i = 0; i < n; ++i) {
        fv[i] = f(dec.eigenvalues[i]);
        if (!std::isfinite(fv[i])) {
            std::ostringstream os;
            os << "matrix function undefined at eigenvalue " << dec.eigenvalues[i];
            throw DomainError(os.str());
        }
    }
    CMatrix lam(n);
    for (int i = 0; i < n; ++i) lam(i, i) = fv[i];
    return HermitianMatrix(dec.U * lam * dec.U.adjoint());
}

} // namespace

HermitianMatrix matrix_fn(const HermitianMatrix& A, const std::function<double(double)>& f) {
    return apply_spectral(eigh(A), f);
}

PosDefMatrix::PosDefMatrix(const HermitianMatrix& h) : h_(h), eig_(eigh(h)) {
    const int n = h.n();
    if (n == 0) throw DomainError("empty matrix is not positive definite");
    const double lo = eig_.eigenvalues.front();
    const double hi = eig_.eigenvalues.back();
    if (!(hi > 0.0) || lo <= kEpsPd * hi)
        throw DomainError("matrix is not (safely) positive definite");
}

HermitianMatrix PosDefMatrix::power(double t) const {
    return apply_spectral(eig_, [t](double x) { return std::pow(x, t); });
}

HermitianMatrix PosDefMatrix::log() const {
    return apply_spectral(eig_, [](double x) { return std::log(x); });
}

PosDefMatrix exp_of(const HermitianMatrix& A) {
    EigenDecomposition dec = eigh(A);
    const HermitianMatrix e = apply_spectral(dec, [](double x) { return std::exp(x); });
    for (double& lam : dec.eigenvalues) lam = std::exp(lam); // exp keeps the order
    if (dec.eigenvalues.front() <= kEpsPd * dec.eigenvalues.back())
        throw DomainError("exponential is not safely positive definite at this spread");
    return PosDefMatrix(e, std::move(dec));
}

SchattenP SchattenP::real(double p) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw DomainError("Schatten Real(p) requires finite p > 1");
    return SchattenP(Tag::Real, p);
}

double SchattenP::convexity_exponent() const {
    if (tag_ != Tag::Real) throw UnsupportedNorm("convexity exponent undefined for p in {1, inf}");
    return std::max(p_, 2.0);
}

double SchattenP::convexity_constant() const {
    if (tag_ != Tag::Real) throw UnsupportedNorm("convexity constant undefined for p in {1, inf}");
    if (p_ >= 2.0) return 1.0;
    return 1.0 / std::sqrt(p_ - 1.0); // exponent-2 constant for 1 < p < 2
}

std::string SchattenP::label() const {
    switch (tag_) {
        case Tag::One: return "1";
        case Tag::Inf: return "inf";
        default: {
            std::ostringstream os;
            os << p_;
            return os.str();
        }
    }
}

double schatten_of_eigenvalues(const std::vector<double>& eigs, const SchattenP& p) {
    double m = 0.0;
    for (double x : eigs) m = std::max(m, std::abs(x));
    if (m == 0.0) return 0.0;
    switch (p.tag()) {
        case SchattenP::Tag::Inf: return m;
        case SchattenP::Tag::One: {
            double s = 0.0;
            for (double x : eigs) s += std::abs(x);
            return s;
        }
        default: {
            const double pv = p.value();
            double s = 0.0;
            for (double x : eigs) s += std::pow(std::abs(x) / m, pv);
            return m * std::pow(s, 1.0 / pv);
        }
    }
}

double schatten_norm(const HermitianMatrix& A, const SchattenP& p) {
    return schatten_of_eigenvalues(eigh(A).eigenvalues, p);
}

double schatten_norm_general(const CMatrix& A, const SchattenP& p) {
    const EigenDecomposition dec = eigh(HermitianMatrix(A.adjoint() * A));
    std::vector<double> sv(dec.eigenvalues.size());
    for (size_t i = 0; i < sv.size(); ++i)
        sv[i] = std::sqrt(std::max(0.0, dec.eigenvalues[i]));
    return schatten_of_eigenvalues(sv, p);
}

std::pair<HermitianMatrix, CMatrix> polar(const CMatrix& g) {
    const HermitianMatrix P(g * g.adjoint());
    const EigenDecomposition dec = eigh(P);
    const double hi = dec.eigenvalues.back();
    const double lo = dec.eigenvalues.front();
    if (!(hi > 0.0) || lo <= (kEpsPd * kEpsPd) * hi || lo <= 0.0)
        throw Singular("polar decomposition requires a well-conditioned invertible matrix");
    const HermitianMatrix w = apply_spectral(dec, [](double x) { return 0.5 * std::log(x); });
    const HermitianMatrix exp_neg_w = apply_spectral(dec, [](double x) { return 1.0 / std::sqrt(x); });
    CMatrix u = exp_neg_w.mat() * g;
    return {w, u};
}

CMatrix commutator(const HermitianMatrix& v, const HermitianMatrix& w) {
    check_same_dim(v.mat(), w.mat());
    return v.mat() * w.mat() - w.mat() * v.mat();
}

HermitianMatrix double_ad(const HermitianMatrix& v, const HermitianMatrix& w) {
    const CMatrix c = commutator(v, w);
    return HermitianMatrix(v.mat() * c - c * v.mat());
}

HermitianMatrix bch_curvature_term(const HermitianMatrix& v, const HermitianMatrix& w) {
    check_same_dim(v.mat(), w.mat());
    const CMatrix wv = w.mat() * v.mat() - v.mat() * w.mat();
    const CMatrix vpw = v.mat() + w.mat();
    return HermitianMatrix((vpw * wv - wv * vpw) * (1.0 / 12.0));
}

HermitianMatrix ad_fn(const HermitianMatrix& v, const HermitianMatrix& w,
                      const std::function<double(double)>& f) {
    check_same_dim(v.mat(), w.mat());
    const EigenDecomposition dec = eigh(v);
    const int n = v.n();
    CMatrix wt = dec.U.adjoint() * w.mat() * dec.U;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double gap = dec.eigenvalues[i] - dec.eigenvalues[j];
            const double m = f(gap);
            if (!std::isfinite(m)) {
                std::ostringstream os;
                os << "ad_fn multiplier undefined at spectral gap " << gap;
                throw DomainError(os.str());
            }
            wt(i, j) *= m;
        }
    return HermitianMatrix(dec.U * wt * dec.U.adjoint());
}

double sinhc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

} // namespace pcone
