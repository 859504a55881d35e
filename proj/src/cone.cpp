#include "pcone/cone.hpp"

#include <cmath>

namespace pcone {

HermitianMatrix TangentAt::rep() const {
    const HermitianMatrix ih = base.inv_sqrt();
    return HermitianMatrix(ih.mat() * u.mat() * ih.mat());
}

double TangentAt::norm(const SchattenP& p) const {
    return schatten_norm(rep(), p);
}

Geodesic::Geodesic(const PosDefMatrix& a, const PosDefMatrix& b)
    : a_(a), b_(b), a_half_(a.sqrt()), a_ihalf_(a.inv_sqrt()),
      c_(HermitianMatrix(a_ihalf_.mat() * b.mat() * a_ihalf_.mat())) {
    if (a.n() != b.n()) throw DimensionMismatch("geodesic endpoints differ in dimension");
}

PosDefMatrix Geodesic::eval(double t) const {
    if (t == 0.0) return a_;
    if (t == 1.0) return b_;
    const HermitianMatrix ct = c_.power(t);
    return PosDefMatrix(HermitianMatrix(a_half_.mat() * ct.mat() * a_half_.mat()));
}

TangentAt Geodesic::velocity(double t) const {
    // c^t ln(c) evaluated through the cached decomposition of c
    const EigenDecomposition& dec = c_.eig();
    const int n = c_.n();
    CMatrix lam(n);
    for (int i = 0; i < n; ++i) {
        const double x = dec.eigenvalues[i];
        lam(i, i) = std::pow(x, t) * std::log(x);
    }
    const CMatrix ct_logc = dec.U * lam * dec.U.adjoint();
    const HermitianMatrix vel(a_half_.mat() * ct_logc * a_half_.mat());
    return TangentAt(eval(t), vel);
}

double Geodesic::length(const SchattenP& p) const {
    std::vector<double> logs(c_.eig().eigenvalues.size());
    for (size_t i = 0; i < logs.size(); ++i) logs[i] = std::log(c_.eig().eigenvalues[i]);
    return schatten_of_eigenvalues(logs, p);
}

std::vector<double> distance_spectrum(const PosDefMatrix& a, const PosDefMatrix& b) {
    if (a.n() != b.n()) throw DimensionMismatch("distance between different dimensions");
    const HermitianMatrix ih = a.inv_sqrt();
    const PosDefMatrix c{HermitianMatrix(ih.mat() * b.mat() * ih.mat())};
    std::vector<double> logs(c.eig().eigenvalues.size());
    for (size_t i = 0; i < logs.size(); ++i) logs[i] = std::log(c.eig().eigenvalues[i]);
    return logs;
}

double distance(const PosDefMatrix& a, const PosDefMatrix& b, const SchattenP& p) {
    return schatten_of_eigenvalues(distance_spectrum(a, b), p);
}

PosDefMatrix geodesic_eval(const Geodesic& geo, double t) { return geo.eval(t); }

PosDefMatrix exp_point(const PosDefMatrix& x, const TangentAt& v) {
    check_base(v, x);
    const HermitianMatrix h = x.sqrt();
    const HermitianMatrix inner = v.rep();
    const HermitianMatrix e = matrix_fn(inner, [](double t) { return std::exp(t); });
    return PosDefMatrix(HermitianMatrix(h.mat() * e.mat() * h.mat()));
}

TangentAt log_point(const PosDefMatrix& x, const PosDefMatrix& y) {
    if (x.n() != y.n()) throw DimensionMismatch("log_point between different dimensions");
    const HermitianMatrix h = x.sqrt();
    const HermitianMatrix ih = x.inv_sqrt();
    const PosDefMatrix c{HermitianMatrix(ih.mat() * y.mat() * ih.mat())};
    const HermitianMatrix lg = c.log();
    return TangentAt(x, HermitianMatrix(h.mat() * lg.mat() * h.mat()));
}

TangentAt transport(const Geodesic& geo, const TangentAt& u) {
    check_base(u, geo.a());
    const HermitianMatrix ah = geo.a().sqrt();
    const HermitianMatrix aih = geo.a().inv_sqrt();
    const PosDefMatrix c{HermitianMatrix(aih.mat() * geo.b().mat() * aih.mat())};
    const CMatrix m = ah.mat() * c.sqrt().mat() * aih.mat();
    return TangentAt(geo.b(), HermitianMatrix(m * u.u.mat() * m.adjoint()));
}

PosDefMatrix congruence(const CMatrix& g, const PosDefMatrix& x) {
    check_same_dim(g, x.mat());
    const HermitianMatrix p(g * g.adjoint());
    const EigenDecomposition dec = eigh(p);
    if (dec.eigenvalues.front() <= (kEpsPd * kEpsPd) * dec.eigenvalues.back())
        throw Singular("congruence requires an invertible matrix");
    return PosDefMatrix(HermitianMatrix(g * x.mat() * g.adjoint()));
}

TangentAt congruence_tangent(const CMatrix& g, const TangentAt& v) {
    const PosDefMatrix new_base = congruence(g, v.base);
    return TangentAt(new_base, HermitianMatrix(g * v.u.mat() * g.adjoint()));
}

} // namespace pcone
