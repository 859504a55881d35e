#pragma once

#include <functional>
#include <optional>

#include "pcone/metricprops.hpp"
#include "pcone/splitting.hpp"

namespace pcone {

/// Iteration trace sink: (iteration, objective, step).
using TraceSink = std::function<void(int, double, double)>;

/// exp(s) for a designated real subspace s of Hermitian matrices. The
/// subspace must be closed under the double bracket [[v,w],s]; block-diagonal
/// subalgebras always are.
class ConvexSubmanifold {
public:
    static ConvexSubmanifold block_diagonal(const BlockPartition& part);
    static ConvexSubmanifold linear_subspace(std::vector<HermitianMatrix> basis);

    int n() const { return n_; }
    const std::vector<HermitianMatrix>& basis() const { return basis_; }

    /// exp of the subspace element with the given coefficients.
    PosDefMatrix point(const std::vector<double>& coeffs) const;

    /// coefficients of the projection of X onto the subspace (trace inner
    /// product; the stored basis is orthonormal).
    std::vector<double> project_coefficients(const HermitianMatrix& X) const;

    /// membership: ln(x) lies in the subspace up to tol (Frobenius)
    bool contains(const PosDefMatrix& x, double tol = 1e-8) const;

private:
    ConvexSubmanifold(int n, std::vector<HermitianMatrix> basis);
    int n_;
    std::vector<HermitianMatrix> basis_; // trace-orthonormal
};

struct MinimizerResult {
    PosDefMatrix point;
    double value;
    int iterations;
    double first_order_gap; // Birkhoff certificate of the connecting log vector
};

/// Golden-section search for a geodesically convex f along geo(a,b),
/// restricted to t in [0,1]; interval narrowed to width tol.
std::pair<double, double> minimize_along_geodesic(
    const std::function<double(const PosDefMatrix&)>& f, const PosDefMatrix& a,
    const PosDefMatrix& b, double tol);

/// Unique nearest point of C to x in the Schatten-p metric (Real p only).
/// Cyclic coordinate descent over the subspace coefficients with
/// golden-section line searches; stops when the coefficient step drops
/// below tol.
MinimizerResult best_approximation(const PosDefMatrix& x, const ConvexSubmanifold& C,
                                   const SchattenP& p, double tol,
                                   const std::optional<std::vector<double>>& initial = std::nullopt,
                                   const TraceSink& trace = nullptr);

/// Minimizer of y -> lambda F(y) + d(x0, y)^p (Real p >= 2). Derivative-free
/// descent: cyclic golden-section line searches along coordinate geodesics
/// through the current iterate. An initial point may be supplied (defaults
/// to x0); the minimizer is unique so it only affects the iteration count.
std::pair<PosDefMatrix, double> moreau_yoshida_resolvent(
    const std::function<double(const PosDefMatrix&)>& F, const PosDefMatrix& x0,
    double lambda, const SchattenP& p, double tol, const TraceSink& trace = nullptr,
    const std::optional<PosDefMatrix>& initial = std::nullopt);

/// Center and radius of the minimal enclosing ball: steps toward the
/// farthest point with weights 1/(k+2), keeping the best iterate; halts
/// after 20 consecutive iterations without a tol-improvement.
std::pair<PosDefMatrix, double> circumcenter(const std::vector<PosDefMatrix>& S,
                                             const SchattenP& p, double tol,
                                             const TraceSink& trace = nullptr);

/// Basis of the tangent space of C at a point of C: {a^{1/2} s_i a^{1/2}}.
std::vector<HermitianMatrix> tangent_basis(const ConvexSubmanifold& C,
                                           const PosDefMatrix& at);

} // namespace pcone
