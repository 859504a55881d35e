#include "pcone/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "pcone/matrix_io.hpp"
#include "pcone/rng.hpp"

namespace pcone {

BlockPartition::BlockPartition(int n, std::vector<std::vector<int>> blocks)
    : n_(n), blocks_(std::move(blocks)), block_of_(n, -1) {
    if (n <= 0) throw DomainError("partition of an empty index set");
    int covered = 0;
    for (size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].empty()) throw DomainError("empty block in partition");
        for (int i : blocks_[b]) {
            if (i < 0 || i >= n) throw DomainError("partition index out of range");
            if (block_of_[i] != -1) throw DomainError("partition blocks overlap");
            block_of_[i] = static_cast<int>(b);
            ++covered;
        }
    }
    if (covered != n) throw DomainError("partition does not cover all indices");
}

BlockPartition BlockPartition::diagonal(int n) {
    std::vector<std::vector<int>> blocks(n);
    for (int i = 0; i < n; ++i) blocks[i] = {i};
    return BlockPartition(n, std::move(blocks));
}

BlockPartition BlockPartition::parse(int n, const std::string& text) {
    std::vector<std::vector<int>> blocks;
    std::stringstream ss(text);
    std::string block;
    while (std::getline(ss, block, '|')) {
        std::vector<int> ids;
        std::stringstream bs(block);
        std::string tok;
        while (std::getline(bs, tok, ',')) {
            if (tok.empty()) throw DomainError("malformed partition: empty index");
            size_t pos = 0;
            int id;
            try {
                id = std::stoi(tok, &pos);
            } catch (const std::exception&) {
                throw DomainError("malformed partition: '" + tok + "'");
            }
            if (pos != tok.size()) throw DomainError("malformed partition: '" + tok + "'");
            ids.push_back(id);
        }
        blocks.push_back(std::move(ids));
    }
    return BlockPartition(n, std::move(blocks));
}

std::vector<HermitianMatrix> BlockPartition::hermitian_basis() const {
    std::vector<HermitianMatrix> out;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (const auto& blk : blocks_) {
        for (size_t a = 0; a < blk.size(); ++a) {
            CMatrix e(n_);
            e(blk[a], blk[a]) = 1.0;
            out.emplace_back(e);
            for (size_t b = a + 1; b < blk.size(); ++b) {
                CMatrix re(n_), im(n_);
                re(blk[a], blk[b]) = inv_sqrt2;
                re(blk[b], blk[a]) = inv_sqrt2;
                im(blk[a], blk[b]) = cplx(0.0, inv_sqrt2);
                im(blk[b], blk[a]) = cplx(0.0, -inv_sqrt2);
                out.emplace_back(re);
                out.emplace_back(im);
            }
        }
    }
    return out;
}

std::vector<HermitianMatrix> BlockPartition::complement_basis() const {
    std::vector<HermitianMatrix> out;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            if (same_block(i, j)) continue;
            CMatrix re(n_), im(n_);
            re(i, j) = inv_sqrt2;
            re(j, i) = inv_sqrt2;
            im(i, j) = cplx(0.0, inv_sqrt2);
            im(j, i) = cplx(0.0, -inv_sqrt2);
            out.emplace_back(re);
            out.emplace_back(im);
        }
    return out;
}

CMatrix conditional_expectation(const CMatrix& X, const BlockPartition& part) {
    if (X.n() != part.n()) throw DimensionMismatch("matrix does not match partition size");
    CMatrix out(X.n());
    for (int i = 0; i < X.n(); ++i)
        for (int j = 0; j < X.n(); ++j)
            if (part.same_block(i, j)) out(i, j) = X(i, j);
    return out;
}

HermitianMatrix conditional_expectation(const HermitianMatrix& X, const BlockPartition& part) {
    return HermitianMatrix(conditional_expectation(X.mat(), part));
}

namespace {

/// Projects onto span(basis) in the trace inner product via the Gram system.
class SpanProjector {
public:
    explicit SpanProjector(const std::vector<HermitianMatrix>& basis) {
        if (basis.empty()) throw DegenerateBasis("empty basis");
        for (const auto& b : basis) {
            const double f = b.mat().frobenius();
            if (f <= 0.0) throw DegenerateBasis("zero basis element");
            basis_.push_back(b * (1.0 / f));
        }
        const int k = static_cast<int>(basis_.size());
        CMatrix gram(k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                gram(i, j) = trace_dot(basis_[i].mat(), basis_[j].mat());
        gram_eig_ = eigh(HermitianMatrix(gram));
        if (gram_eig_.eigenvalues.front() <= 1e-10 * gram_eig_.eigenvalues.back())
            throw DegenerateBasis("basis is numerically dependent (Gram rank deficient)");
    }

    const std::vector<HermitianMatrix>& basis() const { return basis_; }

    std::vector<double> coefficients(const HermitianMatrix& X) const {
        const int k = static_cast<int>(basis_.size());
        std::vector<double> b(k), c(k, 0.0);
        for (int i = 0; i < k; ++i) b[i] = trace_dot(basis_[i].mat(), X.mat());
        // c = G^{-1} b through the Gram eigendecomposition
        for (int m = 0; m < k; ++m) {
            double um_b = 0.0;
            for (int i = 0; i < k; ++i) um_b += gram_eig_.U(i, m).real() * b[i];
            const double w = um_b / gram_eig_.eigenvalues[m];
            for (int i = 0; i < k; ++i) c[i] += gram_eig_.U(i, m).real() * w;
        }
        return c;
    }

    double residual(const HermitianMatrix& X) const {
        const std::vector<double> c = coefficients(X);
        HermitianMatrix r = X;
        for (size_t i = 0; i < basis_.size(); ++i) r -= basis_[i] * c[i];
        return r.mat().frobenius();
    }

private:
    std::vector<HermitianMatrix> basis_;
    EigenDecomposition gram_eig_;
};

} // namespace

StructureCheck is_lie_triple(const std::vector<HermitianMatrix>& basis) {
    const SpanProjector proj(basis);
    const auto& bs = proj.basis();
    const int k = static_cast<int>(bs.size());
    double defect = 0.0, scale = 1.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            if (i == j) continue; // [v,v] = 0
            const CMatrix br = commutator(bs[i], bs[j]);
            for (int l = 0; l < k; ++l) {
                const HermitianMatrix t(br * bs[l].mat() - bs[l].mat() * br);
                scale = std::max(scale, t.mat().frobenius());
                defect = std::max(defect, proj.residual(t));
            }
        }
    return {defect <= 1e-9 * scale, defect};
}

StructureCheck is_reductive(const std::vector<HermitianMatrix>& s_basis,
                            const std::vector<HermitianMatrix>& sprime_basis) {
    if (sprime_basis.empty()) return {true, 0.0}; // vacuous
    const SpanProjector ps(s_basis);
    const SpanProjector pp(sprime_basis);
    {
        // trivial span intersection: the combined family must stay independent
        std::vector<HermitianMatrix> both = ps.basis();
        for (const auto& b : pp.basis()) both.push_back(b);
        SpanProjector combined(both); // throws DegenerateBasis on overlap
    }
    double defect = 0.0, scale = 1.0;
    for (const auto& s : ps.basis())
        for (const auto& sp : pp.basis()) {
            const HermitianMatrix t = double_ad(s, sp);
            scale = std::max(scale, t.mat().frobenius());
            defect = std::max(defect, pp.residual(t));
        }
    return {defect <= 1e-9 * scale, defect};
}

namespace {

HermitianMatrix exp_neg(const HermitianMatrix& s) {
    return matrix_fn(s, [](double x) { return std::exp(-x); });
}

HermitianMatrix log_conjugated(const HermitianMatrix& es, const PosDefMatrix& P) {
    const PosDefMatrix m{HermitianMatrix(es.mat() * P.mat() * es.mat())};
    return m.log();
}

/// dense real solve with partial pivoting; A is overwritten
std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
    const int k = static_cast<int>(b.size());
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-300) throw NoConvergence("singular newton system");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < k; ++r) {
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < k; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(k);
    for (int r = k - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < k; ++c) acc -= A[r][c] * x[c];
        x[r] = acc / A[r][r];
    }
    return x;
}

} // namespace

CprFactorization cpr_factorize(const CMatrix& g, const BlockPartition& part,
                               const SchattenP& p,
                               const std::optional<HermitianMatrix>& initial_s) {
    (void)p; // the splitting equation E(ln(e^{-s} gg* e^{-s})) = 0 is norm-free
    if (g.n() != part.n()) throw DimensionMismatch("matrix does not match partition size");
    const HermitianMatrix gram(g * g.adjoint());
    const EigenDecomposition gd = eigh(gram);
    if (gd.eigenvalues.front() <= (kEpsPd * kEpsPd) * gd.eigenvalues.back())
        throw Singular("cpr factorization requires an invertible matrix");
    const PosDefMatrix P(gram);

    HermitianMatrix s = initial_s ? conditional_expectation(*initial_s, part)
                                  : HermitianMatrix::zero(g.n());
    const double scale = std::max(1.0, P.log().mat().max_abs());
    const double target = 1e-12 * scale;

    const std::vector<HermitianMatrix> basis = part.hermitian_basis();
    const int k = static_cast<int>(basis.size());
    auto residual_at = [&](const HermitianMatrix& ss) {
        return conditional_expectation(log_conjugated(exp_neg(ss), P), part);
    };
    auto coeffs_of = [&](const HermitianMatrix& E) {
        std::vector<double> c(k);
        for (int i = 0; i < k; ++i) c[i] = trace_dot(basis[i].mat(), E.mat());
        return c;
    };

    HermitianMatrix E = residual_at(s);
    double res = E.mat().max_abs();
    double damp = 0.5;
    int it = 0;
    // damped fixed-point phase: cheap global progress, capped so stiff
    // instances hand over to the newton phase early
    for (; it < 30 && res > 1e-3 * scale; ++it) {
        for (;;) {
            const HermitianMatrix s_try = s + E * damp;
            const HermitianMatrix E_try = residual_at(s_try);
            const double res_try = E_try.mat().max_abs();
            if (res_try < res) {
                s = s_try;
                E = E_try;
                res = res_try;
                damp = std::min(0.5, damp * 1.4);
                break;
            }
            damp *= 0.5;
            if (damp < 1e-14) throw NoConvergence("cpr fixed-point iteration stalled");
        }
    }
    // damped newton phase on the block coefficients: the fixed-point rate
    // degrades on strongly rotated instances, this stays quadratic
    for (; it < 200 && res > target; ++it) {
        const std::vector<double> f0 = coeffs_of(E);
        const double h = 1e-6 * std::max(1.0, s.mat().max_abs());
        std::vector<std::vector<double>> J(k, std::vector<double>(k));
        for (int j = 0; j < k; ++j) {
            const std::vector<double> fp = coeffs_of(residual_at(s + basis[j] * h));
            const std::vector<double> fm = coeffs_of(residual_at(s - basis[j] * h));
            for (int i = 0; i < k; ++i) J[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
        std::vector<double> rhs(k);
        for (int i = 0; i < k; ++i) rhs[i] = -f0[i];
        const std::vector<double> delta = solve_dense(J, rhs);
        HermitianMatrix dir = HermitianMatrix::zero(g.n());
        for (int i = 0; i < k; ++i) dir += basis[i] * delta[i];
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            const HermitianMatrix s_try = s + dir * alpha;
            const HermitianMatrix E_try = residual_at(s_try);
            const double res_try = E_try.mat().max_abs();
            if (res_try < res) {
                s = s_try;
                E = E_try;
                res = res_try;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) throw NoConvergence("cpr newton phase stalled");
    }
    if (res > target) throw NoConvergence("cpr iteration exceeded 200 steps");

    const HermitianMatrix es_neg = exp_neg(s);
    const HermitianMatrix v = log_conjugated(es_neg, P) * 0.5;
    const CMatrix g_A = matrix_fn(s, [](double x) { return std::exp(x); }).mat();
    const CMatrix u = matrix_fn(v, [](double x) { return std::exp(-x); }).mat() * (es_neg.mat() * g);
    const CMatrix recon = g_A * matrix_fn(v, [](double x) { return std::exp(x); }).mat() * u;
    const double rel = (g - recon).max_abs() / std::max(1e-300, g.max_abs());
    return {g_A, v, u, s, rel};
}

std::string CprFactorization::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"g_A\":" << matrix_to_json(g_A) << ",\"v\":" << matrix_to_json(v.mat())
       << ",\"u\":" << matrix_to_json(u) << ",\"s\":" << matrix_to_json(s.mat())
       << ",\"residual\":" << residual << "}";
    return os.str();
}

ExpectationNorms expectation_norm_estimate(const BlockPartition& part, const SchattenP& p,
                                           int n, int trials, std::uint64_t seed) {
    if (n != part.n()) throw DimensionMismatch("dimension does not match partition");
    if (trials < 1) throw DomainError("expectation norm estimate needs trials >= 1");
    double nE = 0.0, nI = 0.0;
    auto ratios = [&](const CMatrix& X) {
        const double nx = schatten_norm_general(X, p);
        if (nx <= 1e-14) return;
        const CMatrix ex = conditional_expectation(X, part);
        nE = std::max(nE, schatten_norm_general(ex, p) / nx);
        nI = std::max(nI, schatten_norm_general(X - ex, p) / nx);
    };
    for (int t = 0; t < trials; ++t) {
        Rng rng = derive_rng(seed, "expectation-norms", static_cast<std::uint64_t>(t));
        CMatrix X(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) X(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
        ratios(X);
        // fixed-point witnesses: E(X) for E, X - E(X) for 1 - E
        ratios(conditional_expectation(X, part));
        ratios(X - conditional_expectation(X, part));
    }
    return {nE, nI};
}

} // namespace pcone
