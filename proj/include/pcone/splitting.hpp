#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcone/cone.hpp"

namespace pcone {

/// Ordered partition of {0..n-1} into disjoint nonempty blocks; defines the
/// block-diagonal subalgebra and its conditional expectation.
class BlockPartition {
public:
    BlockPartition(int n, std::vector<std::vector<int>> blocks);

    static BlockPartition diagonal(int n);

    /// Parses "0,1|2,3"-style text.
    static BlockPartition parse(int n, const std::string& text);

    int n() const { return n_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    bool same_block(int i, int j) const { return block_of_[i] == block_of_[j]; }

    /// Hermitian basis of the block-diagonal subalgebra (trace-orthonormal).
    std::vector<HermitianMatrix> hermitian_basis() const;

    /// Hermitian basis of the zero-block complement (kernel of E).
    std::vector<HermitianMatrix> complement_basis() const;

private:
    int n_;
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
};

/// Compression to the diagonal blocks; idempotent, trace-preserving,
/// Hermitian-preserving bi-module map.
CMatrix conditional_expectation(const CMatrix& X, const BlockPartition& part);
HermitianMatrix conditional_expectation(const HermitianMatrix& X, const BlockPartition& part);

struct StructureCheck {
    bool pass;
    double defect;
};

/// Does span(basis) satisfy [[v,w],s] in span for all basis triples?
/// defect is the largest projection residual in the trace inner product.
StructureCheck is_lie_triple(const std::vector<HermitianMatrix>& basis);

/// Is double_ad(s, s') in span(sprime_basis) for all pairs? Requires the two
/// spans to intersect trivially.
StructureCheck is_reductive(const std::vector<HermitianMatrix>& s_basis,
                            const std::vector<HermitianMatrix>& sprime_basis);

struct CprFactorization {
    CMatrix g_A;        // block-diagonal invertible, = exp(s)
    HermitianMatrix v;  // E(v) = 0
    CMatrix u;          // unitary
    HermitianMatrix s;  // block-diagonal Hermitian
    double residual;    // ||g - g_A exp(v) u||_max relative to ||g||_max

    std::string to_json() const;
};

/// Factorizes invertible g as g_A exp(v) u by solving
/// E(ln(e^{-s} g g* e^{-s})) = 0 for block-diagonal Hermitian s with a damped
/// fixed-point iteration. Deterministic; an initial guess may be supplied.
CprFactorization cpr_factorize(const CMatrix& g, const BlockPartition& part,
                               const SchattenP& p,
                               const std::optional<HermitianMatrix>& initial_s = std::nullopt);

struct ExpectationNorms {
    double normE;
    double normOneMinusE;
};

/// Sampled operator norms sup ||E(X)||_p / ||X||_p and
/// sup ||X - E(X)||_p / ||X||_p; lower-bound certificates that include the
/// exact fixed-point witnesses.
ExpectationNorms expectation_norm_estimate(const BlockPartition& part, const SchattenP& p,
                                           int n, int trials, std::uint64_t seed = 77);

} // namespace pcone
