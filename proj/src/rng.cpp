#include "pcone/rng.hpp"

#include <cmath>

namespace pcone {

double Rng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Rng derive_rng(std::uint64_t seed, std::string_view name, std::uint64_t index) {
    std::uint64_t s = seed;
    s ^= fnv1a(name) + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    s ^= (index + 1) * 0xd1342543de82ef95ULL;
    Rng r(s);
    r.next_u64(); // advance past the raw seed
    return r;
}

HermitianMatrix random_hermitian(int n, Rng& rng) {
    for (;;) {
        CMatrix a(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
        HermitianMatrix h(a);
        const double norm = schatten_norm(h, SchattenP::inf());
        if (norm > 1e-12) return h * (1.0 / norm);
    }
}

PosDefMatrix random_posdef(int n, Rng& rng) {
    return exp_of(random_hermitian(n, rng));
}

CMatrix random_unitary(int n, Rng& rng) {
    for (;;) {
        CMatrix a(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
        a += CMatrix::identity(n) * 1e-2; // nudge away from singularity
        try {
            return polar(a).second;
        } catch (const Singular&) {
            continue;
        }
    }
}

CMatrix random_invertible(int n, Rng& rng) {
    const HermitianMatrix h = random_hermitian(n, rng);
    const CMatrix u = random_unitary(n, rng);
    return exp_of(h).mat() * u;
}

std::pair<HermitianMatrix, HermitianMatrix> random_commuting_pair(int n, Rng& rng) {
    const CMatrix u = random_unitary(n, rng);
    CMatrix d1(n), d2(n);
    for (int i = 0; i < n; ++i) {
        d1(i, i) = rng.next_gaussian();
        d2(i, i) = rng.next_gaussian();
    }
    HermitianMatrix v(u * d1 * u.adjoint());
    HermitianMatrix w(u * d2 * u.adjoint());
    const double nv = schatten_norm(v, SchattenP::inf());
    const double nw = schatten_norm(w, SchattenP::inf());
    if (nv > 1e-12) v *= 1.0 / nv;
    if (nw > 1e-12) w *= 1.0 / nw;
    return {v, w};
}

} // namespace pcone
