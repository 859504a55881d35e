#pragma once

// Test-only oracles, kept independent of the library code paths they check:
// a derivative-free simplex minimizer, plain 2x2 hand arithmetic, truncated
// bracket series, and grid scans.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "pcone/cone.hpp"

namespace oracles {

using pcone::CMatrix;
using pcone::cplx;
using pcone::HermitianMatrix;

/// Nelder-Mead over R^k. Good enough for desk-scale cross-checks at 1e-5.
inline std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step = 0.5, int max_iter = 4000) {
    const size_t k = x0.size();
    struct Vertex {
        std::vector<double> x;
        double fx;
    };
    std::vector<Vertex> simplex;
    simplex.push_back({x0, f(x0)});
    for (size_t i = 0; i < k; ++i) {
        std::vector<double> x = x0;
        x[i] += step;
        simplex.push_back({x, f(x)});
    }
    auto centroid = [&](size_t skip) {
        std::vector<double> c(k, 0.0);
        for (size_t i = 0; i < simplex.size(); ++i) {
            if (i == skip) continue;
            for (size_t j = 0; j < k; ++j) c[j] += simplex[i].x[j];
        }
        for (auto& v : c) v /= static_cast<double>(k);
        return c;
    };
    auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
        std::vector<double> r(k);
        for (size_t j = 0; j < k; ++j) r[j] = a[j] + t * (b[j] - a[j]);
        return r;
    };
    for (int iter = 0; iter < max_iter; ++iter) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
        double spread = 0.0;
        for (size_t j = 0; j < k; ++j)
            spread = std::max(spread, std::abs(simplex.front().x[j] - simplex.back().x[j]));
        if (spread < 1e-11 && std::abs(simplex.front().fx - simplex.back().fx) < 1e-13) break;
        const size_t worst = simplex.size() - 1;
        const std::vector<double> c = centroid(worst);
        const std::vector<double> xr = blend(c, simplex[worst].x, -1.0);
        const double fr = f(xr);
        if (fr < simplex.front().fx) {
            const std::vector<double> xe = blend(c, simplex[worst].x, -2.0);
            const double fe = f(xe);
            simplex[worst] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < simplex[worst - 1].fx) {
            simplex[worst] = {xr, fr};
        } else {
            const std::vector<double> xc = blend(c, simplex[worst].x, 0.5);
            const double fc = f(xc);
            if (fc < simplex[worst].fx) {
                simplex[worst] = {xc, fc};
            } else {
                for (size_t i = 1; i < simplex.size(); ++i) {
                    simplex[i].x = blend(simplex.front().x, simplex[i].x, 0.5);
                    simplex[i].fx = f(simplex[i].x);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
    return {simplex.front().x, simplex.front().fx};
}

/// hand 2x2 complex multiply, independent of CMatrix::operator*
inline CMatrix mul2(const CMatrix& a, const CMatrix& b) {
    CMatrix c(2);
    c(0, 0) = a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0);
    c(0, 1) = a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1);
    c(1, 0) = a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0);
    c(1, 1) = a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1);
    return c;
}

/// truncated series for sinh(ad v)/(ad v) applied to w: sum_k (ad v)^{2k} w / (2k+1)!
inline CMatrix sinhc_ad_series(const CMatrix& v, const CMatrix& w, int terms = 8) {
    CMatrix acc = w;
    CMatrix cur = w;
    double fact = 1.0;
    for (int k = 1; k < terms; ++k) {
        cur = v * cur - cur * v;
        cur = v * cur - cur * v;
        fact *= (2.0 * k) * (2.0 * k + 1.0);
        acc += cur * (1.0 / fact);
    }
    return acc;
}

/// scan f over a uniform grid on [0,1], returning (argmin, min)
inline std::pair<double, double> grid_min(const std::function<double(double)>& f, int cells) {
    double best_t = 0.0, best = f(0.0);
    for (int i = 1; i <= cells; ++i) {
        const double t = static_cast<double>(i) / cells;
        const double v = f(t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    return {best_t, best};
}

} // namespace oracles
