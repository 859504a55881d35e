#include "pcone/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "pcone/rng.hpp"

namespace pcone {

namespace {

TangentAt tangent_from_rep(const PosDefMatrix& x, const HermitianMatrix& rep) {
    const HermitianMatrix h = x.sqrt();
    return TangentAt(x, HermitianMatrix(h.mat() * rep.mat() * h.mat()));
}

std::mutex g_trace_mutex;

TraceSink trace_sink(const SuiteConfig& cfg, const std::string& solver) {
    if (!cfg.trace) return nullptr;
    return [solver](int it, double obj, double step) {
        std::lock_guard<std::mutex> lock(g_trace_mutex);
        std::ostringstream line;
        line.precision(17);
        line << solver << "," << it << "," << obj << "," << step << "\n";
        std::cerr << line.str();
    };
}

std::vector<SchattenP> filter_p(const std::vector<SchattenP>& in,
                                const std::function<bool(const SchattenP&)>& keep,
                                const std::vector<SchattenP>& fallback) {
    std::vector<SchattenP> out;
    for (const auto& p : in)
        if (keep(p)) out.push_back(p);
    return out.empty() ? fallback : out;
}

GapReport bound_check(const std::string& name, double slack, const std::string& digest) {
    // encodes "quantity within bound": slack >= 0 passes
    return GapReport{name, slack, digest, 0.0};
}

using TrialFn = std::function<std::vector<GapReport>(const SuiteConfig&, int)>;

std::vector<GapReport> trial_emi(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "emi", t);
    const PosDefMatrix x = random_posdef(cfg.n, rng);
    const TangentAt v = tangent_from_rep(x, random_hermitian(cfg.n, rng));
    const TangentAt w = tangent_from_rep(x, random_hermitian(cfg.n, rng));
    const std::string dig = digest_of({&x.mat(), &v.u.mat(), &w.u.mat()});
    std::vector<GapReport> out;
    for (const auto& p : cfg.p_values)
        out.push_back({"emi[p=" + p.label() + "]", emi_gap(x, v, w, p), dig, cfg.tol});
    // flat (commuting) pair: equality within 1e-8
    auto [cv, cw] = random_commuting_pair(cfg.n, rng);
    const double g = emi_gap(x, tangent_from_rep(x, cv), tangent_from_rep(x, cw),
                             SchattenP::real(2.0));
    out.push_back(bound_check("emi-flat[p=2]", 1e-8 - std::abs(g), dig));
    return out;
}

std::vector<GapReport> trial_parallelogram(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "parallelogram", t);
    const PosDefMatrix x = random_posdef(cfg.n, rng);
    const PosDefMatrix y = random_posdef(cfg.n, rng);
    const PosDefMatrix z = random_posdef(cfg.n, rng);
    const std::string dig = digest_of({&x.mat(), &y.mat(), &z.mat()});
    const auto ps = filter_p(
        cfg.p_values, [](const SchattenP& p) { return p.is_real() && p.value() >= 2.0; },
        {SchattenP::real(2.0), SchattenP::real(3.0), SchattenP::real(4.0)});
    std::vector<GapReport> out;
    for (const auto& p : ps)
        out.push_back({"parallelogram[p=" + p.label() + "]",
                       pparallelogram_gap(x, y, z, p, 1.0), dig, cfg.tol});
    return out;
}

std::vector<GapReport> trial_convexity(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "convexity", t);
    const Geodesic ga(random_posdef(cfg.n, rng), random_posdef(cfg.n, rng));
    const Geodesic gb(random_posdef(cfg.n, rng), random_posdef(cfg.n, rng));
    const std::string dig = digest_of({&ga.a().mat(), &ga.b().mat(), &gb.a().mat(), &gb.b().mat()});
    std::vector<GapReport> out;
    for (const auto& p : cfg.p_values)
        out.push_back({"convexity[p=" + p.label() + "]", geodesic_convexity_gap(ga, gb, p),
                       dig, cfg.tol});
    return out;
}

std::vector<GapReport> trial_loewner_heinz(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "loewner-heinz", t);
    const PosDefMatrix a = random_posdef(cfg.n, rng);
    const PosDefMatrix b = random_posdef(cfg.n, rng);
    const std::string dig = digest_of({&a.mat(), &b.mat()});
    std::vector<GapReport> out;
    for (double tt : {0.25, 0.5, 0.75})
        for (const auto& p : cfg.p_values) {
            std::ostringstream name;
            name << "loewner-heinz[t=" << tt << ",p=" << p.label() << "]";
            out.push_back({name.str(), loewner_heinz_gap(a, b, tt, p), dig, cfg.tol});
        }
    return out;
}

std::vector<GapReport> trial_curvature(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "curvature", t);
    const PosDefMatrix x = random_posdef(cfg.n, rng);
    const TangentAt v = tangent_from_rep(x, random_hermitian(cfg.n, rng));
    const TangentAt w = tangent_from_rep(x, random_hermitian(cfg.n, rng));
    const std::string dig = digest_of({&x.mat(), &v.u.mat(), &w.u.mat()});
    std::vector<GapReport> out;
    const auto ps = filter_p(cfg.p_values, [](const SchattenP&) { return true; },
                             {SchattenP::real(2.0)});
    for (const auto& p : ps) {
        const double est = curvature_estimate(x, v, w, 1e-2, p);
        out.push_back({"curvature-sign[p=" + p.label() + "]", -est, dig, cfg.tol});
        const CurvatureLimit lim = curvature_limit(x, v, w, p);
        const double slack = std::min(lim.s - (lim.lower_bound - 1e-4), 1e-6 - lim.s);
        out.push_back(bound_check("curvature-limit[p=" + p.label() + "]", slack, dig));
    }
    return out;
}

std::vector<GapReport> trial_bch(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "bch", t);
    const HermitianMatrix v = random_hermitian(cfg.n, rng);
    const HermitianMatrix w = random_hermitian(cfg.n, rng);
    const std::string dig = digest_of({&v.mat(), &w.mat()});
    std::vector<GapReport> out;
    // the decay-rate argument needs a smooth norm; p in {1, inf} kinks break it
    const auto ps = filter_p(
        cfg.p_values, [](const SchattenP& p) { return p.is_real() && p.value() >= 2.0; },
        {SchattenP::real(2.0)});
    for (const auto& p : ps) {
        const double r1 = bch_distance_remainder(v, w, 1e-2, p);
        const double r2 = bch_distance_remainder(v, w, 5e-3, p);
        const double ratio = (r2 > 1e-300) ? r1 / r2 : 64.0;
        out.push_back(bound_check("bch-ratio[p=" + p.label() + "]", ratio - 6.4, dig));
    }
    auto [cv, cw] = random_commuting_pair(cfg.n, rng);
    const double flat = bch_distance_remainder(cv, cw, 1e-2, SchattenP::real(2.0));
    out.push_back(bound_check("bch-flat[p=2]", 1e-12 - flat, dig));
    return out;
}

std::vector<GapReport> trial_birkhoff(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "birkhoff", t);
    const HermitianMatrix v = random_hermitian(cfg.n, rng);
    const auto diag_basis = BlockPartition::diagonal(cfg.n).hermitian_basis();
    const SchattenP p2 = SchattenP::real(2.0);
    const std::string dig = digest_of({&v.mat()});
    std::vector<GapReport> out;

    // Hilbert-case agreement with the closed-form projection
    const double est = birkhoff_gap(v, diag_basis, p2).gap;
    HermitianMatrix offdiag = v;
    offdiag -= conditional_expectation(v, BlockPartition::diagonal(cfg.n));
    const double oracle = schatten_norm(offdiag, p2) - schatten_norm(v, p2);
    out.push_back(bound_check("birkhoff-hilbert", 1e-8 - std::abs(est - oracle), dig));

    // unitary covariance
    const CMatrix u = random_unitary(cfg.n, rng);
    std::vector<HermitianMatrix> rotated;
    rotated.reserve(diag_basis.size());
    for (const auto& b : diag_basis)
        rotated.emplace_back(HermitianMatrix(u * b.mat() * u.adjoint()));
    const double est_rot =
        birkhoff_gap(HermitianMatrix(u * v.mat() * u.adjoint()), rotated, p2).gap;
    out.push_back(bound_check("birkhoff-covariance", 1e-8 - std::abs(est - est_rot), dig));
    return out;
}

std::vector<GapReport> trial_bestapprox(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "bestapprox", t);
    const int n = std::min(cfg.n, 3);
    const ConvexSubmanifold C = ConvexSubmanifold::block_diagonal(BlockPartition::diagonal(n));
    const SchattenP p2 = SchattenP::real(2.0);
    const PosDefMatrix x = random_posdef(n, rng);
    const std::string dig = digest_of({&x.mat()});
    const MinimizerResult res =
        best_approximation(x, C, p2, 1e-7, std::nullopt, trace_sink(cfg, "bestapprox"));
    std::vector<GapReport> out;
    out.push_back({"bestapprox-birkhoff", res.first_order_gap, dig, 1e-6});

    double probe_slack = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100; ++k) {
        std::vector<double> z(C.basis().size());
        for (auto& c : z) c = rng.next_gaussian();
        probe_slack = std::min(probe_slack, distance(x, C.point(z), p2) - res.value);
    }
    out.push_back({"bestapprox-probe", probe_slack, dig, 1e-7});

    // contraction of the projection
    const PosDefMatrix y = random_posdef(n, rng);
    const MinimizerResult res_y = best_approximation(y, C, p2, 1e-7);
    const double slack =
        distance(x, y, p2) + 1e-6 - distance(res.point, res_y.point, p2);
    out.push_back(bound_check("bestapprox-contractive", slack, dig));
    return out;
}

std::vector<GapReport> trial_circumcenter(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "circumcenter", t);
    const SchattenP p2 = SchattenP::real(2.0);
    std::vector<PosDefMatrix> S;
    for (int k = 0; k < 4; ++k) S.push_back(random_posdef(cfg.n, rng));
    const std::string dig = digest_of({&S[0].mat(), &S[1].mat(), &S[2].mat(), &S[3].mat()});
    const auto [center, radius] = circumcenter(S, p2, 1e-7, trace_sink(cfg, "circumcenter"));
    std::vector<GapReport> out;

    double maxpair = 0.0;
    for (size_t i = 0; i < S.size(); ++i)
        for (size_t j = i + 1; j < S.size(); ++j)
            maxpair = std::max(maxpair, distance(S[i], S[j], p2));
    out.push_back(bound_check("circumcenter-radius", radius - 0.5 * maxpair + 1e-6, dig));

    // two-point case: midpoint
    const auto [c2, r2] = circumcenter({S[0], S[1]}, p2, 1e-9);
    const PosDefMatrix mid = Geodesic(S[0], S[1]).eval(0.5);
    out.push_back(bound_check("circumcenter-two-point", 1e-6 - distance(c2, mid, p2), dig));

    // congruence equivariance
    const CMatrix g = random_invertible(cfg.n, rng);
    std::vector<PosDefMatrix> Sg;
    for (const auto& s : S) Sg.push_back(congruence(g, s));
    const auto [cg, rg] = circumcenter(Sg, p2, 1e-7);
    out.push_back(bound_check("circumcenter-equivariant",
                              1e-6 - distance(cg, congruence(g, center), p2), dig));
    return out;
}

std::vector<GapReport> trial_moreau(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "moreau-yoshida", t);
    const SchattenP p2 = SchattenP::real(2.0);
    const double pv = 2.0;
    const PosDefMatrix x0 = random_posdef(cfg.n, rng);
    const PosDefMatrix c = random_posdef(cfg.n, rng);
    const std::string dig = digest_of({&x0.mat(), &c.mat()});
    auto F = [&](const PosDefMatrix& y) { return std::pow(distance(y, c, p2), pv); };
    std::vector<GapReport> out;
    double prev = F(x0);     // F(y_lambda) <= F(x0) and decreases in lambda
    double prev_env = 0.0;   // the envelope vanishes as lambda -> 0+
    std::optional<PosDefMatrix> warm;
    for (double lam : {1.0, 10.0, 100.0}) {
        const auto [y, env] = moreau_yoshida_resolvent(F, x0, lam, p2, 1e-5,
                                                       trace_sink(cfg, "moreau-yoshida"), warm);
        warm = y;
        const double fy = F(y);
        std::ostringstream nm;
        nm << "moreau-monotone[lambda=" << lam << "]";
        out.push_back({nm.str(), prev - fy, dig, 1e-6});
        std::ostringstream nm2;
        nm2 << "moreau-envelope[lambda=" << lam << "]";
        out.push_back({nm2.str(), env - prev_env, dig, 1e-9});
        prev = fy;
        prev_env = env;
    }
    return out;
}

std::vector<GapReport> trial_cpr(const SuiteConfig& cfg, int t) {
    Rng rng = derive_rng(cfg.seed, "cpr", t);
    const BlockPartition part = BlockPartition::diagonal(cfg.n);
    const CMatrix g = random_invertible(cfg.n, rng);
    const std::string dig = digest_of({&g});
    std::vector<GapReport> out;
    const auto ps = filter_p(cfg.p_values, [](const SchattenP& p) { return p.is_real(); },
                             {SchattenP::real(2.0), SchattenP::real(3.0)});
    for (const auto& p : ps) {
        const CprFactorization f = cpr_factorize(g, part, p);
        const std::string lbl = "[p=" + p.label() + "]";
        out.push_back(bound_check("cpr-residual" + lbl, 1e-8 - f.residual, dig));
        out.push_back(bound_check("cpr-ev-zero" + lbl,
                                  1e-8 - conditional_expectation(f.v, part).mat().max_abs(), dig));
        out.push_back(bound_check(
            "cpr-unitary" + lbl,
            1e-10 - (f.u.adjoint() * f.u - CMatrix::identity(cfg.n)).max_abs(), dig));
    }
    // initialization independence
    const CprFactorization f0 = cpr_factorize(g, part, SchattenP::real(2.0));
    HermitianMatrix s0 = random_hermitian(cfg.n, rng);
    const CprFactorization f1 =
        cpr_factorize(g, part, SchattenP::real(2.0), conditional_expectation(s0, part));
    out.push_back(bound_check("cpr-unique-init",
                              1e-6 - (f0.s - f1.s).mat().max_abs(), dig));
    return out;
}

std::vector<GapReport> trial_expectation_norms(const SuiteConfig& cfg, int t) {
    const BlockPartition part = BlockPartition::diagonal(cfg.n);
    std::vector<GapReport> out;
    const std::string dig = "expectation-norms";
    const auto ps = filter_p(cfg.p_values, [](const SchattenP&) { return true; },
                             {SchattenP::real(2.0)});
    for (const auto& p : ps) {
        const ExpectationNorms nn =
            expectation_norm_estimate(part, p, cfg.n, 50, cfg.seed + t);
        const std::string lbl = "[p=" + p.label() + "]";
        out.push_back(bound_check("expectation-normE" + lbl, 1.0 + 1e-9 - nn.normE, dig));
        double bound = 2.0;
        if (p.is_real()) bound = std::pow(2.0, std::abs(1.0 - 2.0 / p.value()));
        out.push_back(bound_check("expectation-norm1mE" + lbl,
                                  bound + 1e-6 - nn.normOneMinusE, dig));
        if (p.is_real() && p.value() == 2.0) {
            out.push_back(bound_check("expectation-normE-witness" + lbl,
                                      nn.normE - (1.0 - 1e-3), dig));
            out.push_back(bound_check("expectation-norm1mE-witness" + lbl,
                                      nn.normOneMinusE - (1.0 - 1e-3), dig));
        }
    }
    return out;
}

std::vector<GapReport> trial_lie_triple(const SuiteConfig& cfg, int t) {
    (void)t; // structural checks have no random inputs
    const BlockPartition part = BlockPartition::diagonal(cfg.n);
    const auto diag = part.hermitian_basis();
    const auto offd = part.complement_basis();
    std::vector<GapReport> out;
    const std::string dig = "lie-triple";
    const StructureCheck lt = is_lie_triple(diag);
    out.push_back(bound_check("lie-triple-diagonal", 1e-10 - lt.defect, dig));
    const StructureCheck rd = is_reductive(diag, offd);
    out.push_back(bound_check("reductive-diagonal-pair", 1e-10 - rd.defect, dig));

    // rotated complement is not ad^2-invariant
    std::vector<HermitianMatrix> bad;
    for (size_t i = 0; i < offd.size(); ++i) {
        HermitianMatrix m = offd[i] * std::cos(0.3);
        m += diag[i % diag.size()] * std::sin(0.3);
        bad.push_back(m);
    }
    const StructureCheck rb = is_reductive(diag, bad);
    out.push_back(bound_check("reductive-counterexample", rb.defect - 1e-3, dig));
    return out;
}

const std::map<std::string, TrialFn>& suite_table() {
    static const std::map<std::string, TrialFn> table = {
        {"emi", trial_emi},
        {"parallelogram", trial_parallelogram},
        {"convexity", trial_convexity},
        {"loewner-heinz", trial_loewner_heinz},
        {"curvature", trial_curvature},
        {"bch", trial_bch},
        {"birkhoff", trial_birkhoff},
        {"bestapprox", trial_bestapprox},
        {"circumcenter", trial_circumcenter},
        {"moreau-yoshida", trial_moreau},
        {"cpr", trial_cpr},
        {"expectation-norms", trial_expectation_norms},
        {"lie-triple", trial_lie_triple},
    };
    return table;
}

} // namespace

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, fn] : suite_table()) v.push_back(k);
        return v;
    }();
    return names;
}

int worker_count() {
    if (const char* env = std::getenv("PCONE_THREADS")) {
        const int k = std::atoi(env);
        if (k >= 1) return k;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

SuiteSummary run_suite(const SuiteConfig& cfg, std::ostream& out, const std::string& format) {
    if (!(cfg.tol > 0.0)) throw DomainError("tolerance must be positive");
    if (cfg.trials < 0) throw DomainError("trial count must be nonnegative");
    if (cfg.n < 1) throw DomainError("dimension must be positive");
    const bool csv = format == "csv";
    if (!csv && format != "json") throw DomainError("format must be json or csv");

    std::vector<std::string> names = cfg.suites;
    if (names.empty() || (names.size() == 1 && names[0] == "all")) names = known_suites();
    for (const auto& s : names)
        if (!suite_table().count(s)) throw UnknownSuite("unknown suite: " + s);

    SuiteSummary summary;
    if (csv) out << "suite,name,gap,inputs_digest,tolerance_used,pass\n";
    for (const auto& sname : names) {
        const TrialFn& fn = suite_table().at(sname);
        std::vector<std::vector<GapReport>> results(cfg.trials);
        const int workers = std::min(worker_count(), std::max(1, cfg.trials));
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&] {
            try {
                for (;;) {
                    const int t = next.fetch_add(1);
                    if (t >= cfg.trials) return;
                    results[t] = fn(cfg, t);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(cfg.trials); // drain remaining work
            }
        };
        std::vector<std::thread> pool;
        for (int k = 1; k < workers; ++k) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);

        for (int t = 0; t < cfg.trials; ++t)
            for (const auto& r : results[t]) {
                ++summary.checks;
                if (!r.pass()) ++summary.failures;
                if (csv) {
                    std::ostringstream line;
                    line.precision(17);
                    line << sname << "," << r.name << "," << r.gap << ","
                         << r.inputs_digest << "," << r.tolerance_used << ","
                         << (r.pass() ? "true" : "false");
                    out << line.str() << "\n";
                } else {
                    out << r.json_line() << "\n";
                }
            }
    }
    if (csv) {
        out << "summary,checks=" << summary.checks << ",failures=" << summary.failures
            << ",pass=" << (summary.all_pass() ? "true" : "false") << ",,\n";
    } else {
        out << "{\"summary\":true,\"checks\":" << summary.checks
            << ",\"failures\":" << summary.failures
            << ",\"pass\":" << (summary.all_pass() ? "true" : "false") << "}\n";
    }
    return summary;
}

} // namespace pcone
