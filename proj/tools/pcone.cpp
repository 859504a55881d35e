#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pcone/matrix_io.hpp"
#include "pcone/suite.hpp"

namespace {

using namespace pcone;

constexpr int kExitUsage = 1;
constexpr int kExitFileNotFound = 2;
constexpr int kExitBadJson = 3;
constexpr int kExitDimension = 4;

void require_exists(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        std::cerr << "error: file not found: " << path << "\n";
        std::exit(kExitFileNotFound);
    }
}

SchattenP parse_p(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "oo") return SchattenP::inf();
    const double v = std::stod(text);
    if (v == 1.0) return SchattenP::one();
    return SchattenP::real(v);
}

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit_csv_row(std::ostream& os, double t, const CMatrix& m) {
    os << num17(t);
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.n(); ++j)
            os << "," << num17(m(i, j).real()) << "," << num17(m(i, j).imag());
    os << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Finsler geometry of the positive-definite matrix cone"};
    app.require_subcommand(1);

    std::string pa, pb, pg, px, pv, pw;
    std::string p_text = "2";
    double t_arg = 0.5;
    int samples = 0;
    std::string partition_text, submanifold = "diag";
    std::vector<std::string> set_paths;
    bool trace = false;

    auto* dist_cmd = app.add_subcommand("dist", "geodesic distance between two cone points");
    dist_cmd->add_option("A", pa)->required();
    dist_cmd->add_option("B", pb)->required();
    dist_cmd->add_option("--p", p_text, "Schatten exponent (1, real > 1, or inf)");

    auto* geo_cmd = app.add_subcommand("geodesic", "evaluate or sample the geodesic through two points");
    geo_cmd->add_option("A", pa)->required();
    geo_cmd->add_option("B", pb)->required();
    geo_cmd->add_option("--t", t_arg, "evaluation parameter");
    geo_cmd->add_option("--samples", samples, "emit CSV rows at k+1 equispaced parameters");

    auto* log_cmd = app.add_subcommand("logmap", "logarithm of B at base point A");
    log_cmd->add_option("A", pa)->required();
    log_cmd->add_option("B", pb)->required();

    auto* fac_cmd = app.add_subcommand("factorize", "block-diagonal splitting of an invertible matrix");
    fac_cmd->add_option("G", pg)->required();
    fac_cmd->add_option("--partition", partition_text, "blocks, e.g. 0,1|2,3")->required();
    fac_cmd->add_option("--p", p_text);

    auto* proj_cmd = app.add_subcommand("project", "best approximation onto a convex submanifold");
    proj_cmd->add_option("X", px)->required();
    proj_cmd->add_option("--submanifold", submanifold, "diag or a block partition like 0,1|2,3");
    proj_cmd->add_option("--p", p_text);
    proj_cmd->add_flag("--trace", trace, "emit solver trace rows (iteration,objective,step)");

    auto* circ_cmd = app.add_subcommand("circumcenter", "minimal enclosing ball of cone points");
    circ_cmd->add_option("points", set_paths, "matrix files")->required()->expected(-1);
    circ_cmd->add_option("--p", p_text);
    circ_cmd->add_flag("--trace", trace);

    auto* curv_cmd = app.add_subcommand("curvature", "curvature estimate for a tangent pair");
    curv_cmd->add_option("X", px)->required();
    curv_cmd->add_option("V", pv)->required();
    curv_cmd->add_option("W", pw)->required();
    curv_cmd->add_option("--p", p_text);

    SuiteConfig cfg;
    std::string suites_text = "all", format = "json";
    auto* ver_cmd = app.add_subcommand("verify", "run the verification suites");
    ver_cmd->add_option("--suite", suites_text, "suite name or 'all'");
    ver_cmd->add_option("--n", cfg.n, "matrix dimension");
    ver_cmd->add_option("--trials", cfg.trials, "trials per suite");
    ver_cmd->add_option("--seed", cfg.seed, "rng seed");
    ver_cmd->add_option("--tol", cfg.tol, "gap tolerance");
    ver_cmd->add_option("--format", format, "json or csv");
    ver_cmd->add_flag("--trace", trace);

    CLI11_PARSE(app, argc, argv);

    if (dist_cmd->parsed()) {
        require_exists(pa);
        require_exists(pb);
        const PosDefMatrix a = load_posdef(pa), b = load_posdef(pb);
        std::cout << num17(distance(a, b, parse_p(p_text))) << "\n";
        return 0;
    }
    if (geo_cmd->parsed()) {
        require_exists(pa);
        require_exists(pb);
        const Geodesic geo(load_posdef(pa), load_posdef(pb));
        if (samples > 0) {
            for (int k = 0; k <= samples; ++k) {
                const double t = static_cast<double>(k) / samples;
                emit_csv_row(std::cout, t, geo.eval(t).mat());
            }
        } else {
            std::cout << matrix_to_json(geo.eval(t_arg).mat()) << "\n";
        }
        return 0;
    }
    if (log_cmd->parsed()) {
        require_exists(pa);
        require_exists(pb);
        const PosDefMatrix a = load_posdef(pa), b = load_posdef(pb);
        std::cout << matrix_to_json(log_point(a, b).u.mat()) << "\n";
        return 0;
    }
    if (fac_cmd->parsed()) {
        require_exists(pg);
        const CMatrix g = load_matrix(pg);
        const BlockPartition part = BlockPartition::parse(g.n(), partition_text);
        const CprFactorization f = cpr_factorize(g, part, parse_p(p_text));
        std::cout << f.to_json() << "\n";
        return 0;
    }
    if (proj_cmd->parsed()) {
        require_exists(px);
        const PosDefMatrix x = load_posdef(px);
        const BlockPartition part = submanifold == "diag"
                                        ? BlockPartition::diagonal(x.n())
                                        : BlockPartition::parse(x.n(), submanifold);
        const ConvexSubmanifold C = ConvexSubmanifold::block_diagonal(part);
        TraceSink sink = nullptr;
        if (trace)
            sink = [](int it, double obj, double step) {
                std::cerr << it << "," << num17(obj) << "," << num17(step) << "\n";
            };
        const MinimizerResult res =
            best_approximation(x, C, parse_p(p_text), 1e-8, std::nullopt, sink);
        std::cout << "{\"point\":" << matrix_to_json(res.point.mat())
                  << ",\"value\":" << num17(res.value)
                  << ",\"iterations\":" << res.iterations
                  << ",\"first_order_gap\":" << num17(res.first_order_gap) << "}\n";
        return 0;
    }
    if (circ_cmd->parsed()) {
        std::vector<PosDefMatrix> S;
        for (const auto& path : set_paths) {
            require_exists(path);
            S.push_back(load_posdef(path));
        }
        TraceSink sink = nullptr;
        if (trace)
            sink = [](int it, double obj, double step) {
                std::cerr << it << "," << num17(obj) << "," << num17(step) << "\n";
            };
        const auto [center, radius] = circumcenter(S, parse_p(p_text), 1e-8, sink);
        std::cout << "{\"center\":" << matrix_to_json(center.mat())
                  << ",\"radius\":" << num17(radius) << "}\n";
        return 0;
    }
    if (curv_cmd->parsed()) {
        require_exists(px);
        require_exists(pv);
        require_exists(pw);
        const PosDefMatrix x = load_posdef(px);
        const TangentAt v(x, load_hermitian(pv)), w(x, load_hermitian(pw));
        const SchattenP p = parse_p(p_text);
        const CurvatureLimit lim = curvature_limit(x, v, w, p);
        std::cout << "{\"estimate_r1e-2\":" << num17(curvature_estimate(x, v, w, 1e-2, p))
                  << ",\"s\":" << num17(lim.s)
                  << ",\"lower_bound\":" << num17(lim.lower_bound) << "}\n";
        return 0;
    }
    if (ver_cmd->parsed()) {
        cfg.suites = {suites_text};
        cfg.trace = trace;
        const SuiteSummary sum = run_suite(cfg, std::cout, format);
        return sum.all_pass() ? 0 : 1;
    }
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pcone::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadJson;
    } catch (const pcone::DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDimension;
    } catch (const pcone::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
