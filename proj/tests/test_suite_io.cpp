#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pcone/matrix_io.hpp"
#include "pcone/rng.hpp"
#include "pcone/suite.hpp"

using namespace pcone;

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("matrix json round-trips bit-exactly") {
    Rng rng = derive_rng(111, "io-roundtrip", 0);
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix m(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m(i, j) = cplx(rng.next_gaussian() * std::pow(10.0, (trial % 7) - 3),
                               rng.next_gaussian());
        const CMatrix back = matrix_from_json(matrix_to_json(m));
        CHECK(back == m);
    }
}

TEST_CASE("matrix file save/load round-trip") {
    Rng rng = derive_rng(111, "io-file", 0);
    const std::string path = tmp_path("pcone_io_test.json");
    CMatrix m(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = cplx(rng.next_gaussian(), rng.next_gaussian());
    save_matrix(path, m);
    CHECK(load_matrix(path) == m);
    std::filesystem::remove(path);
}

TEST_CASE("hermitian load symmetrizes") {
    const std::string path = tmp_path("pcone_io_herm.json");
    {
        std::ofstream f(path);
        f << R"({"n":2,"re":[[1,5],[7,2]],"im":[[0,1],[3,0]]})";
    }
    const HermitianMatrix h = load_hermitian(path);
    CHECK(h(0, 1) == std::conj(h(1, 0)));
    CHECK(h(0, 0).imag() == 0.0);
    CHECK(h(0, 1).real() == doctest::Approx(6.0)); // (5 + 7)/2
    std::filesystem::remove(path);
}

TEST_CASE("malformed inputs raise IoError") {
    CHECK_THROWS_AS(matrix_from_json("not json at all"), IoError);
    CHECK_THROWS_AS(matrix_from_json(R"({"n":2,"re":[[1,2]],"im":[[0,0],[0,0]]})"), IoError);
    CHECK_THROWS_AS(matrix_from_json(R"({"n":-1,"re":[],"im":[]})"), IoError);
    CHECK_THROWS_AS(load_matrix(tmp_path("pcone_does_not_exist.json")), IoError);
}

TEST_CASE("suite runner: determinism across runs and thread counts") {
    SuiteConfig cfg;
    cfg.seed = 7;
    cfg.n = 3;
    cfg.trials = 10;
    cfg.suites = {"emi"};
    std::ostringstream a, b;
    run_suite(cfg, a);
    run_suite(cfg, b);
    CHECK(a.str() == b.str());

    setenv("PCONE_THREADS", "1", 1);
    std::ostringstream c;
    run_suite(cfg, c);
    setenv("PCONE_THREADS", "4", 1);
    std::ostringstream d;
    run_suite(cfg, d);
    unsetenv("PCONE_THREADS");
    CHECK(a.str() == c.str());
    CHECK(a.str() == d.str());
    CHECK(a.str().find("\"summary\":true") != std::string::npos);
}

TEST_CASE("suite runner: zero trials pass vacuously") {
    SuiteConfig cfg;
    cfg.trials = 0;
    cfg.suites = {"emi"};
    std::ostringstream out;
    const SuiteSummary s = run_suite(cfg, out);
    CHECK(s.checks == 0);
    CHECK(s.all_pass());
}

TEST_CASE("suite runner: validation") {
    SuiteConfig cfg;
    cfg.suites = {"no-such-suite"};
    std::ostringstream out;
    CHECK_THROWS_AS(run_suite(cfg, out), UnknownSuite);
    cfg.suites = {"emi"};
    cfg.tol = -1.0;
    CHECK_THROWS_AS(run_suite(cfg, out), DomainError);
}

TEST_CASE("suite runner: small all-suite smoke run passes") {
    SuiteConfig cfg;
    cfg.seed = 42;
    cfg.n = 3;
    cfg.trials = 2;
    std::ostringstream out;
    const SuiteSummary s = run_suite(cfg, out);
    CHECK(s.failures == 0);
    CHECK(s.checks > 0);
}

TEST_CASE("suite runner: csv format") {
    SuiteConfig cfg;
    cfg.seed = 9;
    cfg.n = 2;
    cfg.trials = 2;
    cfg.suites = {"convexity"};
    std::ostringstream out;
    run_suite(cfg, out, "csv");
    const std::string text = out.str();
    CHECK(text.find("suite,name,gap,inputs_digest,tolerance_used,pass") != std::string::npos);
    CHECK(text.find("convexity[p=") != std::string::npos);
    CHECK_THROWS_AS(run_suite(cfg, out, "xml"), DomainError);
}

TEST_CASE("known suites cover the verification surface") {
    const auto& names = known_suites();
    for (const char* required :
         {"emi", "parallelogram", "convexity", "loewner-heinz", "curvature", "bch", "birkhoff",
          "bestapprox", "circumcenter", "moreau-yoshida", "cpr", "expectation-norms",
          "lie-triple"})
        CHECK(std::find(names.begin(), names.end(), required) != names.end());
}
