#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "pcone/matrix_io.hpp"
#include "pcone/rng.hpp"

using namespace pcone;

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string out_file = (fs::temp_directory_path() / "pcone_cli_out.txt").string();
    const std::string cmd = std::string(PCONE_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream f(out_file);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    fs::remove(out_file);
    return {WEXITSTATUS(raw), text};
}

std::string write_tmp(const std::string& name, const CMatrix& m) {
    const std::string path = (fs::temp_directory_path() / name).string();
    save_matrix(path, m);
    return path;
}

CMatrix diag2(double a, double b) {
    CMatrix m(2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("dist subcommand prints the closed-form value") {
    const std::string a = write_tmp("pcone_a.json", diag2(1.0, 4.0));
    const std::string b = write_tmp("pcone_b.json", diag2(4.0, 1.0));
    const RunResult r = run_cli("dist " + a + " " + b + " --p 2");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(std::sqrt(2.0) * std::log(4.0)).epsilon(1e-12));

    const RunResult rinf = run_cli("dist " + a + " " + b + " --p inf");
    CHECK(std::stod(rinf.out) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("geodesic subcommand evaluates and samples") {
    const std::string a = write_tmp("pcone_a.json", diag2(1.0, 4.0));
    const std::string b = write_tmp("pcone_b.json", diag2(4.0, 1.0));
    const RunResult r = run_cli("geodesic " + a + " " + b + " --t 0.5");
    CHECK(r.exit_code == 0);
    const CMatrix mid = matrix_from_json(r.out);
    CHECK(mid(0, 0).real() == doctest::Approx(2.0));
    CHECK(mid(1, 1).real() == doctest::Approx(2.0));

    const RunResult rs = run_cli("geodesic " + a + " " + b + " --samples 4");
    CHECK(rs.exit_code == 0);
    int lines = 0;
    for (char c : rs.out)
        if (c == '\n') ++lines;
    CHECK(lines == 5);
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("logmap subcommand") {
    const std::string a = write_tmp("pcone_a.json", diag2(1.0, 1.0));
    const std::string b = write_tmp("pcone_b.json", diag2(std::exp(1.0), std::exp(2.0)));
    const RunResult r = run_cli("logmap " + a + " " + b);
    CHECK(r.exit_code == 0);
    const CMatrix l = matrix_from_json(r.out);
    CHECK(l(0, 0).real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(l(1, 1).real() == doctest::Approx(2.0).epsilon(1e-10));
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("factorize subcommand: diagonal input gives v = 0") {
    const std::string g = write_tmp("pcone_g.json", diag2(2.0, 3.0));
    const RunResult r = run_cli("factorize " + g + " --partition '0|1' --p 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"g_A\"") != std::string::npos);
    const auto vpos = r.out.find("\"v\":");
    REQUIRE(vpos != std::string::npos);
    const auto vend = r.out.find("}", vpos);
    const CMatrix v = matrix_from_json(r.out.substr(vpos + 4, vend - vpos - 3));
    CHECK(v.max_abs() <= 1e-10);
    fs::remove(g);
}

TEST_CASE("project subcommand onto the diagonal cone") {
    Rng rng = derive_rng(131, "cli-project", 0);
    const PosDefMatrix x = random_posdef(2, rng);
    const std::string path = write_tmp("pcone_x.json", x.mat());
    const RunResult r = run_cli("project " + path + " --submanifold diag --p 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"point\"") != std::string::npos);
    CHECK(r.out.find("\"first_order_gap\"") != std::string::npos);
    fs::remove(path);
}

TEST_CASE("circumcenter subcommand: two points give the midpoint") {
    const std::string a = write_tmp("pcone_a.json", diag2(1.0, 4.0));
    const std::string b = write_tmp("pcone_b.json", diag2(4.0, 1.0));
    const RunResult r = run_cli("circumcenter " + a + " " + b + " --p 2");
    CHECK(r.exit_code == 0);
    const auto cpos = r.out.find("\"center\":");
    REQUIRE(cpos != std::string::npos);
    const auto cend = r.out.find("}", cpos);
    const CMatrix c = matrix_from_json(r.out.substr(cpos + 9, cend - cpos - 8));
    CHECK(c(0, 0).real() == doctest::Approx(2.0).epsilon(1e-5));
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("curvature subcommand") {
    Rng rng = derive_rng(131, "cli-curv", 0);
    const PosDefMatrix x = random_posdef(2, rng);
    const std::string xp = write_tmp("pcone_x.json", x.mat());
    const std::string vp = write_tmp("pcone_v.json", random_hermitian(2, rng).mat());
    const std::string wp = write_tmp("pcone_w.json", random_hermitian(2, rng).mat());
    const RunResult r = run_cli("curvature " + xp + " " + vp + " " + wp + " --p 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"lower_bound\"") != std::string::npos);
    fs::remove(xp);
    fs::remove(vp);
    fs::remove(wp);
}

TEST_CASE("verify subcommand: determinism and vacuous pass") {
    const RunResult a = run_cli("verify --suite emi --trials 10 --seed 7 --n 3");
    const RunResult b = run_cli("verify --suite emi --trials 10 --seed 7 --n 3");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    const RunResult zero = run_cli("verify --suite emi --trials 0");
    CHECK(zero.exit_code == 0);
    CHECK(zero.out.find("\"checks\":0") != std::string::npos);
}

TEST_CASE("verify subcommand: csv") {
    const RunResult r = run_cli("verify --suite lie-triple --trials 1 --n 3 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("suite,name,gap") != std::string::npos);
}

TEST_CASE("error exit codes are distinct") {
    const RunResult missing = run_cli("dist /nonexistent/a.json /nonexistent/b.json");
    CHECK(missing.exit_code == 2);

    const std::string bad = (fs::temp_directory_path() / "pcone_bad.json").string();
    {
        std::ofstream f(bad);
        f << "{ this is not json";
    }
    const std::string good = write_tmp("pcone_good.json", diag2(1.0, 2.0));
    const RunResult malformed = run_cli("dist " + bad + " " + good);
    CHECK(malformed.exit_code == 3);

    const std::string three = write_tmp("pcone_three.json", [] {
        CMatrix m(3);
        m(0, 0) = 1.0;
        m(1, 1) = 1.0;
        m(2, 2) = 1.0;
        return m;
    }());
    const RunResult mismatch = run_cli("dist " + good + " " + three);
    CHECK(mismatch.exit_code == 4);

    const RunResult usage = run_cli("verify --tol -1");
    CHECK(usage.exit_code != 0);
    CHECK(usage.exit_code != 2);
    CHECK(usage.exit_code != 3);
    CHECK(usage.exit_code != 4);

    const RunResult unknown = run_cli("verify --suite bogus --trials 1");
    CHECK(unknown.exit_code != 0);

    fs::remove(bad);
    fs::remove(good);
    fs::remove(three);
}
