#include "pcone/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pcone {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string matrix_to_json(const CMatrix& m) {
    const int n = m.n();
    std::ostringstream os;
    os << "{\"n\":" << n << ",\"re\":[";
    for (int i = 0; i < n; ++i) {
        os << (i ? ",[" : "[");
        for (int j = 0; j < n; ++j) os << (j ? "," : "") << fmt17(m(i, j).real());
        os << "]";
    }
    os << "],\"im\":[";
    for (int i = 0; i < n; ++i) {
        os << (i ? ",[" : "[");
        for (int j = 0; j < n; ++j) os << (j ? "," : "") << fmt17(m(i, j).imag());
        os << "]";
    }
    os << "]}";
    return os.str();
}

CMatrix matrix_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed JSON: ") + e.what());
    }
    try {
        const int n = j.at("n").get<int>();
        if (n <= 0) throw IoError("matrix size must be positive");
        const auto& re = j.at("re");
        const auto& im = j.at("im");
        if (static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n)
            throw IoError("matrix rows do not match n");
        CMatrix m(n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(re[i].size()) != n || static_cast<int>(im[i].size()) != n)
                throw IoError("matrix columns do not match n");
            for (int jj = 0; jj < n; ++jj)
                m(i, jj) = cplx(re[i][jj].get<double>(), im[i][jj].get<double>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed matrix JSON: ") + e.what());
    }
}

void save_matrix(const std::string& path, const CMatrix& m) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << matrix_to_json(m) << "\n";
    if (!f) throw IoError("write failed: " + path);
}

CMatrix load_matrix(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return matrix_from_json(ss.str());
}

HermitianMatrix load_hermitian(const std::string& path) {
    return HermitianMatrix(load_matrix(path));
}

PosDefMatrix load_posdef(const std::string& path) {
    return PosDefMatrix(load_hermitian(path));
}

} // namespace pcone
