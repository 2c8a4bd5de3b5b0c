#include "hermgeo/io.hpp"

#include "hermgeo/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace hermgeo {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string format_matrix(const CMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("format_matrix: matrix must be square");
    std::ostringstream os;
    os << "{\"n\": " << m.rows() << ", \"entries\": [";
    bool first = true;
    for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            if (!first) os << ", ";
            first = false;
            os << "[" << num(m(a, b).real()) << ", " << num(m(a, b).imag()) << "]";
        }
    os << "]}\n";
    return os.str();
}

std::string format_matrix(const HermitianMatrix& h) { return format_matrix(h.mat()); }

CMatrix parse_matrix(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("matrix: malformed document: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("entries")) {
        throw ParseError("matrix: expected fields n and entries");
    }
    if (!j["n"].is_number_integer() || j["n"].get<long>() < 1) throw ParseError("matrix: n must be a positive integer");
    const long n = j["n"].get<long>();
    const auto& e = j["entries"];
    if (!e.is_array() || static_cast<long>(e.size()) != n * n) {
        throw ParseError("matrix: entries must hold n^2 [re, im] pairs");
    }
    CMatrix m(n, n);
    for (long i = 0; i < n * n; ++i) {
        const auto& z = e[static_cast<size_t>(i)];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
            throw ParseError("matrix: entry " + std::to_string(i) + " is not a [re, im] pair");
        }
        m(i / n, i % n) = cplx(z[0].get<double>(), z[1].get<double>());
    }
    return m;
}

HermitianMatrix parse_hermitian(const std::string& text) { return HermitianMatrix(parse_matrix(text)); }

HermitianMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_hermitian(ss.str());
}

void write_matrix_file(const std::string& path, const HermitianMatrix& h) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write matrix file " + path);
    out << format_matrix(h);
}

nlohmann::ordered_json matrix_json(const CMatrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back({m(a, b).real(), m(a, b).imag()});
        rows.push_back(row);
    }
    return rows;
}

nlohmann::ordered_json vector_json(const RVector& v) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    os << "command: " << command << "\n";
    auto section = [&os](const char* name, const nlohmann::ordered_json& obj) {
        for (const auto& [key, value] : obj.items()) {
            os << name << "." << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
        }
    };
    section("input", inputs);
    section("output", outputs);
    section("diag", diagnostics);
    os << "exit: " << exit_code << "\n";
    return os.str();
}

std::string RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["diagnostics"] = diagnostics;
    j["exit_code"] = exit_code;
    return j.dump(2) + "\n";
}

}  // namespace hermgeo
