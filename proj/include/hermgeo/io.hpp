#pragma once

#include "hermgeo/hermitian.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace hermgeo {

// {"n": N, "entries": [[re, im], ...]} row-major, 17 significant digits.
std::string format_matrix(const CMatrix& m);
std::string format_matrix(const HermitianMatrix& h);
CMatrix parse_matrix(const std::string& text);
HermitianMatrix parse_hermitian(const std::string& text);
HermitianMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const HermitianMatrix& h);

nlohmann::ordered_json matrix_json(const CMatrix& m);
nlohmann::ordered_json vector_json(const RVector& v);

constexpr int kReportSchemaVersion = 1;

struct RunReport {
    std::string command;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
    int exit_code = 0;

    std::string to_text() const;
    std::string to_json() const;
};

}  // namespace hermgeo
