#pragma once

#include "hermgeo/io.hpp"
#include "hermgeo/splitting_order.hpp"
#include "hermgeo/weyl_analysis.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hermgeo {

enum ExitCode { kExitOk = 0, kExitParse = 2, kExitPrecondition = 3, kExitNumerical = 4, kExitInconclusive = 5 };

// name followed by key=value parameters, e.g. {"ssh", "N=4", "v=0", "w=1"}
struct ModelSpec {
    std::string name;
    std::map<std::string, std::string> params;
};

ModelSpec parse_model_spec(const std::vector<std::string>& words);
HermitianMatrix build_model(const ModelSpec& spec);
// Seeded perturbation direction matching the model's physical perturbation class.
HermitianMatrix model_direction(const ModelSpec& spec, std::uint64_t seed);
ParamFamily build_param_family(const ModelSpec& spec);

struct OrderRequest {
    ModelSpec model;
    std::uint64_t seed = 0;
    int k = 2;
    std::string window = "ground";  // ground, middle, or an integer offset
    int ladder_lo = 3;
    int ladder_hi = 16;
    std::optional<std::string> ladder_file;
};

struct ScanRequest {
    ModelSpec model;
    std::vector<double> box;  // one half-width or 2m bounds
    int resolution = 11;
    double shift_sx = 0.0;
    bool refine = true;
    bool first_order = false;
};

RunReport cmd_decompose(const std::string& matrix_file, const std::string& base, int k, int offset);
RunReport cmd_project(const std::string& matrix_file, int k, int offset);
RunReport cmd_distance(const std::string& matrix_file, int k, int offset);
RunReport cmd_order(const OrderRequest& req);
RunReport cmd_weyl_scan(const ScanRequest& req);
RunReport cmd_model(const ModelSpec& spec, std::optional<std::uint64_t> direction_seed);

// Full command line; reports go to out, errors and timing to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int exit_code_for(const std::exception& e);

}  // namespace hermgeo
