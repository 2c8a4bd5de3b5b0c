#pragma once

#include "hermgeo/hermitian.hpp"
#include "hermgeo/sw_transform.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hermgeo {

using FamilyEvaluator = std::function<HermitianMatrix(double)>;

struct FamilyHandle {
    FamilyEvaluator evaluator;
    int n = 0;
    int k = 0;
    int offset = 0;
    HermitianMatrix at(double t) const { return evaluator(t); }
};

// Checks that the window of H(0) is degenerate and isolated.
FamilyHandle make_family(FamilyEvaluator f, int k, int offset = 0);

// max(||H'(0)||_2, ||H(0)||_2), floored at tiny values to 1.
double family_scale(const FamilyHandle& fam);

std::vector<double> default_ladder();  // 2^-3 ... 2^-16

struct SplittingSample {
    double t = 0.0;
    RVector window;      // ascending window eigenvalues
    double std_dev = 0.0;
    double distance = 0.0;  // sqrt(k) * std_dev
    double heff_norm = 0.0;
    bool heff_valid = false;
    std::string heff_error;
};

struct SampleOptions {
    bool with_heff = true;
    std::optional<BasePoint> base;  // default: diagonalized collapse of H(0)
};

std::vector<SplittingSample> splitting_samples(const FamilyHandle& fam, const std::vector<double>& ts,
                                               const SampleOptions& opts = {});

enum class OrderMethod {
    StdDev,
    MinPairwise,
    MinNeighbor,
    Extremes,
    MinMeanDeviation,
    EffectiveHamiltonian,
    Distance,
    Pairwise,       // uses i, j
    MeanDeviation,  // uses i
};

struct MethodSpec {
    OrderMethod kind = OrderMethod::StdDev;
    int i = 0;
    int j = 1;
};

std::string to_string(const MethodSpec& m);

// The five equal splitting orders, in reporting order.
std::vector<MethodSpec> five_methods();

struct OrderEstimate {
    MethodSpec method;
    bool infinite = false;
    int r = 0;               // valid when conclusive and not infinite
    double slope = 0.0;
    double slope_dev = 0.0;
    bool conclusive = false;
    double scale = 1.0;
    std::vector<std::pair<double, double>> samples;  // (t, value), all ladder points
    std::vector<std::pair<double, double>> fitted;   // subset used in the fit
    std::string note;
};

struct FitOptions {
    double infinity_floor = 1e-12;  // relative to scale
    double fit_floor = 1e-11;       // relative to scale; points below are too noisy
    int window = 6;
    int min_points = 3;
    double band = 0.2;
};

// Log-log fit on the smallest-t points above the fit floor.
OrderEstimate fit_order(const std::vector<std::pair<double, double>>& samples, double scale,
                        const FitOptions& opts = {});

// Throws InconclusiveFit when the fit is not conclusive.
OrderEstimate estimate_order(const FamilyHandle& fam, const MethodSpec& method,
                             const std::vector<double>& ladder = default_ladder(),
                             const FitOptions& opts = {});

struct OrderReport {
    std::vector<OrderEstimate> estimates;  // five methods, then heff, then distance
    bool agree = false;                    // all conclusive and equal
    std::optional<int> r;                  // common order when agree and finite
    bool infinite = false;
};

OrderReport estimate_all_orders(const FamilyHandle& fam,
                                const std::vector<double>& ladder = default_ladder(),
                                const FitOptions& opts = {}, const SampleOptions& sopts = {});

// Non-throwing evaluation of one method on precomputed samples.
OrderEstimate order_from_samples(const std::vector<SplittingSample>& samples, const MethodSpec& method,
                                 int k, double scale, const FitOptions& opts = {});

struct CascadeResult {
    int k = 0;
    // split_level[i][j]: level at which branches i, j separate; -1 means never (identical)
    std::vector<std::vector<int>> split_level;
    // branch i (ascending order at t > 0) sits at ascending position permutation[i] for t < 0
    std::vector<int> permutation;
    bool depth_cap_reached = false;
    int depth_cap = 0;
    int levels_used = 0;
    double t_probe = 0.0;
    double matching_error = 0.0;  // max |reassembled - actual| at -t_probe
};

CascadeResult cascade(const FamilyHandle& fam, double t_probe = 1e-2, int depth_cap = 6);

// Window eigenvalues continued analytically through t = 0 using the permutation.
std::vector<RVector> analytic_branches(const FamilyHandle& fam, const CascadeResult& cas,
                                       const std::vector<double>& ts);

struct SignedStdDev {
    std::vector<double> values;
    double fit_residual = 0.0;  // max |value - poly fit| of degree r + 3
    double scale = 1.0;
    bool smooth = false;        // fit_residual <= 1e-6 * scale
};

SignedStdDev signed_stddev(const FamilyHandle& fam, int r, const std::vector<double>& ts);

// Least-squares polynomial fit; returns max abs residual.
double polynomial_fit_residual(const std::vector<double>& xs, const std::vector<double>& ys, int degree);

}  // namespace hermgeo
