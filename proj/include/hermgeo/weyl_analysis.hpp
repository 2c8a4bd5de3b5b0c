#pragma once

#include "hermgeo/hermitian.hpp"
#include "hermgeo/sw_transform.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace hermgeo {

struct ParamFamily {
    std::function<HermitianMatrix(const RVector&)> evaluator;
    int m = 3;
    int n = 0;
    int k = 2;
    HermitianMatrix at(const RVector& p) const { return evaluator(p); }
};

using EffectiveMap = std::function<RVector(const RVector&)>;

// Gauge fixed once at p0; h(p) = y-coordinates of U0^dagger H(p) U0.
EffectiveMap effective_map(const ParamFamily& fam, const RVector& p0);
EffectiveMap first_order_effective_map(const ParamFamily& fam, const RVector& p0);

struct JacobianResult {
    RMatrix J;
    double step = 0.0;
    double richardson_dev = 0.0;  // max relative change when the step is halved
    bool noisy = false;           // richardson_dev above 1e-5
};

// Central differences; step <= 0 picks 1e-5 * max(1, ||p||_inf).
JacobianResult jacobian(const EffectiveMap& h, const RVector& p, double step = 0.0);

enum class PointClass { Weyl, NonGeneric, NoDegeneracy, Degenerate };
std::string to_string(PointClass c);

struct WeylReport {
    RVector p;
    double distance = 0.0;
    double point_tol = 0.0;
    RMatrix jacobian;
    int rank = 0;
    int charge = 0;
    PointClass classification = PointClass::NoDegeneracy;
    bool jacobian_noisy = false;
};

struct ClassifyOptions {
    double point_tol_rel = 1e-8;  // times ||H(p)||_2
    double rank_rel_tol = 1e-7;
    bool first_order = false;
};

// Rank tolerance relative to max(sigma_max(J), ||dH/dp||) so that an identically
// vanishing Jacobian reads as rank 0.
int numerical_rank(const RMatrix& J, double reference, double rel_tol);
double family_derivative_scale(const ParamFamily& fam, const RVector& p);

WeylReport classify_point(const ParamFamily& fam, const RVector& p0, const ClassifyOptions& opts = {});

struct ScanOptions {
    bool refine = true;
    double seed_threshold = std::numeric_limits<double>::infinity();
    double root_tol = 1e-10;
    double dedup_tol = 1e-6;
    int max_iterations = 60;
    ClassifyOptions classify;
};

struct ScanResult {
    std::vector<WeylReport> reports;  // lexicographic in p
    std::vector<RVector> seeds;
    int diverged = 0;
    int reanchors = 0;
    std::vector<std::string> failures;
};

ScanResult scan_grid(const ParamFamily& fam, const RVector& lo, const RVector& hi, int resolution,
                     const ScanOptions& opts = {});

// Damped Newton on h = 0 from a seed; throws NewtonDiverged.
RVector newton_refine(const ParamFamily& fam, const RVector& seed, const RVector& lo, const RVector& hi,
                      const ScanOptions& opts, int* reanchors = nullptr);

struct TrackedPoint {
    WeylReport original;
    bool found = false;
    WeylReport perturbed;
    double displacement = 0.0;
};

// Re-scan fam + t K and match each original point to its nearest successor.
std::vector<TrackedPoint> track_under_perturbation(const ParamFamily& fam, const HermitianMatrix& K, double t,
                                                   const RVector& lo, const RVector& hi, int resolution,
                                                   const ScanOptions& opts = {});

}  // namespace hermgeo
