#pragma once

#include "hermgeo/hermitian.hpp"

#include <functional>
#include <vector>

namespace hermgeo {

struct Spectrum {
    RVector eigenvalues;    // ascending
    UnitaryMatrix vectors;  // column a belongs to eigenvalues(a)
    double residual = 0.0;  // ||H U - U Lambda||_F
    int sweeps = 0;
    double norm2() const;
};

struct StratumPartition {
    std::vector<int> parts;
    double tolerance = 0.0;
};

constexpr double kDefaultRelTol = 1e-8;

// Cyclic complex Jacobi; throws ConvergenceFailure past the sweep cap.
Spectrum eigh(const HermitianMatrix& h);
Spectrum eigh(const CMatrix& h);

// Absolute grouping tolerance rel_tol * max(1, ||H||_2).
double grouping_tolerance(const Spectrum& spec, double rel_tol = kDefaultRelTol);

StratumPartition classify_stratum(const Spectrum& spec, double rel_tol = kDefaultRelTol);
int stratum_codimension(const StratumPartition& kappa);

double half_gap(const HermitianMatrix& h0, int k);

// f applied through the spectral decomposition: U f(Lambda) U^dagger.
CMatrix spectral_function(const Spectrum& spec, const std::function<cplx(double)>& f);

// Window [offset, offset+k) separated from its neighbours beyond tol.
bool window_isolated(const RVector& eigenvalues, int k, int offset, double tol);

}  // namespace hermgeo
