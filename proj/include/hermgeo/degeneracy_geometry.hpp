#pragma once

#include "hermgeo/hermitian.hpp"
#include "hermgeo/random.hpp"
#include "hermgeo/spectral.hpp"

#include <vector>

namespace hermgeo {

struct ProjectionResult {
    HermitianMatrix H_sigma;
    double distance = 0.0;  // sqrt(k) * std_dev
    double std_dev = 0.0;   // population std-dev of the window eigenvalues
    double mean_lambda = 0.0;
    bool unique = true;
    Spectrum spectrum;      // gauge used for the collapse
};

ProjectionResult collapse_projection(const HermitianMatrix& H, int k, int offset = 0,
                                     double rel_tol = kDefaultRelTol);
ProjectionResult collapse_projection(const HermitianMatrix& H, const Spectrum& spec, int k,
                                     int offset = 0, double rel_tol = kDefaultRelTol);

double distance_to_sigma(const HermitianMatrix& H, int k, int offset = 0);

// Population std-dev of eigenvalues [offset, offset+k).
double window_std_dev(const RVector& eigenvalues, int k, int offset = 0);

// indices are 0-based positions in gauge.eigenvalues
HermitianMatrix project_with_index_set(const HermitianMatrix& H, const std::vector<int>& indices,
                                       const Spectrum& gauge);

// Orthonormal basis of the tangent space of Sigma_k at H_Sigma (n^2 - k^2 + 1 elements).
std::vector<HermitianMatrix> tangent_basis(const Spectrum& frame, int k);

double orthogonality_check(const HermitianMatrix& H, int k);

// U diag(mu,...,mu, higher) U^dagger with Haar U and gaps >= min_gap.
HermitianMatrix sample_sigma_k(int n, int k, Rng& rng, double min_gap = 1e-3);

}  // namespace hermgeo
