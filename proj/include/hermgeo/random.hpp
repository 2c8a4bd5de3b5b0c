#pragma once

#include "hermgeo/hermitian.hpp"

#include <cstdint>
#include <random>

namespace hermgeo {

using Rng = std::mt19937_64;

// Gaussian Hermitian matrix, entries of unit variance.
HermitianMatrix random_hermitian(int n, Rng& rng);

// Haar unitary from QR of a complex Gaussian matrix with R's diagonal made positive.
UnitaryMatrix random_unitary(int n, Rng& rng);

// exp(i eps K) for a Gaussian Hermitian K of unit Frobenius norm.
UnitaryMatrix random_near_identity(int n, double eps, Rng& rng);

// Ascending spectrum with lowest k entries equal to mu and gaps >= min_gap.
RVector random_degenerate_spectrum(int n, int k, double mu, double min_gap, Rng& rng);

RVector random_gaussian_vector(int m, Rng& rng);

}  // namespace hermgeo
