#pragma once

#include "hermgeo/hermitian.hpp"
#include "hermgeo/random.hpp"
#include "hermgeo/sw_transform.hpp"

#include <string>
#include <vector>

namespace hermgeo {

constexpr int kMaxQubits = 6;

// Qubit 1 is the leftmost tensor factor. Z = diag(1, -1).
struct PauliString {
    int n_qubits = 0;
    std::string letters;
    double coefficient = 1.0;
    HermitianMatrix to_matrix() const;
};

CMatrix pauli(char letter);
HermitianMatrix pauli_sum(const std::vector<PauliString>& terms);

HermitianMatrix ssh(int N, double v, double w);
// 2N - 1 complex hoppings from 4N - 2 reals (re, im per bond), zero diagonal.
HermitianMatrix ssh_hopping_disorder(int N, const RVector& params);
HermitianMatrix random_ssh_disorder(int N, Rng& rng);

HermitianMatrix ising(int N);
HermitianMatrix transverse_perturbation(int N, const RVector& xs, const RVector& ys);
HermitianMatrix random_transverse(int N, Rng& rng);

HermitianMatrix five_qubit_code();
// coeffs[3i + {0,1,2}] multiply X_i, Y_i, Z_i
HermitianMatrix one_local(int N, const RVector& coeffs);
HermitianMatrix random_one_local(int N, Rng& rng);

HermitianMatrix example_3x3(double v, double x, double y, double z, double p, double q, double r,
                            double s, double w = 0.0);
HermitianMatrix example_pr(double p, double r);
// Closed-form S, B, T, H_eff; B excludes the base point's lower block.
SWDecomposition example_pr_reference(double p, double r);
// Lower-right coefficient in the printed convention, which includes H0's 1.
double example_pr_printed_b(double p, double r);
// Closed-form effective map of the (p, r) model in the Pauli basis.
RVector example_pr_effective_map(double p, double r);

HermitianMatrix weyl_example(double x, double y, double z);

}  // namespace hermgeo
