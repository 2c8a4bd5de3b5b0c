#include "hermgeo/models.hpp"

#include "hermgeo/errors.hpp"

#include <cmath>
#include <sstream>

namespace hermgeo {

namespace {

void check_qubits(int N, const char* what) {
    if (N < 1 || N > kMaxQubits) {
        std::ostringstream os;
        os << what << ": N = " << N << " outside 1.." << kMaxQubits;
        throw InvalidArgument(os.str());
    }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

std::string single_site(int N, int site, char letter) {
    std::string s(static_cast<size_t>(N), 'I');
    s[static_cast<size_t>(site)] = letter;
    return s;
}

}  // namespace

CMatrix pauli(char letter) {
    CMatrix m = CMatrix::Zero(2, 2);
    switch (letter) {
        case 'I': m(0, 0) = 1.0; m(1, 1) = 1.0; break;
        case 'X': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 'Y': m(0, 1) = cplx(0.0, -1.0); m(1, 0) = cplx(0.0, 1.0); break;
        case 'Z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        default: throw InvalidArgument(std::string("pauli: unknown letter ") + letter);
    }
    return m;
}

HermitianMatrix PauliString::to_matrix() const {
    check_qubits(n_qubits, "PauliString");
    if (static_cast<int>(letters.size()) != n_qubits) {
        throw InvalidArgument("PauliString: letter count differs from n_qubits");
    }
    CMatrix m = CMatrix::Identity(1, 1);
    for (char c : letters) m = kron(m, pauli(c));
    return HermitianMatrix(CMatrix(coefficient * m));
}

HermitianMatrix pauli_sum(const std::vector<PauliString>& terms) {
    if (terms.empty()) throw InvalidArgument("pauli_sum: no terms");
    CMatrix m = terms.front().to_matrix().mat();
    for (size_t i = 1; i < terms.size(); ++i) m += terms[i].to_matrix().mat();
    return HermitianMatrix(m);
}

HermitianMatrix ssh(int N, double v, double w) {
    if (N < 2) throw InvalidArgument("ssh: N must be >= 2");
    const int n = 2 * N;
    CMatrix m = CMatrix::Zero(n, n);
    for (int b = 0; b + 1 < n; ++b) {
        const double t = (b % 2 == 0) ? v : w;
        m(b, b + 1) = t;
        m(b + 1, b) = t;
    }
    return HermitianMatrix(m);
}

HermitianMatrix ssh_hopping_disorder(int N, const RVector& params) {
    if (N < 2) throw InvalidArgument("ssh_hopping_disorder: N must be >= 2");
    if (params.size() != 4 * N - 2) throw DimensionMismatch("ssh_hopping_disorder: expected 4N - 2 parameters");
    const int n = 2 * N;
    CMatrix m = CMatrix::Zero(n, n);
    for (int b = 0; b + 1 < n; ++b) {
        const cplx t(params(2 * b), params(2 * b + 1));
        m(b, b + 1) = t;
        m(b + 1, b) = std::conj(t);
    }
    return HermitianMatrix(m);
}

HermitianMatrix random_ssh_disorder(int N, Rng& rng) {
    return ssh_hopping_disorder(N, random_gaussian_vector(4 * N - 2, rng));
}

HermitianMatrix ising(int N) {
    check_qubits(N, "ising");
    if (N < 2) throw InvalidArgument("ising: N must be >= 2");
    std::vector<PauliString> terms;
    for (int i = 0; i + 1 < N; ++i) {
        std::string s(static_cast<size_t>(N), 'I');
        s[static_cast<size_t>(i)] = 'Z';
        s[static_cast<size_t>(i + 1)] = 'Z';
        terms.push_back({N, s, -1.0});
    }
    return pauli_sum(terms);
}

HermitianMatrix transverse_perturbation(int N, const RVector& xs, const RVector& ys) {
    check_qubits(N, "transverse_perturbation");
    if (xs.size() != N || ys.size() != N) throw DimensionMismatch("transverse_perturbation: need N x and N y values");
    std::vector<PauliString> terms;
    for (int i = 0; i < N; ++i) {
        terms.push_back({N, single_site(N, i, 'X'), xs(i)});
        terms.push_back({N, single_site(N, i, 'Y'), ys(i)});
    }
    return pauli_sum(terms);
}

HermitianMatrix random_transverse(int N, Rng& rng) {
    const RVector xs = random_gaussian_vector(N, rng);
    const RVector ys = random_gaussian_vector(N, rng);
    return transverse_perturbation(N, xs, ys);
}

HermitianMatrix five_qubit_code() {
    return pauli_sum({{5, "XZZXI", 1.0}, {5, "IXZZX", 1.0}, {5, "XIXZZ", 1.0}, {5, "ZXIXZ", 1.0}});
}

HermitianMatrix one_local(int N, const RVector& coeffs) {
    check_qubits(N, "one_local");
    if (coeffs.size() != 3 * N) throw DimensionMismatch("one_local: expected 3N coefficients");
    std::vector<PauliString> terms;
    const char letters[3] = {'X', 'Y', 'Z'};
    for (int i = 0; i < N; ++i)
        for (int c = 0; c < 3; ++c) terms.push_back({N, single_site(N, i, letters[c]), coeffs(3 * i + c)});
    return pauli_sum(terms);
}

HermitianMatrix random_one_local(int N, Rng& rng) {
    return one_local(N, random_gaussian_vector(3 * N, rng));
}

HermitianMatrix example_3x3(double v, double x, double y, double z, double p, double q, double r,
                            double s, double w) {
    CMatrix m(3, 3);
    m << cplx(v + z, 0), cplx(x, -y), cplx(p, -q),
         cplx(x, y), cplx(v - z, 0), cplx(r, -s),
         cplx(p, q), cplx(r, s), cplx(1.0 + w, 0);
    return HermitianMatrix(m);
}

HermitianMatrix example_pr(double p, double r) { return example_3x3(0, 0, 0, 0, p, 0, r, 0); }

namespace {

// 1 - sqrt(1 + 4 rho^2) written without cancellation
double one_minus_root(double rho2) { return -4.0 * rho2 / (1.0 + std::sqrt(1.0 + 4.0 * rho2)); }

}  // namespace

SWDecomposition example_pr_reference(double p, double r) {
    const double rho2 = p * p + r * r;
    const double rho = std::sqrt(rho2);
    const double root = std::sqrt(1.0 + 4.0 * rho2);
    // (1/rho) atan((root - 1)/(2 rho)) with (root - 1)/(2 rho) = 2 rho/(1 + root)
    const double f = rho > 1e-300 ? std::atan(2.0 * rho / (1.0 + root)) / rho : 1.0;

    SWDecomposition d;
    d.k = 2;
    d.offset = 0;
    d.H0 = HermitianMatrix::diagonal(RVector::Unit(3, 2));
    RMatrix a = RMatrix::Zero(3, 3);  // iS, real antisymmetric
    a(0, 2) = f * p;
    a(1, 2) = f * r;
    a(2, 0) = -f * p;
    a(2, 1) = -f * r;
    d.S = HermitianMatrix::hermitian_part(CMatrix(a.cast<cplx>() * cplx(0.0, -1.0)));
    // exp(iS) by Rodrigues: rotation by theta = f rho in the (p, r, 0)/rho, e3 plane
    const double theta = f * rho;
    RMatrix rot = RMatrix::Identity(3, 3);
    if (theta > 0.0) {
        const RMatrix kk = a / theta;
        rot += std::sin(theta) * kk + (1.0 - std::cos(theta)) * kk * kk;
    }
    d.rotation = UnitaryMatrix(CMatrix(rot.cast<cplx>()));
    d.gauge = UnitaryMatrix::identity(3);
    CMatrix b = CMatrix::Zero(3, 3);
    b(2, 2) = -0.5 * one_minus_root(rho2);
    d.B = HermitianMatrix::hermitian_part(b);
    d.c = 0.25 * one_minus_root(rho2);
    const double g = -1.0 / (1.0 + root);  // (1 - root)/(4 rho^2)
    CMatrix heff = CMatrix::Zero(3, 3);
    heff(0, 0) = g * (p * p - r * r);
    heff(1, 1) = -g * (p * p - r * r);
    heff(0, 1) = g * 2.0 * p * r;
    heff(1, 0) = g * 2.0 * p * r;
    d.H_eff = HermitianMatrix::hermitian_part(heff);
    d.s_norm = theta;
    d.r0 = 0.5;
    d.residual = (d.reconstruct().mat() - example_pr(p, r).mat()).norm();
    return d;
}

double example_pr_printed_b(double p, double r) {
    return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * (p * p + r * r)));
}

RVector example_pr_effective_map(double p, double r) {
    // (1 - root)/(2 sqrt2 rho^2) = -sqrt2/(1 + root)
    const double root = std::sqrt(1.0 + 4.0 * (p * p + r * r));
    const double g = -std::sqrt(2.0) / (1.0 + root);
    RVector h(3);
    h << g * 2.0 * p * r, 0.0, g * (p * p - r * r);
    return h;
}

HermitianMatrix weyl_example(double x, double y, double z) {
    CMatrix m(3, 3);
    m << cplx(z, 0), cplx(x, -y), cplx(y, -x * z),
         cplx(x, y), cplx(-z, 0), cplx(x, -y * z),
         cplx(y, x * z), cplx(x, y * z), cplx(1.0 + x * y * z, 0);
    return HermitianMatrix(m);
}

}  // namespace hermgeo
