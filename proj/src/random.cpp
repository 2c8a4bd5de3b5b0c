#include "hermgeo/random.hpp"

#include "hermgeo/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace hermgeo {

namespace {

CMatrix gaussian_complex(int n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(2.0));
    CMatrix z(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) z(i, j) = cplx(g(rng), g(rng));
    return z;
}

}  // namespace

HermitianMatrix random_hermitian(int n, Rng& rng) {
    const CMatrix z = gaussian_complex(n, rng);
    return HermitianMatrix::hermitian_part(CMatrix((z + z.adjoint()) / std::sqrt(2.0)));
}

UnitaryMatrix random_unitary(int n, Rng& rng) {
    const CMatrix z = gaussian_complex(n, rng);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const cplx d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return UnitaryMatrix(q);
}

UnitaryMatrix random_near_identity(int n, double eps, Rng& rng) {
    HermitianMatrix k = random_hermitian(n, rng);
    k = k * (1.0 / frobenius_norm(k));
    const Spectrum s = eigh(k);
    return UnitaryMatrix(spectral_function(s, [eps](double x) {
        return std::exp(cplx(0.0, eps * x));
    }));
}

RVector random_degenerate_spectrum(int n, int k, double mu, double min_gap, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RVector e(n);
    double cur = mu;
    for (int i = 0; i < n; ++i) {
        if (i >= k) cur += min_gap + u(rng);
        e(i) = cur;
    }
    return e;
}

RVector random_gaussian_vector(int m, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    RVector v(m);
    for (int i = 0; i < m; ++i) v(i) = g(rng);
    return v;
}

}  // namespace hermgeo
