#include "hermgeo/sw_transform.hpp"

#include "hermgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hermgeo {

namespace {

constexpr double kDiagonalTol = 1e-12;

CMatrix window_mask(int n, int k, int offset) {
    CMatrix m = CMatrix::Zero(n, n);
    for (int i = offset; i < offset + k; ++i) m(i, i) = 1.0;
    return m;
}

void check_window(int n, int k, int offset, const char* what) {
    if (k < 1 || offset < 0 || offset + k > n) {
        std::ostringstream os;
        os << what << ": invalid window k=" << k << " offset=" << offset << " for n=" << n;
        throw InvalidArgument(os.str());
    }
}

// Validates a diagonal ascending base point and snaps the window to its mean.
RVector canonical_diagonal(const HermitianMatrix& H0, int k, int offset) {
    const int n = H0.n();
    const CMatrix& m = H0.mat();
    RVector d = m.diagonal().real();
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    CMatrix off = m;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > kDiagonalTol * scale) {
        throw BasePointNotCanonical("base point is not diagonal");
    }
    const double tol = kDefaultRelTol * scale;
    for (int i = 1; i < n; ++i) {
        if (d(i) < d(i - 1) - tol) throw BasePointNotCanonical("base point diagonal not ascending");
    }
    for (int i = offset + 1; i < offset + k; ++i) {
        if (d(i) - d(i - 1) > tol) {
            throw BasePointNotCanonical("base point window is not degenerate");
        }
    }
    if (!window_isolated(d, k, offset, tol)) {
        throw BasePointNotCanonical("base point window touches a neighbouring eigenvalue");
    }
    const double mean = d.segment(offset, k).mean();
    d.segment(offset, k).setConstant(mean);
    return d;
}

double window_half_gap(const RVector& d, int k, int offset) {
    double r = std::numeric_limits<double>::infinity();
    if (offset > 0) r = std::min(r, 0.5 * (d(offset) - d(offset - 1)));
    if (offset + k < d.size()) r = std::min(r, 0.5 * (d(offset + k) - d(offset + k - 1)));
    return r;
}

}  // namespace

bool in_window(int i, int k, int offset) { return i >= offset && i < offset + k; }

HermitianMatrix SWDecomposition::T() const {
    const CMatrix& u = gauge.mat();
    return HermitianMatrix::hermitian_part(CMatrix(c * u * window_mask(H0.n(), k, offset) * u.adjoint()));
}

HermitianMatrix SWDecomposition::reconstruct() const {
    const CMatrix& w = rotation.mat();
    const CMatrix inner = H0.mat() + B.mat() + T().mat() + H_eff.mat();
    return HermitianMatrix::hermitian_part(CMatrix(w * inner * w.adjoint()));
}

CMatrix SWDecomposition::heff_block() const {
    const CMatrix& u = gauge.mat();
    const CMatrix local = u.adjoint() * H_eff.mat() * u;
    return local.block(offset, offset, k, k);
}

HermitianMatrix projector_window(const Spectrum& spec, int k, int offset, double rel_tol) {
    const int n = static_cast<int>(spec.eigenvalues.size());
    check_window(n, k, offset, "projector_window");
    if (!window_isolated(spec.eigenvalues, k, offset, grouping_tolerance(spec, rel_tol))) {
        throw DegenerateBoundary("projector not unique: window eigenvalue touches a neighbour");
    }
    const CMatrix v = spec.vectors.mat().middleCols(offset, k);
    return HermitianMatrix::hermitian_part(CMatrix(v * v.adjoint()));
}

HermitianMatrix projector_lowest_k(const Spectrum& spec, int k, double rel_tol) {
    return projector_window(spec, k, 0, rel_tol);
}

UnitaryMatrix direct_rotation(const HermitianMatrix& P, const HermitianMatrix& P0) {
    require_same_dim(P.n(), P0.n(), "direct_rotation");
    const int n = P.n();
    const double dist = eigh(P - P0).norm2();
    if (dist >= 1.0 - 1e-12) {
        std::ostringstream os;
        os << "direct_rotation: ||P - P0||_2 = " << dist << " is not below 1";
        throw SubspacesTooFar(os.str());
    }
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix m = (id - 2.0 * P.mat()) * (id - 2.0 * P0.mat());
    // principal sqrt of the unitary M is the unitary polar factor of I + M
    const CMatrix x = id + m;
    const Spectrum g = eigh(CMatrix(x.adjoint() * x));
    const CMatrix inv_sqrt = spectral_function(g, [](double e) { return cplx(1.0 / std::sqrt(e), 0.0); });
    return UnitaryMatrix(CMatrix(x * inv_sqrt));
}

SWDecomposition sw_decompose(const HermitianMatrix& H, const HermitianMatrix& H0, int k, int offset) {
    require_same_dim(H.n(), H0.n(), "sw_decompose");
    const int n = H.n();
    check_window(n, k, offset, "sw_decompose");
    const RVector d0 = canonical_diagonal(H0, k, offset);
    const CMatrix h0 = d0.cast<cplx>().asDiagonal();

    const Spectrum spec = eigh(H);
    const HermitianMatrix P = projector_window(spec, k, offset);
    const CMatrix mask = window_mask(n, k, offset);
    const UnitaryMatrix W = direct_rotation(P, HermitianMatrix::hermitian_part(mask));

    // S = -i Log W; eigenphases lie in (-pi/2, pi/2) so arcsin of sin(S) is exact
    const CMatrix& w = W.mat();
    const Spectrum sin_s = eigh(CMatrix((w - w.adjoint()) / cplx(0.0, 2.0)));
    const CMatrix s_raw = spectral_function(sin_s, [](double e) {
        return cplx(std::asin(std::clamp(e, -1.0, 1.0)), 0.0);
    });
    CMatrix s_off = s_raw;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (in_window(a, k, offset) == in_window(b, k, offset)) s_off(a, b) = 0.0;

    SWDecomposition dec;
    dec.k = k;
    dec.offset = offset;
    dec.H0 = HermitianMatrix::hermitian_part(h0);
    dec.S = HermitianMatrix::hermitian_part(s_off);
    dec.s_projection_residual = (s_raw - s_off).norm();

    const Spectrum s_spec = eigh(dec.S);
    dec.s_norm = s_spec.norm2();
    dec.rotation = UnitaryMatrix(spectral_function(s_spec, [](double e) {
        return std::exp(cplx(0.0, e));
    }));
    const CMatrix& u = dec.rotation.mat();
    const CMatrix bt = u.adjoint() * H.mat() * u - h0;

    CMatrix b = CMatrix::Zero(n, n);
    CMatrix heff = CMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            if (!in_window(a, k, offset) && !in_window(c, k, offset)) b(a, c) = bt(a, c);
            if (in_window(a, k, offset) && in_window(c, k, offset)) heff(a, c) = bt(a, c);
        }
    dec.c = heff.trace().real() / k;
    heff -= dec.c * mask;
    dec.B = HermitianMatrix::hermitian_part(b);
    dec.H_eff = HermitianMatrix::hermitian_part(heff);
    dec.gauge = UnitaryMatrix::identity(n);
    dec.residual = (dec.reconstruct().mat() - H.mat()).norm();
    dec.r0 = window_half_gap(d0, k, offset);
    dec.perturbation_norm = eigh(CMatrix(H.mat() - h0)).norm2();
    dec.within_r0 = dec.perturbation_norm < dec.r0;
    dec.s_norm_ok = dec.s_norm < std::numbers::pi / 2.0;
    return dec;
}

BasePoint make_base_point(const HermitianMatrix& G0, int k, int offset, double rel_tol) {
    const int n = G0.n();
    check_window(n, k, offset, "make_base_point");
    const Spectrum s = eigh(G0);
    const double tol = grouping_tolerance(s, rel_tol);
    const RVector& e = s.eigenvalues;
    for (int i = offset + 1; i < offset + k; ++i) {
        if (e(i) - e(i - 1) > tol) throw BasePointNotCanonical("G0 is not in Sigma_k: window not degenerate");
    }
    if (!window_isolated(e, k, offset, tol)) {
        throw BasePointNotCanonical("G0 is not in Sigma_k: window touches a neighbour");
    }
    BasePoint bp;
    bp.gauge = s.vectors;
    bp.diagonal = e;
    bp.diagonal.segment(offset, k).setConstant(e.segment(offset, k).mean());
    bp.k = k;
    bp.offset = offset;
    return bp;
}

SWDecomposition sw_decompose_general(const HermitianMatrix& H, const HermitianMatrix& G0, int k,
                                     int offset) {
    require_same_dim(H.n(), G0.n(), "sw_decompose_general");
    return sw_decompose_general(H, make_base_point(G0, k, offset));
}

SWDecomposition sw_decompose_general(const HermitianMatrix& H, const BasePoint& base) {
    require_same_dim(H.n(), base.gauge.n(), "sw_decompose_general");
    const CMatrix& u0 = base.gauge.mat();
    const HermitianMatrix local(CMatrix(u0.adjoint() * H.mat() * u0));
    SWDecomposition dec = sw_decompose(local, HermitianMatrix::diagonal(base.diagonal), base.k, base.offset);
    auto back = [&](const HermitianMatrix& x) {
        return HermitianMatrix::hermitian_part(CMatrix(u0 * x.mat() * u0.adjoint()));
    };
    dec.H0 = back(dec.H0);
    dec.S = back(dec.S);
    dec.B = back(dec.B);
    dec.H_eff = back(dec.H_eff);
    dec.rotation = UnitaryMatrix(CMatrix(u0 * dec.rotation.mat() * u0.adjoint()));
    dec.gauge = base.gauge;
    dec.residual = (dec.reconstruct().mat() - H.mat()).norm();
    return dec;
}

ChartCoordinates chart_coordinates(const SWDecomposition& dec) {
    const int n = dec.H0.n();
    const int k = dec.k;
    const int off = dec.offset;
    const CMatrix& u = dec.gauge.mat();
    const CMatrix s = u.adjoint() * dec.S.mat() * u;
    const CMatrix b = u.adjoint() * dec.B.mat() * u;
    const double r2 = std::sqrt(2.0);

    ChartCoordinates cc;
    cc.x.resize(n * n - k * k + 1);
    int i = 0;
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < col; ++row)
            if (in_window(row, k, off) != in_window(col, k, off)) {
                cc.x(i++) = r2 * s(row, col).real();
                cc.x(i++) = -r2 * s(row, col).imag();
            }
    for (int col = 0; col < n; ++col) {
        if (in_window(col, k, off)) continue;
        for (int row = 0; row < col; ++row) {
            if (in_window(row, k, off)) continue;
            cc.x(i++) = r2 * b(row, col).real();
            cc.x(i++) = -r2 * b(row, col).imag();
        }
        cc.x(i++) = b(col, col).real();
    }
    cc.x(i++) = dec.c * std::sqrt(static_cast<double>(k));
    cc.y = k >= 2 ? traceless_coordinates(dec.heff_block()) : RVector();
    return cc;
}

}  // namespace hermgeo
