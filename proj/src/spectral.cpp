#include "hermgeo/spectral.hpp"

#include "hermgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hermgeo {

namespace {

constexpr double kOffTol = 1e-14;
constexpr int kMaxSweeps = 100;

double off_norm(const CMatrix& a) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Zeroes a(p,q) with G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on (p,q).
void rotate(CMatrix& a, CMatrix& v, Eigen::Index p, Eigen::Index q) {
    const cplx apq = a(p, q);
    const double mag = std::abs(apq);
    const cplx ph = apq / mag;  // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx phc = std::conj(ph);

    const Eigen::Index n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx aip = a(i, p);
        const cplx aiq = a(i, q);
        a(i, p) = c * aip - s * phc * aiq;
        a(i, q) = s * aip + c * phc * aiq;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        const cplx apj = a(p, j);
        const cplx aqj = a(q, j);
        a(p, j) = c * apj - s * ph * aqj;
        a(q, j) = s * apj + c * ph * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx vip = v(i, p);
        const cplx viq = v(i, q);
        v(i, p) = c * vip - s * phc * viq;
        v(i, q) = s * vip + c * phc * viq;
    }
}

}  // namespace

double Spectrum::norm2() const {
    const auto n = eigenvalues.size();
    return std::max(std::abs(eigenvalues(0)), std::abs(eigenvalues(n - 1)));
}

Spectrum eigh(const HermitianMatrix& h) { return eigh(h.mat()); }

Spectrum eigh(const CMatrix& h_in) {
    if (h_in.rows() != h_in.cols() || h_in.rows() == 0) {
        throw DimensionMismatch("eigh: matrix must be square and nonempty");
    }
    const Eigen::Index n = h_in.rows();
    CMatrix a = 0.5 * (h_in + h_in.adjoint());
    CMatrix v = CMatrix::Identity(n, n);
    const double fro = a.norm();
    const double target = kOffTol * fro;

    int sweeps = 0;
    while (off_norm(a) > target) {
        if (sweeps == kMaxSweeps) throw ConvergenceFailure("eigh: Jacobi sweep cap exceeded");
        ++sweeps;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                // negligible against both diagonals after the first sweeps
                const double dpp = std::abs(a(p, p).real());
                const double dqq = std::abs(a(q, q).real());
                if (sweeps > 3 && dpp + 1e3 * mag == dpp && dqq + 1e3 * mag == dqq) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                rotate(a, v, p, q);
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    RVector d = a.diagonal().real();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return d(x) < d(y); });

    Spectrum out;
    out.eigenvalues.resize(n);
    CMatrix u(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto src = order[static_cast<size_t>(j)];
        out.eigenvalues(j) = d(src);
        CVector col = v.col(src);
        Eigen::Index imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        const cplx z = col(imax);
        col *= std::conj(z) / std::abs(z);
        col(imax) = std::abs(col(imax));
        u.col(j) = col;
    }
    out.residual = (h_in * u - u * out.eigenvalues.cast<cplx>().asDiagonal()).norm();
    out.vectors = UnitaryMatrix(u);
    out.sweeps = sweeps;
    return out;
}

double grouping_tolerance(const Spectrum& spec, double rel_tol) {
    return rel_tol * std::max(1.0, spec.norm2());
}

StratumPartition classify_stratum(const Spectrum& spec, double rel_tol) {
    if (!(rel_tol > 0.0)) throw InvalidArgument("classify_stratum: rel_tol must be > 0");
    StratumPartition out;
    out.tolerance = grouping_tolerance(spec, rel_tol);
    const auto& e = spec.eigenvalues;
    int run = 1;
    for (Eigen::Index i = 1; i < e.size(); ++i) {
        if (e(i) - e(i - 1) <= out.tolerance) {
            ++run;
        } else {
            out.parts.push_back(run);
            run = 1;
        }
    }
    out.parts.push_back(run);
    return out;
}

int stratum_codimension(const StratumPartition& kappa) {
    int c = 0;
    for (int k : kappa.parts) c += k * k - 1;
    return c;
}

double half_gap(const HermitianMatrix& h0, int k) {
    if (k < 1 || k >= h0.n()) throw InvalidArgument("half_gap: need 1 <= k < n");
    const Spectrum s = eigh(h0);
    return std::max(0.0, 0.5 * (s.eigenvalues(k) - s.eigenvalues(k - 1)));
}

CMatrix spectral_function(const Spectrum& spec, const std::function<cplx(double)>& f) {
    const auto n = spec.eigenvalues.size();
    CVector fd(n);
    for (Eigen::Index i = 0; i < n; ++i) fd(i) = f(spec.eigenvalues(i));
    const CMatrix& u = spec.vectors.mat();
    return u * fd.asDiagonal() * u.adjoint();
}

bool window_isolated(const RVector& e, int k, int offset, double tol) {
    const auto n = static_cast<int>(e.size());
    if (offset < 0 || k < 1 || offset + k > n) return false;
    if (offset > 0 && !(e(offset) - e(offset - 1) > tol)) return false;
    if (offset + k < n && !(e(offset + k) - e(offset + k - 1) > tol)) return false;
    return true;
}

}  // namespace hermgeo
