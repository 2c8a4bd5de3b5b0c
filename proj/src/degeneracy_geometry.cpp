#include "hermgeo/degeneracy_geometry.hpp"

#include "hermgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace hermgeo {

double window_std_dev(const RVector& e, int k, int offset) {
    const RVector w = e.segment(offset, k);
    const double mean = w.mean();
    return std::sqrt((w.array() - mean).square().sum() / k);
}

ProjectionResult collapse_projection(const HermitianMatrix& H, int k, int offset, double rel_tol) {
    return collapse_projection(H, eigh(H), k, offset, rel_tol);
}

ProjectionResult collapse_projection(const HermitianMatrix& H, const Spectrum& spec, int k,
                                     int offset, double rel_tol) {
    const int n = H.n();
    require_same_dim(n, static_cast<int>(spec.eigenvalues.size()), "collapse_projection");
    if (k < 1 || offset < 0 || offset + k > n) {
        throw InvalidArgument("collapse_projection: window outside the spectrum");
    }
    ProjectionResult out;
    out.spectrum = spec;
    RVector e = spec.eigenvalues;
    out.mean_lambda = e.segment(offset, k).mean();
    out.std_dev = window_std_dev(e, k, offset);
    out.distance = std::sqrt(static_cast<double>(k)) * out.std_dev;
    // the window mean stays inside the gap, so only the boundary matters
    out.unique = window_isolated(e, k, offset, grouping_tolerance(spec, rel_tol));
    e.segment(offset, k).setConstant(out.mean_lambda);
    const CMatrix& u = spec.vectors.mat();
    out.H_sigma = HermitianMatrix::hermitian_part(CMatrix(u * e.cast<cplx>().asDiagonal() * u.adjoint()));
    return out;
}

double distance_to_sigma(const HermitianMatrix& H, int k, int offset) {
    return collapse_projection(H, k, offset).distance;
}

HermitianMatrix project_with_index_set(const HermitianMatrix& H, const std::vector<int>& indices,
                                       const Spectrum& gauge) {
    const int n = H.n();
    require_same_dim(n, static_cast<int>(gauge.eigenvalues.size()), "project_with_index_set");
    const std::set<int> sel(indices.begin(), indices.end());
    if (sel.size() != indices.size() || sel.empty() || static_cast<int>(sel.size()) >= n ||
        *sel.begin() < 0 || *sel.rbegin() >= n) {
        throw InvalidArgument("project_with_index_set: need k distinct indices in range with k < n");
    }
    RVector e = gauge.eigenvalues;
    double mean = 0.0;
    for (int i : sel) mean += e(i);
    mean /= static_cast<double>(sel.size());
    double lowest_omitted = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        if (!sel.count(i)) lowest_omitted = std::min(lowest_omitted, e(i));
    if (!(mean < lowest_omitted)) {
        throw NotInSigmaK("project_with_index_set: mean of selected eigenvalues is not below the lowest omitted one");
    }
    for (int i : sel) e(i) = mean;
    const CMatrix& u = gauge.vectors.mat();
    return HermitianMatrix::hermitian_part(CMatrix(u * e.cast<cplx>().asDiagonal() * u.adjoint()));
}

std::vector<HermitianMatrix> tangent_basis(const Spectrum& frame, int k) {
    const int n = static_cast<int>(frame.eigenvalues.size());
    const CMatrix& u = frame.vectors.mat();
    std::vector<HermitianMatrix> out;
    out.reserve(static_cast<size_t>(n * n - k * k + 1));
    // in the eigenframe: everything outside the k x k block, plus its scalar direction
    for (const auto& el : canonical_basis(n)) {
        const int a = el.index.a - 1;
        const int b = el.index.b - 1;
        if (a < k && b < k) continue;
        out.emplace_back(CMatrix(u * el.matrix.mat() * u.adjoint()));
    }
    CMatrix scalar = CMatrix::Zero(n, n);
    for (int i = 0; i < k; ++i) scalar(i, i) = 1.0 / std::sqrt(static_cast<double>(k));
    out.emplace_back(CMatrix(u * scalar * u.adjoint()));
    return out;
}

double orthogonality_check(const HermitianMatrix& H, int k) {
    const ProjectionResult pr = collapse_projection(H, k);
    if (!pr.unique) throw DegenerateBoundary("orthogonality_check: lambda_k = lambda_{k+1}");
    const HermitianMatrix diff = H - pr.H_sigma;
    const double norm = frobenius_norm(diff);
    if (norm <= 1e-13 * std::max(1.0, frobenius_norm(H))) return 0.0;
    double worst = 0.0;
    for (const auto& t : tangent_basis(pr.spectrum, k)) {
        worst = std::max(worst, std::abs(frobenius_inner(diff, t)) / norm);
    }
    return worst;
}

HermitianMatrix sample_sigma_k(int n, int k, Rng& rng, double min_gap) {
    std::normal_distribution<double> g(0.0, 1.0);
    const RVector e = random_degenerate_spectrum(n, k, g(rng), min_gap, rng);
    const UnitaryMatrix u = random_unitary(n, rng);
    return conjugate(HermitianMatrix::diagonal(e), u);
}

}  // namespace hermgeo
