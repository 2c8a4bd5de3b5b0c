#include <catch_amalgamated.hpp>

#include "hermgeo/degeneracy_geometry.hpp"
#include "hermgeo/errors.hpp"
#include "hermgeo/random.hpp"
#include "hermgeo/sw_transform.hpp"

#include <cmath>

using namespace hermgeo;

namespace {

HermitianMatrix diag(std::initializer_list<double> v) {
    RVector d(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (double x : v) d(i++) = x;
    return HermitianMatrix::diagonal(d);
}

double dist(const HermitianMatrix& a, const HermitianMatrix& b) { return frobenius_norm(a - b); }

}  // namespace

TEST_CASE("collapse_projection_examples") {
    const ProjectionResult r = collapse_projection(diag({0, 1, 2}), 2);
    CHECK(dist(r.H_sigma, diag({0.5, 0.5, 2})) < 1e-15);
    CHECK(r.distance == 0.7071067811865476);
    CHECK(r.mean_lambda == 0.5);
    CHECK(r.unique);

    Rng rng(3);
    const HermitianMatrix g = sample_sigma_k(5, 2, rng);
    const ProjectionResult f = collapse_projection(g, 2);
    CHECK(dist(f.H_sigma, g) < 1e-12);
    CHECK(f.distance < 1e-12);

    const ProjectionResult u = collapse_projection(diag({0, 1, 1, 2}), 2);
    CHECK_FALSE(u.unique);
    CHECK(std::abs(u.distance - std::sqrt(0.5)) < 1e-15);
}

TEST_CASE("collapse_projection_lands_on_sigma") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + trial % 6, k = 2 + trial % 3;
        if (k >= n) continue;
        const HermitianMatrix h = random_hermitian(n, rng);
        const ProjectionResult r = collapse_projection(h, k);
        const RVector e = eigh(r.H_sigma).eigenvalues;
        CHECK(e.head(k).maxCoeff() - e.head(k).minCoeff() <= 1e-10);
        CHECK(e(k - 1) < e(k));
        CHECK(std::abs(r.distance - std::sqrt(double(k)) * r.std_dev) <= 1e-12 * std::max(1.0, r.distance));
        CHECK(std::abs(dist(h, r.H_sigma) - r.distance) <= 1e-9 * std::max(1.0, r.distance));
    }
}

TEST_CASE("distance_examples") {
    RVector e(5);
    e << 0, 0, 3, 4, 5;
    Rng rng(9);
    const HermitianMatrix h = conjugate(HermitianMatrix::diagonal(e), random_unitary(5, rng));
    CHECK(std::abs(distance_to_sigma(h, 3) - std::sqrt(6.0)) < 1e-12);

    const HermitianMatrix x = random_hermitian(6, rng);
    for (double c : {0.5, 3.0, 7.0})
        CHECK(std::abs(distance_to_sigma(x * c, 2) - c * distance_to_sigma(x, 2)) < 1e-12 * c);
    // a negative factor reverses the spectrum, so the lowest window maps to the top one
    CHECK(std::abs(distance_to_sigma(x * -3.0, 2) - 3.0 * distance_to_sigma(x, 2, 4)) < 1e-12 * 3.0);
}

TEST_CASE("distance_equals_heff_norm") {
    Rng rng(21);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + trial % 6, k = 2 + trial % 3;
        if (k >= n) continue;
        const HermitianMatrix h0 = HermitianMatrix::diagonal(random_degenerate_spectrum(n, k, 0.0, 0.5, rng));
        HermitianMatrix pert = random_hermitian(n, rng);
        pert = pert * (0.8 * half_gap(h0, k) / eigh(pert).norm2());
        const HermitianMatrix h = h0 + pert;
        const SWDecomposition d = sw_decompose(h, h0, k);
        const ProjectionResult p = collapse_projection(h, k);
        const double ref = std::max(1e-300, p.distance);
        CHECK(std::abs(frobenius_norm(d.H_eff) - p.distance) <= 1e-9 * std::max(1.0, ref));
        CHECK(std::abs(std::sqrt(double(k)) * p.std_dev - p.distance) <= 1e-9 * std::max(1.0, ref));
        // H_eff sits exactly at the difference H - H_Sigma, rotated back
        const CMatrix rot = d.rotation.mat();
        const CMatrix back = rot * d.H_eff.mat() * rot.adjoint();
        CHECK((back - (h - p.H_sigma).mat()).norm() <= 1e-9);
        ++checked;
    }
    CHECK(checked > 80);
}

TEST_CASE("brute_force_minimality") {
    Rng rng(2024);
    const HermitianMatrix h = random_hermitian(5, rng);
    const ProjectionResult best = collapse_projection(h, 2);
    double closest = 1e300;
    for (int s = 0; s < 10000; ++s) closest = std::min(closest, dist(h, sample_sigma_k(5, 2, rng)));
    CHECK(closest > best.distance + 1e-12);

    // local search near H_Sigma inside Sigma_2 never beats it
    for (int s = 0; s < 200; ++s) {
        const UnitaryMatrix v = random_near_identity(5, 1e-3, rng);
        RVector e = eigh(best.H_sigma).eigenvalues;
        const RVector shift = random_gaussian_vector(5, rng) * 1e-3;
        e(0) += shift(0);
        e(1) = e(0);
        for (int i = 2; i < 5; ++i) e(i) += shift(i);
        const HermitianMatrix g = conjugate(conjugate(HermitianMatrix::diagonal(e), best.spectrum.vectors), v);
        CHECK(dist(h, g) >= best.distance - 1e-12);
    }
}

TEST_CASE("index_set_projection") {
    Rng rng(5);
    const HermitianMatrix h = random_hermitian(4, rng);
    const Spectrum s = eigh(h);
    CHECK(dist(project_with_index_set(h, {0, 1}, s), collapse_projection(h, 2).H_sigma) < 1e-13);

    const HermitianMatrix a = diag({0, 1, 10});
    CHECK_THROWS_AS(project_with_index_set(a, {0, 2}, eigh(a)), NotInSigmaK);

    const HermitianMatrix b = diag({0, 4, 5});
    const HermitianMatrix pb = project_with_index_set(b, {0, 2}, eigh(b));
    CHECK(dist(pb, diag({2.5, 4, 2.5})) < 1e-15);
    const RVector e = eigh(pb).eigenvalues;
    CHECK(e(0) == e(1));
    CHECK(e(1) < e(2));
    CHECK(dist(b, pb) > collapse_projection(b, 2).distance);
}

TEST_CASE("orthogonality_examples") {
    Rng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + trial % 5, k = 2 + trial % 2;
        if (k >= n) continue;
        CHECK(orthogonality_check(random_hermitian(n, rng), k) <= 1e-9);
    }
    CHECK(orthogonality_check(sample_sigma_k(5, 2, rng), 2) == 0.0);
    CHECK_THROWS_AS(orthogonality_check(diag({0, 1, 1}), 2), DegenerateBoundary);

    for (int n = 3; n <= 6; ++n)
        for (int k = 2; k < n; ++k) {
            const Spectrum frame = eigh(random_hermitian(n, rng));
            const auto basis = tangent_basis(frame, k);
            REQUIRE(static_cast<int>(basis.size()) == n * n - k * k + 1);
            double worst = 0.0;
            for (size_t i = 0; i < basis.size(); ++i)
                for (size_t j = 0; j < basis.size(); ++j)
                    worst = std::max(worst, std::abs(frobenius_inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)));
            CHECK(worst < 1e-12);
        }
}

TEST_CASE("orthogonal_line_closure") {
    Rng rng(41);
    const int n = 5, k = 3;
    const HermitianMatrix h_sigma = sample_sigma_k(n, k, rng, 0.2);
    const Spectrum s = eigh(h_sigma);
    RVector dvec = RVector::Zero(n);
    dvec.head(k) = random_gaussian_vector(k, rng);
    dvec.head(k).array() -= dvec.head(k).mean();
    for (double t : {-1e-2, -1e-3, 1e-4, 1e-3, 1e-2}) {
        RVector e = s.eigenvalues + t * dvec;
        const HermitianMatrix h = conjugate(HermitianMatrix::diagonal(e), s.vectors);
        CHECK(dist(collapse_projection(h, k).H_sigma, h_sigma) < 1e-12);
    }
}

TEST_CASE("larger_collapse_is_farther") {
    Rng rng(63);
    for (int trial = 0; trial < 20; ++trial) {
        const HermitianMatrix h = random_hermitian(6, rng);
        for (int k = 2; k < 5; ++k)
            CHECK(collapse_projection(h, k).distance < collapse_projection(h, k + 1).distance);
    }
}

TEST_CASE("window_offset_projection") {
    const HermitianMatrix h = diag({-2, 0, 1, 3});
    const ProjectionResult r = collapse_projection(h, 2, 1);
    CHECK(dist(r.H_sigma, diag({-2, 0.5, 0.5, 3})) < 1e-15);
    CHECK(std::abs(distance_to_sigma(h, 2, 1) - std::sqrt(0.5)) < 1e-15);
    CHECK(window_std_dev(eigh(h).eigenvalues, 2, 1) == 0.5);
}
