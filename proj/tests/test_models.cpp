#include <catch_amalgamated.hpp>

#include "hermgeo/errors.hpp"
#include "hermgeo/models.hpp"
#include "hermgeo/splitting_order.hpp"
#include "hermgeo/sw_transform.hpp"

#include <cmath>

using namespace hermgeo;

namespace {

int count_near(const RVector& e, double x, double tol) {
    int c = 0;
    for (Eigen::Index i = 0; i < e.size(); ++i)
        if (std::abs(e(i) - x) <= tol) ++c;
    return c;
}

bool exactly_hermitian(const HermitianMatrix& h) { return (h.mat() - h.mat().adjoint()).norm() == 0.0; }

}  // namespace

TEST_CASE("pauli_hand_values") {
    const CMatrix xz = PauliString{2, "XZ", 1.0}.to_matrix().mat();
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 2) = 1;
    expected(1, 3) = -1;
    expected(2, 0) = 1;
    expected(3, 1) = -1;
    CHECK(xz == expected);

    const CMatrix zi = PauliString{2, "ZI", 2.0}.to_matrix().mat();
    CHECK(zi.diagonal().real() == (RVector(4) << 2, 2, -2, -2).finished());

    const CMatrix iy = PauliString{2, "IY", 1.0}.to_matrix().mat();
    CHECK(iy(0, 1) == cplx(0, -1));
    CHECK(iy(1, 0) == cplx(0, 1));
    CHECK(iy(2, 3) == cplx(0, -1));

    // XY = iZ on a single qubit
    CHECK((pauli('X') * pauli('Y') - cplx(0, 1) * pauli('Z')).norm() == 0.0);
    CHECK_THROWS_AS(pauli('Q'), InvalidArgument);
    CHECK_THROWS_AS((PauliString{7, "XXXXXXX", 1.0}.to_matrix()), InvalidArgument);
}

TEST_CASE("ssh_examples") {
    const HermitianMatrix h = ssh(4, 0.0, 1.0);
    const RVector e = eigh(h).eigenvalues;
    CHECK(count_near(e, -1.0, 1e-12) == 3);
    CHECK(count_near(e, 0.0, 1e-12) == 2);
    CHECK(count_near(e, 1.0, 1e-12) == 3);

    const HermitianMatrix h2 = ssh(2, 0.3, 0.7);
    CMatrix printed = ssh(4, 0.3, 0.7).mat().topLeftCorner(4, 4);
    CHECK(h2.mat() == printed);
    CHECK(h2(0, 1) == cplx(0.3, 0));
    CHECK(h2(1, 2) == cplx(0.7, 0));

    for (double v : {0.0, 0.4}) {
        const HermitianMatrix s = ssh(5, v, 1.3);
        CMatrix gamma = CMatrix::Zero(10, 10);
        for (int i = 0; i < 10; ++i) gamma(i, i) = i % 2 == 0 ? 1.0 : -1.0;
        CHECK((gamma * s.mat() * gamma + s.mat()).norm() == 0.0);
        CHECK(exactly_hermitian(s));
    }

    Rng rng(1);
    const HermitianMatrix d = random_ssh_disorder(4, rng);
    CHECK(d.mat().diagonal().norm() == 0.0);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            if (std::abs(a - b) > 1) CHECK(d(a, b) == cplx(0, 0));
    CHECK(exactly_hermitian(d));
    CHECK_THROWS_AS(ssh_hopping_disorder(4, RVector::Zero(13)), DimensionMismatch);
}

TEST_CASE("ising_examples") {
    for (int N = 2; N <= 6; ++N) {
        const RVector e = eigh(ising(N)).eigenvalues;
        CHECK(e(0) == Catch::Approx(-(N - 1)).margin(1e-12));
        CHECK(e(1) == Catch::Approx(-(N - 1)).margin(1e-12));
        CHECK(e(2) > e(1) + 1.0);
    }
    Rng rng(2);
    const HermitianMatrix t = random_transverse(3, rng);
    CHECK(std::abs(t.mat().trace()) < 1e-14);
    CHECK(exactly_hermitian(t));
    CHECK_THROWS_AS(ising(7), InvalidArgument);
    CHECK_THROWS_AS(ising(1), InvalidArgument);
}

TEST_CASE("five_qubit_code_examples") {
    const HermitianMatrix h = five_qubit_code();
    REQUIRE(h.n() == 32);
    CHECK(exactly_hermitian(h));
    const RVector e = eigh(h).eigenvalues;
    CHECK(e(1) - e(0) < 1e-12);
    CHECK(e(2) - e(1) > 0.5);
    CHECK(one_local(5, RVector::Zero(15)).mat().norm() == 0.0);
    Rng rng(4);
    CHECK(exactly_hermitian(random_one_local(5, rng)));
}

TEST_CASE("example_matrices") {
    CHECK(example_pr(0, 0).mat() == RVector((RVector(3) << 0, 0, 1).finished()).cast<cplx>().asDiagonal().toDenseMatrix());
    const SWDecomposition ref0 = example_pr_reference(0, 0);
    CHECK(frobenius_norm(ref0.S) == 0.0);
    CHECK(frobenius_norm(ref0.B) == 0.0);
    CHECK(ref0.c == 0.0);
    CHECK(frobenius_norm(ref0.H_eff) == 0.0);

    const SWDecomposition ref = example_pr_reference(0.3, 0.2);
    const SWDecomposition num = sw_decompose(example_pr(0.3, 0.2), example_pr(0, 0), 2);
    CHECK((ref.S.mat() - num.S.mat()).norm() <= 1e-9);
    CHECK((ref.B.mat() - num.B.mat()).norm() <= 1e-9);
    CHECK((ref.H_eff.mat() - num.H_eff.mat()).norm() <= 1e-9);
    CHECK(std::abs(ref.c - num.c) <= 1e-9);
    // the printed B entry includes the base point's lower block
    CHECK(std::abs(example_pr_printed_b(0.3, 0.2) - (1.0 + ref.B(2, 2).real())) < 1e-15);

    const HermitianMatrix w = weyl_example(0.1, -0.2, 0.3);
    CHECK(exactly_hermitian(w));
    const CMatrix block = w.mat().topLeftCorner(2, 2);
    const CMatrix expected = 0.1 * pauli('X') - 0.2 * pauli('Y') + 0.3 * pauli('Z');
    CHECK((block - expected).norm() < 1e-15);

    const HermitianMatrix g = example_3x3(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8);
    CHECK(exactly_hermitian(g));
    CHECK(g.n() == 3);
}

TEST_CASE("model_splitting_orders") {
    Rng rng(99);
    const HermitianMatrix dis = random_ssh_disorder(3, rng);
    const FamilyHandle s3 = make_family([&](double t) { return ssh(3, 0.0, 1.0) + dis * t; }, 2, 2);
    const OrderReport rs = estimate_all_orders(s3);
    CHECK(rs.agree);
    CHECK(rs.r == 3);

    const HermitianMatrix tr = random_transverse(3, rng);
    const FamilyHandle is = make_family([&](double t) { return ising(3) + tr * t; }, 2);
    const OrderReport ri = estimate_all_orders(is);
    CHECK(ri.agree);
    CHECK(ri.r == 3);
}
