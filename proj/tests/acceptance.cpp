// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "hermgeo/degeneracy_geometry.hpp"
#include "hermgeo/models.hpp"
#include "hermgeo/random.hpp"
#include "hermgeo/splitting_order.hpp"
#include "hermgeo/sw_transform.hpp"
#include "hermgeo/weyl_analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

using namespace hermgeo;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << "exception: " << e.what() << "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_s > 0.0 && secs > budget_s) {
        o.pass = false;
        o.detail << "runtime " << secs << " s over budget " << budget_s << " s; ";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s) [%.2f s] %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.str().c_str());
    std::fflush(stdout);
}

HermitianMatrix scaled_perturbation(int n, double norm2, Rng& rng) {
    const HermitianMatrix e = random_hermitian(n, rng);
    return e * (norm2 / eigh(e).norm2());
}

double in_block_norm(const CMatrix& s, int k) {
    return std::sqrt(s.topLeftCorner(k, k).squaredNorm() + s.bottomRightCorner(s.rows() - k, s.cols() - k).squaredNorm());
}

std::uniform_real_distribution<double> unit(0.0, 1.0);

void sw_round_trip(Outcome& o) {
    Rng rng(1001);
    double worst_res = 0, worst_fix = 0, worst_off = 0, worst_tr = 0;
    for (int c = 0; c < 200; ++c) {
        const int n = 3 + c % 6;
        const int k = std::min(2 + (c / 6) % 2, n - 1);
        const HermitianMatrix h0 = HermitianMatrix::diagonal(random_degenerate_spectrum(n, k, 0.0, 0.3, rng));
        const HermitianMatrix h = h0 + scaled_perturbation(n, 0.9 * half_gap(h0, k) * (0.05 + 0.95 * unit(rng)), rng);
        const SWDecomposition d = sw_decompose(h, h0, k);
        const SWDecomposition again = sw_decompose(d.reconstruct(), h0, k);
        worst_res = std::max(worst_res, d.residual / frobenius_norm(h));
        worst_fix = std::max({worst_fix, (again.S.mat() - d.S.mat()).norm(), (again.B.mat() - d.B.mat()).norm(),
                              (again.H_eff.mat() - d.H_eff.mat()).norm(), std::abs(again.c - d.c)});
        // the stored S is projected; the raw logarithm's in-block part measures the actual error
        worst_off = std::max({worst_off, in_block_norm(d.S.mat(), k), d.s_projection_residual});
        worst_tr = std::max(worst_tr, std::abs(d.H_eff.mat().trace()));
        o.require(d.s_norm < std::numbers::pi / 2 && d.within_r0, "principal branch");
    }
    o.require(worst_res <= 1e-9, "reconstruction residual");
    o.require(worst_fix <= 1e-8, "fixed point");
    o.require(worst_off <= 1e-11, "S off-block");
    o.require(worst_tr <= 1e-11, "H_eff traceless");
    o.detail << "max rel residual " << worst_res << ", fixed point " << worst_fix << ", S in-block " << worst_off
             << ", |tr H_eff| " << worst_tr;
}

void closed_form(Outcome& o) {
    double worst = 0;
    const HermitianMatrix h0 = example_pr(0, 0);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            const double p = -0.2 + 0.05 * i, r = -0.2 + 0.05 * j;
            const SWDecomposition d = sw_decompose(example_pr(p, r), h0, 2);
            const SWDecomposition ref = example_pr_reference(p, r);
            worst = std::max({worst, (d.S.mat() - ref.S.mat()).norm(), (d.B.mat() - ref.B.mat()).norm(),
                              std::abs(d.c - ref.c), (d.H_eff.mat() - ref.H_eff.mat()).norm()});
        }
    o.require(worst <= 1e-9, "closed form deviation");
    o.detail << "max block deviation " << worst;
}

void distance_identity(Outcome& o) {
    Rng rng(2002);
    double worst = 0;
    for (int c = 0; c < 500; ++c) {
        const int n = 3 + c % 6;
        const int k = std::min(2 + (c / 6) % 3, n - 1);
        const HermitianMatrix h0 = HermitianMatrix::diagonal(random_degenerate_spectrum(n, k, 0.0, 0.3, rng));
        const HermitianMatrix h = h0 + scaled_perturbation(n, 0.9 * half_gap(h0, k) * unit(rng), rng);
        const ProjectionResult p = collapse_projection(h, k);
        const double heff = frobenius_norm(sw_decompose(h, h0, k).H_eff);
        const double ref = std::max(p.distance, 1e-300);
        worst = std::max({worst, std::abs(std::sqrt(double(k)) * p.std_dev - ref) / ref,
                          std::abs(frobenius_norm(h - p.H_sigma) - ref) / ref, std::abs(heff - ref) / ref});
    }
    o.require(worst <= 1e-9, "triple equality");
    double margin = 1e300;
    for (int c = 0; c < 3; ++c) {
        const int n = 4 + c, k = 2 + c % 2;
        const HermitianMatrix h = random_hermitian(n, rng);
        const ProjectionResult best = collapse_projection(h, k);
        for (int s = 0; s < 10000; ++s) {
            HermitianMatrix g;
            if (s % 2 == 0) {
                g = sample_sigma_k(n, k, rng);
            } else {
                // Sigma_k points near H_Sigma
                RVector e = best.spectrum.eigenvalues;
                e.segment(0, k).setConstant(best.mean_lambda + 1e-3 * random_gaussian_vector(1, rng)(0));
                e.tail(n - k) += 1e-3 * random_gaussian_vector(n - k, rng);
                g = conjugate(conjugate(HermitianMatrix::diagonal(e), best.spectrum.vectors),
                              random_near_identity(n, 1e-3, rng));
            }
            margin = std::min(margin, frobenius_norm(h - g) - best.distance);
        }
    }
    o.require(margin >= -1e-12, "brute-force minimality");
    o.detail << "max rel deviation " << worst << ", min sampled excess distance " << margin;
}

void orthogonality(Outcome& o) {
    Rng rng(3003);
    double worst = 0;
    for (int c = 0; c < 100; ++c) {
        const int n = 3 + c % 6;
        const int k = 1 + c % (n - 1);
        worst = std::max(worst, orthogonality_check(random_hermitian(n, rng), k));
    }
    o.require(worst <= 1e-9, "orthogonality");
    o.detail << "max normalized tangent component " << worst;
}

void alternate_projections(Outcome& o) {
    Rng rng(4004);
    int built = 0;
    double min_gap = 1e300;
    while (built < 50) {
        const int n = 3 + built % 6;
        const int k = std::min(2 + built % 2, n - 1);
        RVector e = random_gaussian_vector(n, rng);
        std::sort(e.data(), e.data() + n);
        // swap one member of {1..k} for a member of {k+1..n}
        std::uniform_int_distribution<int> in(0, k - 1), out(k, n - 1);
        std::vector<int> idx(static_cast<size_t>(k));
        std::iota(idx.begin(), idx.end(), 0);
        idx[static_cast<size_t>(in(rng))] = out(rng);
        std::sort(idx.begin(), idx.end());
        double mean = 0;
        for (int i : idx) mean += e(i);
        mean /= k;
        double lowest_omitted = 1e300;
        for (int i = 0; i < n; ++i)
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) lowest_omitted = std::min(lowest_omitted, e(i));
        if (!(mean < lowest_omitted)) continue;
        const HermitianMatrix h = conjugate(HermitianMatrix::diagonal(e), random_unitary(n, rng));
        const Spectrum s = eigh(h);
        const HermitianMatrix alt = project_with_index_set(h, idx, s);
        const double gap = frobenius_norm(h - alt) - collapse_projection(h, s, k).distance;
        min_gap = std::min(min_gap, gap);
        o.require(gap > 0.0, "strict inequality");
        ++built;
    }
    o.detail << "50 spectra, min ||H - H_I|| - ||H - H_Sigma|| = " << min_gap;
}

// Window eigenvalues mu(t) + a_i t^r + b_i t^(r+1), conjugated by a fixed unitary.
FamilyEvaluator polynomial_family(int n, int k, int r, Rng& rng) {
    const UnitaryMatrix u = random_unitary(n, rng);
    RVector a = random_gaussian_vector(k, rng);
    std::sort(a.data(), a.data() + k);
    for (int i = 1; i < k; ++i)
        if (a(i) - a(i - 1) < 0.3) a(i) = a(i - 1) + 0.3;
    const RVector b = random_gaussian_vector(k, rng);
    const RVector drift = random_gaussian_vector(n, rng);
    return [=](double t) {
        RVector e(n);
        for (int i = 0; i < k; ++i) e(i) = drift(0) * t + a(i) * std::pow(t, r) + b(i) * std::pow(t, r + 1);
        for (int i = k; i < n; ++i) e(i) = 1.0 + 0.5 * (i - k) + drift(i) * t;
        return conjugate(HermitianMatrix::diagonal(e), u);
    };
}

void order_equalities(Outcome& o) {
    Rng rng(5005);
    std::ostringstream slopes;
    for (int c = 0; c < 20; ++c) {
        const int n = 3 + c % 6;
        const int k = std::min(2 + c % 3, n - 1);
        const int r = 1 + c % 3;
        const FamilyHandle fam = make_family(polynomial_family(n, k, r, rng), k);
        const OrderReport rep = estimate_all_orders(fam);
        for (const auto& e : rep.estimates) {
            const bool ok = e.conclusive && !e.infinite && e.r == r;
            if (!ok) slopes << "family " << c << " " << to_string(e.method) << " slope " << e.slope << "; ";
            o.require(ok, "estimator mismatch");
        }
    }
    o.detail << "20 families, all five estimators plus distancing match the known order " << slopes.str();
}

void tangency(Outcome& o) {
    Rng rng(6006);
    int tangent_ok = 0, generic_ok = 0;
    for (int c = 0; c < 20; ++c) {
        const int n = 3 + c % 6;
        const int k = std::min(2 + c % 2, n - 1);
        const bool tangent = c % 2 == 0;
        const UnitaryMatrix u = random_unitary(n, rng);
        const HermitianMatrix h0 = conjugate(HermitianMatrix::diagonal(random_degenerate_spectrum(n, k, 0.0, 0.3, rng)), u);
        CMatrix m = random_hermitian(n, rng).mat();
        if (tangent) m.topLeftCorner(k, k) = CMatrix::Identity(k, k) * unit(rng);
        const HermitianMatrix h1 = conjugate(HermitianMatrix(m), u);
        const FamilyHandle fam = make_family([h0, h1](double t) { return h0 + h1 * t; }, k);
        const OrderReport rep = estimate_all_orders(fam);
        const bool ok = rep.agree && rep.r && (tangent ? *rep.r >= 2 : *rep.r == 1);
        o.require(ok, tangent ? "tangent family" : "transverse family");
        (tangent ? tangent_ok : generic_ok) += ok ? 1 : 0;
    }
    o.detail << tangent_ok << "/10 tangent with r >= 2, " << generic_ok << "/10 transverse with r = 1";
}

void models(Outcome& o) {
    const RVector es = eigh(ssh(4, 0, 1)).eigenvalues;
    int m1 = 0, m0 = 0, p1 = 0;
    for (int i = 0; i < 8; ++i) {
        m1 += std::abs(es(i) + 1) <= 1e-12;
        m0 += std::abs(es(i)) <= 1e-12;
        p1 += std::abs(es(i) - 1) <= 1e-12;
    }
    o.require(m1 == 3 && m0 == 2 && p1 == 3, "SSH multiplicities");
    const RVector ei = eigh(ising(3)).eigenvalues;
    o.require(std::abs(ei(0) + 2) <= 1e-12 && std::abs(ei(1) + 2) <= 1e-12 && ei(2) > -2 + 0.5, "Ising ground pair");
    const RVector ef = eigh(five_qubit_code()).eigenvalues;
    o.require(ef(1) - ef(0) <= 1e-12 && ef(2) - ef(1) > 0.5, "five-qubit ground pair");

    Rng rng(7007);
    std::ostringstream rec;
    for (int d = 0; d < 5; ++d) {
        const HermitianMatrix dis = random_ssh_disorder(4, rng);
        const OrderReport rs = estimate_all_orders(make_family([&](double t) { return ssh(4, 0, 1) + dis * t; }, 2, 3));
        o.require(rs.agree && rs.r == 4, "SSH order");
        const HermitianMatrix tr = random_transverse(3, rng);
        const OrderReport ri = estimate_all_orders(make_family([&](double t) { return ising(3) + tr * t; }, 2));
        o.require(ri.agree && ri.r == 3, "Ising order");
        const HermitianMatrix ol = random_one_local(5, rng);
        const OrderReport rf = estimate_all_orders(make_family([&](double t) { return five_qubit_code() + ol * t; }, 2));
        const OrderEstimate& sd = rf.estimates[4];
        o.require(sd.conclusive && !sd.infinite && sd.r >= 3, "five-qubit lower bound");
        rec << " " << sd.slope;
    }
    o.detail << "SSH r=4, Ising r=3 on 5 directions; five-qubit fitted slopes" << rec.str();
}

void weyl(Outcome& o) {
    ParamFamily w;
    w.n = 3;
    w.evaluator = [](const RVector& p) { return weyl_example(p(0), p(1), p(2)); };
    const WeylReport wr = classify_point(w, RVector::Zero(3));
    o.require(wr.classification == PointClass::Weyl && wr.charge == 1, "Weyl model classification");
    const RMatrix j1 = jacobian(first_order_effective_map(w, RVector::Zero(3)), RVector::Zero(3)).J;
    const double jdev = (j1 - std::sqrt(2.0) * RMatrix::Identity(3, 3)).cwiseAbs().maxCoeff();
    o.require(jdev <= 1e-6, "first-order Jacobian");

    ParamFamily pr;
    pr.n = 3;
    pr.evaluator = [](const RVector& p) { return example_pr(p(0), p(1)); };
    const WeylReport prr = classify_point(pr, RVector::Zero(3));
    o.require(prr.classification == PointClass::NonGeneric && prr.rank < 3, "(p,r) classification");
    Rng rng(8008);
    for (int line = 0; line < 10; ++line) {
        RVector d = random_gaussian_vector(3, rng);
        d /= d.norm();
        const OrderReport rep = estimate_all_orders(make_family([&](double t) { return pr.at(RVector(t * d)); }, 2));
        o.require(rep.agree && rep.r == 2, "(p,r) line order");
    }

    CMatrix k = CMatrix::Zero(3, 3);
    k(0, 1) = k(1, 0) = 0.05;
    const HermitianMatrix K(k);
    ParamFamily shifted = w;
    shifted.evaluator = [K](const RVector& p) { return weyl_example(p(0), p(1), p(2)) + K; };
    const ScanResult sr = scan_grid(shifted, RVector::Constant(3, -0.5), RVector::Constant(3, 0.5), 11);
    o.require(sr.reports.size() == 1, "single displaced point");
    if (sr.reports.size() == 1) {
        const WeylReport& p = sr.reports[0];
        o.require(p.classification == PointClass::Weyl && p.charge == 1 && p.p.norm() > 1e-3, "displaced point charge");
        o.detail << "displaced Weyl point at (" << p.p(0) << ", " << p.p(1) << ", " << p.p(2) << ")";
    }
    o.detail << ", Jacobian deviation " << jdev;
}

void cascade_crossing(Outcome& o) {
    Rng rng(9009);
    const UnitaryMatrix u = random_unitary(4, rng);
    const HermitianMatrix coupling = random_hermitian(4, rng) * 0.2;
    CMatrix off = coupling.mat();
    off.topLeftCorner(2, 2).setZero();
    off.bottomRightCorner(2, 2).setZero();
    const HermitianMatrix c(off);
    const FamilyHandle fam = make_family([&](double t) {
        RVector d(4);
        d << t, -t, 1.0, 2.0;
        return conjugate(HermitianMatrix::diagonal(d) + c * t, u);
    }, 2);
    const CascadeResult cas = cascade(fam);
    o.require(cas.permutation == std::vector<int>{1, 0}, "transposition");
    o.require(cas.split_level[0][1] == 1, "split level");

    std::vector<double> ts;
    for (int i = -8; i <= 8; ++i)
        if (i != 0) ts.push_back(0.0025 * i);
    const auto branches = analytic_branches(fam, cas, ts);
    double worst = 0, naive = 0;
    for (int b = 0; b < 2; ++b) {
        // the degenerate value at t = 0 is 0
        std::vector<double> xs{0.0}, ys{0.0}, sorted{0.0};
        for (size_t i = 0; i < ts.size(); ++i) {
            xs.push_back(ts[i]);
            ys.push_back(branches[i](b));
            sorted.push_back(eigh(fam.at(ts[i])).eigenvalues(b));
        }
        worst = std::max(worst, polynomial_fit_residual(xs, ys, 4));
        naive = std::max(naive, polynomial_fit_residual(xs, sorted, 4));
    }
    o.require(worst <= 1e-8, "degree-4 fit of reassembled branches");
    o.detail << "fit residual " << worst << " (sorted eigenvalues without reordering: " << naive << ")";
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion(1, "SW round-trip and uniqueness", 10.0, sw_round_trip);
    criterion(2, "closed-form oracle", 1.0, closed_form);
    criterion(3, "distance identity", 30.0, distance_identity);
    criterion(4, "orthogonality", 0.0, orthogonality);
    criterion(5, "alternate projections", 0.0, alternate_projections);
    criterion(6, "order equalities", 20.0, order_equalities);
    criterion(7, "tangency dichotomy", 0.0, tangency);
    criterion(8, "models", 60.0, models);
    criterion(9, "Weyl analysis", 30.0, weyl);
    criterion(10, "cascade", 0.0, cascade_crossing);
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of 10 criteria failed, total %.2f s\n", failures, total);
    return failures == 0 ? 0 : 1;
}
