#include "hermgeo/weyl_analysis.hpp"

#include "hermgeo/degeneracy_geometry.hpp"
#include "hermgeo/errors.hpp"
#include "hermgeo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace hermgeo {

namespace {

BasePoint anchor_at(const ParamFamily& fam, const RVector& p0) {
    const Spectrum s = eigh(fam.at(p0));
    if (!window_isolated(s.eigenvalues, fam.k, 0, grouping_tolerance(s))) {
        throw DegenerateBoundary("effective map: lambda_k = lambda_{k+1} at the anchor");
    }
    BasePoint bp;
    bp.gauge = s.vectors;
    bp.diagonal = s.eigenvalues;
    bp.diagonal.head(fam.k).setConstant(s.eigenvalues.head(fam.k).mean());
    bp.k = fam.k;
    bp.offset = 0;
    return bp;
}

void check_param(const ParamFamily& fam, const RVector& p) {
    if (p.size() != fam.m) throw DimensionMismatch("parameter point has the wrong dimension");
}

}  // namespace

EffectiveMap effective_map(const ParamFamily& fam, const RVector& p0) {
    check_param(fam, p0);
    auto base = std::make_shared<BasePoint>(anchor_at(fam, p0));
    return [fam, base](const RVector& p) {
        check_param(fam, p);
        return traceless_coordinates(sw_decompose_general(fam.at(p), *base).heff_block());
    };
}

EffectiveMap first_order_effective_map(const ParamFamily& fam, const RVector& p0) {
    check_param(fam, p0);
    auto base = std::make_shared<BasePoint>(anchor_at(fam, p0));
    return [fam, base](const RVector& p) {
        check_param(fam, p);
        const CMatrix& u = base->gauge.mat();
        CMatrix blk = (u.adjoint() * fam.at(p).mat() * u).topLeftCorner(fam.k, fam.k);
        const double mu = blk.trace().real() / fam.k;
        blk.diagonal().array() -= mu;
        return traceless_coordinates(blk);
    };
}

namespace {

RMatrix central_differences(const EffectiveMap& h, const RVector& p, double step) {
    const RVector y0 = h(p);
    RMatrix J(y0.size(), p.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        RVector pp = p, pm = p;
        pp(j) += step;
        pm(j) -= step;
        J.col(j) = (h(pp) - h(pm)) / (2.0 * step);
    }
    return J;
}

}  // namespace

JacobianResult jacobian(const EffectiveMap& h, const RVector& p, double step) {
    const double pscale = std::max(1.0, p.size() ? p.cwiseAbs().maxCoeff() : 0.0);
    if (step <= 0.0) step = 1e-5 * pscale;
    if (step < 1e-12 * pscale) {
        std::ostringstream os;
        os << "jacobian: step " << step << " is below the representable resolution";
        throw StepTooSmall(os.str());
    }
    JacobianResult out;
    out.step = step;
    out.J = central_differences(h, p, step);
    const RMatrix half = central_differences(h, p, 0.5 * step);
    const double ref = std::max(1.0, half.cwiseAbs().maxCoeff());
    out.richardson_dev = (out.J - half).cwiseAbs().maxCoeff() / ref;
    out.noisy = out.richardson_dev > 1e-5;
    return out;
}

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::Weyl: return "weyl";
        case PointClass::NonGeneric: return "non-generic-degeneracy";
        case PointClass::NoDegeneracy: return "no-degeneracy";
        case PointClass::Degenerate: return "degenerate";
    }
    return "unknown";
}

int numerical_rank(const RMatrix& J, double reference, double rel_tol) {
    if (J.size() == 0) return 0;
    Eigen::JacobiSVD<RMatrix> svd(J);
    const RVector sv = svd.singularValues();
    const double tol = rel_tol * std::max({sv.size() ? sv(0) : 0.0, reference, 1e-300});
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++r;
    return r;
}

double family_derivative_scale(const ParamFamily& fam, const RVector& p) {
    const double step = 1e-5 * std::max(1.0, p.cwiseAbs().maxCoeff());
    double s = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        RVector pp = p, pm = p;
        pp(j) += step;
        pm(j) -= step;
        const HermitianMatrix d((fam.at(pp).mat() - fam.at(pm).mat()) / (2.0 * step));
        s = std::max(s, operator_2_norm(d));
    }
    return s;
}

WeylReport classify_point(const ParamFamily& fam, const RVector& p0, const ClassifyOptions& opts) {
    check_param(fam, p0);
    WeylReport rep;
    rep.p = p0;
    const HermitianMatrix h = fam.at(p0);
    const ProjectionResult pr = collapse_projection(h, fam.k);
    rep.distance = pr.distance;
    rep.point_tol = opts.point_tol_rel * pr.spectrum.norm2();
    const EffectiveMap map = opts.first_order ? first_order_effective_map(fam, p0) : effective_map(fam, p0);
    const JacobianResult jr = jacobian(map, p0);
    rep.jacobian = jr.J;
    rep.jacobian_noisy = jr.noisy;
    rep.rank = numerical_rank(jr.J, family_derivative_scale(fam, p0), opts.rank_rel_tol);
    const auto rows = jr.J.rows();
    if (rows == jr.J.cols() && rep.rank == rows && rows > 0) {
        rep.charge = jr.J.determinant() > 0.0 ? 1 : -1;
    }
    if (rep.distance > rep.point_tol) {
        rep.classification = PointClass::NoDegeneracy;
    } else if (fam.m == 3 && fam.k == 2) {
        rep.classification = rep.rank == 3 ? PointClass::Weyl : PointClass::NonGeneric;
    } else {
        rep.classification = PointClass::Degenerate;
    }
    return rep;
}

namespace {

bool inside(const RVector& p, const RVector& lo, const RVector& hi, double slack) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double ext = (hi(i) - lo(i)) * slack;
        if (p(i) < lo(i) - ext || p(i) > hi(i) + ext) return false;
    }
    return true;
}

bool lex_less(const RVector& a, const RVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

}  // namespace

RVector newton_refine(const ParamFamily& fam, const RVector& seed, const RVector& lo, const RVector& hi,
                      const ScanOptions& opts, int* reanchors) {
    RVector p = seed;
    EffectiveMap h;
    auto anchor = [&](const RVector& at) {
        try {
            h = effective_map(fam, at);
        } catch (const NumericalError& e) {
            throw NewtonDiverged(std::string("cannot anchor effective map: ") + e.what());
        }
    };
    anchor(p);
    auto eval = [&](const RVector& at, RVector& y) {
        try {
            y = h(at);
            return true;
        } catch (const NumericalError&) {
            return false;
        }
    };
    RVector y;
    if (!eval(p, y)) throw NewtonDiverged("effective map undefined at the seed");
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (y.norm() <= opts.root_tol) return p;
        RMatrix J;
        try {
            J = central_differences(h, p, 1e-6 * std::max(1.0, p.cwiseAbs().maxCoeff()));
        } catch (const NumericalError&) {
            anchor(p);
            if (reanchors) ++*reanchors;
            eval(p, y);
            continue;
        }
        const RVector delta = -J.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
        if (!delta.allFinite()) throw NewtonDiverged("singular Jacobian during refinement");
        double lambda = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 30 && !accepted; ++ls, lambda *= 0.5) {
            const RVector trial = p + lambda * delta;
            RVector yt;
            if (!eval(trial, yt)) {
                // left the validity region of the current anchor
                anchor(p);
                if (reanchors) ++*reanchors;
                eval(p, y);
                continue;
            }
            if (yt.norm() < y.norm()) {
                p = trial;
                y = yt;
                accepted = true;
            }
        }
        if (!accepted) throw NewtonDiverged("line search failed to reduce ||h||");
        if (!inside(p, lo, hi, 0.25)) throw NewtonDiverged("iterate left the scan box");
    }
    if (y.norm() <= opts.root_tol) return p;
    throw NewtonDiverged("iteration cap reached");
}

ScanResult scan_grid(const ParamFamily& fam, const RVector& lo, const RVector& hi, int resolution,
                     const ScanOptions& opts) {
    const int m = fam.m;
    if (lo.size() != m || hi.size() != m) throw DimensionMismatch("scan_grid: box dimension differs from m");
    if (resolution < 2) throw InvalidArgument("scan_grid: resolution must be >= 2");
    for (int i = 0; i < m; ++i)
        if (!(hi(i) >= lo(i)) || !std::isfinite(lo(i)) || !std::isfinite(hi(i)))
            throw InvalidArgument("scan_grid: box must be finite with lo <= hi");

    long total = 1;
    for (int i = 0; i < m; ++i) total *= resolution;
    auto point = [&](long idx) {
        RVector p(m);
        for (int i = 0; i < m; ++i) {
            const long c = idx % resolution;
            idx /= resolution;
            p(i) = lo(i) + (hi(i) - lo(i)) * static_cast<double>(c) / (resolution - 1);
        }
        return p;
    };
    std::vector<double> dist(static_cast<size_t>(total));
    for (long idx = 0; idx < total; ++idx) dist[static_cast<size_t>(idx)] = distance_to_sigma(fam.at(point(idx)), fam.k);

    ScanResult res;
    std::vector<long> minima;
    for (long idx = 0; idx < total; ++idx) {
        const double v = dist[static_cast<size_t>(idx)];
        if (!(v < opts.seed_threshold)) continue;
        std::vector<int> c(static_cast<size_t>(m));
        long rest = idx;
        for (int i = 0; i < m; ++i) {
            c[static_cast<size_t>(i)] = static_cast<int>(rest % resolution);
            rest /= resolution;
        }
        bool is_min = true;
        long stencil = 1;
        for (int i = 0; i < m; ++i) stencil *= 3;
        for (long s = 0; s < stencil && is_min; ++s) {
            long code = s, nidx = 0, mul = 1;
            bool self = true, valid = true;
            for (int i = 0; i < m; ++i) {
                const int d = static_cast<int>(code % 3) - 1;
                code /= 3;
                if (d != 0) self = false;
                const int ci = c[static_cast<size_t>(i)] + d;
                if (ci < 0 || ci >= resolution) valid = false;
                nidx += ci * mul;
                mul *= resolution;
            }
            if (self || !valid) continue;
            if (dist[static_cast<size_t>(nidx)] < v) is_min = false;
        }
        if (is_min) minima.push_back(idx);
    }

    std::vector<RVector> roots;
    for (long idx : minima) {
        const RVector seed = point(idx);
        res.seeds.push_back(seed);
        if (!opts.refine) {
            const WeylReport rep = classify_point(fam, seed, opts.classify);
            if (rep.classification != PointClass::NoDegeneracy) roots.push_back(seed);
            continue;
        }
        try {
            const RVector root = newton_refine(fam, seed, lo, hi, opts, &res.reanchors);
            if (!inside(root, lo, hi, 1e-9)) {
                res.failures.push_back("root outside the box discarded");
                continue;
            }
            roots.push_back(root);
        } catch (const NewtonDiverged& e) {
            ++res.diverged;
            res.failures.push_back(e.what());
        }
    }
    std::vector<RVector> unique;
    for (const auto& r : roots) {
        const bool dup = std::any_of(unique.begin(), unique.end(),
                                     [&](const RVector& u) { return (u - r).norm() <= opts.dedup_tol; });
        if (!dup) unique.push_back(r);
    }
    std::sort(unique.begin(), unique.end(), lex_less);
    for (const auto& r : unique) {
        try {
            res.reports.push_back(classify_point(fam, r, opts.classify));
        } catch (const NumericalError& e) {
            res.failures.push_back(std::string("classification failed: ") + e.what());
        }
    }
    return res;
}

std::vector<TrackedPoint> track_under_perturbation(const ParamFamily& fam, const HermitianMatrix& K, double t,
                                                   const RVector& lo, const RVector& hi, int resolution,
                                                   const ScanOptions& opts) {
    require_same_dim(fam.n, K.n(), "track_under_perturbation");
    const ScanResult before = scan_grid(fam, lo, hi, resolution, opts);
    ParamFamily pert = fam;
    pert.evaluator = [fam, K, t](const RVector& p) { return fam.at(p) + K * t; };
    const ScanResult after = scan_grid(pert, lo, hi, resolution, opts);
    std::vector<TrackedPoint> out;
    for (const auto& r : before.reports) {
        TrackedPoint tp;
        tp.original = r;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : after.reports) {
            const double d = (a.p - r.p).norm();
            if (d < best) {
                best = d;
                tp.perturbed = a;
                tp.found = true;
            }
        }
        tp.displacement = best;
        out.push_back(tp);
    }
    return out;
}

}  // namespace hermgeo
