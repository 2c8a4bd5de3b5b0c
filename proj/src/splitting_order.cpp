#include "hermgeo/splitting_order.hpp"

#include "hermgeo/degeneracy_geometry.hpp"
#include "hermgeo/errors.hpp"
#include "hermgeo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

namespace hermgeo {

FamilyHandle make_family(FamilyEvaluator f, int k, int offset) {
    FamilyHandle fam;
    fam.evaluator = std::move(f);
    const HermitianMatrix h0 = fam.evaluator(0.0);
    fam.n = h0.n();
    fam.k = k;
    fam.offset = offset;
    if (k < 1 || offset < 0 || offset + k > fam.n) {
        throw InvalidArgument("make_family: window outside the spectrum");
    }
    // throws BasePointNotCanonical when H(0) is not in Sigma_k
    make_base_point(h0, k, offset);
    return fam;
}

double family_scale(const FamilyHandle& fam) {
    const double h = 1e-4;
    const HermitianMatrix d((fam.at(h).mat() - fam.at(-h).mat()) / (2.0 * h));
    const double s = std::max(operator_2_norm(d), operator_2_norm(fam.at(0.0)));
    return s > 1e-300 ? s : 1.0;
}

std::vector<double> default_ladder() {
    std::vector<double> ts;
    for (int e = 3; e <= 16; ++e) ts.push_back(std::ldexp(1.0, -e));
    return ts;
}

std::vector<SplittingSample> splitting_samples(const FamilyHandle& fam, const std::vector<double>& ts,
                                               const SampleOptions& opts) {
    std::optional<BasePoint> base = opts.base;
    if (opts.with_heff && !base) {
        const ProjectionResult pr = collapse_projection(fam.at(0.0), fam.k, fam.offset);
        base = make_base_point(pr.H_sigma, fam.k, fam.offset);
    }
    std::vector<SplittingSample> out;
    out.reserve(ts.size());
    for (double t : ts) {
        SplittingSample s;
        s.t = t;
        const HermitianMatrix h = fam.at(t);
        const Spectrum spec = eigh(h);
        s.window = spec.eigenvalues.segment(fam.offset, fam.k);
        s.std_dev = window_std_dev(spec.eigenvalues, fam.k, fam.offset);
        s.distance = std::sqrt(static_cast<double>(fam.k)) * s.std_dev;
        if (opts.with_heff) {
            try {
                const SWDecomposition dec = sw_decompose_general(h, *base);
                s.heff_norm = frobenius_norm(dec.H_eff);
                s.heff_valid = true;
            } catch (const NumericalError& e) {
                s.heff_error = e.what();
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string to_string(const MethodSpec& m) {
    switch (m.kind) {
        case OrderMethod::StdDev: return "stddev";
        case OrderMethod::MinPairwise: return "min-pairwise";
        case OrderMethod::MinNeighbor: return "min-neighbor";
        case OrderMethod::Extremes: return "extremes";
        case OrderMethod::MinMeanDeviation: return "min-mean-deviation";
        case OrderMethod::EffectiveHamiltonian: return "heff";
        case OrderMethod::Distance: return "distance";
        case OrderMethod::Pairwise: return "pairwise(" + std::to_string(m.i + 1) + "," + std::to_string(m.j + 1) + ")";
        case OrderMethod::MeanDeviation: return "mean(" + std::to_string(m.i + 1) + ")";
    }
    return "unknown";
}

std::vector<MethodSpec> five_methods() {
    return {{OrderMethod::MinPairwise}, {OrderMethod::MinNeighbor}, {OrderMethod::Extremes},
            {OrderMethod::MinMeanDeviation}, {OrderMethod::StdDev}};
}

OrderEstimate fit_order(const std::vector<std::pair<double, double>>& samples, double scale,
                        const FitOptions& opts) {
    OrderEstimate est;
    est.samples = samples;
    est.scale = scale;
    bool all_small = true;
    for (const auto& [t, v] : samples) {
        if (std::abs(v) > opts.infinity_floor * scale) all_small = false;
    }
    if (all_small) {
        est.infinite = true;
        est.conclusive = true;
        est.note = "all values below the vanishing floor";
        return est;
    }
    std::vector<std::pair<double, double>> usable;
    for (const auto& [t, v] : samples) {
        if (t > 0.0 && v > opts.fit_floor * scale) usable.emplace_back(t, v);
    }
    std::sort(usable.begin(), usable.end());
    if (static_cast<int>(usable.size()) > opts.window) usable.resize(static_cast<size_t>(opts.window));
    est.fitted = usable;
    if (static_cast<int>(usable.size()) < opts.min_points) {
        est.note = "too few samples above the noise floor";
        return est;
    }
    const auto m = static_cast<double>(usable.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [t, v] : usable) {
        const double x = std::log(t), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    est.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    for (size_t i = 1; i < usable.size(); ++i) {
        const double local = std::log(usable[i].second / usable[i - 1].second) /
                             std::log(usable[i].first / usable[i - 1].first);
        est.slope_dev = std::max(est.slope_dev, std::abs(local - est.slope));
    }
    est.r = static_cast<int>(std::lround(est.slope));
    est.conclusive = est.slope_dev <= opts.band && std::abs(est.slope - est.r) <= opts.band && est.r >= 1;
    if (!est.conclusive) {
        std::ostringstream os;
        os << "slope " << est.slope << " with deviation " << est.slope_dev << " is not a clean integer";
        est.note = os.str();
    }
    return est;
}

namespace {

using Series = std::vector<std::pair<double, double>>;

Series series(const std::vector<SplittingSample>& samples, const std::function<double(const SplittingSample&)>& f) {
    Series s;
    for (const auto& x : samples) s.emplace_back(x.t, f(x));
    return s;
}

// ord(max_i |f_i|) = min_i ord(f_i). Fitting the envelope keeps a component with a
// tiny leading coefficient from stalling the estimate in its crossover regime.
OrderEstimate min_over(const std::vector<Series>& parts, double scale, const FitOptions& opts,
                       const MethodSpec& method) {
    Series envelope = parts.front();
    for (size_t p = 1; p < parts.size(); ++p)
        for (size_t i = 0; i < envelope.size(); ++i)
            envelope[i].second = std::max(std::abs(envelope[i].second), std::abs(parts[p][i].second));
    for (auto& e : envelope) e.second = std::abs(e.second);
    OrderEstimate out = fit_order(envelope, scale, opts);
    out.method = method;
    return out;
}

}  // namespace

OrderEstimate order_from_samples(const std::vector<SplittingSample>& samples, const MethodSpec& method,
                                 int k, double scale, const FitOptions& opts) {
    OrderEstimate est;
    switch (method.kind) {
        case OrderMethod::StdDev:
            est = fit_order(series(samples, [](const auto& s) { return s.std_dev; }), scale, opts);
            break;
        case OrderMethod::Distance:
            est = fit_order(series(samples, [](const auto& s) { return s.distance; }), scale, opts);
            break;
        case OrderMethod::EffectiveHamiltonian: {
            std::vector<SplittingSample> valid;
            for (const auto& s : samples)
                if (s.heff_valid) valid.push_back(s);
            est = fit_order(series(valid, [](const auto& s) { return s.heff_norm; }), scale, opts);
            if (valid.size() < samples.size()) est.note += " (dropped samples outside decomposition validity)";
            break;
        }
        case OrderMethod::Extremes:
            est = fit_order(series(samples, [k](const auto& s) { return s.window(k - 1) - s.window(0); }), scale, opts);
            break;
        case OrderMethod::Pairwise: {
            const int i = method.i, j = method.j;
            if (i < 0 || j < 0 || i >= k || j >= k || i == j) throw InvalidArgument("pairwise: bad indices");
            est = fit_order(series(samples, [i, j](const auto& s) { return std::abs(s.window(j) - s.window(i)); }), scale, opts);
            break;
        }
        case OrderMethod::MeanDeviation: {
            const int i = method.i;
            if (i < 0 || i >= k) throw InvalidArgument("mean deviation: bad index");
            est = fit_order(series(samples, [i](const auto& s) { return std::abs(s.window(i) - s.window.mean()); }), scale, opts);
            break;
        }
        case OrderMethod::MinPairwise: {
            std::vector<Series> parts;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    parts.push_back(series(samples, [i, j](const auto& s) { return s.window(j) - s.window(i); }));
            est = min_over(parts, scale, opts, method);
            break;
        }
        case OrderMethod::MinNeighbor: {
            std::vector<Series> parts;
            for (int i = 0; i + 1 < k; ++i)
                parts.push_back(series(samples, [i](const auto& s) { return s.window(i + 1) - s.window(i); }));
            est = min_over(parts, scale, opts, method);
            break;
        }
        case OrderMethod::MinMeanDeviation: {
            std::vector<Series> parts;
            for (int i = 0; i < k; ++i)
                parts.push_back(series(samples, [i](const auto& s) { return std::abs(s.window(i) - s.window.mean()); }));
            est = min_over(parts, scale, opts, method);
            break;
        }
    }
    est.method = method;
    return est;
}

OrderEstimate estimate_order(const FamilyHandle& fam, const MethodSpec& method, const std::vector<double>& ladder,
                             const FitOptions& opts) {
    SampleOptions sopts;
    sopts.with_heff = method.kind == OrderMethod::EffectiveHamiltonian;
    const auto samples = splitting_samples(fam, ladder, sopts);
    OrderEstimate est = order_from_samples(samples, method, fam.k, family_scale(fam), opts);
    if (!est.conclusive) throw InconclusiveFit(to_string(method) + ": " + est.note);
    return est;
}

OrderReport estimate_all_orders(const FamilyHandle& fam, const std::vector<double>& ladder,
                                const FitOptions& opts, const SampleOptions& sopts) {
    const auto samples = splitting_samples(fam, ladder, sopts);
    const double scale = family_scale(fam);
    OrderReport rep;
    auto methods = five_methods();
    if (sopts.with_heff) methods.push_back({OrderMethod::EffectiveHamiltonian});
    methods.push_back({OrderMethod::Distance});
    for (const auto& m : methods) rep.estimates.push_back(order_from_samples(samples, m, fam.k, scale, opts));
    rep.agree = true;
    const auto& first = rep.estimates.front();
    for (const auto& e : rep.estimates) {
        if (!e.conclusive || e.infinite != first.infinite || (!e.infinite && e.r != first.r)) rep.agree = false;
    }
    if (rep.agree) {
        rep.infinite = first.infinite;
        if (!first.infinite) rep.r = first.r;
    }
    return rep;
}

// ---------------------------------------------------------------- cascade

namespace {

using MatFn = std::function<CMatrix(double)>;

struct CascadeContext {
    double tp;
    int cap;
    double scale;
    CascadeResult* result;
};

struct ZeroEstimate {
    CMatrix value;
    double error = 0.0;  // difference between the last two diagonal table entries
};

// Richardson table in t^2 on the even part, steps tp, tp/2, tp/4, tp/8.
ZeroEstimate richardson_at_zero(const MatFn& f, double tp) {
    constexpr int levels = 4;
    std::vector<std::vector<CMatrix>> table(levels);
    double h = tp;
    for (int i = 0; i < levels; ++i, h *= 0.5) {
        table[i].push_back(0.5 * (f(h) + f(-h)));
        double factor = 4.0;
        for (int j = 1; j <= i; ++j, factor *= 4.0)
            table[i].push_back((factor * table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0));
    }
    return {table[levels - 1][levels - 1], (table[levels - 1][levels - 1] - table[levels - 2][levels - 2]).norm()};
}

struct Node {
    MatFn F;
    int a = 0;
    int g = 0;
    int level = 0;
    std::vector<int> ids;
    bool whole = false;
    std::shared_ptr<BasePoint> base;
    MatFn block;  // H_eff of the window at this level, g x g
    MatFn G;      // block / t
    bool identical = false;
    bool capped = false;
    struct Cluster {
        int a;
        int s;
        std::unique_ptr<Node> child;
    };
    std::vector<Cluster> clusters;

    double mean(double t) const {
        const CMatrix f = F(t);
        if (whole) return f.trace().real() / g;
        const SWDecomposition dec = sw_decompose_general(HermitianMatrix::hermitian_part(f), *base);
        return base->diagonal(a) + dec.c;
    }

    // window eigenvalues of F(t) in branch order
    RVector values(double t) const {
        const double mu = mean(t);
        if (identical) return RVector::Constant(g, mu);
        const RVector ev = eigh(CMatrix(G(t))).eigenvalues;
        if (capped) return (mu + t * ev.array()).matrix();
        RVector out(g);
        for (const auto& c : clusters) {
            if (c.s == 1) {
                out(c.a) = ev(c.a);
            } else {
                out.segment(c.a, c.s) = c.child->values(t);
            }
        }
        return (mu + t * out.array()).matrix();
    }
};

void mark(CascadeResult& res, const std::vector<int>& xs, const std::vector<int>& ys, int level) {
    for (int i : xs)
        for (int j : ys)
            if (i != j) {
                res.split_level[static_cast<size_t>(i)][static_cast<size_t>(j)] = level;
                res.split_level[static_cast<size_t>(j)][static_cast<size_t>(i)] = level;
            }
}

void process(Node& node, const CMatrix& f0hat, const CascadeContext& ctx) {
    const int m = static_cast<int>(f0hat.rows());
    node.whole = node.g == m;
    if (node.whole) {
        MatFn F = node.F;
        const int g = node.g;
        node.block = [F, g](double t) {
            CMatrix f = F(t);
            const double mu = f.trace().real() / g;
            f.diagonal().array() -= mu;
            return f;
        };
    } else {
        const HermitianMatrix fh(f0hat);
        const ProjectionResult pr = collapse_projection(fh, node.g, node.a);
        node.base = std::make_shared<BasePoint>(make_base_point(pr.H_sigma, node.g, node.a));
        MatFn F = node.F;
        auto base = node.base;
        node.block = [F, base](double t) {
            return sw_decompose_general(HermitianMatrix::hermitian_part(F(t)), *base).heff_block();
        };
    }
    MatFn block = node.block;
    node.G = [block](double t) { return CMatrix(block(t) / t); };
    ctx.result->levels_used = std::max(ctx.result->levels_used, node.level);

    const double size = std::max(block(ctx.tp).norm(), block(-ctx.tp).norm()) * std::pow(ctx.tp, node.level);
    if (size <= 1e-12 * ctx.scale) {
        node.identical = true;
        mark(*ctx.result, node.ids, node.ids, -1);
        return;
    }
    const int next = node.level + 1;
    if (next > ctx.cap) {
        node.capped = true;
        ctx.result->depth_cap_reached = true;
        mark(*ctx.result, node.ids, node.ids, -2);
        return;
    }
    const ZeroEstimate z = richardson_at_zero(node.G, ctx.tp);
    const CMatrix g0 = 0.5 * (z.value + z.value.adjoint());
    const Spectrum s0 = eigh(g0);
    const double tol = std::max({1e-6 * std::max(1.0, s0.norm2()),
                                 1e-12 * ctx.scale / std::pow(ctx.tp / 8.0, next), 100.0 * z.error});
    std::vector<std::pair<int, int>> runs;
    int start = 0;
    for (int i = 1; i <= node.g; ++i) {
        if (i == node.g || s0.eigenvalues(i) - s0.eigenvalues(i - 1) > tol) {
            runs.emplace_back(start, i - start);
            start = i;
        }
    }
    for (size_t x = 0; x < runs.size(); ++x)
        for (size_t y = x + 1; y < runs.size(); ++y) {
            std::vector<int> ix(node.ids.begin() + runs[x].first, node.ids.begin() + runs[x].first + runs[x].second);
            std::vector<int> iy(node.ids.begin() + runs[y].first, node.ids.begin() + runs[y].first + runs[y].second);
            mark(*ctx.result, ix, iy, next);
        }
    for (const auto& [a, s] : runs) {
        Node::Cluster c{a, s, nullptr};
        if (s >= 2) {
            c.child = std::make_unique<Node>();
            c.child->F = node.G;
            c.child->a = a;
            c.child->g = s;
            c.child->level = next;
            c.child->ids.assign(node.ids.begin() + a, node.ids.begin() + a + s);
            process(*c.child, g0, ctx);
        }
        node.clusters.push_back(std::move(c));
    }
}

}  // namespace

CascadeResult cascade(const FamilyHandle& fam, double t_probe, int depth_cap) {
    if (!(t_probe > 0.0)) throw InvalidArgument("cascade: t_probe must be > 0");
    if (depth_cap < 1) throw InvalidArgument("cascade: depth_cap must be >= 1");
    const int k = fam.k;
    CascadeResult res;
    res.k = k;
    res.depth_cap = depth_cap;
    res.t_probe = t_probe;
    res.split_level.assign(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(k), 0));

    CascadeContext ctx{t_probe, depth_cap, family_scale(fam), &res};
    Node root;
    root.F = [fam](double t) { return fam.at(t).mat(); };
    root.a = fam.offset;
    root.g = k;
    root.level = 0;
    root.ids.resize(static_cast<size_t>(k));
    std::iota(root.ids.begin(), root.ids.end(), 0);
    process(root, fam.at(0.0).mat(), ctx);

    const RVector back = root.values(-t_probe);
    const RVector actual = eigh(fam.at(-t_probe)).eigenvalues.segment(fam.offset, k);
    std::vector<int> order(static_cast<size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return back(x) < back(y); });
    res.permutation.assign(static_cast<size_t>(k), 0);
    for (int pos = 0; pos < k; ++pos) res.permutation[static_cast<size_t>(order[static_cast<size_t>(pos)])] = pos;

    const double tol = 1e-8 * std::max(1.0, ctx.scale);
    for (int i = 0; i < k; ++i) {
        const int p = res.permutation[static_cast<size_t>(i)];
        res.matching_error = std::max(res.matching_error, std::abs(back(i) - actual(p)));
        Eigen::Index nearest = 0;
        (actual.array() - back(i)).abs().minCoeff(&nearest);
        if (std::abs(actual(nearest) - actual(p)) > tol) {
            throw MatchingCollision("cascade: branch assignment at -t_probe is ambiguous");
        }
    }
    if (res.matching_error > tol) {
        std::ostringstream os;
        os << "cascade: reassembled branches miss the spectrum by " << res.matching_error;
        throw MatchingCollision(os.str());
    }
    return res;
}

std::vector<RVector> analytic_branches(const FamilyHandle& fam, const CascadeResult& cas,
                                       const std::vector<double>& ts) {
    std::vector<RVector> out;
    for (double t : ts) {
        const RVector w = eigh(fam.at(t)).eigenvalues.segment(fam.offset, fam.k);
        if (t >= 0.0) {
            out.push_back(w);
            continue;
        }
        RVector b(fam.k);
        for (int i = 0; i < fam.k; ++i) b(i) = w(cas.permutation[static_cast<size_t>(i)]);
        out.push_back(b);
    }
    return out;
}

double polynomial_fit_residual(const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
    if (xs.size() != ys.size() || xs.size() < static_cast<size_t>(degree + 1)) {
        throw InvalidArgument("polynomial_fit_residual: need at least degree + 1 samples");
    }
    double xmax = 0.0;
    for (double x : xs) xmax = std::max(xmax, std::abs(x));
    if (xmax == 0.0) xmax = 1.0;
    const auto m = static_cast<Eigen::Index>(xs.size());
    RMatrix a(m, degree + 1);
    RVector y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double u = xs[static_cast<size_t>(i)] / xmax;
        double p = 1.0;
        for (int d = 0; d <= degree; ++d) {
            a(i, d) = p;
            p *= u;
        }
        y(i) = ys[static_cast<size_t>(i)];
    }
    const RVector c = a.colPivHouseholderQr().solve(y);
    return (a * c - y).cwiseAbs().maxCoeff();
}

SignedStdDev signed_stddev(const FamilyHandle& fam, int r, const std::vector<double>& ts) {
    if (r < 1) throw InvalidArgument("signed_stddev: r must be >= 1");
    SignedStdDev out;
    out.scale = family_scale(fam);
    for (double t : ts) {
        const double d = window_std_dev(eigh(fam.at(t)).eigenvalues, fam.k, fam.offset);
        const double sign = (t < 0.0 && r % 2 == 1) ? -1.0 : 1.0;
        out.values.push_back(sign * d);
    }
    if (ts.size() >= static_cast<size_t>(r + 4)) {
        out.fit_residual = polynomial_fit_residual(ts, out.values, r + 3);
        out.smooth = out.fit_residual <= 1e-6 * out.scale;
    }
    return out;
}

}  // namespace hermgeo
