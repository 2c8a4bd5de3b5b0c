#include "hermgeo/cli.hpp"

#include "hermgeo/degeneracy_geometry.hpp"
#include "hermgeo/errors.hpp"
#include "hermgeo/models.hpp"
#include "hermgeo/random.hpp"
#include "hermgeo/spectral.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hermgeo {

namespace {

double get_num(const ModelSpec& s, const std::string& key, double def) {
    auto it = s.params.find(key);
    if (it == s.params.end()) return def;
    try {
        size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("model parameter " + key + "=" + it->second + " is not a number");
    }
}

int get_int(const ModelSpec& s, const std::string& key, int def) {
    const double v = get_num(s, key, def);
    if (v != std::floor(v)) throw ParseError("model parameter " + key + " must be an integer");
    return static_cast<int>(v);
}

void allow_keys(const ModelSpec& s, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : s.params) {
        bool ok = false;
        for (const char* a : keys) ok = ok || k == a;
        if (!ok) throw ParseError("model " + s.name + " does not take parameter " + k);
    }
}

HermitianMatrix unit_norm(const HermitianMatrix& h) {
    const double n = operator_2_norm(h);
    if (n == 0.0) throw InvalidArgument("direction is the zero matrix");
    return h * (1.0 / n);
}

nlohmann::ordered_json spec_json(const ModelSpec& s) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    for (const auto& [k, v] : s.params) j[k] = v;
    return j;
}

nlohmann::ordered_json estimate_json(const OrderEstimate& e) {
    nlohmann::ordered_json j;
    j["method"] = to_string(e.method);
    if (e.infinite) {
        j["r"] = "inf";
    } else if (e.conclusive) {
        j["r"] = e.r;
    } else {
        j["r"] = nullptr;
    }
    j["slope"] = e.slope;
    j["slope_dev"] = e.slope_dev;
    j["conclusive"] = e.conclusive;
    j["fit_points"] = e.fitted.size();
    if (!e.note.empty()) j["note"] = e.note;
    return j;
}

int resolve_window(const std::string& w, const ModelSpec& model, int n, int k) {
    std::string mode = w;
    if (mode == "auto") mode = model.name == "ssh" ? "middle" : "ground";
    if (mode == "ground") return 0;
    if (mode == "middle") return n / 2 - k / 2;
    try {
        size_t used = 0;
        const int off = std::stoi(mode, &used);
        if (used != mode.size()) throw std::invalid_argument("trailing");
        return off;
    } catch (const std::exception&) {
        throw ParseError("window must be ground, middle, auto or an integer offset");
    }
}

}  // namespace

ModelSpec parse_model_spec(const std::vector<std::string>& words) {
    if (words.empty()) throw ParseError("missing model name");
    ModelSpec s;
    s.name = words.front();
    for (size_t i = 1; i < words.size(); ++i) {
        const auto eq = words[i].find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("model parameter must look like key=value: " + words[i]);
        s.params[words[i].substr(0, eq)] = words[i].substr(eq + 1);
    }
    return s;
}

HermitianMatrix build_model(const ModelSpec& s) {
    if (s.name == "ssh") {
        allow_keys(s, {"N", "v", "w"});
        return ssh(get_int(s, "N", 4), get_num(s, "v", 0.0), get_num(s, "w", 1.0));
    }
    if (s.name == "ising") {
        allow_keys(s, {"N"});
        return ising(get_int(s, "N", 3));
    }
    if (s.name == "five_qubit") {
        allow_keys(s, {});
        return five_qubit_code();
    }
    if (s.name == "example_3x3") {
        allow_keys(s, {"v", "x", "y", "z", "p", "q", "r", "s", "w"});
        return example_3x3(get_num(s, "v", 0), get_num(s, "x", 0), get_num(s, "y", 0), get_num(s, "z", 0),
                           get_num(s, "p", 0), get_num(s, "q", 0), get_num(s, "r", 0), get_num(s, "s", 0),
                           get_num(s, "w", 0));
    }
    if (s.name == "example_pr") {
        allow_keys(s, {"p", "r"});
        return example_pr(get_num(s, "p", 0), get_num(s, "r", 0));
    }
    if (s.name == "weyl_example") {
        allow_keys(s, {"x", "y", "z"});
        return weyl_example(get_num(s, "x", 0), get_num(s, "y", 0), get_num(s, "z", 0));
    }
    if (s.name == "ssh_disorder" || s.name == "transverse" || s.name == "one_local" || s.name == "random") {
        allow_keys(s, {"N", "n", "seed"});
        Rng rng(static_cast<std::uint64_t>(get_int(s, "seed", 0)));
        if (s.name == "ssh_disorder") return random_ssh_disorder(get_int(s, "N", 4), rng);
        if (s.name == "transverse") return random_transverse(get_int(s, "N", 3), rng);
        if (s.name == "one_local") return random_one_local(get_int(s, "N", 5), rng);
        return random_hermitian(get_int(s, "n", 4), rng);
    }
    throw ParseError("unknown model " + s.name);
}

HermitianMatrix model_direction(const ModelSpec& s, std::uint64_t seed) {
    Rng rng(seed);
    if (s.name == "ssh") return unit_norm(random_ssh_disorder(get_int(s, "N", 4), rng));
    if (s.name == "ising") return unit_norm(random_transverse(get_int(s, "N", 3), rng));
    if (s.name == "five_qubit") return unit_norm(random_one_local(5, rng));
    return unit_norm(random_hermitian(build_model(s).n(), rng));
}

ParamFamily build_param_family(const ModelSpec& s) {
    ParamFamily fam;
    fam.m = 3;
    fam.n = 3;
    fam.k = 2;
    if (s.name == "weyl_example") {
        allow_keys(s, {});
        fam.evaluator = [](const RVector& p) { return weyl_example(p(0), p(1), p(2)); };
    } else if (s.name == "example_pr") {
        allow_keys(s, {});
        // third coordinate is inert
        fam.evaluator = [](const RVector& p) { return example_pr(p(0), p(1)); };
    } else {
        throw ParseError("model " + s.name + " has no three-parameter family");
    }
    return fam;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const InconclusiveFit*>(&e)) return kExitInconclusive;
    if (dynamic_cast<const PreconditionError*>(&e)) return kExitPrecondition;
    if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
    return kExitNumerical;
}

RunReport cmd_decompose(const std::string& matrix_file, const std::string& base, int k, int offset) {
    RunReport rep;
    rep.command = "decompose";
    rep.inputs["matrix"] = matrix_file;
    rep.inputs["base"] = base;
    rep.inputs["k"] = k;
    rep.inputs["offset"] = offset;
    const HermitianMatrix H = read_matrix_file(matrix_file);
    SWDecomposition dec;
    if (base == "auto") {
        const ProjectionResult pr = collapse_projection(H, k, offset);
        dec = sw_decompose_general(H, pr.H_sigma, k, offset);
    } else {
        const HermitianMatrix G0 = read_matrix_file(base);
        require_same_dim(H.n(), G0.n(), "decompose");
        CMatrix off = G0.mat();
        off.diagonal().setZero();
        const bool diagonal = off.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, G0.mat().cwiseAbs().maxCoeff());
        dec = diagonal ? sw_decompose(H, G0, k, offset) : sw_decompose_general(H, G0, k, offset);
    }
    const ChartCoordinates cc = chart_coordinates(dec);
    rep.outputs["S"] = matrix_json(dec.S.mat());
    rep.outputs["B"] = matrix_json(dec.B.mat());
    rep.outputs["T_c"] = dec.c;
    rep.outputs["H_eff"] = matrix_json(dec.H_eff.mat());
    rep.outputs["H_eff_block"] = matrix_json(dec.heff_block());
    rep.outputs["y"] = vector_json(cc.y);
    if (k == 2) {
        rep.outputs["heff_pauli"] = vector_json(cc.y / std::sqrt(2.0));
    }
    rep.outputs["S_norm2"] = dec.s_norm;
    rep.outputs["within_r0"] = dec.within_r0;
    rep.outputs["s_norm_ok"] = dec.s_norm_ok;
    rep.diagnostics["residual"] = dec.residual;
    rep.diagnostics["s_projection_residual"] = dec.s_projection_residual;
    rep.diagnostics["r0"] = dec.r0;
    rep.diagnostics["perturbation_norm2"] = dec.perturbation_norm;
    rep.diagnostics["gauge"] = matrix_json(dec.gauge.mat());
    return rep;
}

RunReport cmd_project(const std::string& matrix_file, int k, int offset) {
    RunReport rep;
    rep.command = "project";
    rep.inputs["matrix"] = matrix_file;
    rep.inputs["k"] = k;
    rep.inputs["offset"] = offset;
    const HermitianMatrix H = read_matrix_file(matrix_file);
    const ProjectionResult pr = collapse_projection(H, k, offset);
    rep.outputs["H_sigma"] = matrix_json(pr.H_sigma.mat());
    rep.outputs["distance"] = pr.distance;
    rep.outputs["std_dev"] = pr.std_dev;
    rep.outputs["mean_lambda"] = pr.mean_lambda;
    rep.outputs["unique"] = pr.unique;
    rep.diagnostics["frobenius_check"] = frobenius_norm(H - pr.H_sigma);
    return rep;
}

RunReport cmd_distance(const std::string& matrix_file, int k, int offset) {
    RunReport rep;
    rep.command = "distance";
    rep.inputs["matrix"] = matrix_file;
    rep.inputs["k"] = k;
    rep.inputs["offset"] = offset;
    const HermitianMatrix H = read_matrix_file(matrix_file);
    const ProjectionResult pr = collapse_projection(H, k, offset);
    rep.outputs["distance"] = pr.distance;
    rep.outputs["sqrt_k_std_dev"] = std::sqrt(static_cast<double>(k)) * pr.std_dev;
    rep.outputs["unique"] = pr.unique;
    if (pr.unique) {
        try {
            const SWDecomposition dec = sw_decompose_general(H, pr.H_sigma, k, offset);
            rep.outputs["heff_norm"] = frobenius_norm(dec.H_eff);
        } catch (const NumericalError& e) {
            rep.diagnostics["heff_error"] = e.what();
        }
    }
    return rep;
}

RunReport cmd_order(const OrderRequest& req) {
    RunReport rep;
    rep.command = "order";
    rep.inputs["k"] = req.k;
    rep.inputs["window"] = req.window;
    if (req.ladder_lo < 1 || req.ladder_hi < req.ladder_lo + 2) throw InvalidArgument("ladder needs at least 3 points");
    std::vector<double> ladder;
    for (int e = req.ladder_lo; e <= req.ladder_hi; ++e) ladder.push_back(std::ldexp(1.0, -e));

    FamilyHandle fam;
    double scale = 1.0;
    if (req.ladder_file) {
        rep.inputs["ladder_file"] = *req.ladder_file;
        std::ifstream in(*req.ladder_file);
        if (!in) throw ParseError("cannot open ladder file " + *req.ladder_file);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("ladder file: ") + e.what());
        }
        if (!j.contains("h0") || !j.contains("ts") || !j.contains("matrices") || j["ts"].size() != j["matrices"].size()) {
            throw ParseError("ladder file needs h0, ts and matrices of equal length");
        }
        auto table = std::make_shared<std::vector<std::pair<double, HermitianMatrix>>>();
        const HermitianMatrix h0 = parse_hermitian(j["h0"].dump());
        table->emplace_back(0.0, h0);
        ladder.clear();
        for (size_t i = 0; i < j["ts"].size(); ++i) {
            const double t = j["ts"][i].get<double>();
            table->emplace_back(t, parse_hermitian(j["matrices"][i].dump()));
            ladder.push_back(t);
        }
        const int offset = resolve_window(req.window, ModelSpec{"file", {}}, h0.n(), req.k);
        fam = make_family([table](double t) {
            for (const auto& [tt, h] : *table)
                if (tt == t) return h;
            throw InvalidArgument("ladder file has no matrix at the requested t");
        }, req.k, offset);
        scale = operator_2_norm(h0);
        for (const auto& [t, h] : *table)
            if (t != 0.0) scale = std::max(scale, operator_2_norm(h - h0) / std::abs(t));
        if (scale == 0.0) scale = 1.0;
    } else {
        rep.inputs["model"] = spec_json(req.model);
        rep.inputs["direction_seed"] = req.seed;
        const bool parametric = req.model.name == "example_pr" || req.model.name == "weyl_example";
        if (parametric) {
            const ParamFamily pf = build_param_family(ModelSpec{req.model.name, {}});
            Rng rng(req.seed);
            RVector d = random_gaussian_vector(pf.m, rng);
            d /= d.norm();
            rep.inputs["direction"] = vector_json(d);
            fam = make_family([pf, d](double t) { return pf.at(RVector(t * d)); }, req.k,
                              resolve_window(req.window, req.model, pf.n, req.k));
        } else {
            const HermitianMatrix h0 = build_model(req.model);
            const HermitianMatrix h1 = model_direction(req.model, req.seed);
            fam = make_family([h0, h1](double t) { return h0 + h1 * t; }, req.k,
                              resolve_window(req.window, req.model, h0.n(), req.k));
        }
        scale = family_scale(fam);
    }
    rep.inputs["offset"] = fam.offset;

    const auto samples = splitting_samples(fam, ladder);
    nlohmann::ordered_json ests = nlohmann::ordered_json::array();
    bool five_ok = true;
    std::optional<int> common;
    bool agree = true;
    bool first = true;
    bool common_inf = false;
    auto methods = five_methods();
    methods.push_back({OrderMethod::EffectiveHamiltonian});
    methods.push_back({OrderMethod::Distance});
    for (size_t i = 0; i < methods.size(); ++i) {
        const OrderEstimate e = order_from_samples(samples, methods[i], fam.k, scale);
        ests.push_back(estimate_json(e));
        if (i < 5 && !e.conclusive) five_ok = false;
        if (!e.conclusive) {
            agree = false;
            continue;
        }
        if (first) {
            common_inf = e.infinite;
            if (!e.infinite) common = e.r;
            first = false;
        } else if (e.infinite != common_inf || (!e.infinite && common != e.r)) {
            agree = false;
        }
    }
    rep.outputs["estimates"] = ests;
    rep.outputs["agree"] = agree;
    if (agree) {
        rep.outputs["r"] = common_inf ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(*common);
    } else {
        rep.outputs["r"] = nullptr;
    }
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (const auto& s : samples) {
        table.push_back({s.t, s.std_dev, s.heff_valid ? nlohmann::ordered_json(s.heff_norm) : nlohmann::ordered_json(nullptr)});
    }
    rep.diagnostics["samples_t_std_heff"] = table;
    rep.diagnostics["scale"] = scale;
    if (!five_ok) rep.exit_code = kExitInconclusive;
    return rep;
}

RunReport cmd_weyl_scan(const ScanRequest& req) {
    RunReport rep;
    rep.command = "weyl-scan";
    rep.inputs["model"] = spec_json(req.model);
    rep.inputs["resolution"] = req.resolution;
    rep.inputs["shift_sx"] = req.shift_sx;
    rep.inputs["refine"] = req.refine;
    rep.inputs["first_order"] = req.first_order;
    ParamFamily fam = build_param_family(req.model);
    if (req.shift_sx != 0.0) {
        CMatrix k = CMatrix::Zero(fam.n, fam.n);
        k(0, 1) = req.shift_sx;
        k(1, 0) = req.shift_sx;
        const HermitianMatrix K(k);
        const ParamFamily base = fam;
        fam.evaluator = [base, K](const RVector& p) { return base.at(p) + K; };
    }
    RVector lo(fam.m), hi(fam.m);
    if (req.box.size() == 1) {
        lo.setConstant(-std::abs(req.box[0]));
        hi.setConstant(std::abs(req.box[0]));
    } else if (req.box.size() == static_cast<size_t>(2 * fam.m)) {
        for (int i = 0; i < fam.m; ++i) {
            lo(i) = req.box[static_cast<size_t>(2 * i)];
            hi(i) = req.box[static_cast<size_t>(2 * i + 1)];
        }
    } else {
        throw ParseError("box needs one half-width or lo,hi per axis");
    }
    rep.inputs["box_lo"] = vector_json(lo);
    rep.inputs["box_hi"] = vector_json(hi);
    ScanOptions opts;
    opts.refine = req.refine;
    opts.classify.first_order = req.first_order;
    const ScanResult res = scan_grid(fam, lo, hi, req.resolution, opts);
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const auto& r : res.reports) {
        nlohmann::ordered_json j;
        j["p"] = vector_json(r.p);
        j["distance"] = r.distance;
        j["rank"] = r.rank;
        j["charge"] = r.charge;
        j["classification"] = to_string(r.classification);
        nlohmann::ordered_json jac = nlohmann::ordered_json::array();
        for (Eigen::Index a = 0; a < r.jacobian.rows(); ++a) jac.push_back(vector_json(r.jacobian.row(a).transpose()));
        j["jacobian"] = jac;
        reports.push_back(j);
    }
    rep.outputs["points"] = reports;
    rep.outputs["count"] = res.reports.size();
    rep.diagnostics["seeds"] = res.seeds.size();
    rep.diagnostics["diverged"] = res.diverged;
    rep.diagnostics["reanchors"] = res.reanchors;
    return rep;
}

RunReport cmd_model(const ModelSpec& spec, std::optional<std::uint64_t> direction_seed) {
    RunReport rep;
    rep.command = "model";
    rep.inputs["model"] = spec_json(spec);
    const HermitianMatrix h = direction_seed ? model_direction(spec, *direction_seed) : build_model(spec);
    if (direction_seed) rep.inputs["direction_seed"] = *direction_seed;
    rep.outputs["matrix"] = format_matrix(h);
    return rep;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hermitian degeneracy geometry toolkit"};
    app.require_subcommand(1);
    bool json = false;
    bool timing = false;
    app.add_flag("--json", json, "structured report output");
    app.add_flag("--timing", timing, "print wall time to stderr");

    std::string matrix_file, base = "auto";
    int k = 2, offset = 0;
    auto* dec = app.add_subcommand("decompose", "exact SW decomposition");
    dec->add_option("matrix", matrix_file)->required();
    dec->add_option("--base", base, "diagonal or general base point file, or auto");
    dec->add_option("-k,--k", k);
    dec->add_option("--offset", offset);

    auto* proj = app.add_subcommand("project", "closest point of Sigma_k");
    proj->add_option("matrix", matrix_file)->required();
    proj->add_option("-k,--k", k);
    proj->add_option("--offset", offset);

    auto* dist = app.add_subcommand("distance", "distance to Sigma_k");
    dist->add_option("matrix", matrix_file)->required();
    dist->add_option("-k,--k", k);
    dist->add_option("--offset", offset);

    OrderRequest oreq;
    oreq.window = "auto";
    std::vector<std::string> model_words;
    std::string direction = "seed=0";
    auto* ord = app.add_subcommand("order", "order of energy splitting along a line");
    ord->add_option("model", model_words, "model name and key=value parameters");
    ord->add_option("--direction", direction, "seed=N");
    ord->add_option("-k,--k", oreq.k);
    ord->add_option("--window", oreq.window, "ground, middle, auto or an offset");
    ord->add_option("--ladder-lo", oreq.ladder_lo, "largest t is 2^-lo");
    ord->add_option("--ladder-hi", oreq.ladder_hi, "smallest t is 2^-hi");
    std::string ladder_file;
    ord->add_option("--ladder-file", ladder_file, "precomputed matrices H(t_i)");

    ScanRequest sreq;
    std::vector<double> box{0.5};
    auto* scan = app.add_subcommand("weyl-scan", "grid scan for Weyl points");
    scan->add_option("model", model_words)->required();
    scan->add_option("--box", box, "half-width or lo,hi per axis")->delimiter(',');
    scan->add_option("--res", sreq.resolution);
    scan->add_option("--shift-sx", sreq.shift_sx, "constant c sigma_x on the degenerate block");
    bool no_refine = false;
    scan->add_flag("--no-refine", no_refine);
    scan->add_flag("--first-order", sreq.first_order);

    std::string out_file;
    std::string model_direction_opt;
    auto* mod = app.add_subcommand("model", "emit a model matrix in the interchange format");
    mod->add_option("model", model_words)->required();
    mod->add_option("--direction", model_direction_opt, "seed=N: emit the seeded perturbation direction");
    mod->add_option("--out", out_file);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitParse;
    }

    const auto start = std::chrono::steady_clock::now();
    auto parse_seed = [](const std::string& s) -> std::uint64_t {
        if (s.rfind("seed=", 0) != 0) throw ParseError("direction must look like seed=N");
        try {
            size_t used = 0;
            const auto v = std::stoull(s.substr(5), &used);
            if (used != s.size() - 5) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ParseError("direction seed is not an unsigned integer");
        }
    };

    RunReport rep;
    try {
        if (*dec) {
            rep = cmd_decompose(matrix_file, base, k, offset);
        } else if (*proj) {
            rep = cmd_project(matrix_file, k, offset);
        } else if (*dist) {
            rep = cmd_distance(matrix_file, k, offset);
        } else if (*ord) {
            if (!ladder_file.empty()) {
                oreq.ladder_file = ladder_file;
            } else {
                oreq.model = parse_model_spec(model_words);
            }
            oreq.seed = parse_seed(direction);
            rep = cmd_order(oreq);
        } else if (*scan) {
            sreq.model = parse_model_spec(model_words);
            sreq.box = box;
            sreq.refine = !no_refine;
            rep = cmd_weyl_scan(sreq);
        } else if (*mod) {
            std::optional<std::uint64_t> seed;
            if (!model_direction_opt.empty()) seed = parse_seed(model_direction_opt);
            rep = cmd_model(parse_model_spec(model_words), seed);
            const std::string doc = rep.outputs["matrix"].get<std::string>();
            if (out_file.empty()) {
                out << doc;
            } else {
                std::ofstream f(out_file);
                if (!f) throw ParseError("cannot write " + out_file);
                f << doc;
            }
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    out << (json ? rep.to_json() : rep.to_text());
    if (timing) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        err << "wall_time_s: " << secs << "\n";
    }
    return rep.exit_code;
}

}  // namespace hermgeo
