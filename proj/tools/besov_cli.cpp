// besov: JSON-in/JSON-out front end. Exit codes: 0 pass, 1 verification failure, 2 usage or IO error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "besov/atoms.hpp"
#include "besov/domains.hpp"
#include "besov/io.hpp"
#include "besov/operators.hpp"
#include "besov/verify.hpp"

namespace fs = std::filesystem;
using namespace besov;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Output {
    std::string path;
    bool csv = false;
};

void emit(const Output& out, const json& value) {
    if (out.path.empty() || out.path == "-") {
        std::cout << value.dump(2) << '\n';
    } else {
        write_json_file(out.path, value);
    }
}

void emit_text(const Output& out, const std::string& text) {
    if (out.path.empty() || out.path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out.path);
    if (!f) throw IoError("cannot write " + out.path);
    f << text;
}

std::string csv_num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

GridPtr load_grid(const std::string& path) { return std::make_shared<const Grid>(grid_from_json(read_json_file(path))); }

LeafFunction load_function(const std::string& path) {
    return function_from_json(read_json_file(path), fs::path(path).parent_path());
}

/// Grid embedded in a document, inline or as a path relative to the document.
GridPtr embedded_grid(const json& doc, const std::string& doc_path) {
    const json& g = doc.at("grid");
    if (g.is_string()) {
        fs::path p = g.get<std::string>();
        if (p.is_relative()) p = fs::path(doc_path).parent_path() / p;
        return load_grid(p.string());
    }
    return std::make_shared<const Grid>(grid_from_json(g));
}

BesovParams parse_params(const std::string& text) { return BesovParams::parse(text); }

json geometry_json(const GridGeometry& g) {
    return json{{"lambda", g.lambda_min},
                {"Lambda", g.lambda_max},
                {"root_measure", g.root_measure},
                {"max_children", g.max_children},
                {"level_max_measure", g.level_max_measure}};
}

std::string constants_csv(const ConstantsReport& c) {
    std::string s = "name,value\n";
    for (const auto& [k, v] : std::vector<std::pair<const char*, double>>{
             {"lambda", c.lambda}, {"Lambda", c.Lambda}, {"C1", c.c1}, {"C2", c.c2}, {"C_e", c.c_e},
             {"C_no", c.c_no}, {"C_kt", c.c_kt}, {"C_co", c.c_co}})
        s += std::string(k) + "," + csv_num(v) + "\n";
    return s;
}

std::string norms_csv(const NormReport& r) {
    std::string s = "level,haar,st,osc\n";
    const Eigen::Index n = std::max({r.haar_levels.size(), r.st_levels.size(), r.osc_levels.size()});
    auto at = [](const Eigen::VectorXd& v, Eigen::Index i) { return i < v.size() ? csv_num(v[i]) : std::string(); };
    for (Eigen::Index i = 0; i < n; ++i)
        s += std::to_string(i) + "," + at(r.haar_levels, i) + "," + at(r.st_levels, i) + "," + at(r.osc_levels, i) + "\n";
    s += "total," + csv_num(r.n_haar) + "," + csv_num(r.n_st) + "," + csv_num(r.n_osc) + "\n";
    return s;
}

void print_lines(const SuiteResult& r) {
    for (const CriterionLine& l : r.lines)
        std::fprintf(stderr, "%s %s: %s: %s%s\n", l.pass ? "PASS" : "FAIL", r.name.c_str(), l.label.c_str(),
                     l.detail.c_str(), l.gating ? "" : " (informational)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Besov spaces on good grids: builders, Haar transforms, norms and verification suites"};
    app.require_subcommand(1);
    int code = kPass;

    // grid
    auto* grid = app.add_subcommand("grid", "build or validate grids");
    grid->require_subcommand(1);
    Output grid_out;
    std::string kind = "dyadic";
    RandomGridOptions ropt;
    ropt.min_children = 2;
    ropt.max_children = 4;
    ropt.lambda = 0.2;
    ropt.Lambda = 0.8;
    ropt.seed = 1;
    auto* gbuild = grid->add_subcommand("build", "build a dyadic or random good grid");
    gbuild->add_option("--kind", kind)->check(CLI::IsMember({"dyadic", "random"}));
    gbuild->add_option("--depth", ropt.depth)->required()->check(CLI::Range(0, 24));
    gbuild->add_option("--seed", ropt.seed);
    gbuild->add_option("--min-children", ropt.min_children);
    gbuild->add_option("--max-children", ropt.max_children);
    gbuild->add_option("--lambda", ropt.lambda, "lower child/parent ratio bound");
    gbuild->add_option("--Lambda", ropt.Lambda, "upper child/parent ratio bound");
    gbuild->add_option("-o,--out", grid_out.path);
    gbuild->callback([&] { emit(grid_out, to_json(kind == "dyadic" ? build_dyadic(ropt.depth) : build_random_good(ropt))); });

    std::string grid_in;
    auto* gval = grid->add_subcommand("validate", "check the good-grid conditions and report the geometry");
    gval->add_option("grid", grid_in)->required();
    gval->add_option("-o,--out", grid_out.path);
    gval->callback([&] {
        const GridPtr g = load_grid(grid_in);
        try {
            const GridGeometry geo = validate_good(*g);
            emit(grid_out, json{{"valid", true}, {"cells", g->cell_count()}, {"depth", g->depth()}, {"geometry", geometry_json(geo)}});
        } catch (const GridViolation& e) {
            emit(grid_out, json{{"valid", false}, {"condition", e.condition()}, {"cell", e.cell()}, {"message", e.what()}});
            code = kFail;
        }
    });

    // fn
    auto* fn = app.add_subcommand("fn", "leaf functions");
    fn->require_subcommand(1);
    Output fn_out;
    std::string fn_grid, gen = "random_leaf";
    int fn_level = -1;
    std::uint64_t fn_seed = 1;
    auto* fsample = fn->add_subcommand("sample", "sample a builtin generator at a grid level");
    fsample->add_option("--grid", fn_grid)->required();
    fsample->add_option("--gen", gen, "generator, e.g. linear, power(0.6), indicator(0.25,0.5)");
    fsample->add_option("--level", fn_level, "default: grid depth");
    auto* fseed = fsample->add_option("--seed", fn_seed, "seed for random_leaf");
    fsample->add_option("-o,--out", fn_out.path);
    fsample->callback([&] {
        const GridPtr g = load_grid(fn_grid);
        Generator generator = Generator::parse(gen);
        if (fseed->count() > 0) generator.seed = fn_seed;
        emit(fn_out, to_json(sample(g, fn_level < 0 ? g->depth() : fn_level, generator)));
    });

    // haar
    auto* haar = app.add_subcommand("haar", "unbalanced Haar transforms");
    haar->require_subcommand(1);
    Output haar_out;
    std::string haar_in;
    int haar_level = -1, k0 = 0;
    auto* htrans = haar->add_subcommand("transform", "Haar coefficients of a function");
    htrans->add_option("function", haar_in)->required();
    htrans->add_option("-o,--out", haar_out.path);
    htrans->callback([&] {
        const LeafFunction f = load_function(haar_in);
        const HaarSystem sys(f.grid_ptr());
        emit(haar_out, to_json(analyze(f, sys), sys, f.level()));
    });
    auto* hrec = haar->add_subcommand("reconstruct", "function from Haar coefficients");
    hrec->add_option("coefficients", haar_in)->required();
    hrec->add_option("--level", haar_level, "default: level stored in the file");
    hrec->add_option("-o,--out", haar_out.path);
    hrec->callback([&] {
        const json doc = read_json_file(haar_in);
        const HaarSystem sys(embedded_grid(doc, haar_in));
        const int level = haar_level >= 0 ? haar_level : doc.value("level", sys.grid().depth());
        emit(haar_out, to_json(synthesize(coefficients_from_json(doc, sys), sys, level)));
    });
    auto* hdirac = haar->add_subcommand("dirac", "truncated Haar sum at level k0");
    hdirac->add_option("function", haar_in)->required();
    hdirac->add_option("--k0", k0)->required();
    hdirac->add_option("-o,--out", haar_out.path);
    hdirac->callback([&] {
        const LeafFunction f = load_function(haar_in);
        const HaarSystem sys(f.grid_ptr());
        emit(haar_out, to_json(dirac_truncate(analyze(f, sys), sys, k0)));
    });

    // norms
    auto* norms = app.add_subcommand("norms", "norm reports and constants");
    norms->require_subcommand(1);
    Output norms_out;
    std::string norms_in, params_text = "0.3,2,2";
    auto* nrep = norms->add_subcommand("report", "three norms, bracket and chain checks");
    nrep->add_option("function", norms_in)->required();
    nrep->add_option("--params", params_text, "s,p,q (q may be inf)");
    nrep->add_flag("--csv", norms_out.csv, "per-level CSV instead of JSON");
    nrep->add_option("-o,--out", norms_out.path);
    nrep->callback([&] {
        const LeafFunction f = load_function(norms_in);
        const BesovParams bp = parse_params(params_text);
        const HaarSystem sys(f.grid_ptr());
        const NormReport r = norm_report(f, bp, sys, validate_good(f.grid()));
        if (norms_out.csv) emit_text(norms_out, norms_csv(r));
        else emit(norms_out, to_json(r, bp));
        if (!r.chain.passed()) {
            std::fprintf(stderr, "chain violation: %s\n", r.chain.first_failure().c_str());
            code = kFail;
        }
    });
    auto* ncon = norms->add_subcommand("constants", "equivalence constants of a grid");
    ncon->add_option("--grid", norms_in)->required();
    ncon->add_option("--params", params_text, "s,p,q (q may be inf)");
    ncon->add_flag("--csv", norms_out.csv);
    ncon->add_option("-o,--out", norms_out.path);
    ncon->callback([&] {
        const GridPtr g = load_grid(norms_in);
        const ConstantsReport c = equivalence_constants(validate_good(*g), parse_params(params_text));
        if (norms_out.csv) emit_text(norms_out, constants_csv(c));
        else emit(norms_out, to_json(c));
    });

    // verify
    auto* verify = app.add_subcommand("verify", "randomized verification suites");
    std::string suite;
    std::string verify_params;
    SuiteOptions vopt;
    Output verify_out;
    verify->add_option("suite", suite)->required()->check(CLI::IsMember(suite_names()));
    verify->add_option("--trials", vopt.trials);
    verify->add_option("--seed", vopt.seed);
    verify->add_option("--depth", vopt.depth);
    verify->add_option("--params", verify_params, "restrict to one s,p,q configuration");
    verify->add_option("-o,--out", verify_out.path);
    verify->callback([&] {
        if (!verify_params.empty()) vopt.params = parse_params(verify_params);
        const SuiteResult r = run_suite(suite, vopt);
        print_lines(r);
        emit(verify_out, r.report);
        if (!r.passed()) code = kFail;
    });

    // domain
    auto* domain = app.add_subcommand("domain", "regular domains");
    domain->require_subcommand(1);
    double da = 0.0, db = 1.0;
    std::string domain_grid, domain_params = "0.5,1,1";
    int domain_depth = 10;
    Output domain_out;
    auto* ddec = domain->add_subcommand("decompose", "tile [a,b) by maximal cells and check regularity");
    ddec->add_option("--a", da)->required();
    ddec->add_option("--b", db)->required();
    ddec->add_option("--grid", domain_grid, "interval grid; default dyadic of --depth");
    ddec->add_option("--depth", domain_depth);
    ddec->add_option("--params", domain_params, "s,p,q; regularity exponent 1 - s p");
    ddec->add_option("-o,--out", domain_out.path);
    ddec->callback([&] {
        const GridPtr g = domain_grid.empty() ? std::make_shared<const Grid>(build_dyadic(domain_depth)) : load_grid(domain_grid);
        const BesovParams bp = parse_params(domain_params);
        const RegularityReport r = interval_regular_decompose(da, db, *g, 1.0 - bp.s * bp.p);
        json out = to_json(r);
        if (r.passed) out["indicator_norm_bound"] = indicator_norm_bound(r, bp);
        emit(domain_out, out);
        if (!r.passed) code = kFail;
    });

    // op
    auto* op = app.add_subcommand("op", "operators");
    op->require_subcommand(1);
    std::string op_f, op_g, op_map = "abs", op_params = "0.3,1,1";
    std::uint64_t op_cell = 0;
    Output op_out;
    auto* omul = op->add_subcommand("multiply", "pointwise product with multiplier bound checks");
    omul->add_option("f", op_f)->required();
    omul->add_option("g", op_g)->required();
    omul->add_option("--params", op_params);
    omul->add_option("-o,--out", op_out.path);
    omul->callback([&] {
        const LeafFunction f = load_function(op_f);
        const LeafFunction h = function_from_json(read_json_file(op_g), f.grid_ptr());
        const HaarSystem sys(f.grid_ptr());
        const MultiplierReport r = pointwise_multiply(f, h, parse_params(op_params), sys, validate_good(f.grid()));
        emit(op_out, to_json(r));
        if (!r.passed()) code = kFail;
    });
    auto* ocomp = op->add_subcommand("compose", "left composition with a Lipschitz builtin");
    ocomp->add_option("f", op_f)->required();
    ocomp->add_option("--map", op_map, "identity, abs, clamp(M), scaled(a), soft_threshold(t)");
    ocomp->add_option("--params", op_params);
    ocomp->add_option("-o,--out", op_out.path);
    ocomp->callback([&] {
        const CompositionReport r = left_compose(LipschitzMap::builtin(op_map), load_function(op_f), parse_params(op_params));
        emit(op_out, to_json(r));
        if (!r.passed()) code = kFail;
    });
    auto* ores = op->add_subcommand("restrict", "restrict an atomic representation to the descendants of a cell");
    ores->add_option("representation", op_f)->required();
    ores->add_option("--cell", op_cell, "encoded cell id (level << 32 | index)")->required();
    ores->add_option("-o,--out", op_out.path);
    ores->callback([&] {
        const json doc = read_json_file(op_f);
        const AtomicRepresentation rep = representation_from_json(doc, embedded_grid(doc, op_f));
        emit(op_out, to_json(restrict(rep, decode_cell_id(op_cell))));
    });

    // bench
    auto* bench = app.add_subcommand("bench", "timings");
    bench->require_subcommand(1);
    int bench_depth = 12, bench_repeat = 5;
    std::uint64_t bench_seed = 1;
    Output bench_out;
    auto* btrans = bench->add_subcommand("transform", "build_haar + analyze + norm report on a dyadic grid");
    btrans->add_option("--depth", bench_depth)->check(CLI::Range(1, 20));
    btrans->add_option("--repeat", bench_repeat)->check(CLI::Range(1, 1000));
    btrans->add_option("--seed", bench_seed);
    btrans->add_option("-o,--out", bench_out.path);
    btrans->callback([&] {
        const BenchResult b = bench_transform(bench_depth, bench_repeat, bench_seed);
        std::fprintf(stderr, "median %.3f ms over %d runs at depth %d\n", b.median_ms, bench_repeat, bench_depth);
        emit(bench_out, b.report);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "error: malformed JSON: %s\n", e.what());
        return kUsage;
    } catch (const GridViolation& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const Error& e) {
        std::fprintf(stderr, "verification failure: %s\n", e.what());
        return kFail;
    }
    return code;
}
