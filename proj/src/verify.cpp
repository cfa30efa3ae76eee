#include "besov/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace besov {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

BesovParams make_params(double s, double p, Exponent q) {
    BesovParams b;
    b.s = s;
    b.p = p;
    b.q = q;
    return b;
}

GridPtr share(Grid g) { return std::make_shared<const Grid>(std::move(g)); }

GridPtr random_grid(std::uint64_t seed, int depth, int min_children, int max_children, double lambda, double Lambda) {
    RandomGridOptions o;
    o.min_children = min_children;
    o.max_children = max_children;
    o.lambda = lambda;
    o.Lambda = Lambda;
    o.depth = depth;
    o.seed = seed;
    return share(build_random_good(o));
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
    return std::mt19937_64(seq);
}

/// Runs body(0..n-1) on a worker pool; results must be written to per-index slots.
void parallel_for(int n, const std::function<void(int)>& body) {
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(n)));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex guard;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(guard);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

LeafFunction random_leaves(const GridPtr& g, int level, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd v(g->level_size(level));
    for (double& x : v) x = u(rng);
    return LeafFunction(g, level, std::move(v));
}

/// Mixed test corpus: i.i.d. leaves, sparse and single Haar expansions, coarse functions, cell indicators and constants.
LeafFunction corpus_function(const GridPtr& g, const HaarSystem& sys, int kind, std::mt19937_64& rng) {
    const int K = g->depth();
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int pairs = sys.pair_count();
    switch (kind % 5) {
        case 0: return random_leaves(g, K, rng);
        case 1: {
            HaarCoefficients d{0.0, Eigen::VectorXd::Zero(pairs)};
            if (u(rng) > 0.0) d.d_root = u(rng);
            const int n = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < n && pairs > 0; ++i) d.d[static_cast<int>(rng() % pairs)] = u(rng);
            return synthesize(d, sys, K);
        }
        case 2: {
            const int level = K > 0 ? static_cast<int>(rng() % K) : 0;
            return refine(random_leaves(g, level, rng), K);
        }
        case 3: {
            if (pairs == 0) return random_leaves(g, K, rng);
            HaarCoefficients d{0.0, Eigen::VectorXd::Zero(pairs)};
            d.d[static_cast<int>(rng() % pairs)] = 1.0;
            return synthesize(d, sys, K);
        }
        default: {
            if (rng() % 2 == 0) return LeafFunction(g, K, Eigen::VectorXd::Constant(g->level_size(K), u(rng)));
            const int level = static_cast<int>(rng() % (K + 1));
            const int index = static_cast<int>(rng() % g->level_size(level));
            return canonical_souza_atom(g, {level, index}, 0.3, 1.0, K);
        }
    }
}

CriterionLine line(std::string label, bool pass, std::string detail, bool gating = true) {
    return CriterionLine{std::move(label), pass, std::move(detail), gating};
}

CriterionLine timing_line(std::string label, double seconds, double limit) {
    return CriterionLine{std::move(label), seconds < limit, num(seconds) + " s", false, true};
}

SuiteResult finish(std::string name, std::vector<CriterionLine> lines, json report, Clock::time_point t0,
                   const SuiteOptions& o, int trials, int depth) {
    SuiteResult r;
    r.name = std::move(name);
    r.lines = std::move(lines);
    r.seconds = seconds_since(t0);
    r.report = std::move(report);
    r.report["suite"] = r.name;
    r.report["seed"] = o.seed;
    r.report["trials"] = trials;
    r.report["depth"] = depth;
    json lines_json = json::array();
    for (const CriterionLine& l : r.lines)
        if (!l.timing) lines_json.push_back({{"label", l.label}, {"pass", l.pass}, {"detail", l.detail}, {"gating", l.gating}});
    r.report["lines"] = std::move(lines_json);
    r.report["passed"] = r.passed();
    return r;
}

std::vector<BesovParams> default_equivalence_configs() {
    std::vector<BesovParams> out;
    for (double s : {0.1, 0.3, 0.45})
        for (double p : {1.0, 2.0})
            for (Exponent q : {Exponent(1.0), Exponent(2.0), Exponent::infinity()}) out.push_back(make_params(s, p, q));
    return out;
}

void keep_sample(json& samples, json item, std::size_t cap = 10) {
    if (samples.size() < cap) samples.push_back(std::move(item));
}

}  // namespace

bool SuiteResult::passed() const {
    return std::all_of(lines.begin(), lines.end(), [](const CriterionLine& l) { return l.pass || !l.gating; });
}

bool SuiteResult::all_lines_pass() const {
    return std::all_of(lines.begin(), lines.end(), [](const CriterionLine& l) { return l.pass; });
}

std::vector<NamedGrid> haar_grid_corpus(std::uint64_t seed, int max_dyadic_depth, int random_count) {
    std::vector<NamedGrid> out;
    for (int d = 1; d <= max_dyadic_depth; ++d) out.emplace_back("dyadic(" + std::to_string(d) + ")", share(build_dyadic(d)));
    std::mt19937_64 rng = stream(seed, 0x4752);
    for (int i = 0; i < random_count; ++i) {
        const int depth = 1 + static_cast<int>(rng() % 5);
        const std::uint64_t s = rng();
        out.emplace_back("random(seed=" + std::to_string(s) + ",depth=" + std::to_string(depth) + ")",
                         random_grid(s, depth, 2, 4, 0.2, 0.8));
    }
    return out;
}

SuiteResult verify_haar(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 100 : o.trials;
    const int depth = o.depth < 0 ? 8 : o.depth;
    const std::vector<NamedGrid> corpus = haar_grid_corpus(o.seed, depth);
    const int n = static_cast<int>(corpus.size());
    std::vector<double> ortho(n), mean(n), recon(n);

    parallel_for(n, [&](int gi) {
        const GridPtr& g = corpus[gi].second;
        const HaarSystem sys(g);
        const int K = g->depth();
        const Eigen::VectorXd w = level_measures(*g, K);
        const int pairs = sys.pair_count();
        Eigen::MatrixXd phi(pairs + 1, g->level_size(K));
        phi.row(0).setConstant(sys.root_value());
        for (int i = 0; i < pairs; ++i) phi.row(i + 1) = refine(sys.wavelet(i), K).values().transpose();
        const Eigen::MatrixXd gram = phi * w.asDiagonal() * phi.transpose();
        ortho[gi] = (gram - Eigen::MatrixXd::Identity(pairs + 1, pairs + 1)).cwiseAbs().maxCoeff();
        mean[gi] = pairs ? (phi.bottomRows(pairs) * w).cwiseAbs().maxCoeff() : 0.0;
    });
    const double ortho_seconds = seconds_since(t0);

    parallel_for(n, [&](int gi) {
        const GridPtr& g = corpus[gi].second;
        const HaarSystem sys(g);
        std::mt19937_64 rng = stream(o.seed, 0x5243, gi);
        double err = 0.0;
        for (int t = 0; t < trials; ++t) {
            const LeafFunction f = random_leaves(g, g->depth(), rng);
            err = std::max(err, (synthesize(analyze(f, sys), sys, g->depth()).values() - f.values()).cwiseAbs().maxCoeff());
        }
        recon[gi] = err;
    });

    json grids = json::array();
    for (int i = 0; i < n; ++i)
        grids.push_back({{"grid", corpus[i].first},
                         {"cells", corpus[i].second->cell_count()},
                         {"orthonormality_error", ortho[i]},
                         {"mean_error", mean[i]},
                         {"reconstruction_error", recon[i]}});
    const double mo = *std::max_element(ortho.begin(), ortho.end());
    const double mm = *std::max_element(mean.begin(), mean.end());
    const double mr = *std::max_element(recon.begin(), recon.end());
    std::vector<CriterionLine> lines{
        line("orthonormality within 1e-9 of delta", mo <= 1e-9, "max error " + num(mo) + " over " + std::to_string(n) + " grids"),
        line("zero mean within 1e-12", mm <= 1e-12, "max |integral| " + num(mm)),
        timing_line("orthonormality runtime < 5 s", ortho_seconds, 5.0),
        line("exact reconstruction within 1e-9", mr <= 1e-9,
             "max error " + num(mr) + " over " + std::to_string(trials) + " functions per grid")};
    return finish("haar", std::move(lines), json{{"grids", grids}}, t0, o,
                  trials, depth);
}

SuiteResult verify_dirac(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 10 : o.trials;
    const int depth = o.depth < 0 ? 8 : o.depth;
    const std::vector<NamedGrid> corpus = haar_grid_corpus(o.seed, depth);
    const int n = static_cast<int>(corpus.size());
    std::vector<double> err(n, 0.0);
    parallel_for(n, [&](int gi) {
        const GridPtr& g = corpus[gi].second;
        const HaarSystem sys(g);
        std::mt19937_64 rng = stream(o.seed, 0x4449, gi);
        for (int t = 0; t < trials; ++t) {
            const LeafFunction f = corpus_function(g, sys, t, rng);
            const HaarCoefficients d = analyze(f, sys);
            for (int k0 = 0; k0 <= g->depth(); ++k0)
                err[gi] = std::max(err[gi], (dirac_truncate(d, sys, k0).values() - f.level_averages(k0)).cwiseAbs().maxCoeff());
        }
    });
    json grids = json::array();
    for (int i = 0; i < n; ++i) grids.push_back({{"grid", corpus[i].first}, {"max_error", err[i]}});
    const double m = *std::max_element(err.begin(), err.end());
    return finish("dirac",
                  {line("truncation equals per-cell averages within 1e-9", m <= 1e-9,
                        "max error " + num(m) + " over every level of " + std::to_string(n) + " grids")},
                  json{{"grids", grids}}, t0, o, trials, depth);
}

SuiteResult verify_estphi(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int depth = o.depth < 0 ? 8 : o.depth;
    const std::vector<NamedGrid> corpus = haar_grid_corpus(o.seed, depth);
    int violations = 0;
    long checks = 0;
    json grids = json::array();
    json samples = json::array();
    for (const auto& [name, g] : corpus) {
        const GridGeometry geo = validate_good(*g);
        const AmplitudeConstants c = amplitude_constants(geo.lambda_min, geo.lambda_max);
        const HaarSystem sys(g);
        double lo = INFINITY;
        double hi = 0.0;
        for (const SplitPair& s : sys.pairs()) {
            const double root = std::sqrt(g->cell(s.id.owner).measure);
            for (double v : {s.value1, s.value2}) {
                const double a = std::abs(v) * root;
                lo = std::min(lo, a);
                hi = std::max(hi, a);
                ++checks;
                if (a < c.c1 * (1.0 - 1e-12) || a > c.c2 * (1.0 + 1e-12)) {
                    ++violations;
                    keep_sample(samples, {{"grid", name}, {"owner", encode(s.id.owner)}, {"scaled_value", a}});
                }
            }
        }
        grids.push_back({{"grid", name}, {"lambda", geo.lambda_min}, {"Lambda", geo.lambda_max}, {"c1", c.c1},
                         {"c2", c.c2}, {"min_scaled", lo}, {"max_scaled", hi}});
    }
    const AmplitudeConstants dy = amplitude_constants(0.5, 0.5);
    const bool dyadic_ok = std::abs(dy.c1 - 0.5) <= 1e-12 && std::abs(dy.c2 - 2.41421) <= 1e-5;
    std::vector<CriterionLine> lines{
        line("C1/|Q|^(1/2) <= |phi_S| <= C2/|Q|^(1/2) at observed (lambda, Lambda)", violations == 0,
             std::to_string(violations) + " violations in " + std::to_string(checks) + " support values"),
        line("dyadic C1 = 0.5, C2 = 2.41421", dyadic_ok, "C1 = " + num(dy.c1) + ", C2 = " + num(dy.c2))};
    return finish("estphi", std::move(lines), json{{"grids", grids}, {"violations", samples}}, t0, o, 0, depth);
}

SuiteResult verify_equivalence(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 200 : o.trials;
    const int depth = o.depth < 0 ? 8 : o.depth;
    const std::vector<BesovParams> configs = o.params ? std::vector<BesovParams>{*o.params} : default_equivalence_configs();

    std::vector<NamedGrid> grids{{"dyadic(" + std::to_string(depth) + ")", share(build_dyadic(depth))}};
    std::mt19937_64 grng = stream(o.seed, 0x4551);
    for (int i = 0; i < 10; ++i) {
        const std::uint64_t s = grng();
        grids.emplace_back("random(seed=" + std::to_string(s) + ",depth=4)", random_grid(s, 4, 2, 4, 0.2, 0.8));
    }
    std::vector<HaarSystem> systems;
    std::vector<GridGeometry> geos;
    for (const auto& [name, g] : grids) {
        systems.emplace_back(g);
        geos.push_back(validate_good(*g));
    }

    struct Stats {
        std::array<int, 4> violations{0, 0, 0, 0};
        std::array<double, 4> max_ratio{0, 0, 0, 0};
        json samples = json::array();
    };
    const int nc = static_cast<int>(configs.size());
    const int ng = static_cast<int>(grids.size());
    std::vector<Stats> stats(nc * ng);
    parallel_for(nc * ng, [&](int task) {
        const int ci = task / ng;
        const int gi = task % ng;
        const GridPtr& g = grids[gi].second;
        Stats& st = stats[task];
        std::mt19937_64 rng = stream(o.seed, 0x4551 + ci, gi);
        for (int t = 0; t < trials; ++t) {
            const LeafFunction f = corpus_function(g, systems[gi], t, rng);
            const NormReport r = norm_report(f, configs[ci], systems[gi], geos[gi]);
            const std::array<bool, 4> ok{r.chain.st_le_haar, r.chain.haar_le_osc, r.chain.osc_le_st, r.chain.embedding};
            const std::array<double, 4> ratio{r.chain.ratio_st_haar, r.chain.ratio_haar_osc, r.chain.ratio_osc_st,
                                              r.chain.ratio_embedding};
            for (int k = 0; k < 4; ++k) {
                st.max_ratio[k] = std::max(st.max_ratio[k], ratio[k]);
                if (!ok[k]) {
                    ++st.violations[k];
                    keep_sample(st.samples, {{"grid", grids[gi].first}, {"params", to_json(configs[ci])},
                                             {"inequality", k}, {"function", to_json(f)}}, 3);
                }
            }
        }
    });

    static const char* names[4] = {"N_st <= C_e N_haar", "N_haar <= C_c2 N_osc", "N_osc <= C_no N_st",
                                   "|f|_p <= C_kt N_st"};
    std::array<int, 4> total{0, 0, 0, 0};
    std::array<double, 4> best{0, 0, 0, 0};
    std::array<std::string, 4> best_config;
    json per_config = json::array();
    json samples = json::array();
    for (int ci = 0; ci < nc; ++ci) {
        std::array<int, 4> v{0, 0, 0, 0};
        std::array<double, 4> m{0, 0, 0, 0};
        for (int gi = 0; gi < ng; ++gi) {
            const Stats& st = stats[ci * ng + gi];
            for (int k = 0; k < 4; ++k) {
                v[k] += st.violations[k];
                m[k] = std::max(m[k], st.max_ratio[k]);
            }
            for (const json& s : st.samples) keep_sample(samples, s);
        }
        json ineq = json::array();
        for (int k = 0; k < 4; ++k) {
            total[k] += v[k];
            if (m[k] > best[k]) {
                best[k] = m[k];
                best_config[k] = configs[ci].to_string();
            }
            ineq.push_back({{"inequality", names[k]}, {"violations", v[k]}, {"max_ratio", m[k]}});
        }
        per_config.push_back({{"params", to_json(configs[ci])}, {"inequalities", ineq}});
    }
    const int chain_violations = total[0] + total[1] + total[2];
    const long evaluations = static_cast<long>(nc) * ng * trials;
    std::vector<CriterionLine> lines{line("norm chain: zero violations", chain_violations == 0,
                                          std::to_string(chain_violations) + " violations in " +
                                              std::to_string(evaluations) + " evaluations")};
    for (int k = 0; k < 3; ++k)
        lines.push_back(line(std::string("tightness within 10x: ") + names[k], best[k] >= 0.1,
                             "best observed lhs/rhs " + num(best[k]) + " at " + best_config[k], false));
    lines.push_back(line("embedding |f|_p <= C_kt N_st: zero violations", total[3] == 0,
                         std::to_string(total[3]) + " violations"));
    const double secs = seconds_since(t0);
    lines.push_back(timing_line("runtime < 60 s", secs, 60.0));
    json grid_names = json::array();
    for (const auto& [name, g] : grids) grid_names.push_back(name);
    return finish("equivalence", std::move(lines),
                  json{{"configs", per_config}, {"grids", grid_names}, {"violations", samples},
                       {"best_ratio", {{"st_haar", best[0]}, {"haar_osc", best[1]}, {"osc_st", best[2]},
                                       {"embedding", best[3]}}}},
                  t0, o, trials, depth);
}

SuiteResult verify_tricks_suite(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 500 : o.trials;
    const TrickReport r = verify_tricks(trials, o.seed);
    json violations = json::array();
    for (const TrickViolation& v : r.violations)
        keep_sample(violations, {{"trick", v.trick}, {"trial", v.trial}, {"exponent", v.t_or_p}, {"q", v.q},
                                 {"lhs", v.lhs}, {"rhs", v.rhs}});
    int fewest = trials > 0 ? INT32_MAX : 0;
    std::string missing;
    for (const char* trick : {"holder", "convolution"})
        for (char c : {'A', 'B', 'C', 'D'}) {
            const std::string key = std::string(trick) + ":" + c;
            const auto it = r.case_checks.find(key);
            const int count = it == r.case_checks.end() ? 0 : it->second;
            if (count < fewest) {
                fewest = count;
                missing = key;
            }
        }
    std::vector<CriterionLine> lines{
        line("conclusions hold with computed constants", r.passed(),
             std::to_string(r.violations.size()) + " violations in " + std::to_string(r.checks) +
                 " checks, max slack " + num(r.max_slack)),
        line("every case A-D of both tricks exercised >= trials times", fewest >= trials,
             "fewest: " + missing + " with " + std::to_string(fewest))};
    return finish("tricks", std::move(lines),
                  json{{"checks", r.checks}, {"max_slack", r.max_slack}, {"case_checks", r.case_checks},
                       {"violations", violations}},
                  t0, o, trials, 0);
}

SuiteResult verify_holder(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 20 : o.trials;
    const int depth = std::min(o.depth < 0 ? 10 : o.depth, 10);
    std::vector<NamedGrid> grids{{"dyadic(" + std::to_string(depth) + ")", share(build_dyadic(depth))},
                                 {"dyadic(" + std::to_string(std::max(1, depth / 2)) + ")",
                                  share(build_dyadic(std::max(1, depth / 2)))}};
    std::mt19937_64 grng = stream(o.seed, 0x484f);
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t s = grng();
        grids.emplace_back("random(seed=" + std::to_string(s) + ")", random_grid(s, std::min(depth, 5), 2, 3, 0.2, 0.8));
    }
    const std::vector<BesovParams> configs =
        o.params ? std::vector<BesovParams>{*o.params}
                 : std::vector<BesovParams>{make_params(0.1, 1.0, Exponent(1.0)), make_params(0.3, 2.0, Exponent(2.0)),
                                            make_params(0.2, 1.5, Exponent::infinity())};
    struct Builtin {
        const char* name;
        double gamma;
    };
    const std::vector<Builtin> builtins{{"linear", 1.0}, {"power(0.6)", 0.6}};

    double recon = 0.0;
    double partial = 0.0;
    int decay_checks = 0;
    int decay_fail = 0;
    double worst_decay = 0.0;
    json samples = json::array();
    for (std::size_t gi = 0; gi < grids.size(); ++gi) {
        const GridPtr& g = grids[gi].second;
        const GridGeometry geo = validate_good(*g);
        const int K = g->depth();
        std::mt19937_64 rng = stream(o.seed, 0x484f, gi);
        std::vector<CellId> cells{{0, 0}};
        const int level = static_cast<int>(rng() % K);
        cells.push_back({level, static_cast<int>(rng() % g->level_size(level))});
        for (const BesovParams& bp : configs) {
            for (const Builtin& b : builtins) {
                if (!(b.gamma > bp.s)) continue;
                for (const double beta : {0.5 * (bp.s + b.gamma), b.gamma}) {
                    for (const CellId q : cells) {
                        LeafFunction phi = sample(g, K, Generator::parse(b.name));
                        const IndexRange r = g->descendants(q, K);
                        Eigen::VectorXd v = Eigen::VectorXd::Zero(phi.values().size());
                        v.segment(r.begin, r.size()) = phi.values().segment(r.begin, r.size());
                        phi = LeafFunction(g, K, v);
                        const AtomicRepresentation rep = holder_to_souza(phi, q, bp, beta, false);
                        recon = std::max(recon, (rep.synthesize(K).values() - v).cwiseAbs().maxCoeff());
                        const HolderDecayCheck chk = holder_decay_check(rep, q, 1.0, b.gamma, geo);
                        ++decay_checks;
                        for (std::size_t L = 0; L < chk.observed.size(); ++L)
                            if (chk.bound[L] > 0) worst_decay = std::max(worst_decay, chk.observed[L] / chk.bound[L]);
                        if (!chk.passed) {
                            ++decay_fail;
                            keep_sample(samples, {{"grid", grids[gi].first}, {"builtin", b.name}, {"beta", beta},
                                                  {"cell", encode(q)}, {"observed", chk.observed}, {"bound", chk.bound}});
                        }
                    }
                }
            }
            for (int t = 0; t < trials; ++t) {
                std::vector<std::pair<double, int>> order;
                for (const Cell& c : g->level(K)) order.emplace_back(c.interval->lo, c.id.index);
                std::sort(order.begin(), order.end());
                std::uniform_real_distribution<double> u(0.0, 1.0);
                Eigen::VectorXd v(g->level_size(K));
                double acc = 0.0;
                for (const auto& [lo, i] : order) v[i] = (acc += u(rng));
                if (t % 2) v = -v;
                const HolderSouzaParts parts = holder_to_souza_parts(LeafFunction(g, K, v), {0, 0}, bp, bp.s + 0.1);
                recon = std::max(recon, (parts.combined().synthesize(K).values() - v).cwiseAbs().maxCoeff());
                const Eigen::VectorXd plus = v.cwiseMax(0.0);
                for (int N = 0; N < K; ++N) {
                    AtomicRepresentation trunc = parts.positive;
                    for (int k = N + 1; k <= K; ++k) trunc.coeffs[k].setZero();
                    const LeafFunction ps = trunc.synthesize(N);
                    for (const Cell& c : g->level(N)) {
                        const IndexRange r = g->descendants(c.id, K);
                        partial = std::max(partial,
                                           std::abs(ps.value(c.id.index) - plus.segment(r.begin, r.size()).minCoeff()));
                    }
                }
            }
        }
    }
    std::vector<CriterionLine> lines{
        line("exact reconstruction within 1e-9", recon <= 1e-9, "max error " + num(recon)),
        line("partial sums equal running cell minima", partial <= 1e-9, "max deviation " + num(partial)),
        line("per-level mass within the geometric decay bound", decay_fail == 0,
             std::to_string(decay_fail) + " failures in " + std::to_string(decay_checks) +
                 " decompositions, worst observed/bound " + num(worst_decay))};
    json names = json::array();
    for (const auto& [name, g] : grids) names.push_back(name);
    return finish("holder", std::move(lines), json{{"grids", names}, {"violations", samples}, {"worst_ratio", worst_decay}},
                  t0, o, trials, depth);
}

SuiteResult verify_transmute(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 20 : o.trials;
    const int depth = o.depth < 0 ? 7 : o.depth;
    std::vector<NamedGrid> grids{{"dyadic(" + std::to_string(depth) + ")", share(build_dyadic(depth))}};
    std::mt19937_64 grng = stream(o.seed, 0x5452);
    for (int i = 0; i < 2; ++i) {
        const std::uint64_t s = grng();
        grids.emplace_back("random(seed=" + std::to_string(s) + ")", random_grid(s, std::min(depth, 4), 2, 3, 0.2, 0.8));
    }
    const std::vector<BesovParams> configs =
        o.params ? std::vector<BesovParams>{*o.params}
                 : std::vector<BesovParams>{make_params(0.3, 1.0, Exponent(1.0)), make_params(0.2, 2.0, Exponent::infinity()),
                                            make_params(0.25, 1.5, Exponent(2.0))};
    const double gamma = 0.6;

    int identity_bad = 0;
    double restrict_diff = 0.0;
    int bound_fail = 0;
    int bound_checks = 0;
    int positivity_fail = 0;
    double synth = 0.0;
    double worst = 0.0;
    json samples = json::array();
    auto note = [&](const TransmutationResult& tr, const std::string& rule, const std::string& grid, bool same_function) {
        ++bound_checks;
        if (same_function) synth = std::max(synth, tr.report.synthesis_error);
        if (tr.report.bound > 0) worst = std::max(worst, tr.report.output_cost / tr.report.bound);
        if (!tr.report.bound_holds) {
            ++bound_fail;
            keep_sample(samples, {{"rule", rule}, {"grid", grid}, {"report", to_json(tr.report)}});
        }
    };
    for (std::size_t gi = 0; gi < grids.size(); ++gi) {
        const GridPtr& g = grids[gi].second;
        const GridGeometry geo = validate_good(*g);
        const int K = g->depth();
        for (std::size_t ci = 0; ci < configs.size(); ++ci) {
            const BesovParams& bp = configs[ci];
            std::mt19937_64 rng = stream(o.seed, 0x5452 + ci, gi);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (int t = 0; t < trials; ++t) {
                AtomicRepresentation rep = AtomicRepresentation::zero(g, bp);
                rep.positive = t % 2 == 0;
                for (int k = 0; k <= K; ++k)
                    for (int i = 0; i < rep.coeffs[k].size(); ++i)
                        if (u(rng) < 0.3) rep.coeffs[k][i] = rep.positive ? u(rng) : 2.0 * u(rng) - 1.0;

                const TransmutationResult id = transmute(rep, identity_rule(0.5));
                if (id.report.output_cost != id.report.input_cost) ++identity_bad;
                note(id, "identity", grids[gi].first, true);

                const int wl = static_cast<int>(rng() % (K + 1));
                const CellId w{wl, static_cast<int>(rng() % g->level_size(wl))};
                const TransmutationResult rr = transmute(rep, restriction_rule(g, w, bp.s, bp.p, geo.lambda_max));
                const AtomicRepresentation direct = restrict(rep, w);
                for (int k = 0; k <= K; ++k)
                    restrict_diff = std::max(restrict_diff, (rr.output.coeffs[k] - direct.coeffs[k]).cwiseAbs().maxCoeff());
                synth = std::max(synth, (rr.output.synthesize(K).values() - direct.synthesize(K).values()).cwiseAbs().maxCoeff());
                if (rep.positive && !rr.report.positive) ++positivity_fail;
                note(rr, "restriction", grids[gi].first, false);

                AtomicRepresentation hold = AtomicRepresentation::zero(g, bp);
                hold.kind = AtomKind::attached;
                hold.positive = true;
                for (int a = 0; a < 4; ++a) {
                    const int level = static_cast<int>(rng() % K);
                    const CellId q{level, static_cast<int>(rng() % g->level_size(level))};
                    if (hold.atoms.count(q)) continue;
                    const Cell& c = g->cell(q);
                    const double scale = u(rng) * std::pow(c.measure, bp.s - 1.0 / bp.p - gamma);
                    Eigen::VectorXd v = Eigen::VectorXd::Zero(g->level_size(K));
                    const IndexRange r = g->descendants(q, K);
                    for (int i = r.begin; i < r.end; ++i) {
                        const Interval iv = *g->cell({K, i}).interval;
                        v[i] = scale * std::pow(0.5 * (iv.lo + iv.hi) - c.interval->lo, gamma);
                    }
                    hold.set(q, u(rng));
                    hold.atoms.emplace(q, LeafFunction(g, K, v));
                }
                const TransmutationResult hr = transmute(hold, holder_rule(bp, gamma, geo, false));
                if (!hr.report.positive) ++positivity_fail;
                note(hr, "holder", grids[gi].first, true);
            }
        }
    }
    std::vector<CriterionLine> lines{
        line("identity rule preserves cost exactly", identity_bad == 0, std::to_string(identity_bad) + " mismatches"),
        line("restriction rule matches restrict within 1e-12", restrict_diff <= 1e-12,
             "max coefficient difference " + num(restrict_diff)),
        line("cost bound holds on every transmuted representation", bound_fail == 0,
             std::to_string(bound_fail) + " failures in " + std::to_string(bound_checks) + ", worst cost/bound " +
                 num(worst)),
        line("synthesis preserved within 1e-9", synth <= 1e-9, "max error " + num(synth)),
        line("positivity preserved by positive rules", positivity_fail == 0,
             std::to_string(positivity_fail) + " failures")};
    return finish("transmute", std::move(lines), json{{"violations", samples}, {"worst_ratio", worst}}, t0, o, trials,
                  depth);
}

SuiteResult verify_variation(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 200 : o.trials;
    std::mt19937_64 rng = stream(o.seed, 0x5641);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<double> betas{1.0, 0.8, 0.5, 1.0 / 3.0, 0.25};
    int mismatches = 0;
    int super_fail = 0;
    json samples = json::array();
    for (int t = 0; t < trials; ++t) {
        const int n = static_cast<int>(rng() % 14);
        std::vector<double> v(n);
        for (double& x : v) x = t % 3 == 0 ? std::round(3.0 * u(rng)) : u(rng);
        const double beta = betas[t % betas.size()];
        const double r = 1.0 / beta;
        double best = 0.0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            double acc = 0.0;
            int last = -1;
            for (int i = 0; i < n; ++i) {
                if (!(mask & (1u << i))) continue;
                if (last >= 0) acc += std::pow(std::abs(v[i] - v[last]), r);
                last = i;
            }
            best = std::max(best, acc);
        }
        const double oracle = std::pow(best, beta);
        const double dp = sequence_variation(v, beta);
        if (dp != oracle) {
            ++mismatches;
            keep_sample(samples, {{"values", v}, {"beta", beta}, {"dp", dp}, {"enumeration", oracle}});
        }
        if (n >= 2) {
            const std::size_t cut = 1 + rng() % (n - 1);
            const std::vector<double> a(v.begin(), v.begin() + cut + 1);
            const std::vector<double> b(v.begin() + cut, v.end());
            if (std::pow(dp, r) < (std::pow(sequence_variation(a, beta), r) + std::pow(sequence_variation(b, beta), r)) *
                                      (1.0 - 1e-12))
                ++super_fail;
        }
    }
    std::vector<CriterionLine> lines{
        line("DP equals exhaustive enumeration (exact)", mismatches == 0,
             std::to_string(mismatches) + " mismatches in " + std::to_string(trials) + " sequences of <= 12 jumps"),
        line("variation^(1/beta) is superadditive over adjacent pieces", super_fail == 0,
             std::to_string(super_fail) + " failures")};
    return finish("variation", std::move(lines), json{{"mismatches", samples}}, t0, o, trials, 0);
}

SuiteResult verify_domains(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 100 : o.trials;
    const int depth = o.depth < 0 ? 10 : o.depth;
    const GridPtr g = share(build_dyadic(depth));
    const GridGeometry geo = validate_good(*g);
    std::vector<BesovParams> configs;
    if (o.params) {
        configs.push_back(*o.params);
    } else {
        for (double s : {0.2, 0.5})
            for (Exponent q : {Exponent(1.0), Exponent(2.0), Exponent::infinity()}) configs.push_back(make_params(s, 1.0, q));
    }
    const int n = 1 << depth;
    int regular_fail = 0;
    int bound_fail = 0;
    int checks = 0;
    double worst = 0.0;
    json samples = json::array();
    std::map<double, std::vector<std::pair<int, int>>> intervals;
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        const BesovParams& bp = configs[ci];
        const ConstantsReport c = equivalence_constants(geo, bp);
        auto& list = intervals[bp.s * bp.p];
        if (list.empty()) {
            std::mt19937_64 rng = stream(o.seed, 0x444f, static_cast<std::uint64_t>(bp.s * bp.p * 1e6));
            while (static_cast<int>(list.size()) < trials) {
                int i = static_cast<int>(rng() % (n + 1));
                int j = static_cast<int>(rng() % (n + 1));
                if (i == j) continue;
                list.emplace_back(std::min(i, j), std::max(i, j));
            }
        }
        for (const auto& [i, j] : list) {
            const double a = static_cast<double>(i) / n;
            const double b = static_cast<double>(j) / n;
            const RegularityReport r = interval_regular_decompose(a, b, *g, 1.0 - bp.s * bp.p);
            ++checks;
            if (!r.passed) {
                ++regular_fail;
                keep_sample(samples, to_json(r));
                continue;
            }
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
            v.segment(i, j - i).setOnes();
            const double lower = bracket_lower(LeafFunction(g, depth, v), bp, c);
            const double bound = indicator_norm_bound(r, bp);
            worst = std::max(worst, lower / bound);
            if (lower > bound * (1.0 + 1e-12)) {
                ++bound_fail;
                keep_sample(samples, {{"a", a}, {"b", b}, {"params", to_json(bp)}, {"lower", lower}, {"bound", bound}});
            }
        }
    }
    std::vector<CriterionLine> lines{
        line("random intervals are (1-sp, 2, 2^(sp-1))-regular", regular_fail == 0,
             std::to_string(regular_fail) + " failures in " + std::to_string(checks) + " intervals"),
        line("bracket_lower(1_Omega) <= indicator norm bound", bound_fail == 0,
             std::to_string(bound_fail) + " failures, worst lower/bound " + num(worst))};
    return finish("domains", std::move(lines), json{{"violations", samples}, {"worst_ratio", worst}}, t0, o, trials,
                  depth);
}

SuiteResult verify_multipliers(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 100 : o.trials;
    const int depth = o.depth < 0 ? 6 : o.depth;
    std::vector<NamedGrid> grids{{"dyadic(" + std::to_string(depth) + ")", share(build_dyadic(depth))}};
    std::mt19937_64 grng = stream(o.seed, 0x4d55);
    const std::uint64_t gs = grng();
    grids.emplace_back("random(seed=" + std::to_string(gs) + ")", random_grid(gs, 4, 2, 3, 0.2, 0.8));
    const std::vector<BesovParams> configs =
        o.params ? std::vector<BesovParams>{*o.params}
                 : std::vector<BesovParams>{make_params(0.3, 1.0, Exponent(1.0)), make_params(0.2, 2.0, Exponent::infinity()),
                                            make_params(0.4, 1.0, Exponent(2.0))};
    int ii_fail = 0;
    int iii_fail = 0;
    int algebra_fail = 0;
    int checks = 0;
    double worst_ii = 0.0;
    double worst_iii = 0.0;
    json samples = json::array();
    for (std::size_t gi = 0; gi < grids.size(); ++gi) {
        const GridPtr& g = grids[gi].second;
        const HaarSystem sys(g);
        const GridGeometry geo = validate_good(*g);
        for (std::size_t ci = 0; ci < configs.size(); ++ci) {
            std::mt19937_64 rng = stream(o.seed, 0x4d55 + ci, gi);
            for (int t = 0; t < trials; ++t) {
                const LeafFunction f = corpus_function(g, sys, t, rng);
                const LeafFunction h = corpus_function(g, sys, t / 5 + 2 * t, rng);
                const MultiplierReport r = pointwise_multiply(f, h, configs[ci], sys, geo);
                ++checks;
                if (r.ii_bound > 0) worst_ii = std::max(worst_ii, r.observed_lower / r.ii_bound);
                if (r.iii_bound > 0) worst_iii = std::max(worst_iii, r.iii_observed / r.iii_bound);
                if (!r.ii_pass) ++ii_fail;
                if (!r.iii_pass) ++iii_fail;
                const Eigen::VectorXd swapped = h.values().cwiseProduct(f.values());
                if (r.product_sup > r.f_sup * r.g_sup || swapped != r.product.values()) ++algebra_fail;
                if (!r.passed()) keep_sample(samples, {{"f", to_json(f)}, {"g", to_json(h)}, {"report", to_json(r)}}, 3);
            }
        }
    }
    std::vector<CriterionLine> lines{
        line("multiplier bound II", ii_fail == 0,
             std::to_string(ii_fail) + " failures in " + std::to_string(checks) + ", worst lower/bound " + num(worst_ii)),
        line("quasi-algebra bound III", iii_fail == 0,
             std::to_string(iii_fail) + " failures, worst observed/bound " + num(worst_iii)),
        line("leafwise product: commutative, |fg|_inf <= |f|_inf |g|_inf", algebra_fail == 0,
             std::to_string(algebra_fail) + " failures")};
    return finish("multipliers", std::move(lines), json{{"violations", samples}}, t0, o, trials, depth);
}

SuiteResult verify_compose(const SuiteOptions& o) {
    const auto t0 = Clock::now();
    const int trials = o.trials < 0 ? 100 : o.trials;
    const int depth = o.depth < 0 ? 6 : o.depth;
    const GridPtr g = share(build_dyadic(depth));
    const HaarSystem sys(g);
    const std::vector<BesovParams> configs =
        o.params ? std::vector<BesovParams>{*o.params}
                 : std::vector<BesovParams>{make_params(0.3, 1.0, Exponent(1.0)), make_params(0.45, 2.0, Exponent::infinity()),
                                            make_params(0.2, 1.5, Exponent(2.0))};
    int fail = 0;
    int cell_fail = 0;
    int checks = 0;
    double worst = 0.0;
    json samples = json::array();
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        std::mt19937_64 rng = stream(o.seed, 0x434f + ci);
        for (int t = 0; t < trials; ++t) {
            const LeafFunction f = corpus_function(g, sys, t, rng) * (0.5 + static_cast<double>(t % 4));
            for (const std::string& name : lipschitz_builtin_names()) {
                const CompositionReport r = left_compose(LipschitzMap::builtin(name), f, configs[ci]);
                ++checks;
                if (r.rhs > 0) worst = std::max(worst, r.lhs / r.rhs);
                if (!r.pass) ++fail;
                cell_fail += r.cell_violations;
                if (!r.passed())
                    keep_sample(samples, {{"builtin", name}, {"params", to_json(configs[ci])}, {"f", to_json(f)},
                                          {"lhs", r.lhs}, {"rhs", r.rhs}}, 3);
            }
        }
    }
    std::vector<CriterionLine> lines{
        line("|g o f|_p + osc(g o f) <= K (|f|_p + osc(f))", fail == 0,
             std::to_string(fail) + " failures in " + std::to_string(checks) + ", worst lhs/rhs " + num(worst)),
        line("per-cell osc_p(g o f, Q) <= K osc_p(f, Q)", cell_fail == 0, std::to_string(cell_fail) + " failing cells")};
    return finish("compose", std::move(lines), json{{"violations", samples}}, t0, o, trials, depth);
}

BenchResult bench_transform(int depth, int repeat, std::uint64_t seed) {
    BenchResult b;
    b.depth = depth;
    b.repeat = repeat;
    const GridPtr g = share(build_dyadic(depth));
    const GridGeometry geo = validate_good(*g);
    std::mt19937_64 rng = stream(seed, 0x4245);
    const LeafFunction f = random_leaves(g, depth, rng);
    const BesovParams bp = make_params(0.3, 2.0, Exponent(2.0));
    double sink = 0.0;
    for (int r = 0; r < repeat; ++r) {
        const auto t0 = Clock::now();
        const HaarSystem sys = build_haar(g);
        const NormReport report = norm_report(f, bp, sys, geo);
        sink += report.n_st;
        b.milliseconds.push_back(1e3 * seconds_since(t0));
    }
    std::vector<double> sorted = b.milliseconds;
    std::sort(sorted.begin(), sorted.end());
    b.median_ms = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    b.report = json{{"depth", depth}, {"leaves", g->level_size(depth)}, {"repeat", repeat},
                    {"milliseconds", b.milliseconds}, {"median_ms", b.median_ms}, {"target_ms", 100.0},
                    {"params", to_json(bp)}, {"n_st", sink / std::max(1, repeat)}};
    return b;
}

std::vector<std::string> suite_names() {
    return {"haar", "dirac", "estphi", "equivalence", "tricks", "holder",
            "transmute", "variation", "domains", "multipliers", "compose"};
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
    static const std::map<std::string, SuiteResult (*)(const SuiteOptions&)> table{
        {"haar", verify_haar},           {"dirac", verify_dirac},         {"estphi", verify_estphi},
        {"equivalence", verify_equivalence}, {"tricks", verify_tricks_suite}, {"holder", verify_holder},
        {"transmute", verify_transmute}, {"variation", verify_variation}, {"domains", verify_domains},
        {"multipliers", verify_multipliers}, {"compose", verify_compose}};
    const auto it = table.find(name);
    if (it == table.end()) throw ParameterError("unknown verification suite: " + name);
    return it->second(options);
}

}  // namespace besov
