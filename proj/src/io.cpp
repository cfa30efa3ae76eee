#include "besov/io.hpp"

#include <fstream>
#include <sstream>

namespace besov {

namespace {

json vector_to_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vector_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json levels_to_json(const Eigen::VectorXd& v) { return vector_to_json(v); }

template <class F>
auto guarded(const char* what, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed ") + what + ": " + e.what());
    }
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& value) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << value.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

json exponent_to_json(Exponent e) { return e.is_infinite() ? json("inf") : json(e.value()); }

Exponent exponent_from_json(const json& j) {
    if (j.is_string()) return Exponent::parse(j.get<std::string>());
    if (j.is_number()) return Exponent(j.get<double>());
    throw IoError("exponent must be a number or \"inf\"");
}

json to_json(const BesovParams& p) {
    return json{{"s", p.s}, {"p", p.p}, {"q", exponent_to_json(p.q)}};
}

BesovParams params_from_json(const json& j) {
    return guarded("params", [&] {
        BesovParams p;
        p.s = j.at("s").get<double>();
        p.p = exponent_from_json(j.at("p")).value();
        p.q = exponent_from_json(j.at("q"));
        return p;
    });
}

json to_json(const Grid& grid) {
    json cells = json::array();
    std::vector<std::pair<std::uint64_t, json>> sorted;
    for (int k = 0; k <= grid.depth(); ++k) {
        for (const Cell& c : grid.level(k)) {
            json children = json::array();
            for (const Cell& ch : grid.children(c)) children.push_back(encode(ch.id));
            json cell{{"id", encode(c.id)},
                      {"level", c.id.level},
                      {"index", c.id.index},
                      {"measure", c.measure},
                      {"parent", c.parent ? json(encode(*c.parent)) : json(nullptr)},
                      {"children", children}};
            if (c.interval) cell["interval"] = {c.interval->lo, c.interval->hi};
            sorted.emplace_back(encode(c.id), std::move(cell));
        }
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [id, cell] : sorted) cells.push_back(std::move(cell));
    return json{{"kind", grid.kind() == GridKind::dyadic ? "dyadic" : "explicit"},
                {"depth", grid.depth()},
                {"cells", std::move(cells)}};
}

Grid grid_from_json(const json& j) {
    return guarded("grid", [&] {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind != "dyadic" && kind != "explicit") throw IoError("grid kind must be \"dyadic\" or \"explicit\"");
        if (!j.contains("cells")) {
            if (kind != "dyadic") throw IoError("explicit grid without cells");
            return build_dyadic(j.at("depth").get<int>());
        }
        std::map<CellId, json> by_id;
        int depth = 0;
        for (const json& c : j.at("cells")) {
            const CellId id = decode_cell_id(c.at("id").get<std::uint64_t>());
            if (c.contains("level") && c.at("level").get<int>() != id.level)
                throw IoError("cell " + to_string(id) + " has a level that disagrees with its id");
            if (!by_id.emplace(id, c).second) throw IoError("duplicate cell " + to_string(id));
            depth = std::max(depth, id.level);
        }
        std::vector<std::vector<Cell>> levels(depth + 1);
        for (const auto& [id, c] : by_id) {
            if (id.index != static_cast<int>(levels[id.level].size()))
                throw IoError("cell indices of level " + std::to_string(id.level) + " are not contiguous");
            Cell cell;
            cell.id = id;
            cell.measure = c.at("measure").get<double>();
            if (!c.at("parent").is_null()) cell.parent = decode_cell_id(c.at("parent").get<std::uint64_t>());
            const json& ch = c.value("children", json::array());
            cell.child_count = static_cast<int>(ch.size());
            cell.first_child = ch.empty() ? 0 : decode_cell_id(ch.front().get<std::uint64_t>()).index;
            if (c.contains("interval") && !c.at("interval").is_null())
                cell.interval = Interval{c.at("interval").at(0).get<double>(), c.at("interval").at(1).get<double>()};
            levels[id.level].push_back(cell);
        }
        for (int k = 1; k <= depth; ++k) {
            for (Cell& cell : levels[k]) {
                if (!cell.parent) throw IoError("cell " + to_string(cell.id) + " has no parent");
                const CellId parent = *cell.parent;
                if (parent.level != k - 1 || parent.index >= static_cast<int>(levels[k - 1].size()))
                    throw IoError("cell " + to_string(cell.id) + " names a missing parent");
                cell.ordinal = cell.id.index - levels[k - 1][parent.index].first_child;
            }
        }
        return Grid(kind == "dyadic" ? GridKind::dyadic : GridKind::explicit_tree, std::move(levels));
    });
}

json to_json(const LeafFunction& f) {
    return json{{"grid", to_json(f.grid())}, {"level", f.level()}, {"values", vector_to_json(f.values())}};
}

LeafFunction function_from_json(const json& j, const std::filesystem::path& base) {
    return guarded("function", [&] {
        const json& g = j.at("grid");
        GridPtr grid;
        if (g.is_string()) {
            std::filesystem::path p = g.get<std::string>();
            if (p.is_relative()) p = base / p;
            grid = std::make_shared<const Grid>(grid_from_json(read_json_file(p)));
        } else {
            grid = std::make_shared<const Grid>(grid_from_json(g));
        }
        return function_from_json(j, grid);
    });
}

LeafFunction function_from_json(const json& j, GridPtr grid) {
    return guarded("function", [&] {
        const int level = j.at("level").get<int>();
        if (level < 0 || level > grid->depth()) throw IoError("function level outside the grid");
        Eigen::VectorXd v = vector_from_json(j.at("values"));
        if (v.size() != grid->level_size(level)) throw IoError("function has the wrong number of values");
        return LeafFunction(std::move(grid), level, std::move(v));
    });
}

json to_json(const HaarCoefficients& coeffs, const HaarSystem& system, int level) {
    json d = json::array();
    for (int i = 0; i < coeffs.d.size(); ++i) {
        if (coeffs.d[i] == 0.0) continue;
        const PairId id = system.pair(i).id;
        d.push_back({{"pair", {{"owner", encode(id.owner)}, {"index", id.index}}}, {"value", coeffs.d[i]}});
    }
    return json{{"grid", to_json(system.grid())}, {"level", level}, {"d_root", coeffs.d_root}, {"d", std::move(d)}};
}

HaarCoefficients coefficients_from_json(const json& j, const HaarSystem& system) {
    return guarded("coefficients", [&] {
        HaarCoefficients c;
        c.d_root = j.at("d_root").get<double>();
        c.d = Eigen::VectorXd::Zero(system.pair_count());
        for (const json& e : j.at("d")) {
            const json& pid = e.at("pair");
            const PairId id{decode_cell_id(pid.at("owner").get<std::uint64_t>()), pid.at("index").get<int>()};
            c.d[system.global_index(id)] = e.at("value").get<double>();
        }
        return c;
    });
}

json to_json(const AtomicRepresentation& rep) {
    json coeffs = json::array();
    for (int k = 0; k < static_cast<int>(rep.coeffs.size()); ++k)
        for (int i = 0; i < rep.coeffs[k].size(); ++i)
            if (rep.coeffs[k][i] != 0.0) coeffs.push_back({{"cell", encode(CellId{k, i})}, {"value", rep.coeffs[k][i]}});
    json out{{"params", to_json(rep.params)},
             {"kind", rep.kind == AtomKind::souza ? "souza" : "attached"},
             {"coeffs", std::move(coeffs)},
             {"positive", rep.positive}};
    if (rep.kind == AtomKind::attached) {
        json atoms = json::array();
        for (const auto& [id, atom] : rep.atoms)
            atoms.push_back({{"cell", encode(id)}, {"level", atom.level()}, {"values", vector_to_json(atom.values())}});
        out["atoms"] = std::move(atoms);
    }
    return out;
}

AtomicRepresentation representation_from_json(const json& j, GridPtr grid) {
    return guarded("representation", [&] {
        AtomicRepresentation rep = AtomicRepresentation::zero(grid, params_from_json(j.at("params")));
        const std::string kind = j.at("kind").get<std::string>();
        if (kind != "souza" && kind != "attached") throw IoError("representation kind must be souza or attached");
        rep.kind = kind == "souza" ? AtomKind::souza : AtomKind::attached;
        rep.positive = j.value("positive", false);
        for (const json& e : j.at("coeffs")) {
            const CellId id = decode_cell_id(e.at("cell").get<std::uint64_t>());
            (void)grid->cell(id);
            rep.set(id, e.at("value").get<double>());
        }
        if (rep.kind == AtomKind::attached)
            for (const json& a : j.at("atoms")) {
                const CellId id = decode_cell_id(a.at("cell").get<std::uint64_t>());
                json f{{"level", a.at("level")}, {"values", a.at("values")}};
                rep.atoms.emplace(id, function_from_json(f, grid));
            }
        return rep;
    });
}

json to_json(const ConstantsReport& c) {
    return json{{"lambda", c.lambda}, {"Lambda", c.Lambda},   {"params", to_json(c.params)},
                {"c1", c.c1},         {"c2", c.c2},           {"c_e", c.c_e},
                {"c_no", c.c_no},     {"c_kt", c.c_kt},       {"c_co", c.c_co},
                {"root_measure", c.root_measure},             {"level_max_measure", c.level_max_measure}};
}

json to_json(const NormReport& r, const BesovParams& params) {
    return json{{"n_haar", r.n_haar},
                {"n_st", r.n_st},
                {"n_osc", r.n_osc},
                {"lp", r.lp},
                {"bracket", {r.bracket_lower, r.bracket_upper}},
                {"levels", {{"haar", levels_to_json(r.haar_levels)}, {"st", levels_to_json(r.st_levels)},
                            {"osc", levels_to_json(r.osc_levels)}}},
                {"chain", {{"passed", r.chain.passed()},
                           {"ratio_st_haar", r.chain.ratio_st_haar},
                           {"ratio_haar_osc", r.chain.ratio_haar_osc},
                           {"ratio_osc_st", r.chain.ratio_osc_st},
                           {"ratio_embedding", r.chain.ratio_embedding}}},
                {"constants", to_json(r.constants)},
                {"params", to_json(params)}};
}

json to_json(const RegularityReport& r) {
    json families = json::array();
    for (const auto& level : r.families) {
        json ids = json::array();
        for (const CellId id : level) ids.push_back(encode(id));
        families.push_back(std::move(ids));
    }
    return json{{"a", r.a},           {"b", r.b},         {"alpha", r.alpha},   {"K", r.K},
                {"c", r.c},           {"k0", r.k0},       {"measure", r.measure},
                {"families", families}, {"level_sums", r.level_sums}, {"allowed", r.allowed},
                {"tiles", r.tiles},   {"passed", r.passed}};
}

json to_json(const MultiplierReport& r) {
    return json{{"product", to_json(r.product)},
                {"observed_lower", r.observed_lower},
                {"f_st", r.f_st},
                {"g_st", r.g_st},
                {"g_st_critical", r.g_st_critical},
                {"sup", {{"f", r.f_sup}, {"g", r.g_sup}, {"product", r.product_sup}}},
                {"ii", {{"constant", r.ii_constant}, {"bound_value", r.ii_bound}, {"pass", r.ii_pass}}},
                {"iii", {{"observed", r.iii_observed}, {"bound_value", r.iii_bound}, {"pass", r.iii_pass}}},
                {"pass", r.passed()}};
}

json to_json(const CompositionReport& r) {
    return json{{"composed", to_json(r.composed)}, {"lhs", r.lhs},
                {"rhs", r.rhs},                    {"cells_checked", r.cells_checked},
                {"cell_violations", r.cell_violations}, {"max_cell_ratio", r.max_cell_ratio},
                {"pass", r.passed()}};
}

json to_json(const TransmutationReport& r) {
    return json{{"input_cost", r.input_cost}, {"output_cost", r.output_cost}, {"c_co2", r.c_co2},
                {"bound", r.bound},           {"bound_holds", r.bound_holds}, {"synthesis_error", r.synthesis_error},
                {"positive", r.positive}};
}

json to_json(const BesovAtomReport& r) {
    return json{{"supported", r.supported}, {"bracket", {r.lower, r.upper}}, {"c_ba", r.c_ba},
                {"bound", r.bound},         {"verdict", to_string(r.verdict)}};
}

}  // namespace besov
