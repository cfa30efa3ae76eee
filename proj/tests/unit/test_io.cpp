#include "doctest.h"

#include <filesystem>
#include <memory>

#include "besov/io.hpp"

using namespace besov;

TEST_CASE("grid JSON round trip is canonical") {
    RandomGridOptions o;
    o.min_children = 2;
    o.max_children = 4;
    o.lambda = 0.2;
    o.Lambda = 0.8;
    o.depth = 3;
    o.seed = 9;
    for (const Grid& g : {build_dyadic(3), build_random_good(o)}) {
        const json j = to_json(g);
        const Grid back = grid_from_json(j);
        CHECK(to_json(back).dump() == j.dump());
        CHECK(back.cell_count() == g.cell_count());
    }
    CHECK(to_json(build_dyadic(3))["cells"].size() == 15);
    CHECK(grid_from_json(json{{"kind", "dyadic"}, {"depth", 2}}).cell_count() == 7);
    CHECK_THROWS_AS(grid_from_json(json{{"kind", "hex"}}), IoError);
    CHECK_THROWS_AS(grid_from_json(json{{"kind", "explicit"}, {"cells", json::array({{{"id", 0}}})}}), IoError);
}

TEST_CASE("function, coefficient and representation round trips") {
    const GridPtr g = std::make_shared<const Grid>(build_dyadic(4));
    const LeafFunction f = sample(g, 4, Generator::parse("random_leaf(3)"));
    const LeafFunction f2 = function_from_json(to_json(f));
    CHECK(f2.values() == f.values());

    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "besov_io_test";
    std::filesystem::create_directories(dir);
    write_json_file(dir / "grid.json", to_json(*g));
    json ref{{"grid", "grid.json"}, {"level", 4}, {"values", to_json(f)["values"]}};
    CHECK(function_from_json(ref, dir).values() == f.values());
    CHECK_THROWS_AS(function_from_json(json{{"grid", "missing.json"}, {"level", 0}, {"values", {1.0}}}, dir), IoError);
    CHECK_THROWS_AS(function_from_json(json{{"level", 4}, {"values", {1.0}}}, g), IoError);

    const HaarSystem h = build_haar(g);
    const HaarCoefficients d = analyze(f, h);
    const HaarCoefficients d2 = coefficients_from_json(to_json(d, h, 4), h);
    CHECK(d2.d_root == d.d_root);
    CHECK(d2.d == d.d);

    BesovParams bp;
    bp.s = 0.3;
    bp.p = 2.0;
    bp.q = Exponent::infinity();
    AtomicRepresentation rep = AtomicRepresentation::zero(g, bp);
    rep.set({2, 1}, 0.5);
    rep.kind = AtomKind::attached;
    rep.atoms.emplace(CellId{2, 1}, canonical_souza_atom(g, {2, 1}, 0.3, 2.0, 3));
    const json rj = to_json(rep);
    CHECK(rj["params"]["q"] == "inf");
    const AtomicRepresentation back = representation_from_json(rj, g);
    CHECK(back.coefficient({2, 1}) == 0.5);
    CHECK(back.params.q.is_infinite());
    CHECK(back.synthesize(4).values() == rep.synthesize(4).values());
}
