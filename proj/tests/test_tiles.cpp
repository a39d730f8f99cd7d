#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hom/partition.hpp"
#include "hom/solver.hpp"
#include "hom/tiletree.hpp"
#include "hom/transforms.hpp"
#include "support.hpp"

using namespace hom;
using namespace hom::testing;

namespace {

std::vector<std::tuple<NodeId, int, int>> stage_rows(const PPartition& pp) {
    std::vector<std::tuple<NodeId, int, int>> out;
    for (const auto& s : pp.stages) out.emplace_back(s.tile, s.interval.first, s.interval.last);
    return out;
}

} // namespace

TEST_CASE("simple tiles are rooted at non-lambda nodes") {
    auto in = load_instance("examp1", "examp1.hom", "fig1.lam");
    TermTree t(in.term);
    auto tiles = simple_tiles(t);
    std::vector<NodeId> roots;
    for (const auto& tile : tiles) roots.push_back(tile.root);
    CHECK(roots == std::vector<NodeId>{2, 4, 6, 8, 10, 12, 14, 16, 18, 20});
    Tile z6 = simple_tile_at(t, 6);
    CHECK(z6.leaves == std::vector<NodeId>{7, 9});
    CHECK(TileShape::simple(t, 6).str() == "z(\\u, \\)");
}

TEST_CASE("classification of the first example") {
    auto in = load_instance("examp1", "examp1.hom", "fig1.lam");
    TermTree t(in.term);
    Game g(t, in.problem);
    auto plays = all_plays(g);
    Tile z6 = simple_tile_at(t, 6);
    TileClass c = classify(t, z6);
    CHECK(c.is_top);
    CHECK(c.is_embedded);
    CHECK(!c.is_constant);
    CHECK(c.j_end == std::set<int>{1, 2});
    CHECK(c.level == 1);
    CHECK(is_j_directed(plays, t, z6, 1));
    CHECK(!is_j_directed(plays, t, z6, 2));

    TileClass top = classify(t, simple_tile_at(t, 2));
    CHECK(top.is_top);
    CHECK(!top.is_embedded);
    CHECK(top.j_end == std::set<int>{2});
    CHECK(immediate_dependents(t, simple_tile_at(t, 2), 1) == std::vector<NodeId>{8});

    TileClass x8 = classify(t, simple_tile_at(t, 8));
    CHECK(x8.level == 2);
    CHECK(x8.is_end);
    CHECK(binding_tile(t, 8) == NodeId{2});
    CHECK(same_family(t, 2, 8));
    CHECK(!same_family(t, 2, 12));

    TileClass f4 = classify(t, simple_tile_at(t, 4));
    CHECK(f4.is_constant);
    CHECK(!f4.level);
}

TEST_CASE("b-partitions along the order five play") {
    auto in = load_instance("examp3", "examp3.hom", "fig4.lam");
    Game g(TermTree(in.term), in.problem);
    Play play = g.plays(0).at(0);
    CHECK(b_partition(play, 15) == std::vector<Interval>{{1, 1}, {2, 3}, {4, 5}, {6, 15}});
    CHECK(b_partition(play, 31) == std::vector<Interval>{{1, 1}, {2, 3}, {4, 21}, {22, 31}});
    Variation v = vary_at(play, 15, 31);
    CHECK(v.tile == 4);
}

TEST_CASE("p-partition of the two-play example") {
    auto in = load_instance("examp2", "examp2.hom", "fig3.lam");
    TermTree t(in.term);
    Game g(t, in.problem);
    auto plays = g.plays(0);
    auto r0 = stage_rows(p_partition(plays[0], t));
    CHECK(r0 == std::vector<std::tuple<NodeId, int, int>>{{2, 2, 3}, {4, 4, 5}, {6, 6, 7}, {8, 8, 9}, {10, 10, 11}, {12, 12, 13}});
    auto r1 = stage_rows(p_partition(plays[1], t));
    CHECK(r1 == std::vector<std::tuple<NodeId, int, int>>{{2, 2, 3}, {4, 4, 5}, {6, 6, 7}, {14, 8, 9}, {16, 10, 10}});
}

TEST_CASE("third-order partitions agree with the general construction") {
    auto in = load_instance("examp2", "examp2.hom", "fig3.lam");
    TermTree t(in.term);
    Game g(t, in.problem);
    for (const auto& play : g.plays(0)) {
        PPartition a = p_partition(play, t);
        PPartition b = p_partition_third_order(play, t);
        CHECK(stage_rows(a) == stage_rows(b));
        CHECK(a.tags == b.tags);
    }
    int compared = 0;
    for (int i = 0; i < 40; ++i) {
        Planted pl = random_planted(700 + static_cast<std::uint64_t>(i), 3, 4, true);
        TermTree tt(pl.solution);
        Game gg(tt, pl.problem);
        for (const auto& play : all_plays(gg)) {
            PPartition a = p_partition(play, tt);
            PPartition b = p_partition_third_order(play, tt);
            CHECK(stage_rows(a) == stage_rows(b));
            ++compared;
        }
    }
    CHECK(compared > 40);
}

TEST_CASE("special occurrences") {
    auto in = load_instance("examp2", "examp2.hom", "fig3.lam");
    TermTree t(in.term);
    Game g(t, in.problem);
    TreeOfTiles tt = tree_of_tiles(t, all_plays(g));
    REQUIRE(tt.occ.size() == 8);
    CHECK(tt.at(2).flags.nri);
    CHECK(tt.at(2).flags.separator);
    CHECK(tt.at(3).flags.nri);
    CHECK(tt.at(5).flags.final);
    CHECK(tt.at(7).flags.final);
    for (int o : {0, 1, 4, 6}) CHECK(!tt.at(o).flags.special());
    // the two plays share the first three stages
    CHECK(tt.at(2).plays.size() == 2);
    CHECK(tt.at(3).plays.size() == 1);
}

TEST_CASE("unfolding blockers") {
    auto in = load_instance("examp1", "examp1.hom", "fig1.lam");
    TermTree t(in.term);
    Game g(t, in.problem);
    TreeOfTiles upper = tree_of_tiles(t, {g.plays(1).at(0)});
    CHECK(!unfold_blocker(upper, 4, 7));
    CHECK(unfoldable_at(upper, 4, 7));
    // a tile cannot be unfolded at a tile that does not depend on it
    CHECK(unfold_blocker(upper, 4, 2));
    CHECK(unfold_blocker(upper, 0, 0));
    CHECK_THROWS_AS(unfold(upper, 4, 2), NotUnfoldable);
    TreeOfTiles lower = unfold(upper, 4, 7);
    CHECK(lower.occ.size() == upper.occ.size());
    CHECK(lower.at(7).unfolded);
}

TEST_CASE("saturation and extraction keep the verdict") {
    for (const auto& in : curated()) {
        TermTree t(in.term);
        Game g(t, in.problem);
        TreeOfTiles tt = tree_of_tiles(t, all_plays(g));
        SaturationReport r = saturate_unfolding(tt);
        CHECK(r.subterm_property);
        CHECK(subterm_property(r.tree));
        Term e = extract(r.tree, in.problem);
        CHECK(Game(TermTree(e), in.problem).verdict());
    }
}

TEST_CASE("tile dumps are stable") {
    auto in = load_instance("examp3", "examp3.hom", "fig4.lam");
    TermTree t(in.term);
    Game g(t, in.problem);
    auto plays = all_plays(g);
    CHECK(dump_tiles(tree_of_tiles(t, plays), t) == dump_tiles(tree_of_tiles(t, plays), t));
}
