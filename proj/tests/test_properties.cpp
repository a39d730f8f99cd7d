#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hom/oracle.hpp"
#include "hom/solver.hpp"
#include "hom/tiletree.hpp"
#include "hom/transforms.hpp"
#include "support.hpp"

using namespace hom;
using namespace hom::testing;

namespace {

std::string report(const PropertyReport& r) {
    std::string out;
    for (const auto& [k, n] : r.violations) out += k + ": " + std::to_string(n) + " (" + r.first.at(k) + "); ";
    return out;
}

} // namespace

TEST_CASE("play properties on random planted solutions") {
    for (int order : {3, 4, 5}) {
        PropertyReport r;
        for (int i = 0; i < 60; ++i) {
            Planted pl = random_planted(20000 + 100 * static_cast<std::uint64_t>(order) + static_cast<std::uint64_t>(i),
                                        order, 4, true);
            TermTree t(pl.solution);
            Game g(t, pl.problem);
            check_properties(t, all_plays(g), r);
        }
        INFO("order " << order << ": " << report(r));
        CHECK(r.total() == 0);
        CHECK(r.plays >= 60);
    }
}

TEST_CASE("play properties on random candidates") {
    // properties of plays hold whether or not the candidate is a solution
    PropertyReport r;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 80; ++i) {
        Planted pl = random_planted(30000 + static_cast<std::uint64_t>(i), 5, 4);
        Term t = random_term(rng, pl.problem.x.type, pl.problem.solution_alphabet(), 3);
        TermTree tree(t);
        Game g(tree, pl.problem);
        check_properties(tree, all_plays(g), r);
    }
    INFO(report(r));
    CHECK(r.total() == 0);
}

TEST_CASE("game and oracle agree on further seeds") {
    for (std::uint64_t seed : {1000u, 2000u, 3000u}) {
        FuzzConfig cfg;
        cfg.seed = seed;
        cfg.count = 150;
        FuzzReport r = fuzz(cfg);
        INFO(r.str());
        CHECK(r.mismatches.empty());
        CHECK(r.errors.empty());
    }
}

TEST_CASE("every shrinking step keeps the verdict") {
    for (int i = 0; i < 60; ++i) {
        Planted pl = random_planted(40000 + static_cast<std::uint64_t>(i), 2 + i % 4, 4);
        ShrinkResult r = shrink(pl.solution, pl.problem);
        for (const auto& s : r.steps) {
            CHECK(s.verdict);
            CHECK(solves(s.result, pl.problem).overall);
        }
        CHECK(sizes(r.term).total_tiles <= sizes(pl.solution).total_tiles);
    }
}

TEST_CASE("special occurrences are few") {
    for (int i = 0; i < 80; ++i) {
        Planted pl = random_planted(50000 + static_cast<std::uint64_t>(i), 3 + i % 3, 4);
        TermTree t(pl.solution);
        Game g(t, pl.problem);
        TreeOfTiles tt = tree_of_tiles(t, all_plays(g));
        int nri = 0, fin = 0, sep = 0;
        for (const auto& o : tt.occ) {
            nri += o.flags.nri;
            fin += o.flags.final;
            sep += o.flags.separator;
        }
        Metrics m = metrics(pl.problem);
        INFO("seed " << 50000 + i << " nri " << nri << " final " << fin << " separators " << sep << " delta "
                     << m.delta << " p " << m.p);
        CHECK(nri <= m.delta);
        CHECK(fin <= m.p);
        CHECK(sep <= m.p - 1);
    }
}
