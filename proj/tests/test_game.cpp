#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hom/oracle.hpp"
#include "hom/solver.hpp"
#include "hom/transforms.hpp"
#include "support.hpp"

using namespace hom;
using namespace hom::testing;

namespace {

bool holds(const std::string& problem, const std::string& term) {
    Problem p = parse_problem(problem);
    Term t = parse_candidate(p, term);
    return Game(TermTree(t), p).verdict();
}

const char* kEx1 = "base o\nconst f : o -> o\nconst a : o\nvar x : ((o -> o) -> o -> o) -> o\n"
                   "eq (\\y1:o -> o y2:o. y1 y2) = f a\n"
                   "eq (\\y3:o -> o y4:o. y3 (y3 y4)) = f (f a)\n";

} // namespace

TEST_CASE("curated solutions win every item") {
    for (const auto& in : curated()) {
        Game g(TermTree(in.term), in.problem);
        CHECK(g.verdict());
        for (bool b : g.item_results()) CHECK(b);
        for (std::size_t i = 0; i < in.problem.items.size(); ++i)
            for (const auto& play : g.plays(static_cast<int>(i))) CHECK(play.exists_wins());
    }
}

TEST_CASE("wrong candidates lose") {
    CHECK(holds(kEx1, "\\z:(o -> o) -> o -> o. z (\\x:o. f x) a"));
    CHECK(!holds(kEx1, "\\z:(o -> o) -> o -> o. z (\\x:o. x) a"));
    CHECK(!holds(kEx1, "\\z:(o -> o) -> o -> o. f a"));
    CHECK(!holds(kEx1, "\\z:(o -> o) -> o -> o. z (\\x:o. f (f x)) a"));
}

TEST_CASE("disequations") {
    std::string base = "base o\nconst f : o -> o\nconst a : o\nvar x : (o -> o) -> o\n"
                       "eq (\\y:o. f y) = f (f a)\n";
    // x = \z. z (f a) and x = \z. f (z a) both solve the equation
    std::string neq = base + "neq (\\y2:o. a) != f a\n";
    CHECK(!holds(neq, "\\z:o -> o. f (z a)"));
    CHECK(holds(neq, "\\z:o -> o. z (f a)"));
    // a disequation the equation already contradicts
    std::string degenerate = base + "neq (\\y3:o. f y3) != f (f a)\n";
    CHECK(!holds(degenerate, "\\z:o -> o. f (z a)"));
    CHECK(!holds(degenerate, "\\z:o -> o. z (f a)"));
}

TEST_CASE("item results separate equations") {
    Problem p = parse_problem(kEx1);
    Term t = parse_candidate(p, "\\z:(o -> o) -> o -> o. z (\\x:o. x) (f a)");
    auto res = Game(TermTree(t), p).item_results();
    REQUIRE(res.size() == 2);
    CHECK(res[0]);
    CHECK(!res[1]);
}

TEST_CASE("example with two plays") {
    auto in = load_instance("examp2", "examp2.hom", "fig3.lam");
    Game g(TermTree(in.term), in.problem);
    auto plays = g.plays(0);
    REQUIRE(plays.size() == 2);
    CHECK(plays[0].choices.size() == 1);
    for (int c = 1; c <= 2; ++c) {
        Play r = g.replay(0, {c});
        const Play& q = plays[static_cast<std::size_t>(c - 1)];
        REQUIRE(r.size() == q.size());
        for (int j = 1; j <= r.size(); ++j) {
            CHECK(r.at(j).node == q.at(j).node);
            CHECK(r.at(j).move == q.at(j).move);
            CHECK(r.at(j).state.str() == q.at(j).state.str());
        }
    }
    Play first = plays[0];
    CHECK(first.last().state.str() == "q[E]");
    CHECK(first.at(7).move == Move::B1);
    CHECK(first.at(7).state.str() == "q[(#c1,#c2,#c3), #c1 #c3]");
}

TEST_CASE("replay defaults missing directions to the first") {
    auto in = load_instance("examp2", "examp2.hom", "fig3.lam");
    Game g(TermTree(in.term), in.problem);
    CHECK(render_trace(g.replay(0, {})) == render_trace(g.replay(0, {1})));
}

TEST_CASE("play counts stay within the branches of the right term") {
    for (const auto& in : curated()) {
        Game g(TermTree(in.term), in.problem);
        for (std::size_t i = 0; i < in.problem.items.size(); ++i)
            CHECK(g.plays(static_cast<int>(i)).size() <=
                  static_cast<std::size_t>(branch_count(in.problem.items[i].rhs)));
    }
}

TEST_CASE("parents are earlier and descend") {
    for (const auto& in : curated()) {
        Game g(TermTree(in.term), in.problem);
        for (const auto& play : all_plays(g)) {
            CHECK(play.at(1).move == Move::Init);
            for (int j = 2; j < play.size(); ++j) {
                int i = parent(play, j);
                CHECK(i >= 1);
                CHECK(i < j);
                CHECK(descendent(play, i, j));
                CHECK(descendent(play, 1, j));
            }
        }
    }
}

TEST_CASE("step agrees with successors") {
    auto in = load_instance("examp1", "examp1.hom", "fig1.lam");
    Game g(TermTree(in.term), in.problem);
    Play play = g.plays(1).at(0);
    for (int j = 1; j < play.size(); ++j) {
        const Position& pos = play.at(j);
        auto succ = g.successors(pos, j, 1);
        REQUIRE(static_cast<int>(succ.size()) == g.branching(pos));
        int c = play.at(j + 1).choice;
        const Position& next = succ.at(static_cast<std::size_t>(c > 0 ? c - 1 : 0));
        CHECK(next.node == play.at(j + 1).node);
        CHECK(next.state.str() == play.at(j + 1).state.str());
    }
}

TEST_CASE("budget is enforced") {
    auto in = load_instance("examp3", "examp3.hom", "fig4.lam");
    Game g(TermTree(in.term), in.problem);
    StepBudget b;
    b.positions_per_play = 10;
    CHECK_THROWS_AS(g.verdict(b), GameError);
    CHECK(!accepts(in.term, in.problem, b));
    CHECK(accepts(in.term, in.problem, StepBudget{}));
}

TEST_CASE("traces are deterministic") {
    for (const auto& in : curated()) {
        Game g1(TermTree(in.term), in.problem);
        Game g2(TermTree(in.term), in.problem);
        for (std::size_t i = 0; i < in.problem.items.size(); ++i) {
            auto a = g1.plays(static_cast<int>(i));
            auto b = g2.plays(static_cast<int>(i));
            REQUIRE(a.size() == b.size());
            for (std::size_t k = 0; k < a.size(); ++k) CHECK(render_trace(a[k], true) == render_trace(b[k], true));
        }
    }
}

TEST_CASE("game agrees with the oracle on curated and mutated terms") {
    for (const auto& in : curated()) {
        CHECK(solves(in.term, in.problem).overall);
        Term d = Term::constant(in.problem.d);
        std::vector<Var> bs = in.term.is_abs() ? in.term.binders() : std::vector<Var>{};
        Term dull = bs.empty() ? d : Term::abs(bs, d);
        CHECK(Game(TermTree(dull), in.problem).verdict() == solves(dull, in.problem).overall);
        CHECK(!solves(dull, in.problem).overall);
    }
}
