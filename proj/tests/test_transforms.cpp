#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hom/oracle.hpp"
#include "hom/solver.hpp"
#include "hom/transforms.hpp"
#include "support.hpp"

using namespace hom;
using namespace hom::testing;

namespace {

TransformError::Kind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const TransformError& e) {
        return e.kind();
    }
    FAIL("no transform error");
    return TransformError::Kind::NotApplicable;
}

} // namespace

TEST_CASE("size measures") {
    auto in = load_instance("examp1", "examp1.hom", "fig1.lam");
    SizeMeasures s = sizes(in.term);
    CHECK(s.total_tiles == 5);
    CHECK(s.depth_tiles >= 1);
    CHECK(s.depth_tiles <= s.total_tiles);
    Term small = parse_term("\\z:(o -> o) -> o -> o. z (\\x:o. f x) a", in.problem.constants);
    CHECK(sizes(small).total_tiles == 2);
    CHECK(sizes(Term::abs(small.binders(), Term::constant(in.problem.d))).total_tiles == 0);
}

TEST_CASE("T1 refuses visited and non-applicable roots") {
    auto in = load_instance("examp1", "examp1.hom", "fig1.lam");
    TermTree t(in.term);
    CHECK(kind_of([&] { t1_apply(t, in.problem, 2); }) == TransformError::Kind::NotAvoided);
    CHECK(kind_of([&] { t1_apply(t, in.problem, 1); }) == TransformError::Kind::NotApplicable);
    // b is a ground constant, outside the scope of T1
    CHECK(kind_of([&] { t1_apply(t, in.problem, 10); }) == TransformError::Kind::NotApplicable);
}

TEST_CASE("T1 replaces an avoided subtree by d") {
    Problem p = parse_problem("base o\nconst f : o -> o\nconst a : o\nvar x : (o -> o) -> (o -> o) -> o\n"
                              "eq (\\y1:o. f a) (\\y2:o. y2) = f a\n");
    Term t = parse_candidate(p, "\\u:o -> o v:o -> o. u (v a)");
    TermTree tree(t);
    CHECK(Game(tree, p).verdict());
    CHECK(kind_of([&] { t1_apply(tree, p, 2); }) == TransformError::Kind::NotAvoided);
    Term r = t1_apply(tree, p, 4);
    CHECK(show(r) == "\\u v. u d");
    CHECK(Game(TermTree(r), p).verdict());
}

TEST_CASE("T2 excises an end tile") {
    auto in = load_instance("examp1", "examp1.hom", "fig1.lam");
    TermTree t(in.term);
    Term r = t2_apply(t, in.problem, 6, 1);
    CHECK(sizes(r).total_tiles == 4);
    CHECK(Game(TermTree(r), in.problem).verdict());
    CHECK(solves(r, in.problem).overall);
    CHECK(kind_of([&] { t2_apply(t, in.problem, 2, 1); }) == TransformError::Kind::PreconditionFailed);
    CHECK(kind_of([&] { t2_apply(t, in.problem, 3, 1); }) == TransformError::Kind::NotApplicable);
}

TEST_CASE("shrinking reaches a fixpoint") {
    for (const auto& in : curated()) {
        ShrinkResult r = shrink(in.term, in.problem);
        CHECK(Game(TermTree(r.term), in.problem).verdict());
        CHECK(solves(r.term, in.problem).overall);
        int last = sizes(in.term).total_tiles;
        for (const auto& s : r.steps) {
            CHECK(s.verdict);
            CHECK(s.before == last);
            CHECK(s.after < s.before);
            CHECK(sizes(s.result).total_tiles == s.after);
            last = s.after;
        }
        ShrinkResult again = shrink(r.term, in.problem);
        CHECK(again.steps.empty());
        CHECK(alpha_equal(again.term, r.term));
    }
}

TEST_CASE("shrinking needs a solution") {
    auto in = load_instance("examp1", "examp1.hom", "fig1.lam");
    Term bad = parse_term("\\z:(o -> o) -> o -> o. z (\\x:o. x) a", in.problem.constants);
    CHECK(kind_of([&] { shrink(bad, in.problem); }) == TransformError::Kind::PreconditionFailed);
}

TEST_CASE("step log format") {
    auto in = load_instance("examp1", "examp1.hom", "fig1.lam");
    ShrinkResult r = shrink(in.term, in.problem);
    CHECK(render_steps(r.steps) == "1\tT2\t6.1\t5\t4\n2\tT2\t10.2\t4\t3\n3\tT2\t8.2\t3\t2\n");
}

TEST_CASE("tower function") {
    CHECK(g_value(2, 1) == 1u);
    CHECK(g_value(2, 2) == 3u);
    CHECK(g_value(2, 3) == 27u);
    CHECK(g_value(2, 4) == 7625597484987u);
    CHECK(!g_value(2, 5));
    CHECK(g_value(0, 7) == 1u);
    CHECK(bounded_str(g_value(2, 5)) == "exceeds 2^64");
    CHECK(bounded_str(g_value(2, 3)) == "27");
}

TEST_CASE("bounds of the curated problems") {
    BoundReport r1 = bounds(load_problem(data_path("examp1.hom")));
    CHECK(r1.order == 4);
    CHECK(r1.order_n == 2);
    CHECK(r1.N_n == 28u);
    CHECK(r1.third_order_bound == 6u);
    CHECK(r1.general_bound == 1011u);
    BoundReport r2 = bounds(load_problem(data_path("examp2.hom")));
    CHECK(r2.third_order_bound == 5u);
    BoundReport r5 = bounds(load_problem(data_path("examp3.hom")), 2);
    CHECK(r5.order == 5);
    CHECK(r5.top_tiles == 2);
}

TEST_CASE("atomic right terms bound the size by 2p - 1") {
    Problem p = parse_problem("base o\nconst a : o\nconst b : o\nvar x : (o -> o) -> (o -> o) -> o\n"
                              "eq (\\y1:o. y1) (\\y2:o. b) = a\neq (\\y3:o. b) (\\y4:o. y4) = a\n");
    BoundReport r = bounds(p);
    CHECK(r.delta == 0);
    CHECK(r.p == 2);
    CHECK(r.third_order_bound == 3u);
}

TEST_CASE("shrinking planted third-order solutions respects the bound") {
    for (int i = 0; i < 30; ++i) {
        Planted pl = random_planted(300 + static_cast<std::uint64_t>(i), 3, 4, true);
        ShrinkResult r = shrink(pl.solution, pl.problem);
        Metrics m = metrics(pl.problem);
        CHECK(sizes(r.term).total_tiles <= m.delta + 2 * m.p - 1);
        CHECK(accepts(r.term, pl.problem, StepBudget{}));
    }
}
