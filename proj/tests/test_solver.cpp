#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "hom/oracle.hpp"
#include "hom/solver.hpp"
#include "hom/transforms.hpp"
#include "support.hpp"

using namespace hom;
using namespace hom::testing;

namespace {

std::vector<std::string> shown(const std::vector<Term>& ts) {
    std::vector<std::string> out;
    for (const auto& t : ts) out.push_back(show(t));
    return out;
}

std::vector<Const> ad() { return {Const{"a", Type::base()}, Const{"d", Type::base()}}; }

} // namespace

TEST_CASE("enumeration of a second-order type") {
    Type ty = parse_type("(o -> o) -> o");
    CHECK(shown(terms_of_size(ty, ad(), 0, 6)) == std::vector<std::string>{"\\x1. a", "\\x1. d"});
    CHECK(shown(terms_of_size(ty, ad(), 1, 6)) == std::vector<std::string>{"\\x1. x1 a", "\\x1. x1 d"});
    CHECK(shown(terms_of_size(ty, ad(), 2, 6)) ==
          std::vector<std::string>{"\\x1. x1 (x1 a)", "\\x1. x1 (x1 d)"});
    CHECK(terms_of_size(ty, ad(), 2, 1).empty());
}

TEST_CASE("enumerated terms are typed, sized and distinct") {
    Problem p = load_problem(data_path("examp2.hom"));
    auto alphabet = p.solution_alphabet();
    for (int s = 0; s <= 3; ++s) {
        auto bucket = terms_of_size(p.x.type, alphabet, s, 6);
        std::set<std::string> keys;
        for (const auto& t : bucket) {
            CHECK(t.type() == p.x.type);
            CHECK(is_beta_normal(t));
            CHECK(alpha_equal(eta_long(t), t));
            CHECK(sizes(t).total_tiles == s);
            keys.insert(print_source(t));
        }
        CHECK(keys.size() == bucket.size());
    }
}

TEST_CASE("enumeration visits in nondecreasing size and stops on request") {
    Problem p = load_problem(data_path("examp1.hom"));
    SearchConfig cfg;
    cfg.max_total_tiles = 3;
    int last = 0, seen = 0;
    enumerate_terms(p.x.type, p.solution_alphabet(), cfg, [&](const Term& t) {
        int s = sizes(t).total_tiles;
        CHECK(s >= last);
        last = s;
        return ++seen < 50;
    });
    CHECK(seen == 50);
}

TEST_CASE("a zero cap only tries atomic bodies") {
    Problem p = load_problem(data_path("examp1.hom"));
    SearchConfig cfg;
    cfg.max_total_tiles = 0;
    SolveResult r = solve(p, cfg);
    CHECK(!r.term);
    CHECK(r.tried == p.solution_alphabet().size() - 1);
}

TEST_CASE("solving the curated problems") {
    SearchConfig cfg;
    cfg.max_total_tiles = 4;
    Problem p1 = load_problem(data_path("examp1.hom"));
    SolveResult r1 = solve(p1, cfg);
    REQUIRE(r1.term);
    CHECK(r1.size == 2);
    CHECK(r1.oracle_confirmed);
    CHECK(solves(*r1.term, p1).overall);

    cfg.max_total_tiles = 6;
    Problem p2 = load_problem(data_path("examp2.hom"));
    SolveResult r2 = solve(p2, cfg);
    REQUIRE(r2.term);
    CHECK(r2.size == 2);
    CHECK(r2.oracle_confirmed);
    CHECK(r2.tried == 73);
}

TEST_CASE("unsolvable problems exhaust the caps") {
    Problem p = parse_problem("base o\nconst a : o\nconst b : o\nvar x : (o -> o) -> o\n"
                              "eq (\\y1:o. y1) = a\neq (\\y2:o. y2) = b\n");
    SearchConfig cfg;
    cfg.max_total_tiles = 3;
    SolveResult r = solve(p, cfg);
    CHECK(!r.term);
    CHECK(r.tried > 0);
}

TEST_CASE("bound-derived caps are clipped") {
    Problem p = load_problem(data_path("examp1.hom"));
    SearchConfig cfg;
    cfg.use_bound = true;
    EffectiveCaps c = effective_caps(p, cfg);
    CHECK(c.max_total_tiles == kBoundCap);
    CHECK(!c.note.empty());
    Problem p2 = load_problem(data_path("examp2.hom"));
    EffectiveCaps c2 = effective_caps(p2, cfg);
    CHECK(c2.max_total_tiles == 5);
    CHECK(c2.note.empty());
}

TEST_CASE("planted problems are valid and solved by their seed term") {
    for (int i = 0; i < 50; ++i) {
        Planted pl = random_planted(static_cast<std::uint64_t>(i), 5, 4);
        CHECK(validate(pl.problem).empty());
        CHECK(metrics(pl.problem).delta <= 4);
        CHECK(pl.problem.order() <= 5);
        CHECK(accepts(pl.solution, pl.problem, StepBudget{}));
        CHECK(solves(pl.solution, pl.problem).overall);
    }
    Planted a = random_planted(42, 4, 4, true);
    Planted b = random_planted(42, 4, 4, true);
    CHECK(a.problem.order() == 4);
    CHECK(print_problem(a.problem) == print_problem(b.problem));
    CHECK(alpha_equal(a.solution, b.solution));
}

TEST_CASE("parallel and serial fuzzing agree") {
    FuzzConfig cfg;
    cfg.seed = 77;
    cfg.count = 200;
    FuzzReport par = fuzz(cfg);
    FuzzReport ser = fuzz_serial(cfg);
    CHECK(par.str() == ser.str());
    CHECK(par.pairs == 200);
    CHECK(par.mismatches.empty());
    CHECK(par.errors.empty());
    CHECK(par.agree_true > 0);
    CHECK(par.agree_false > 0);
    CHECK(fuzz(cfg).str() == par.str());
}
