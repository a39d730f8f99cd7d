#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hom/tiletree.hpp"
#include "hom/transforms.hpp"
#include "support.hpp"

using namespace hom;
using namespace hom::testing;

TEST_CASE("trace of the first play of the order three example") {
    auto in = load_instance("examp2", "examp2.hom", "fig3.lam");
    Game g(TermTree(in.term), in.problem);
    CHECK(render_trace(g.replay(0, {1})) == R"(1	1	init	q[(\z. z), f (\x1 x2 x3. x1 x3) a]
2	2	A3	q[\z. z, f (\x1 x2 x3. x1 x3) a]
3	3	C4	q[(), f (\x1 x2 x3. x1 x3) a]
4	4	A3	q[\z. z, f (\x1 x2 x3. x1 x3) a]
5	5	C4	q[(), f (\x1 x2 x3. x1 x3) a]
6	6	A2	q[-, f (\x1 x2 x3. x1 x3) a]
7	7	B1	q[(#c1,#c2,#c3), #c1 #c3]	1
8	8	A3	q[#c1, #c1 #c3]
9	9	C2	q[(), #c3]
10	10	A3	q[\z. z, #c3]
11	11	C4	q[(), #c3]
12	12	A3	q[#c3, #c3]
13	12	C1	q[E]
)");
}

TEST_CASE("trace of the second play of the order three example") {
    auto in = load_instance("examp2", "examp2.hom", "fig3.lam");
    Game g(TermTree(in.term), in.problem);
    CHECK(render_trace(g.replay(0, {2})) == R"(1	1	init	q[(\z. z), f (\x1 x2 x3. x1 x3) a]
2	2	A3	q[\z. z, f (\x1 x2 x3. x1 x3) a]
3	3	C4	q[(), f (\x1 x2 x3. x1 x3) a]
4	4	A3	q[\z. z, f (\x1 x2 x3. x1 x3) a]
5	5	C4	q[(), f (\x1 x2 x3. x1 x3) a]
6	6	A2	q[-, f (\x1 x2 x3. x1 x3) a]
7	13	B1	q[(), a]	2
8	14	A3	q[\z. z, a]
9	15	C4	q[(), a]
10	16	A1	q[E]
)");
}

TEST_CASE("bound reports") {
    CHECK(render_bounds(bounds(load_problem(data_path("examp1.hom")))) == R"(order	4
n	2
delta	3
alpha	2
p	2
g(1)	1
g(2)	3
N(n)	28
third-order bound	6
fifth-order bound (k=1)	9
general bound	1011
)");
    CHECK(render_bounds(bounds(load_problem(data_path("examp2.hom")))) == R"(order	3
n	1
delta	2
alpha	3
p	2
g(1)	1
N(n)	6
third-order bound	5
fifth-order bound (k=1)	9
general bound	49
)");
}

TEST_CASE("tile dump of the order three example") {
    auto in = load_instance("examp2", "examp2.hom", "fig3.lam");
    TermTree t(in.term);
    Game g(t, in.problem);
    CHECK(dump_tiles(tree_of_tiles(t, all_plays(g)), t) == R"(id	root	tile	class	level	family	plays	special
t0	2	y(\)	top end 1-end	1	t0	p0:(2,3) p1:(2,3)	-
t1	4	y(\)	top embedded end 1-end	1	t1	p0:(4,5) p1:(4,5)	-
t2	6	f(\x z1 z2, \)	constant 2-end	-	t2	p0:(6,7) p1:(6,7)	nri separator
t3	8	x(\)	constant end 1-end	-	t2	p0:(8,9)	nri
t4	10	y(\)	top embedded end 1-end	1	t4	p0:(10,11)	-
t5	12	z2	constant end	-	t2	p0:(12,13)	final
t6	14	y(\)	top embedded end 1-end	1	t6	p1:(8,9)	-
t7	16	a	constant end	-	t7	p1:(10,10)	final
)");
}

TEST_CASE("tables along the first play") {
    auto in = load_instance("examp2", "examp2.hom", "fig3.lam");
    Game g(TermTree(in.term), in.problem);
    Play play = g.replay(0, {1});
    CHECK(render_theta(play.at(1).theta) == "{}");
    CHECK(render_xi(play.at(1).xi) == "{}");
    // variable ids depend on allocation order; entries and positions do not
    std::string th = render_theta(play.at(12).theta);
    for (const char* e : {"\\z. z@1/", "#c1@7/", "#c2@7/", "#c3@7/"}) CHECK(th.find(e) != std::string::npos);
    CHECK(render_xi(play.at(12).xi).rfind("{(5)@4/", 0) == 0);
}
