#include "support.hpp"

#include <algorithm>
#include <set>

#include "hom/tiles.hpp"
#include "hom/transforms.hpp"

namespace hom::testing {

std::string data_path(const std::string& name) { return std::string(HOM_DATA_DIR) + "/" + name; }

Instance load_instance(const std::string& name, const std::string& problem, const std::string& term) {
    Problem p = load_problem(data_path(problem));
    Term t = load_candidate(p, data_path(term));
    return {name, std::move(p), std::move(t)};
}

std::vector<Instance> curated() {
    return {load_instance("examp1", "examp1.hom", "fig1.lam"), load_instance("examp2", "examp2.hom", "fig3.lam"),
            load_instance("examp3", "examp3.hom", "fig4.lam")};
}

void PropertyReport::add(const std::string& kind, const std::string& msg) {
    if (violations[kind]++ == 0) first[kind] = msg;
}

int PropertyReport::total() const {
    int n = 0;
    for (const auto& [k, v] : violations) n += v;
    return n;
}

namespace {

std::string at(const Play& play, int j) { return "item " + std::to_string(play.item + 1) + " position " + std::to_string(j); }

// parent candidates read off the tables, independently of the stored field
std::vector<int> child_of(const TermTree& t, const Play& play, int j) {
    const Position& pos = play.at(j);
    switch (pos.move) {
    case Move::A2:
    case Move::B1:
    case Move::C2:
    case Move::C3:
        return {j - 1};
    case Move::A3: {
        const auto* e = pos.theta.find(t.at(pos.node).var.id);
        if (!e) return {};
        return {e->pos};
    }
    case Move::C4: {
        const State& prev = play.at(j - 1).state;
        if (prev.kind != StateKind::Value) return {};
        Term body = prev.left.is_abs() ? prev.left.body() : prev.left;
        if (!body.head().is_var()) return {};
        const auto* e = pos.xi.find(body.head().as_var().id);
        if (!e) return {};
        return {e->pos};
    }
    default:
        return {};
    }
}

void check_child(const TermTree& t, const Play& play, int j, PropertyReport& r) {
    auto cands = child_of(t, play, j);
    if (cands.size() != 1 || cands[0] < 1 || cands[0] >= j) {
        r.add("parent uniqueness", at(play, j) + ": no unique earlier parent");
        return;
    }
    int i = cands[0];
    if (i != play.at(j).parent) r.add("parent uniqueness", at(play, j) + ": stored parent differs");
    const Position& pj = play.at(j);
    const Position& pi = play.at(i);
    if (pj.move == Move::A3) {
        auto site = t.binder_site(t.at(pj.node).var.id);
        if (!site || site->first != pi.node) r.add("parent uniqueness", at(play, j) + ": parent is not at the binder");
    }
    if (pj.move == Move::C4) {
        const auto& succ = t.at(pi.node).succ;
        if (std::find(succ.begin(), succ.end(), pj.node) == succ.end())
            r.add("parent uniqueness", at(play, j) + ": node is not a successor of the parent's");
    }
    if (!extends(pj.theta, pi.theta) || !extends(pj.xi, pi.xi))
        r.add("table extension", at(play, j) + " does not extend its parent " + std::to_string(i));
}

void check_binders(const TermTree& t, const Play& play, int j, PropertyReport& r) {
    const Position& pos = play.at(j);
    if (pos.state.is_final()) return;
    auto sub = t.subtree(pos.node);
    std::set<NodeId> inside(sub.begin(), sub.end());
    for (NodeId n : sub) {
        const TreeNode& node = t.at(n);
        if (node.label == Label::Lambda)
            for (const auto& b : node.binders)
                if (pos.theta.find(b.id)) r.add("binder definedness", at(play, j) + ": theta defines bound " + b.name);
        if (node.label == Label::Var) {
            auto site = t.binder_site(node.var.id);
            bool free_here = !site || !inside.count(site->first);
            if (free_here && !pos.theta.find(node.var.id))
                r.add("binder definedness", at(play, j) + ": theta misses free " + node.var.name);
        }
    }
    std::vector<Term> lefts = pos.state.lefts;
    if (pos.state.kind == StateKind::Value) lefts.push_back(pos.state.left);
    for (const auto& l : lefts) {
        std::vector<Var> fv, bv;
        free_vars(l, fv);
        bound_vars(l, bv);
        for (const auto& v : fv)
            if (!pos.xi.find(v.id)) r.add("binder definedness", at(play, j) + ": xi misses free " + v.name);
        for (const auto& v : bv)
            if (pos.xi.find(v.id)) r.add("binder definedness", at(play, j) + ": xi defines bound " + v.name);
    }
}

void check_tiles(const TermTree& t, const Play& play, PropertyReport& r) {
    for (const Tile& tile : simple_tiles(t)) {
        TileClass c = classify(t, tile);
        auto tps = plays_on(play, t, tile);
        for (const auto& tp : tps) {
            if (c.is_constant && tp.j != tp.i + 1)
                r.add("constant-tile plays", at(play, tp.i) + ": play on tile " + std::to_string(tile.root) +
                                                 " spans " + std::to_string(tp.j - tp.i + 1) + " positions");
            if (c.j_end.count(tp.m)) {
                // no other play on the tile from the same position ends later
                bool later = std::any_of(tps.begin(), tps.end(),
                                         [&](const TilePlay& o) { return o.i == tp.i && o.j > tp.j; });
                if (later)
                    r.add("end-tile single play", at(play, tp.i) + ": tile " + std::to_string(tile.root) +
                                                      " has a later play after its end play");
            }
        }
    }
}

void check_b_partition(const TermTree& t, const Play& play, int j, PropertyReport& r) {
    NodeId n = play.at(j).node;
    if (!t.is_lambda(n)) return;
    std::vector<NodeId> branch;
    for (NodeId c = n; c != 0; c = t.at(c).parent) branch.push_back(c);
    std::reverse(branch.begin(), branch.end());
    std::vector<std::pair<NodeId, NodeId>> tiles; // root, leaf on the branch
    for (std::size_t k = 0; k + 1 < branch.size(); ++k)
        if (!t.is_lambda(branch[k])) tiles.emplace_back(branch[k], branch[k + 1]);
    auto bp = b_partition(play, j);
    auto again = b_partition(play, j);
    std::string where = at(play, j);
    if (bp != again) r.add("b-partition uniqueness", where + ": not deterministic");
    if (bp.empty() || bp.front() != Interval{1, 1} || bp.back().last != j || bp.size() != tiles.size() + 1) {
        r.add("b-partition uniqueness", where + ": wrong shape");
        return;
    }
    for (std::size_t k = 1; k < bp.size(); ++k) {
        if (bp[k].first != bp[k - 1].last + 1 || bp[k].first > bp[k].last)
            r.add("b-partition uniqueness", where + ": intervals not consecutive");
        if (play.at(bp[k].first).node != tiles[k - 1].first || play.at(bp[k].last).node != tiles[k - 1].second)
            r.add("b-partition uniqueness", where + ": interval " + std::to_string(k) + " off its tile");
    }
}

} // namespace

void check_properties(const TermTree& t, const std::vector<Play>& plays, PropertyReport& r) {
    for (const Play& play : plays) {
        ++r.plays;
        for (int j = 1; j <= play.size(); ++j) {
            ++r.positions;
            if (j > 1 && j < play.size()) check_child(t, play, j, r);
            check_binders(t, play, j, r);
            check_b_partition(t, play, j, r);
        }
        check_tiles(t, play, r);
    }
}

PropertyReport check_properties(const Term& t, const Problem& p) {
    PropertyReport r;
    TermTree tree(t);
    Game g(tree, p);
    check_properties(tree, all_plays(g), r);
    return r;
}

} // namespace hom::testing
