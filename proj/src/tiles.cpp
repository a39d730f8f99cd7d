#include "hom/tiles.hpp"

#include <algorithm>
#include <stdexcept>

namespace hom {

Tile simple_tile_at(const TermTree& t, NodeId root) {
    if (t.is_lambda(root)) throw std::invalid_argument("simple tile root " + std::to_string(root) + " is a lambda node");
    Tile tile;
    tile.root = root;
    tile.leaves = t.at(root).succ;
    tile.members.push_back(root);
    tile.members.insert(tile.members.end(), tile.leaves.begin(), tile.leaves.end());
    return tile;
}

std::vector<Tile> simple_tiles(const TermTree& t) {
    std::vector<Tile> out;
    for (NodeId n = 1; n <= static_cast<NodeId>(t.size()); ++n)
        if (!t.is_lambda(n)) out.push_back(simple_tile_at(t, n));
    return out;
}

std::optional<NodeId> binding_tile(const TermTree& t, NodeId root) {
    const TreeNode& n = t.at(root);
    if (n.label != Label::Var) return std::nullopt;
    auto site = t.binder_site(n.var.id);
    if (!site || site->first == t.root()) return std::nullopt;
    return t.at(site->first).parent;
}

bool is_top(const TermTree& t, const Tile& tile) {
    const TreeNode& n = t.at(tile.root);
    if (n.label != Label::Var) return false;
    auto site = t.binder_site(n.var.id);
    return site && site->first == t.root();
}

std::vector<NodeId> immediate_dependents(const TermTree& t, const Tile& tile, int j) {
    std::vector<NodeId> out;
    for (std::size_t k = 0; k < tile.leaves.size(); ++k) {
        if (j != 0 && static_cast<int>(k) + 1 != j) continue;
        NodeId leaf = tile.leaves[k];
        for (NodeId n : t.subtree(leaf)) {
            if (t.at(n).label != Label::Var) continue;
            auto site = t.binder_site(t.at(n).var.id);
            if (site && site->first == leaf) out.push_back(n);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::set<NodeId> dependents(const TermTree& t, const Tile& tile) {
    std::set<NodeId> out;
    std::vector<NodeId> work{tile.root};
    while (!work.empty()) {
        NodeId r = work.back();
        work.pop_back();
        for (NodeId d : immediate_dependents(t, simple_tile_at(t, r)))
            if (out.insert(d).second) work.push_back(d);
    }
    return out;
}

namespace {

NodeId family_root(const TermTree& t, NodeId r) {
    while (auto b = binding_tile(t, r)) r = *b;
    return r;
}

} // namespace

std::set<NodeId> family(const TermTree& t, const Tile& tile) {
    NodeId r = family_root(t, tile.root);
    std::set<NodeId> out = dependents(t, simple_tile_at(t, r));
    out.insert(r);
    return out;
}

bool same_family(const TermTree& t, NodeId a, NodeId b) { return family_root(t, a) == family_root(t, b); }

bool is_constant_tile(const TermTree& t, const Tile& tile) {
    return t.at(family_root(t, tile.root)).label == Label::Const;
}

bool tile_equiv(const TermTree& t, const Tile& a, const Tile& b) {
    const TreeNode& x = t.at(a.root);
    const TreeNode& y = t.at(b.root);
    if (x.label != Label::Var || y.label != Label::Var) return false;
    if (x.var.id != y.var.id || a.leaves.size() != b.leaves.size()) return false;
    for (std::size_t k = 0; k < a.leaves.size(); ++k) {
        const auto& bx = t.at(a.leaves[k]).binders;
        const auto& by = t.at(b.leaves[k]).binders;
        if (bx.size() != by.size()) return false;
        for (std::size_t i = 0; i < bx.size(); ++i)
            if (!(bx[i].type == by[i].type)) return false;
    }
    return true;
}

bool is_embedded(const TermTree& t, const Tile& tile) {
    for (NodeId n = t.at(tile.root).parent; n != 0; n = t.at(n).parent)
        if (!t.is_lambda(n) && tile_equiv(t, simple_tile_at(t, n), tile)) return true;
    return false;
}

std::set<VarId> dependent_heads(const TermTree& t, const Tile& tile) {
    std::set<VarId> out;
    for (NodeId d : dependents(t, tile)) out.insert(t.at(d).var.id);
    return out;
}

TileClass classify(const TermTree& t, const Tile& tile) {
    TileClass c;
    c.is_top = is_top(t, tile);
    c.is_constant = is_constant_tile(t, tile);
    for (std::size_t k = 1; k <= tile.leaves.size(); ++k)
        if (immediate_dependents(t, tile, static_cast<int>(k)).empty()) c.j_end.insert(static_cast<int>(k));
    c.is_end = c.j_end.size() == tile.leaves.size();
    c.is_embedded = is_embedded(t, tile);
    if (!c.is_constant) {
        int level = 1;
        for (auto b = binding_tile(t, tile.root); b; b = binding_tile(t, *b)) ++level;
        c.level = level;
    }
    return c;
}

// ------------------------------------------------------------ tile plays

std::vector<TilePlay> plays_on(const Play& play, const TermTree& t, const Tile& tile) {
    (void)t;
    std::vector<TilePlay> out;
    for (int j = 2; j <= play.size(); ++j) {
        auto leaf = std::find(tile.leaves.begin(), tile.leaves.end(), play.at(j).node);
        if (leaf == tile.leaves.end()) continue;
        int i = play.at(j).parent;
        if (i < 1 || play.at(i).node != tile.root) continue;
        out.push_back({i, j, static_cast<int>(leaf - tile.leaves.begin()) + 1});
    }
    std::sort(out.begin(), out.end(), [](const TilePlay& a, const TilePlay& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return out;
}

namespace {

bool is_tile_play(const Play& play, const Tile& tile, int i, int k, int m) {
    if (play.at(k).parent != i) return false;
    for (std::size_t l = 0; l < tile.leaves.size(); ++l)
        if (play.at(k).node == tile.leaves[l] && (m == 0 || static_cast<int>(l) + 1 == m)) return true;
    return false;
}

} // namespace

bool is_shortest(const Play& play, const TermTree&, const Tile& tile, const TilePlay& tp) {
    for (int k = tp.i + 1; k < tp.j; ++k)
        if (is_tile_play(play, tile, tp.i, k, 0)) return false;
    return true;
}

bool is_shortest_m(const Play& play, const TermTree&, const Tile& tile, const TilePlay& tp) {
    for (int k = tp.i + 1; k < tp.j; ++k)
        if (is_tile_play(play, tile, tp.i, k, tp.m)) return false;
    return true;
}

bool is_internal(const Play& play, const Tile& tile, const TilePlay& tp) {
    for (int k = tp.i; k <= tp.j; ++k)
        if (std::find(tile.members.begin(), tile.members.end(), play.at(k).node) == tile.members.end()) return false;
    return true;
}

bool is_ri(const Play& play, const TilePlay& tp) { return is_ri(play, tp.i, tp.j); }

bool is_j_directed(const Play& play, const TermTree&, const Tile& tile, int j, int from) {
    if (j < 1 || j > static_cast<int>(tile.leaves.size())) return false;
    int start = from;
    while (true) {
        int m = start;
        while (m <= play.size() && play.at(m).node != tile.root) ++m;
        if (m > play.size()) return true;
        int n = m + 1;
        while (n <= play.size() && !is_tile_play(play, tile, m, n, j)) ++n;
        if (n > play.size() || !is_ri(play, m, n)) return false;
        start = n + 1;
    }
}

bool is_j_directed(const std::vector<Play>& plays, const TermTree& t, const Tile& tile, int j) {
    return std::all_of(plays.begin(), plays.end(), [&](const Play& p) { return is_j_directed(p, t, tile, j); });
}

} // namespace hom
