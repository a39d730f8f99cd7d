#include "hom/tiletree.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace hom {

// ------------------------------------------------------------------ shapes

TileShape TileShape::simple(const TermTree& t, NodeId root) {
    TileShape s;
    const TreeNode& r = t.at(root);
    ShapeNode n;
    n.label = r.label;
    n.var = r.var;
    n.cst = r.cst;
    n.origin = root;
    s.nodes.push_back(n);
    for (NodeId leaf : r.succ) {
        ShapeNode l;
        l.label = Label::Lambda;
        l.binders = t.at(leaf).binders;
        l.origin = leaf;
        s.nodes[0].succ.push_back(static_cast<int>(s.nodes.size()));
        s.nodes.push_back(l);
    }
    return s;
}

namespace {

template <class F>
void preorder(const TileShape& s, int i, F&& f) {
    f(i);
    for (int c : s.nodes[static_cast<std::size_t>(i)].succ) preorder(s, c, f);
}

} // namespace

std::vector<int> TileShape::leaves() const {
    std::vector<int> out;
    preorder(*this, 0, [&](int i) {
        const ShapeNode& n = nodes[static_cast<std::size_t>(i)];
        if (n.label == Label::Lambda && n.succ.empty()) out.push_back(i);
    });
    return out;
}

std::vector<Var> TileShape::free_vars() const {
    std::vector<Var> out;
    std::vector<VarId> scope;
    std::function<void(int)> go = [&](int i) {
        const ShapeNode& n = nodes[static_cast<std::size_t>(i)];
        std::size_t mark = scope.size();
        if (n.label == Label::Lambda)
            for (const auto& b : n.binders) scope.push_back(b.id);
        if (n.label == Label::Var && std::find(scope.begin(), scope.end(), n.var.id) == scope.end()) out.push_back(n.var);
        for (int c : n.succ) go(c);
        scope.resize(mark);
    };
    go(0);
    return out;
}

bool TileShape::has_constant() const {
    return std::any_of(nodes.begin(), nodes.end(), [](const ShapeNode& n) { return n.label == Label::Const; });
}

std::string TileShape::key() const {
    std::string out;
    std::vector<VarId> scope;
    std::function<void(int)> go = [&](int i) {
        const ShapeNode& n = nodes[static_cast<std::size_t>(i)];
        std::size_t mark = scope.size();
        switch (n.label) {
        case Label::Lambda:
            out += "\\";
            for (const auto& b : n.binders) {
                scope.push_back(b.id);
                out += b.type.str() + ";";
            }
            break;
        case Label::Var: {
            auto it = std::find(scope.rbegin(), scope.rend(), n.var.id);
            out += it == scope.rend() ? "v" + std::to_string(n.var.id)
                                      : "b" + std::to_string(scope.rend() - it - 1);
            break;
        }
        case Label::Const:
            out += "c" + n.cst.name;
            break;
        }
        out += "(";
        for (int c : n.succ) go(c);
        out += ")";
        scope.resize(mark);
    };
    go(0);
    return out;
}

std::string TileShape::equiv_key() const {
    auto fv = free_vars();
    if (fv.size() != 1 || has_constant()) return {};
    std::string out = "v" + std::to_string(fv[0].id);
    for (int l : leaves()) {
        out += "|";
        for (const auto& b : nodes[static_cast<std::size_t>(l)].binders) out += b.type.str() + ";";
    }
    return out;
}

std::string TileShape::str() const {
    std::function<std::string(int)> go = [&](int i) {
        const ShapeNode& n = nodes[static_cast<std::size_t>(i)];
        if (n.label == Label::Lambda) {
            std::string s = "\\";
            for (std::size_t k = 0; k < n.binders.size(); ++k) s += (k ? " " : "") + n.binders[k].name;
            if (!n.succ.empty()) s += (n.binders.empty() ? "" : ".") + go(n.succ[0]);
            return s;
        }
        std::string s = n.label == Label::Var ? n.var.name : n.cst.name;
        if (n.succ.empty()) return s;
        s += "(";
        for (std::size_t k = 0; k < n.succ.size(); ++k) s += (k ? ", " : "") + go(n.succ[k]);
        return s + ")";
    };
    return go(0);
}

// -------------------------------------------------------------- tree queries

std::vector<TileTreeEdge> TreeOfTiles::edges() const {
    std::vector<TileTreeEdge> out;
    for (const auto& o : occ)
        if (o.up) out.push_back({o.id, o.up->first, o.up->second});
    return out;
}

std::vector<int> TreeOfTiles::path(int o) const {
    std::vector<int> out{o};
    while (at(out.back()).up) out.push_back(at(out.back()).up->first);
    std::reverse(out.begin(), out.end());
    return out;
}

std::optional<int> TreeOfTiles::leaf_above(int o, int anc) const {
    for (int c = o; at(c).up; c = at(c).up->first)
        if (at(c).up->first == anc) return at(c).up->second;
    return std::nullopt;
}

std::optional<int> TreeOfTiles::binder(int o) const {
    auto fv = at(o).shape.free_vars();
    if (fv.empty()) return std::nullopt;
    VarId v = fv.front().id;
    for (int c = o; at(c).up; c = at(c).up->first) {
        auto [tgt, leaf] = *at(c).up;
        const auto& bs = at(tgt).shape.nodes[static_cast<std::size_t>(leaf)].binders;
        if (std::any_of(bs.begin(), bs.end(), [&](const Var& b) { return b.id == v; })) return tgt;
    }
    return std::nullopt;
}

bool TreeOfTiles::is_top(int o) const {
    if (binder(o)) return false;
    auto fv = at(o).shape.free_vars();
    return std::any_of(fv.begin(), fv.end(), [&](const Var& v) {
        return std::any_of(root_binders.begin(), root_binders.end(), [&](const Var& r) { return r.id == v.id; });
    });
}

bool TreeOfTiles::is_constant(int o) const {
    for (std::optional<int> c = o; c; c = binder(*c))
        if (at(*c).shape.has_constant()) return true;
    return false;
}

bool TreeOfTiles::is_embedded(int o) const {
    std::string k = at(o).shape.equiv_key();
    if (k.empty()) return false;
    auto p = path(o);
    p.pop_back();
    return std::any_of(p.begin(), p.end(), [&](int a) { return at(a).shape.equiv_key() == k; });
}

std::optional<int> TreeOfTiles::level(int o) const {
    if (is_constant(o)) return std::nullopt;
    int l = 1;
    for (auto b = binder(o); b; b = binder(*b)) ++l;
    return l;
}

bool TreeOfTiles::is_dependent(int o, int of) const {
    for (auto b = binder(o); b; b = binder(*b))
        if (*b == of) return true;
    return false;
}

bool TreeOfTiles::same_family(int a, int b) const {
    auto root = [&](int o) {
        while (auto p = binder(o)) o = *p;
        return o;
    };
    return root(a) == root(b);
}

bool TreeOfTiles::later(int a, int b) const {
    for (int c = at(b).prev; c >= 0; c = at(c).prev)
        if (c == a) return true;
    return false;
}

std::string TreeOfTiles::str() const {
    std::ostringstream os;
    for (const auto& o : occ) {
        os << "t" << o.id << "\tstage " << o.stage << "\t" << o.shape.str();
        if (o.up) {
            const auto& leaf = at(o.up->first).shape.nodes[static_cast<std::size_t>(o.up->second)];
            os << "\t=> \\";
            for (std::size_t k = 0; k < leaf.binders.size(); ++k) os << (k ? " " : "") << leaf.binders[k].name;
            os << "@t" << o.up->first;
        } else {
            os << "\t-";
        }
        os << "\t" << (o.flags.nri ? "n" : "-") << (o.flags.final ? "f" : "-") << (o.flags.separator ? "s" : "-")
           << "\n";
    }
    return os.str();
}

// ------------------------------------------------------------ construction

TreeOfTiles tree_of_tiles(const TermTree& t, const std::vector<Play>& plays) {
    TreeOfTiles tree;
    tree.root_binders = t.at(t.root()).binders;
    std::vector<int> roots;
    for (std::size_t pi = 0; pi < plays.size(); ++pi) {
        const Play& play = plays[pi];
        PPartition pp = p_partition(play, t);
        std::vector<int> seq;
        int cur = -1;
        for (const Stage& s : pp.stages) {
            std::optional<std::pair<int, int>> up;
            if (s.edge) {
                int tgt = seq.at(static_cast<std::size_t>(s.edge->target - 1));
                const auto& shape = tree.at(tgt).shape;
                int leaf = -1;
                for (int l : shape.leaves())
                    if (shape.nodes[static_cast<std::size_t>(l)].origin == s.edge->leaf) leaf = l;
                if (leaf < 0) throw std::logic_error("edge to a node that is not a leaf of its tile");
                up = std::make_pair(tgt, leaf);
            }
            const std::vector<int>& siblings = cur < 0 ? roots : tree.at(cur).next;
            int found = -1;
            for (int c : siblings)
                if (tree.at(c).origin == s.tile && tree.at(c).up == up) found = c;
            if (found < 0) {
                Occurrence o;
                o.id = static_cast<int>(tree.occ.size());
                o.stage = s.k;
                o.origin = s.tile;
                o.shape = TileShape::simple(t, s.tile);
                o.prev = cur;
                o.up = up;
                found = o.id;
                tree.occ.push_back(std::move(o));
                if (cur < 0)
                    roots.push_back(found);
                else
                    tree.occ[static_cast<std::size_t>(cur)].next.push_back(found);
            }
            OccPlay op;
            op.play = static_cast<int>(pi);
            op.interval = s.interval;
            op.ri = !is_nri(play, s.interval.first, s.interval.last);
            op.final = play.at(s.interval.last).state.is_final();
            op.end_node = play.at(s.interval.last).node;
            tree.occ[static_cast<std::size_t>(found)].plays.push_back(op);
            seq.push_back(found);
            cur = found;
        }
        tree.play_index.push_back(std::move(seq));
    }
    mark_special(tree);
    return tree;
}

void mark_special(TreeOfTiles& tree) {
    for (auto& o : tree.occ) {
        o.flags = {};
        for (const auto& p : o.plays) {
            o.flags.nri = o.flags.nri || !p.ri;
            o.flags.final = o.flags.final || p.final;
            o.flags.separator = o.flags.separator || p.end_node != o.plays.front().end_node;
        }
    }
}

std::string dump_tiles(const TreeOfTiles& tree, const TermTree& t) {
    std::ostringstream os;
    os << "id\troot\ttile\tclass\tlevel\tfamily\tplays\tspecial\n";
    for (const auto& o : tree.occ) {
        TileClass c = classify(t, simple_tile_at(t, o.origin));
        std::string cls;
        if (tree.is_top(o.id)) cls += "top ";
        if (tree.is_constant(o.id)) cls += "constant ";
        if (tree.is_embedded(o.id)) cls += "embedded ";
        if (c.is_end) cls += "end ";
        for (int j : c.j_end) cls += std::to_string(j) + "-end ";
        if (cls.empty()) cls = "-";
        else cls.pop_back();
        int fam = o.id;
        while (auto b = tree.binder(fam)) fam = *b;
        auto lv = tree.level(o.id);
        os << "t" << o.id << "\t" << o.origin << "\t" << o.shape.str() << "\t" << cls << "\t"
           << (lv ? std::to_string(*lv) : "-") << "\tt" << fam << "\t";
        for (std::size_t k = 0; k < o.plays.size(); ++k) {
            const auto& p = o.plays[k];
            os << (k ? " " : "") << "p" << p.play << ":(" << p.interval.first << "," << p.interval.last << ")";
        }
        std::string sp;
        if (o.flags.nri) sp += "nri ";
        if (o.flags.final) sp += "final ";
        if (o.flags.separator) sp += "separator ";
        if (sp.empty()) sp = "-";
        else sp.pop_back();
        os << "\t" << sp << "\n";
    }
    return os.str();
}

// ----------------------------------------------------------------- unfolding

std::optional<std::string> unfold_blocker(const TreeOfTiles& tree, int k, int m) {
    int n = static_cast<int>(tree.occ.size());
    if (k < 0 || k >= n || m < 0 || m >= n) return "no such occurrence";
    if (!tree.is_top(k) && !tree.is_embedded(k)) return "t" + std::to_string(k) + " is neither top nor embedded";
    if (!tree.later(k, m)) return "t" + std::to_string(m) + " is not later than t" + std::to_string(k);
    if (!tree.is_dependent(m, k)) return "t" + std::to_string(m) + " is not a dependent of t" + std::to_string(k);
    for (int c = tree.at(m).prev; c != k; c = tree.at(c).prev)
        if (tree.is_dependent(c, k)) return "t" + std::to_string(c) + " is an earlier dependent";
    if (tree.at(k).flags.x_special()) return "t" + std::to_string(k) + " is x-special";
    for (const auto& o : tree.occ)
        if (tree.later(k, o.id) && tree.same_family(k, o.id) && o.flags.x_special())
            return "later family member t" + std::to_string(o.id) + " is x-special";
    return std::nullopt;
}

bool unfoldable_at(const TreeOfTiles& tree, int k, int m) { return !unfold_blocker(tree, k, m); }

std::optional<int> first_dependent(const TreeOfTiles& tree, int k) {
    std::optional<int> best;
    for (const auto& o : tree.occ) {
        if (!unfoldable_at(tree, k, o.id)) continue;
        if (!best || o.stage < tree.at(*best).stage) best = o.id;
    }
    return best;
}

TreeOfTiles unfold(const TreeOfTiles& tree, int k, int m) {
    if (auto why = unfold_blocker(tree, k, m)) throw NotUnfoldable(*why);
    auto leaf = tree.leaf_above(m, k);
    if (!leaf) throw NotUnfoldable("t" + std::to_string(k) + " is not on the path of t" + std::to_string(m));
    TreeOfTiles out = tree;
    const TileShape& ks = tree.at(k).shape;
    const TileShape& ms = tree.at(m).shape;
    TileShape ns = ks;
    int off = static_cast<int>(ks.nodes.size());
    for (ShapeNode n : ms.nodes) {
        for (int& c : n.succ) c += off;
        ns.nodes.push_back(std::move(n));
    }
    ns.nodes[static_cast<std::size_t>(*leaf)].succ = {off};

    auto below_m = [&](int l) {
        if (l == m) return true;
        auto p = tree.path(l);
        return std::find(p.begin(), p.end(), m) != p.end();
    };
    for (auto& o : out.occ) {
        if (!o.up) continue;
        const Occurrence& orig = tree.at(o.id);
        if (orig.up->first == m) {
            o.up->second = orig.up->second + off;
        } else if (orig.up->first == k && orig.prev >= 0 && below_m(orig.prev)) {
            o.up = std::make_pair(m, orig.up->second);
        }
    }
    Occurrence& om = out.occ[static_cast<std::size_t>(m)];
    om.shape = std::move(ns);
    om.unfolded = true;
    return out;
}

namespace {

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
        return true;
    }
    std::vector<int> parent;
};

struct Closure {
    UnionFind uf;
    std::optional<std::pair<int, int>> witness;
};

Closure close(const TreeOfTiles& tree) {
    Closure c{UnionFind(tree.occ.size()), std::nullopt};
    auto edges = tree.edges();
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& o : tree.occ) {
            int r = c.uf.find(o.id);
            if (tree.at(r).shape.key() != o.shape.key()) {
                c.witness = std::make_pair(r, o.id);
                return c;
            }
        }
        std::map<std::pair<int, int>, int> src;
        for (const auto& e : edges) {
            auto key = std::make_pair(c.uf.find(e.to), e.leaf);
            auto it = src.find(key);
            if (it == src.end())
                src.emplace(key, e.from);
            else if (c.uf.unite(it->second, e.from))
                changed = true;
        }
    }
    return c;
}

} // namespace

std::optional<std::pair<int, int>> subterm_witness(const TreeOfTiles& tree) { return close(tree).witness; }

bool subterm_property(const TreeOfTiles& tree) { return !subterm_witness(tree); }

SaturationReport saturate_unfolding(const TreeOfTiles& tree, std::size_t max_exclusions) {
    SaturationReport rep;
    std::size_t cap = 4 * tree.occ.size() + 64;
    while (true) {
        TreeOfTiles cur = tree;
        std::vector<std::pair<int, int>> done;
        for (std::size_t step = 0; step < cap; ++step) {
            std::optional<std::pair<int, int>> pick;
            int pick_level = 0;
            for (const auto& o : cur.occ) {
                if (rep.excluded.count(o.id)) continue;
                auto lv = cur.level(o.id);
                if (!lv) continue;
                auto m = first_dependent(cur, o.id);
                if (!m) continue;
                if (!pick || *lv > pick_level || (*lv == pick_level && o.stage < cur.at(pick->first).stage)) {
                    pick = std::make_pair(o.id, *m);
                    pick_level = *lv;
                }
            }
            if (!pick) break;
            cur = unfold(cur, pick->first, pick->second);
            done.push_back(*pick);
        }
        auto w = subterm_witness(cur);
        if (!w) {
            rep.tree = std::move(cur);
            rep.unfolds = std::move(done);
            rep.subterm_property = true;
            return rep;
        }
        std::optional<int> culprit;
        for (const auto& [k, m] : done)
            if ((m == w->first || m == w->second) && !rep.excluded.count(k)) culprit = k;
        if (!culprit || rep.excluded.size() >= max_exclusions) {
            rep.tree = tree;
            rep.unfolds.clear();
            rep.subterm_property = subterm_property(tree);
            return rep;
        }
        rep.excluded.insert(*culprit);
    }
}

// ----------------------------------------------------------------- extraction

Term extract(const TreeOfTiles& tree, const Problem& p) {
    Closure c = close(tree);
    if (c.witness) throw SubtermPropertyFailure(c.witness->first, c.witness->second);
    std::map<std::pair<int, int>, int> child;
    for (const auto& e : tree.edges()) {
        auto key = std::make_pair(c.uf.find(e.to), e.leaf);
        auto it = child.find(key);
        if (it == child.end() || e.from < it->second) child[key] = e.from;
    }
    std::vector<int> roots;
    for (const auto& o : tree.occ)
        if (!o.up) roots.push_back(o.id);
    if (roots.empty()) throw std::logic_error("tree of tiles has no first stage");

    std::map<VarId, std::vector<Var>> scope;
    std::function<Term(int)> occ_term;
    std::function<Term(int, int)> node_term = [&](int o, int i) -> Term {
        const TileShape& s = tree.at(o).shape;
        const ShapeNode& n = s.nodes[static_cast<std::size_t>(i)];
        if (n.label == Label::Lambda) {
            std::vector<Var> fresh;
            for (const auto& b : n.binders) {
                fresh.push_back(Var::fresh(b.name, b.type));
                scope[b.id].push_back(fresh.back());
            }
            Term body;
            if (!n.succ.empty()) {
                body = node_term(o, n.succ[0]);
            } else {
                auto it = child.find({c.uf.find(o), i});
                body = it == child.end() ? Term::constant(p.d) : occ_term(it->second);
            }
            for (const auto& b : n.binders) scope[b.id].pop_back();
            return Term::abs(std::move(fresh), body);
        }
        Term h;
        if (n.label == Label::Var) {
            auto it = scope.find(n.var.id);
            if (it == scope.end() || it->second.empty())
                throw std::logic_error("variable " + n.var.name + " is unbound in the extraction");
            h = Term::var(it->second.back());
        } else {
            h = Term::constant(n.cst);
        }
        if (n.succ.empty()) return h;
        std::vector<Term> args;
        for (int s2 : n.succ) args.push_back(node_term(o, s2));
        return Term::app(h, std::move(args));
    };
    occ_term = [&](int o) { return node_term(o, 0); };

    std::vector<Var> fresh;
    for (const auto& b : tree.root_binders) {
        fresh.push_back(Var::fresh(b.name, b.type));
        scope[b.id].push_back(fresh.back());
    }
    return Term::abs(std::move(fresh), occ_term(roots.front()));
}

} // namespace hom
