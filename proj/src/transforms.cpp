#include "hom/transforms.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace hom {

SizeMeasures sizes(const TermTree& t) {
    SizeMeasures s;
    std::function<int(NodeId)> depth = [&](NodeId n) {
        const TreeNode& node = t.at(n);
        int best = 0;
        for (NodeId c : node.succ) best = std::max(best, depth(c));
        bool counts = node.label != Label::Lambda && !node.succ.empty();
        if (counts) ++s.total_tiles;
        return best + (counts ? 1 : 0);
    };
    s.depth_tiles = depth(t.root());
    return s;
}

SizeMeasures sizes(const Term& t) { return sizes(TermTree(t)); }

std::vector<Play> all_plays(const Game& g, const StepBudget& budget) {
    std::vector<Play> out;
    for (std::size_t i = 0; i < g.problem().items.size(); ++i) {
        auto ps = g.plays(static_cast<int>(i), budget);
        out.insert(out.end(), std::make_move_iterator(ps.begin()), std::make_move_iterator(ps.end()));
    }
    return out;
}

std::vector<bool> visited_nodes(const TermTree& t, const std::vector<Play>& plays) {
    std::vector<bool> seen(t.size() + 1, false);
    for (const auto& p : plays)
        for (const auto& pos : p.positions) seen[static_cast<std::size_t>(pos.node)] = true;
    return seen;
}

namespace {

bool t1_label_ok(const TermTree& t, NodeId n) {
    const TreeNode& node = t.at(n);
    if (node.label == Label::Var) return true;
    return node.label == Label::Const && !node.cst.type.is_base();
}

void recheck(const Term& out, const Problem& p, const StepBudget& budget, const std::string& what) {
    Game g(TermTree(out), p);
    if (!g.verdict(budget)) throw TransformError(TransformError::Kind::VerdictLost, what + " lost the verdict");
}

} // namespace

Term t1_apply(const TermTree& t, const Problem& p, NodeId root, const StepBudget& budget) {
    if (root < 1 || root > static_cast<NodeId>(t.size()) || t.is_lambda(root) || !t1_label_ok(t, root))
        throw TransformError(TransformError::Kind::NotApplicable,
                             "node " + std::to_string(root) + " is not labelled by a variable or higher-type constant");
    Game g(t, p);
    auto seen = visited_nodes(t, all_plays(g, budget));
    for (NodeId n : t.subtree(root))
        if (seen[static_cast<std::size_t>(n)])
            throw TransformError(TransformError::Kind::NotAvoided, "node " + std::to_string(n) + " is visited");
    Term out = t.rebuild({{root, Term::constant(p.d)}});
    recheck(out, p, budget, "T1");
    return out;
}

Term t2_apply(const TermTree& t, const Problem& p, NodeId root, int j, const StepBudget& budget) {
    if (root < 1 || root > static_cast<NodeId>(t.size()) || t.is_lambda(root))
        throw TransformError(TransformError::Kind::NotApplicable, "node " + std::to_string(root) + " is not a tile root");
    Tile tile = simple_tile_at(t, root);
    if (j < 1 || j > static_cast<int>(tile.leaves.size()))
        throw TransformError(TransformError::Kind::NotApplicable, "tile has no leaf " + std::to_string(j));
    if (!classify(t, tile).j_end.count(j))
        throw TransformError(TransformError::Kind::PreconditionFailed, "tile is not " + std::to_string(j) + "-end");
    Game g(t, p);
    if (!is_j_directed(all_plays(g, budget), t, tile, j))
        throw TransformError(TransformError::Kind::PreconditionFailed, "tile is not " + std::to_string(j) + "-directed");
    Term kept = t.subterm(tile.leaves[static_cast<std::size_t>(j - 1)]);
    if (kept.is_abs() && !t.at(tile.leaves[static_cast<std::size_t>(j - 1)]).binders.empty()) kept = kept.body();
    Term out = t.rebuild({{root, kept}});
    recheck(out, p, budget, "T2");
    return out;
}

ShrinkResult shrink(const Term& t, const Problem& p, const StepBudget& budget) {
    ShrinkResult r;
    r.term = t;
    {
        Game g(TermTree(t), p);
        if (!g.verdict(budget)) throw TransformError(TransformError::Kind::PreconditionFailed, "term does not solve the problem");
    }
    std::set<std::pair<NodeId, int>> rejected;
    while (true) {
        TermTree tree(r.term);
        Game g(tree, p);
        auto plays = all_plays(g, budget);
        auto seen = visited_nodes(tree, plays);
        int before = sizes(tree).total_tiles;
        std::optional<ShrinkStep> step;

        // T1: shallowest avoided subtree first
        for (NodeId n = 1; n <= static_cast<NodeId>(tree.size()) && !step; ++n) {
            if (tree.is_lambda(n) || !t1_label_ok(tree, n) || rejected.count({n, 0})) continue;
            auto sub = tree.subtree(n);
            if (std::any_of(sub.begin(), sub.end(), [&](NodeId m) { return seen[static_cast<std::size_t>(m)]; })) continue;
            ShrinkStep s;
            s.kind = "T1";
            s.root = n;
            s.result = tree.rebuild({{n, Term::constant(p.d)}});
            step = s;
        }

        // T2: deepest qualifying tile first
        if (!step) {
            std::vector<NodeId> roots;
            for (NodeId n = 1; n <= static_cast<NodeId>(tree.size()); ++n)
                if (!tree.is_lambda(n) && !tree.at(n).succ.empty()) roots.push_back(n);
            std::stable_sort(roots.begin(), roots.end(),
                             [&](NodeId a, NodeId b) { return tree.at(a).depth > tree.at(b).depth; });
            for (NodeId n : roots) {
                Tile tile = simple_tile_at(tree, n);
                TileClass c = classify(tree, tile);
                for (int j : c.j_end) {
                    if (rejected.count({n, j}) || !is_j_directed(plays, tree, tile, j)) continue;
                    Term kept = tree.subterm(tile.leaves[static_cast<std::size_t>(j - 1)]);
                    if (!tree.at(tile.leaves[static_cast<std::size_t>(j - 1)]).binders.empty()) kept = kept.body();
                    ShrinkStep s;
                    s.kind = "T2";
                    s.root = n;
                    s.leaf = j;
                    s.result = tree.rebuild({{n, kept}});
                    step = s;
                    break;
                }
                if (step) break;
            }
        }
        if (!step) break;

        step->step = static_cast<int>(r.steps.size()) + 1;
        step->before = before;
        step->after = sizes(step->result).total_tiles;
        step->verdict = Game(TermTree(step->result), p).verdict(budget);
        if (!step->verdict) {
            rejected.insert({step->root, step->leaf});
            r.steps.push_back(*step);
            continue;
        }
        rejected.clear();
        r.term = step->result;
        r.steps.push_back(std::move(*step));
    }
    return r;
}

std::string render_steps(const std::vector<ShrinkStep>& steps) {
    std::ostringstream os;
    for (const auto& s : steps) {
        os << s.step << '\t' << s.kind << '\t' << s.root;
        if (s.kind == "T2") os << '.' << s.leaf;
        os << '\t' << s.before << '\t' << s.after << (s.verdict ? "" : "\trejected") << '\n';
    }
    return os.str();
}

// ------------------------------------------------------------------ bounds

namespace {

using u128 = unsigned __int128;
constexpr u128 kLimit = static_cast<u128>(UINT64_MAX);

Bounded narrow(u128 v) { return v > kLimit ? Bounded{} : Bounded{static_cast<std::uint64_t>(v)}; }

Bounded mul(Bounded a, Bounded b) {
    if (!a || !b) {
        if ((a && *a == 0) || (b && *b == 0)) return 0;
        return std::nullopt;
    }
    return narrow(static_cast<u128>(*a) * *b);
}

Bounded add(Bounded a, Bounded b) {
    if (!a || !b) return std::nullopt;
    return narrow(static_cast<u128>(*a) + *b);
}

Bounded power(std::uint64_t base, Bounded e) {
    if (!e) return base <= 1 ? Bounded{base} : Bounded{};
    Bounded r = 1;
    for (std::uint64_t i = 0; i < *e; ++i) {
        r = mul(r, base);
        if (!r) return std::nullopt;
        if (base <= 1) break;
    }
    return r;
}

// alpha + alpha^2 + ... + alpha^g
Bounded geometric(std::uint64_t alpha, Bounded g) {
    if (alpha == 0) return 0;
    if (alpha == 1) return g;
    if (!g) return std::nullopt;
    Bounded sum = 0;
    Bounded term = 1;
    for (std::uint64_t i = 0; i < *g; ++i) {
        term = mul(term, alpha);
        sum = add(sum, term);
        if (!sum) return std::nullopt;
    }
    return sum;
}

} // namespace

std::string bounded_str(const Bounded& b) { return b ? std::to_string(*b) : "exceeds 2^64"; }

Bounded g_value(int alpha, int k) {
    Bounded g = 1;
    for (int i = 1; i < k; ++i) g = power(static_cast<std::uint64_t>(alpha) + 1, g);
    return g;
}

BoundReport bounds(const Problem& p, int top_tiles) {
    BoundReport r;
    Metrics m = metrics(p);
    r.order = p.order();
    r.order_n = std::max(1, (r.order - 1 + 1) / 2);
    r.alpha = m.alpha;
    r.delta = m.delta;
    r.p = m.p;
    for (int k = 1; k <= r.order_n; ++k) r.g_table.push_back(g_value(r.alpha, k));
    Bounded gn = r.g_table.back();
    auto u = [](int v) { return Bounded{static_cast<std::uint64_t>(v)}; };
    r.N_n = mul(u(r.p), geometric(static_cast<std::uint64_t>(r.alpha), gn));
    r.third_order_bound = u(r.delta + 2 * r.p - 1);
    Bounded inner = mul(mul(mul(u(r.p), u(r.p)), u(r.delta)), r.N_n);
    r.general_bound = mul(gn, add(inner, u(r.p - 1)));
    r.top_tiles = top_tiles;
    r.fifth_order_bound = u(top_tiles * (r.alpha + 1) + r.delta + r.p + 1);
    return r;
}

std::string render_bounds(const BoundReport& r) {
    std::ostringstream os;
    os << "order\t" << r.order << "\n";
    os << "n\t" << r.order_n << "\n";
    os << "delta\t" << r.delta << "\n";
    os << "alpha\t" << r.alpha << "\n";
    os << "p\t" << r.p << "\n";
    for (std::size_t k = 0; k < r.g_table.size(); ++k) os << "g(" << k + 1 << ")\t" << bounded_str(r.g_table[k]) << "\n";
    os << "N(n)\t" << bounded_str(r.N_n) << "\n";
    os << "third-order bound\t" << bounded_str(r.third_order_bound) << "\n";
    os << "fifth-order bound (k=" << r.top_tiles << ")\t" << bounded_str(r.fifth_order_bound) << "\n";
    os << "general bound\t" << bounded_str(r.general_bound) << "\n";
    return os.str();
}

} // namespace hom
