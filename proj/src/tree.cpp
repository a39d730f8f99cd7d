#include "hom/tree.hpp"

namespace hom {

TermTree::TermTree(const Term& t) {
    if (!is_eta_long(t)) throw TypeError(show(t), "term tree needs an eta-long term");
    if (t.is_abs())
        add_lambda(t.binders(), t.body(), 0, 0);
    else
        add_lambda({}, t, 0, 0);
}

NodeId TermTree::add_lambda(const std::vector<Var>& bs, const Term& body, NodeId parent, int depth) {
    TreeNode lam;
    lam.label = Label::Lambda;
    lam.binders = bs;
    lam.parent = parent;
    lam.depth = depth;
    nodes_.push_back(lam);
    last_.push_back(0);
    NodeId id = static_cast<NodeId>(nodes_.size());
    for (std::size_t i = 0; i < bs.size(); ++i) sites_[bs[i].id] = {id, static_cast<int>(i)};

    const Term& h = body.head();
    TreeNode hn;
    hn.parent = id;
    hn.depth = depth + 1;
    if (h.is_var()) {
        hn.label = Label::Var;
        hn.var = h.as_var();
    } else {
        hn.label = Label::Const;
        hn.cst = h.as_const();
    }
    nodes_.push_back(hn);
    last_.push_back(0);
    NodeId hid = static_cast<NodeId>(nodes_.size());
    nodes_[static_cast<std::size_t>(id - 1)].succ.push_back(hid);

    for (const auto& a : body.spine()) {
        NodeId c = a.is_abs() ? add_lambda(a.binders(), a.body(), hid, depth + 2)
                              : add_lambda({}, a, hid, depth + 2);
        nodes_[static_cast<std::size_t>(hid - 1)].succ.push_back(c);
    }
    NodeId last = static_cast<NodeId>(nodes_.size());
    last_[static_cast<std::size_t>(hid - 1)] = last;
    last_[static_cast<std::size_t>(id - 1)] = last;
    return id;
}

std::optional<std::pair<NodeId, int>> TermTree::binder_site(VarId v) const {
    auto it = sites_.find(v);
    if (it == sites_.end()) return std::nullopt;
    return it->second;
}

std::string TermTree::label_str(NodeId id) const {
    const auto& n = at(id);
    switch (n.label) {
    case Label::Lambda: {
        std::string s = "\\";
        for (std::size_t i = 0; i < n.binders.size(); ++i) s += (i ? " " : "") + n.binders[i].name;
        return s;
    }
    case Label::Var:
        return n.var.name;
    case Label::Const:
        return n.cst.name;
    }
    return "?";
}

Term TermTree::build(NodeId id, const std::map<NodeId, Term>* replace) const {
    if (replace) {
        auto it = replace->find(id);
        if (it != replace->end()) return it->second;
    }
    const auto& n = at(id);
    if (n.label == Label::Lambda) return Term::abs(n.binders, build(n.succ.at(0), replace));
    Term h = n.label == Label::Var ? Term::var(n.var) : Term::constant(n.cst);
    std::vector<Term> args;
    for (NodeId c : n.succ) args.push_back(build(c, replace));
    return Term::app(h, std::move(args));
}

Term TermTree::subterm(NodeId id) const { return build(id, nullptr); }

Term TermTree::rebuild(const std::map<NodeId, Term>& replace) const { return build(root(), &replace); }

std::vector<NodeId> TermTree::subtree(NodeId id) const {
    std::vector<NodeId> out;
    for (NodeId n = id; n <= last_[static_cast<std::size_t>(id - 1)]; ++n) out.push_back(n);
    return out;
}

bool TermTree::in_subtree(NodeId root, NodeId n) const {
    return n >= root && n <= last_[static_cast<std::size_t>(root - 1)];
}

TermTree to_tree(const Term& t) { return TermTree(t); }
Term from_tree(const TermTree& tree) { return tree.to_term(); }

} // namespace hom
