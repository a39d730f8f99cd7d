#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hom/term.hpp"

namespace hom {

// Node ids are 1-based, numbered in preorder from the root.
using NodeId = int;

enum class Label { Lambda, Var, Const };

struct TreeNode {
    Label label = Label::Lambda;
    std::vector<Var> binders; // Lambda
    Var var;                  // Var
    Const cst;                // Const
    std::vector<NodeId> succ;
    NodeId parent = 0;
    int depth = 0;
};

// Term tree of a closed eta-long term. Every ground argument sits under a
// dummy lambda with no binders, so lambda nodes occupy the even levels.
class TermTree {
public:
    TermTree() = default;
    explicit TermTree(const Term& t);

    std::size_t size() const { return nodes_.size(); }
    NodeId root() const { return 1; }
    const TreeNode& at(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id - 1)); }
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    bool is_lambda(NodeId id) const { return at(id).label == Label::Lambda; }
    // lambda node binding v, and the position of v in its binder list
    std::optional<std::pair<NodeId, int>> binder_site(VarId v) const;

    // "\z", "z", "f", "\" for display
    std::string label_str(NodeId id) const;

    // Term rooted at node id; a lambda node yields its abstraction (or its
    // body when the binder list is empty).
    Term subterm(NodeId id) const;
    Term to_term() const { return subterm(root()); }

    // Rebuild the term with the subtrees rooted at the given nodes replaced.
    Term rebuild(const std::map<NodeId, Term>& replace) const;

    // nodes of the subtree rooted at id, in preorder
    std::vector<NodeId> subtree(NodeId id) const;
    bool in_subtree(NodeId root, NodeId n) const;

private:
    NodeId add_lambda(const std::vector<Var>& bs, const Term& body, NodeId parent, int depth);
    Term build(NodeId id, const std::map<NodeId, Term>* replace) const;

    std::vector<TreeNode> nodes_;
    std::unordered_map<VarId, std::pair<NodeId, int>> sites_;
    std::vector<NodeId> last_; // last preorder node of each subtree
};

TermTree to_tree(const Term& t);
Term from_tree(const TermTree& tree);

} // namespace hom
