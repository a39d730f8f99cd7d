#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hom/partition.hpp"
#include "hom/problem.hpp"

namespace hom {

// A basic tile as a tree fragment. Node 0 is the root; open lambda nodes
// without successors are its atomic leaves.
struct ShapeNode {
    Label label = Label::Lambda;
    std::vector<Var> binders; // Lambda
    Var var;                  // Var
    Const cst;                // Const
    std::vector<int> succ;
    NodeId origin = 0; // node of the term tree this node copies
};

struct TileShape {
    std::vector<ShapeNode> nodes;

    static TileShape simple(const TermTree& t, NodeId root);
    // atomic leaves in preorder
    std::vector<int> leaves() const;
    // variables occurring free in the fragment
    std::vector<Var> free_vars() const;
    bool has_constant() const;
    // alpha-canonical key: bound variables by position, free ones by id
    std::string key() const;
    // equivalence key: head variable and leaf binder types
    std::string equiv_key() const;
    // z(\x, \) style display
    std::string str() const;
};

struct Flags {
    bool nri = false;
    bool final = false;
    bool separator = false;
    bool special() const { return nri || final || separator; }
    bool x_special() const { return nri || final; }
};

// Per play data for one occurrence.
struct OccPlay {
    int play = 0;
    Interval interval;
    bool ri = true;
    bool final = false;
    NodeId end_node = 0;
};

struct Occurrence {
    int id = 0;
    int stage = 0;
    NodeId origin = 0; // root of the simple tile it came from
    TileShape shape;
    int prev = -1; // occurrence at the previous stage of the same plays
    std::vector<int> next;
    // tau => leaf @ up->first, leaf given as a shape index of the target
    std::optional<std::pair<int, int>> up;
    std::vector<OccPlay> plays;
    Flags flags;
    bool unfolded = false;
};

struct TileTreeEdge {
    int from = 0;
    int to = 0;
    int leaf = 0;
};

class TreeOfTiles {
public:
    std::vector<Occurrence> occ;
    std::vector<std::vector<int>> play_index; // play -> occurrence per stage
    std::vector<Var> root_binders;

    const Occurrence& at(int id) const { return occ.at(static_cast<std::size_t>(id)); }
    std::vector<TileTreeEdge> edges() const;

    // pi-path from the first stage to o, o included
    std::vector<int> path(int o) const;
    // leaf of anc through which o hangs, if anc is on o's pi-path
    std::optional<int> leaf_above(int o, int anc) const;
    // the occurrence binding the free variable of o, if not the root lambda
    std::optional<int> binder(int o) const;
    bool is_top(int o) const;
    bool is_constant(int o) const;
    bool is_embedded(int o) const;
    std::optional<int> level(int o) const;
    bool is_dependent(int o, int of) const;
    bool same_family(int a, int b) const;
    // b is at a later stage than a on the same plays
    bool later(int a, int b) const;
    std::string str() const;
};

// Shared-prefix merge of the p-partitions of the given plays.
TreeOfTiles tree_of_tiles(const TermTree& t, const std::vector<Play>& plays);
// Recompute the special flags of every occurrence.
void mark_special(TreeOfTiles& tree);
// One tab-separated row per occurrence: id, root node, shape, class flags,
// level, family, per-play intervals, special flags.
std::string dump_tiles(const TreeOfTiles& tree, const TermTree& t);

class NotUnfoldable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SubtermPropertyFailure : public std::runtime_error {
public:
    SubtermPropertyFailure(int a, int b)
        : std::runtime_error("occurrences " + std::to_string(a) + " and " + std::to_string(b) +
                             " are identified but differ"),
          first(a), second(b) {}
    int first;
    int second;
};

// Reason tau_k cannot be unfolded at tau_m, or nullopt if it can.
std::optional<std::string> unfold_blocker(const TreeOfTiles& tree, int k, int m);
bool unfoldable_at(const TreeOfTiles& tree, int k, int m);
// First dependent of tau_k at which it can be unfolded.
std::optional<int> first_dependent(const TreeOfTiles& tree, int k);
TreeOfTiles unfold(const TreeOfTiles& tree, int k, int m);

struct SaturationReport {
    TreeOfTiles tree;
    std::vector<std::pair<int, int>> unfolds;
    std::set<int> excluded;
    bool subterm_property = false;
};
SaturationReport saturate_unfolding(const TreeOfTiles& tree, std::size_t max_exclusions = 64);

// Witness pair when the property fails.
std::optional<std::pair<int, int>> subterm_witness(const TreeOfTiles& tree);
bool subterm_property(const TreeOfTiles& tree);
Term extract(const TreeOfTiles& tree, const Problem& p);

} // namespace hom
