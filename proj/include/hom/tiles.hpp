#pragma once

#include <optional>
#include <set>
#include <vector>

#include "hom/game.hpp"
#include "hom/tree.hpp"

namespace hom {

enum class TileKind { Simple, Composite, Basic };

// A tile of a term tree. Simple tiles are identified by their root, a
// non-lambda node; their leaves are the lambda successors of the root.
struct Tile {
    NodeId root = 0;
    std::vector<NodeId> leaves;  // atomic lambda leaves, in order
    std::vector<NodeId> members; // root and leaves
    TileKind kind = TileKind::Simple;
};

struct TileClass {
    bool is_top = false;
    bool is_constant = false;
    std::set<int> j_end; // 1-based leaf indices without immediate dependents
    bool is_end = false;
    bool is_embedded = false;
    std::optional<int> level; // defined for non-constant tiles
};

// One simple tile per non-lambda node, in preorder of roots.
std::vector<Tile> simple_tiles(const TermTree& t);
// The simple tile rooted at a non-lambda node.
Tile simple_tile_at(const TermTree& t, NodeId root);

TileClass classify(const TermTree& t, const Tile& tile);

// The tile whose leaf binds the head variable of tile; nullopt for top,
// constant-headed and leaf-free-context tiles.
std::optional<NodeId> binding_tile(const TermTree& t, NodeId root);
// Roots of the immediate j-dependents of a tile (j = 0 for any leaf).
std::vector<NodeId> immediate_dependents(const TermTree& t, const Tile& tile, int j = 0);
// Roots of all dependents, in preorder.
std::set<NodeId> dependents(const TermTree& t, const Tile& tile);
// Roots of the family of a tile, the tile included.
std::set<NodeId> family(const TermTree& t, const Tile& tile);
bool same_family(const TermTree& t, NodeId a, NodeId b);
bool tile_equiv(const TermTree& t, const Tile& a, const Tile& b);
bool is_embedded(const TermTree& t, const Tile& tile);
bool is_top(const TermTree& t, const Tile& tile);
bool is_constant_tile(const TermTree& t, const Tile& tile);
// Variables heading a dependent of the tile.
std::set<VarId> dependent_heads(const TermTree& t, const Tile& tile);

// A play pi(i, j) on a simple tile ending at leaf m (1-based).
struct TilePlay {
    int i = 0;
    int j = 0;
    int m = 0;
    friend bool operator==(const TilePlay&, const TilePlay&) = default;
};

std::vector<TilePlay> plays_on(const Play& play, const TermTree& t, const Tile& tile);
bool is_shortest(const Play& play, const TermTree& t, const Tile& tile, const TilePlay& tp);
bool is_shortest_m(const Play& play, const TermTree& t, const Tile& tile, const TilePlay& tp);
bool is_internal(const Play& play, const Tile& tile, const TilePlay& tp);
bool is_ri(const Play& play, const TilePlay& tp);

// j-directed with respect to pi(from, |pi|).
bool is_j_directed(const Play& play, const TermTree& t, const Tile& tile, int j, int from = 1);
// j-directed with respect to every play.
bool is_j_directed(const std::vector<Play>& plays, const TermTree& t, const Tile& tile, int j);

} // namespace hom
