#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hom/problem.hpp"
#include "hom/tree.hpp"

namespace hom {

class GameError : public std::runtime_error {
public:
    enum class Kind { ArityMismatch, IllegalChoice, BudgetExceeded, Internal };
    GameError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Persistent map from variables to entries; copies share storage.
template <class E>
class Table {
public:
    using Map = std::map<VarId, E>;

    const E* find(VarId v) const {
        if (!map_) return nullptr;
        auto it = map_->find(v);
        return it == map_->end() ? nullptr : &it->second;
    }
    Table with(VarId v, E e) const {
        auto m = map_ ? std::make_shared<Map>(*map_) : std::make_shared<Map>();
        (*m)[v] = std::move(e);
        Table t;
        t.map_ = std::move(m);
        return t;
    }
    std::size_t size() const { return map_ ? map_->size() : 0; }
    bool empty() const { return size() == 0; }
    const Map& entries() const {
        static const Map none;
        return map_ ? *map_ : none;
    }
    bool same_storage(const Table& o) const { return map_ == o.map_; }

private:
    std::shared_ptr<const Map> map_;
};

struct ThetaEntry;
struct XiEntry;
using Theta = Table<ThetaEntry>;
using Xi = Table<XiEntry>;

// theta(y) = l xi i
struct ThetaEntry {
    Term left;
    Xi xi;
    int pos = 0;
};

// xi(z) = t' theta i
struct XiEntry {
    NodeId node = 0;
    Theta theta;
    int pos = 0;
};

// Deep table equality: same domain, same entries, same stored positions.
bool operator==(const Theta& a, const Theta& b);
bool operator==(const Xi& a, const Xi& b);
// a extends b: every entry of b is also an entry of a
bool extends(const Theta& a, const Theta& b);
bool extends(const Xi& a, const Xi& b);

// Similarity except for a tile. `skip(y)` holds for tree variables labelling
// a dependent of the tile; their theta entries are not compared.
using VarPredicate = std::function<bool(VarId)>;
bool similar_except(const Theta& a, const Theta& b, const VarPredicate& skip);
bool similar_except(const Xi& a, const Xi& b, const VarPredicate& skip);

enum class StateKind { Args, Value, Empty, Forall, Exists };

struct State {
    StateKind kind = StateKind::Forall;
    std::vector<Term> lefts; // Args
    Term left;               // Value
    Term right;              // Args, Value, Empty

    static State args(std::vector<Term> ls, Term r) { return {StateKind::Args, std::move(ls), {}, std::move(r)}; }
    static State value(Term l, Term r) { return {StateKind::Value, {}, std::move(l), std::move(r)}; }
    static State empty(Term r) { return {StateKind::Empty, {}, {}, std::move(r)}; }
    static State forall() { return {StateKind::Forall, {}, {}, {}}; }
    static State exists() { return {StateKind::Exists, {}, {}, {}}; }

    bool is_final() const { return kind == StateKind::Forall || kind == StateKind::Exists; }
    bool has_right() const { return !is_final(); }
    // q[(l1,...,lk), r], q[l, r], q[-, r], q[A], q[E]
    std::string str() const;
};

enum class Move { Init, A1, A2, A3, B1, C1, C2, C3, C4 };
std::string move_name(Move m);

struct Position {
    NodeId node = 0;
    State state;
    Theta theta;
    Xi xi;
    Move move = Move::Init;
    int choice = 0; // direction taken by B1, C2, C3
    int parent = 0; // parent position, 0 for the initial and final positions
};

struct Play {
    int item = 0;
    std::vector<Position> positions; // positions[0] is pi(1)
    std::vector<std::pair<int, int>> choices; // (position index, direction) where k > 1

    int size() const { return static_cast<int>(positions.size()); }
    // 1-based access
    const Position& at(int j) const { return positions.at(static_cast<std::size_t>(j - 1)); }
    const Position& last() const { return positions.back(); }
    bool exists_wins() const { return last().state.kind == StateKind::Exists; }
};

struct StepBudget {
    std::size_t positions_per_play = 1'000'000;
    std::size_t plays = 100'000;
};

// The tree-checking game for a term tree and a problem.
class Game {
public:
    Game(TermTree tree, Problem problem);

    const TermTree& tree() const { return tree_; }
    const Problem& problem() const { return problem_; }

    Position initial(int item) const;
    // Number of directions open to the refuter at pos (1 for deterministic moves).
    int branching(const Position& pos) const;
    // Next position from pi(m) = pos. choice is required when branching > 1.
    Position step(const Position& pos, int m, int item, std::optional<int> choice) const;
    // All next positions, one per direction.
    std::vector<Position> successors(const Position& pos, int m, int item) const;

    // Every maximal play for an item, in lexicographic choice order.
    std::vector<Play> plays(int item, const StepBudget& budget = {}) const;
    // The play following the given directions at successive choice points;
    // missing directions default to 1.
    Play replay(int item, const std::vector<int>& choices, const StepBudget& budget = {}) const;

    // true iff the refuter loses the game
    bool verdict(const StepBudget& budget = {}) const;
    // per-item result: equation items hold iff all plays end q[E],
    // disequations hold iff some play ends q[A]
    std::vector<bool> item_results(const StepBudget& budget = {}) const;

private:
    Position advance(const Position& pos, int m, int item, int d) const;
    Position move_from(const Position& pos, int m, int item, int d) const;
    State enter_branch(const Term& s, const Item& it) const;

    TermTree tree_;
    Problem problem_;
};

// ---------------------------------------------------------------- relations

// parent index of pi(j), 1 < j < |pi|
int parent(const Play& play, int j);
// pi(j) is a descendent of pi(i)
bool descendent(const Play& play, int i, int j);
// Right terms of pi(i) and pi(j) agree.
bool is_ri(const Play& play, int i, int j);
bool is_nri(const Play& play, int i, int j);
// Intervals pi(i..j) and pi(i2..j2) correspond.
bool correspond(const Play& play, int i, int j, int i2, int j2);
bool correspond(const Play& a, int i, int j, const Play& b, int i2, int j2);

// The b-partition of pi(1..j) for pi(j) at a lambda node: pi(1) followed by
// one interval per simple tile on the branch from the root.
struct Interval {
    int first = 0;
    int last = 0;
    friend bool operator==(const Interval&, const Interval&) = default;
};
std::vector<Interval> b_partition(const Play& play, int j);

struct Variation {
    int stage = 0;    // index into the b-partitions (1-based tile index)
    int at = 0;       // j_k
    int at2 = 0;      // j'_k
    NodeId tile = 0;  // root node of the simple tile
};
// Where two positions at the same lambda node first differ.
Variation vary_at(const Play& play, int j, int j2);

// Trace rendering: one tab-separated line per position.
std::string render_trace(const Play& play, bool tables = false);
std::string render_theta(const Theta& t);
std::string render_xi(const Xi& x);

} // namespace hom
