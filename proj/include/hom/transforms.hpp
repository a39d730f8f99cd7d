#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hom/game.hpp"
#include "hom/tiles.hpp"

namespace hom {

// |t|: simple tiles with atomic leaves on a longest branch
// ||t||: simple tiles with atomic leaves in total
struct SizeMeasures {
    int depth_tiles = 0;
    int total_tiles = 0;
};
SizeMeasures sizes(const TermTree& t);
SizeMeasures sizes(const Term& t);

class TransformError : public std::runtime_error {
public:
    enum class Kind { NotAvoided, PreconditionFailed, NotApplicable, VerdictLost };
    TransformError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Nodes visited by some play.
std::vector<bool> visited_nodes(const TermTree& t, const std::vector<Play>& plays);
std::vector<Play> all_plays(const Game& g, const StepBudget& budget = {});

// Replace an avoided subtree, rooted at a variable or higher-type constant,
// by d. The verdict of the result is re-checked.
Term t1_apply(const TermTree& t, const Problem& p, NodeId root, const StepBudget& budget = {});
// Excise a j-end, j-directed tile, keeping the subtree under its j-th leaf.
Term t2_apply(const TermTree& t, const Problem& p, NodeId root, int j, const StepBudget& budget = {});

struct ShrinkStep {
    int step = 0;
    std::string kind; // T1 or T2
    NodeId root = 0;
    int leaf = 0; // j for T2
    int before = 0;
    int after = 0;
    bool verdict = false;
    Term result;
};

struct ShrinkResult {
    Term term;
    std::vector<ShrinkStep> steps;
};

// Fixpoint of T1 then deepest-first T2. Requires verdict(t, P).
ShrinkResult shrink(const Term& t, const Problem& p, const StepBudget& budget = {});
std::string render_steps(const std::vector<ShrinkStep>& steps);

// A count that may exceed 2^64.
using Bounded = std::optional<std::uint64_t>;
std::string bounded_str(const Bounded& b);

struct BoundReport {
    int order = 0;
    int order_n = 0;
    int alpha = 0;
    int delta = 0;
    int p = 0;
    std::vector<Bounded> g_table; // g(1..n)
    Bounded N_n;
    Bounded third_order_bound;
    Bounded general_bound;
    int top_tiles = 1;
    Bounded fifth_order_bound;
};

Bounded g_value(int alpha, int k);
BoundReport bounds(const Problem& p, int top_tiles = 1);
std::string render_bounds(const BoundReport& r);

} // namespace hom
