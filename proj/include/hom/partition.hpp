#pragma once

#include <optional>
#include <vector>

#include "hom/game.hpp"
#include "hom/tiles.hpp"

namespace hom {

// tau_k => leaf @ tau_target
struct StageEdge {
    NodeId leaf = 0;
    int target = 0; // stage index, 1-based
    friend bool operator==(const StageEdge&, const StageEdge&) = default;
};

struct Stage {
    int k = 0;
    NodeId tile = 0; // root node of the simple tile tau_k
    Interval interval;
    std::optional<StageEdge> edge; // absent for stage 1
};

struct PPartition {
    std::vector<Stage> stages;
    // tags[j] is the stage whose tile occurrence holds pi(j); tags[0] unused
    std::vector<int> tags;
};

// Staged p-partition of a complete play.
PPartition p_partition(const Play& play, const TermTree& t);
// Third-order form: every stage ends at the first later position on a leaf
// of its own tile.
PPartition p_partition_third_order(const Play& play, const TermTree& t);

// pi(p) descends from pi(l) through an A3 child of pi(l)
bool binding_descendent(const Play& play, int l, int p);

} // namespace hom
