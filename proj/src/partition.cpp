#include "hom/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace hom {

bool binding_descendent(const Play& play, int l, int p) {
    int c = p;
    while (c > l) {
        int par = play.at(c).parent;
        if (par == 0) return false;
        if (par == l) return play.at(c).move == Move::A3;
        c = par;
    }
    return false;
}

namespace {

bool same_position(const Play& play, int a, int b) { return correspond(play, a, a, b, b); }

class Partitioner {
public:
    Partitioner(const Play& play, const TermTree& t) : play_(play), tree_(t) {
        out_.tags.assign(static_cast<std::size_t>(play.size()) + 1, 0);
    }

    PPartition run() {
        int n = play_.size();
        tagged_ = 1;
        int prev = 1;
        while (prev < n) {
            Stage s;
            s.k = static_cast<int>(out_.stages.size()) + 1;
            s.interval.first = prev + 1;
            s.tile = play_.at(prev + 1).node;
            if (s.k > 1) s.edge = StageEdge{play_.at(prev).node, tag(prev)};
            start_ = s.interval.first;
            out_.stages.push_back(s);
            int last = stage_end(s.k, s.interval.first);
            out_.stages.back().interval.last = last;
            prev = last;
        }
        tag(n);
        return std::move(out_);
    }

private:
    int tag(int p) {
        while (tagged_ < p) {
            ++tagged_;
            out_.tags[static_cast<std::size_t>(tagged_)] = compute_tag(tagged_);
        }
        return out_.tags[static_cast<std::size_t>(p)];
    }

    int compute_tag(int p) {
        int k = static_cast<int>(out_.stages.size());
        if (p == start_) return k;
        const Position& pos = play_.at(p);
        switch (pos.move) {
        case Move::C4:
            return out_.tags[static_cast<std::size_t>(pos.parent)];
        case Move::A1:
        case Move::A2:
        case Move::A3: {
            NodeId leaf = play_.at(p - 1).node;
            int from = out_.tags[static_cast<std::size_t>(p - 1)];
            for (int s = k; s >= 1; --s) {
                const auto& e = out_.stages[static_cast<std::size_t>(s - 1)].edge;
                if (e && e->leaf == leaf && e->target == from) return s;
            }
            for (int s = k; s >= 1; --s)
                if (out_.stages[static_cast<std::size_t>(s - 1)].tile == pos.node) return s;
            return 0;
        }
        default:
            return out_.tags[static_cast<std::size_t>(p - 1)];
        }
    }

    // largest h for the candidate j', or -1 if it does not qualify
    int continuation(int j, int j2, int k) {
        Variation v;
        try {
            v = vary_at(play_, j, j2);
        } catch (const std::exception&) {
            return -1; // the positions do not vary at a common tile
        }
        NodeId tk = out_.stages[static_cast<std::size_t>(k - 1)].tile;
        if (!same_family(tree_, v.tile, tk)) return -1;
        auto heads = dependent_heads(tree_, simple_tile_at(tree_, v.tile));
        auto skip = [&](VarId x) { return heads.count(x) > 0; };
        if (!similar_except(play_.at(j + 1).theta, play_.at(j2 + 1).theta, skip)) return -1;
        if (binding_descendent(play_, v.at2, j2)) return -1;
        int n = play_.size();
        int h = 0;
        while (j + h + 1 < n && j2 + h + 1 < n && !binding_descendent(play_, v.at2, j2 + h + 1) &&
               same_position(play_, j + h + 1, j2 + h + 1))
            ++h;
        return h;
    }

    int stage_end(int k, int first) {
        int n = play_.size();
        int j = first;
        while (true) {
            while (j != n && !tree_.is_lambda(play_.at(j).node)) ++j;
            if (j == n || tag(j) == k) return j;
            int best = -1;
            for (int j2 = j - 1; j2 >= 1; --j2) {
                if (play_.at(j2).node != play_.at(j).node) continue;
                int h = continuation(j, j2, k);
                if (h > best) best = h;
            }
            if (best < 0) return j;
            j += best + 1;
            if (j > n) j = n;
        }
    }

    const Play& play_;
    const TermTree& tree_;
    PPartition out_;
    int tagged_ = 1;
    int start_ = 0;
};

} // namespace

PPartition p_partition(const Play& play, const TermTree& t) { return Partitioner(play, t).run(); }

PPartition p_partition_third_order(const Play& play, const TermTree& t) {
    PPartition out;
    out.tags.assign(static_cast<std::size_t>(play.size()) + 1, 0);
    int n = play.size();
    int prev = 1;
    while (prev < n) {
        Stage s;
        s.k = static_cast<int>(out.stages.size()) + 1;
        s.interval.first = prev + 1;
        s.tile = play.at(prev + 1).node;
        if (s.k > 1) s.edge = StageEdge{play.at(prev).node, s.k - 1};
        Tile tile = simple_tile_at(t, s.tile);
        int j = s.interval.first + 1;
        while (j < n && std::find(tile.leaves.begin(), tile.leaves.end(), play.at(j).node) == tile.leaves.end()) ++j;
        s.interval.last = std::min(j, n);
        for (int p = s.interval.first; p <= s.interval.last; ++p) out.tags[static_cast<std::size_t>(p)] = s.k;
        out.stages.push_back(s);
        prev = s.interval.last;
    }
    return out;
}

} // namespace hom
