#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hom/game.hpp"
#include "hom/problem.hpp"

namespace hom {

struct SearchConfig {
    int max_total_tiles = 6;
    int max_depth_tiles = 6;
    std::size_t step_budget = 100'000; // positions per play
    bool use_bound = false;
    std::uint64_t seed = 1;
};

// Practical ceiling applied when the size cap comes from the bound.
inline constexpr int kBoundCap = 8;

// Caps actually used by solve, with a note when the bound was clipped.
struct EffectiveCaps {
    int max_total_tiles = 0;
    int max_depth_tiles = 0;
    std::string note;
};
EffectiveCaps effective_caps(const Problem& p, const SearchConfig& cfg);

// Closed eta-long normal terms of type ty with exactly `size` tiles, heads
// drawn from bound variables and the alphabet, in a fixed order.
std::vector<Term> terms_of_size(const Type& ty, const std::vector<Const>& alphabet, int size, int max_depth);

// Visit every term up to the caps in nondecreasing size; stop when visit
// returns false.
void enumerate_terms(const Type& ty, const std::vector<Const>& alphabet, const SearchConfig& cfg,
                     const std::function<bool(const Term&)>& visit);

struct SolveResult {
    std::optional<Term> term;
    std::size_t tried = 0;
    int size = -1; // size bucket of the witness
    bool oracle_confirmed = false;
};

// First enumerated term the game accepts, or none once the caps are spent.
SolveResult solve(const Problem& p, const SearchConfig& cfg);

// Verdict of t on p, false when the step budget runs out.
bool accepts(const Term& t, const Problem& p, const StepBudget& budget);

// ------------------------------------------------------------------ fuzzing

struct Planted {
    Problem problem;
    Term solution;
};

struct FuzzConfig {
    std::uint64_t seed = 1;
    int count = 1000;
    int max_order = 5;
    int max_delta = 4;
    std::size_t step_budget = 100'000;
};

// Random constant signature used by the generators.
ConstEnv fuzz_signature();
// A random eta-long closed term of type ty over the given constants.
Term random_term(std::mt19937_64& rng, const Type& ty, const std::vector<Const>& constants, int depth);
// A random type of order at most max_order (exactly, when exact is set).
Type random_type(std::mt19937_64& rng, int max_order, bool exact);
// Problem built from a random solution: rhs are the normal forms of t v.
// Retries until delta is within bounds and the problem validates.
Planted random_planted(std::uint64_t seed, int max_order, int max_delta, bool exact_order = false);

struct Mismatch {
    int index = 0;
    std::string problem;
    std::string term;
    bool game = false;
    bool oracle = false;
};

struct FuzzReport {
    int pairs = 0;
    int agree_true = 0;
    int agree_false = 0;
    int budget_skips = 0;
    std::vector<Mismatch> mismatches;
    std::vector<std::pair<int, std::string>> errors; // index and message
    std::string str() const;
};

// One problem per index seeded with seed + index; pairs checked in parallel.
FuzzReport fuzz(const FuzzConfig& cfg);
// Same result computed on one thread.
FuzzReport fuzz_serial(const FuzzConfig& cfg);

} // namespace hom
