#pragma once

#include <map>
#include <string>
#include <vector>

#include "hom/game.hpp"
#include "hom/problem.hpp"

namespace hom::testing {

std::string data_path(const std::string& name);

struct Instance {
    std::string name;
    Problem problem;
    Term term;
};

// (examp1, fig1), (examp2, fig3), (examp3, fig4)
std::vector<Instance> curated();
Instance load_instance(const std::string& name, const std::string& problem, const std::string& term);

// Violation counts per property, with the first message of each kind.
struct PropertyReport {
    std::map<std::string, int> violations;
    std::map<std::string, std::string> first;
    int positions = 0;
    int plays = 0;
    void add(const std::string& kind, const std::string& msg);
    int total() const;
};

// parent uniqueness, table extension, binder definedness, constant-tile
// plays, end-tile single play, b-partition shape
void check_properties(const TermTree& t, const std::vector<Play>& plays, PropertyReport& r);
PropertyReport check_properties(const Term& t, const Problem& p);

} // namespace hom::testing
