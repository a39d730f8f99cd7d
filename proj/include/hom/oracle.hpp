#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hom/problem.hpp"

namespace hom {

class ForbiddenConstant : public std::runtime_error {
public:
    explicit ForbiddenConstant(const std::string& name)
        : std::runtime_error("constant " + name + " may not occur in a solution"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

struct ItemReport {
    Term normal_form;
    bool equal = false; // normal form is alpha-equal to the right term
    bool holds = false; // equal for equations, !equal for disequations
};

struct OracleReport {
    std::vector<ItemReport> items;
    bool overall = false;
};

// Decide t |= P by normalising t v1..vn for every item.
OracleReport solves(const Term& t, const Problem& p);

// Throws ForbiddenConstant if t uses a constant outside the allowed set.
void check_alphabet(const Term& t, const Problem& p);

} // namespace hom
