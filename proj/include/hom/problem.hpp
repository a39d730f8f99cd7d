#pragma once

#include <map>
#include <string>
#include <vector>

#include "hom/parse.hpp"
#include "hom/term.hpp"

namespace hom {

enum class Rel { Eq, Neq };

struct Item {
    std::vector<Term> args;
    Rel rel = Rel::Eq;
    Term rhs;
    // one fresh constant per bound variable of rhs, in binding order
    std::vector<Const> forbidden;
    std::map<VarId, Const> forbidden_for;
};

// Dual interpolation problem: x v1..vn = u / != u for each item.
struct Problem {
    Var x;
    ConstEnv constants;
    std::vector<Item> items;
    Const d; // fresh ground constant

    // constants a solution may use: right-term constants and d
    std::vector<Const> solution_alphabet() const;
    // declared constants and d; forbidden ones excluded
    std::vector<Const> allowed_constants() const;
    bool is_forbidden(const std::string& name) const;
    int order() const { return x.type.order(); }
};

inline constexpr const char* kForbiddenPrefix = "#c";

// Attach forbidden constants and pick a name for d.
Problem make_problem(Var x, ConstEnv constants, std::vector<Item> items);
Problem from_raw(const RawProblem& raw);
Problem parse_problem(const std::string& src);
Problem load_problem(const std::string& path);
// Problem file text that parses back to the same problem.
std::string print_problem(const Problem& p);
// Parse a candidate term file; its constant declarations join the problem's.
Term parse_candidate(Problem& p, const std::string& src);
Term load_candidate(Problem& p, const std::string& path);

struct Diagnostic {
    std::string code; // NonGroundRhs, SharedBoundVars, ...
    int item = -1;
    int other = -1;
    std::string reason;
    std::string str() const;
};

std::vector<Diagnostic> validate(const Problem& p);

// Cl(w, X, C): ground closure of a right term under a constant assignment
// for its bound variables.
std::vector<Term> ground_closure(const Term& w, const std::map<VarId, Const>& c);
// Sub(w, C): relative subterms of a left term.
std::vector<Term> subterms_rel(const Term& w, const std::vector<Const>& c);

int right_size(const Term& u);
int branch_count(const Term& u);

struct ProblemSets {
    std::vector<Term> R;
    std::vector<std::vector<Term>> L_items;
    std::vector<Term> L;
    std::vector<Type> T;
};

struct Metrics {
    int delta = 0;
    int alpha = 0;
    int p = 0;
};

ProblemSets build_sets(const Problem& p);
Metrics metrics(const Problem& p);
int right_size_of(const Problem& p);

// add a term to a set kept unique up to alpha-equivalence
void insert_unique(std::vector<Term>& set, const Term& t);
bool contains_alpha(const std::vector<Term>& set, const Term& t);

} // namespace hom
