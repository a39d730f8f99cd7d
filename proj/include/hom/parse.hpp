#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hom/term.hpp"

namespace hom {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& msg)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

using ConstEnv = std::map<std::string, Type>;

Type parse_type(const std::string& src);
// Parse a term; free identifiers must name constants in env. The result is
// brought to eta-long normal form.
Term parse_term(const std::string& src, const ConstEnv& env);
// Same, without normalisation.
Term parse_term_raw(const std::string& src, const ConstEnv& env);

// A term file: optional "base o" and "const name : Type" lines followed by a
// single term. Declared constants are added to env.
Term parse_term_file(const std::string& src, ConstEnv& env);

struct RawItem {
    std::vector<Term> args;
    bool eq = true;
    Term rhs;
    int line = 0;
};

struct RawProblem {
    Var x;
    ConstEnv constants;
    std::vector<RawItem> items;
};

// Problem file: "base o", "const f : T", "var x : T", then items
// "eq a1 .. ak = u" or "neq a1 .. ak != u" where each ai is an identifier or
// a parenthesised term.
RawProblem parse_problem_source(const std::string& src);

std::string read_file(const std::string& path);

} // namespace hom
