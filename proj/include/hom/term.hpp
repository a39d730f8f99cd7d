#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hom/type.hpp"

namespace hom {

using VarId = std::uint32_t;

VarId fresh_id();

struct Var {
    VarId id = 0;
    std::string name;
    Type type;

    static Var fresh(std::string name, Type type) { return Var{fresh_id(), std::move(name), std::move(type)}; }
    friend bool operator==(const Var& a, const Var& b) { return a.id == b.id; }
};

struct Const {
    std::string name;
    Type type;

    friend bool operator==(const Const& a, const Const& b) { return a.name == b.name; }
};

class TypeError : public std::runtime_error {
public:
    TypeError(const std::string& path, const std::string& msg)
        : std::runtime_error(msg + " at " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Immutable simply typed term. Abstractions carry a non-empty binder list and
// applications a non-empty argument list; nesting is flattened on
// construction. Types are checked and cached when a node is built.
class Term {
public:
    enum class Kind { Var, Const, Abs, App };

    Term() = default;

    static Term var(const Var& v);
    static Term constant(const Const& c);
    static Term abs(std::vector<Var> binders, const Term& body);
    static Term app(const Term& fn, std::vector<Term> args);

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;
    const Type& type() const;

    bool is_var() const { return kind() == Kind::Var; }
    bool is_const() const { return kind() == Kind::Const; }
    bool is_abs() const { return kind() == Kind::Abs; }
    bool is_app() const { return kind() == Kind::App; }

    const Var& as_var() const;
    const Const& as_const() const;
    const std::vector<Var>& binders() const;
    const Term& body() const;
    const Term& fn() const;
    const std::vector<Term>& args() const;

    // head symbol and spine of a non-abstraction: x t1..tk -> (x, [t1..tk])
    const Term& head() const;
    const std::vector<Term>& spine() const;

    const void* identity() const { return node_.get(); }

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Renaming-free structural equality up to bound names.
bool alpha_equal(const Term& a, const Term& b);

// Canonical string with bound variables numbered by binding depth; equal
// keys iff alpha_equal.
std::string alpha_key(const Term& t);

// Capture-avoiding substitution; every binder traversed is renamed fresh.
Term subst(const Term& t, const std::map<VarId, Term>& s);
// Substitution of closed terms; binders are kept as they are.
Term instantiate(const Term& t, const std::map<VarId, Term>& s);

// Normal-order (leftmost-outermost) beta normal form.
Term beta_normalize(const Term& t);
// Applicative-order normal form, used to cross-check beta_normalize.
Term beta_normalize_applicative(const Term& t);
// Eta-long form of a beta-normal term.
Term eta_long(const Term& t);
// beta_normalize followed by eta_long
Term long_normal(const Term& t);

bool is_beta_normal(const Term& t);
bool is_eta_long(const Term& t);

// The type of a term; env supplies the types of free variables by name and is
// checked against the annotations carried by the term.
Type type_of(const Term& t, const std::map<std::string, Type>& env = {});

void free_vars(const Term& t, std::vector<Var>& out);
bool is_closed(const Term& t);
void constants_of(const Term& t, std::vector<Const>& out);
void bound_vars(const Term& t, std::vector<Var>& out);

// Untyped display form: \x y. f x (g y)
std::string show(const Term& t);
// Re-parseable form with binder annotations.
std::string print_source(const Term& t);

} // namespace hom
