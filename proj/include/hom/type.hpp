#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace hom {

// Simple type in flattened form (A1, ..., An, o). An empty argument list is
// the base type o.
class Type {
public:
    Type() = default;
    explicit Type(std::vector<Type> args) : args_(std::move(args)) {}

    static Type base() { return Type{}; }
    // from -> to, absorbing the arguments of `to`
    static Type arrow(const Type& from, const Type& to);

    bool is_base() const { return args_.empty(); }
    std::size_t arity() const { return args_.size(); }
    const std::vector<Type>& args() const { return args_; }
    const Type& arg(std::size_t i) const { return args_.at(i); }

    // order(o) = 1, order((A1..An,o)) = 1 + max order(Ai)
    int order() const;

    // arrow syntax, e.g. "(o -> o) -> o -> o"
    std::string str() const;
    // tuple syntax, e.g. "((0,0),0,0)"
    std::string tuple_str() const;

    friend bool operator==(const Type&, const Type&) = default;
    friend std::strong_ordering operator<=>(const Type& a, const Type& b);

private:
    std::vector<Type> args_;
};

// Type with the first n arguments removed.
Type drop_args(const Type& t, std::size_t n);

// Every subtype of t, including t and o.
void collect_subtypes(const Type& t, std::vector<Type>& out);

} // namespace hom
