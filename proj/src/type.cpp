#include "hom/type.hpp"

#include <algorithm>

namespace hom {

Type Type::arrow(const Type& from, const Type& to) {
    std::vector<Type> args;
    args.reserve(to.arity() + 1);
    args.push_back(from);
    args.insert(args.end(), to.args_.begin(), to.args_.end());
    return Type(std::move(args));
}

int Type::order() const {
    int m = 0;
    for (const auto& a : args_) m = std::max(m, a.order());
    return m + 1;
}

std::string Type::str() const {
    if (is_base()) return "o";
    std::string s;
    for (const auto& a : args_) {
        if (a.is_base())
            s += "o";
        else
            s += "(" + a.str() + ")";
        s += " -> ";
    }
    return s + "o";
}

std::string Type::tuple_str() const {
    if (is_base()) return "0";
    std::string s = "(";
    for (const auto& a : args_) s += a.tuple_str() + ",";
    return s + "0)";
}

std::strong_ordering operator<=>(const Type& a, const Type& b) {
    return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(),
                                                  b.args_.begin(), b.args_.end());
}

Type drop_args(const Type& t, std::size_t n) {
    std::vector<Type> rest(t.args().begin() + static_cast<std::ptrdiff_t>(std::min(n, t.arity())),
                           t.args().end());
    return Type(std::move(rest));
}

void collect_subtypes(const Type& t, std::vector<Type>& out) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    for (const auto& a : t.args()) collect_subtypes(a, out);
    if (std::find(out.begin(), out.end(), Type::base()) == out.end()) out.push_back(Type::base());
}

} // namespace hom
