#include "hom/oracle.hpp"

#include <algorithm>

namespace hom {

void check_alphabet(const Term& t, const Problem& p) {
    std::vector<Const> cs;
    constants_of(t, cs);
    auto allowed = p.allowed_constants();
    for (const auto& c : cs) {
        if (p.is_forbidden(c.name)) throw ForbiddenConstant(c.name);
        auto it = std::find_if(allowed.begin(), allowed.end(), [&](const Const& a) { return a.name == c.name; });
        if (it == allowed.end() || !(it->type == c.type)) throw ForbiddenConstant(c.name);
    }
}

OracleReport solves(const Term& t, const Problem& p) {
    check_alphabet(t, p);
    if (!is_closed(t)) throw TypeError(show(t), "candidate solution is not closed");
    OracleReport r;
    r.overall = true;
    for (const auto& it : p.items) {
        ItemReport ir;
        ir.normal_form = long_normal(it.args.empty() ? t : Term::app(t, it.args));
        ir.equal = alpha_equal(ir.normal_form, long_normal(it.rhs));
        ir.holds = it.rel == Rel::Eq ? ir.equal : !ir.equal;
        r.overall = r.overall && ir.holds;
        r.items.push_back(std::move(ir));
    }
    return r;
}

} // namespace hom
