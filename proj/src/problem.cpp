#include "hom/problem.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hom {

void insert_unique(std::vector<Term>& set, const Term& t) {
    if (!contains_alpha(set, t)) set.push_back(t);
}

bool contains_alpha(const std::vector<Term>& set, const Term& t) {
    return std::any_of(set.begin(), set.end(), [&](const Term& s) { return alpha_equal(s, t); });
}

bool Problem::is_forbidden(const std::string& name) const { return name.rfind(kForbiddenPrefix, 0) == 0; }

std::vector<Const> Problem::solution_alphabet() const {
    std::vector<Const> out;
    for (const auto& it : items) constants_of(it.rhs, out);
    std::erase_if(out, [&](const Const& c) { return is_forbidden(c.name); });
    std::sort(out.begin(), out.end(), [](const Const& a, const Const& b) { return a.name < b.name; });
    out.push_back(d);
    return out;
}

std::vector<Const> Problem::allowed_constants() const {
    std::vector<Const> out;
    for (const auto& [n, t] : constants) out.push_back(Const{n, t});
    if (!constants.count(d.name)) out.push_back(d);
    return out;
}

Problem make_problem(Var x, ConstEnv constants, std::vector<Item> items) {
    Problem p;
    p.x = std::move(x);
    p.constants = std::move(constants);
    int next = 1;
    for (auto& it : items) {
        it.forbidden.clear();
        it.forbidden_for.clear();
        std::vector<Var> bvs;
        bound_vars(it.rhs, bvs);
        for (const auto& v : bvs) {
            Const c{std::string(kForbiddenPrefix) + std::to_string(next++), v.type};
            it.forbidden.push_back(c);
            it.forbidden_for[v.id] = c;
        }
    }
    p.items = std::move(items);
    std::string dn = "d";
    for (int k = 0; p.constants.count(dn); ++k) dn = "d" + std::to_string(k);
    p.d = Const{dn, Type::base()};
    return p;
}

Problem from_raw(const RawProblem& raw) {
    std::vector<Item> items;
    for (const auto& r : raw.items) {
        Item it;
        it.args = r.args;
        it.rel = r.eq ? Rel::Eq : Rel::Neq;
        it.rhs = r.rhs;
        items.push_back(std::move(it));
    }
    return make_problem(raw.x, raw.constants, std::move(items));
}

Problem parse_problem(const std::string& src) { return from_raw(parse_problem_source(src)); }

Problem load_problem(const std::string& path) { return parse_problem(read_file(path)); }

std::string print_problem(const Problem& p) {
    std::string out = "base o\n";
    for (const auto& [n, t] : p.constants) out += "const " + n + " : " + t.str() + "\n";
    out += "var " + p.x.name + " : " + p.x.type.str() + "\n";
    for (const auto& it : p.items) {
        out += it.rel == Rel::Eq ? "eq" : "neq";
        for (const auto& a : it.args) {
            std::string s = print_source(a);
            out += " " + (a.is_const() ? s : "(" + s + ")");
        }
        out += (it.rel == Rel::Eq ? " = " : " != ") + print_source(it.rhs) + "\n";
    }
    return out;
}

Term parse_candidate(Problem& p, const std::string& src) {
    ConstEnv env = p.constants;
    Term t = parse_term_file(src, env);
    if (!(t.type() == p.x.type))
        throw TypeError("candidate", "type " + t.type().str() + " differs from " + p.x.type.str());
    std::vector<Var> fv;
    free_vars(t, fv);
    if (!fv.empty()) throw TypeError("candidate", "free variable " + fv.front().name);
    for (const auto& [n, ty] : env)
        if (!p.is_forbidden(n)) p.constants.emplace(n, ty);
    return t;
}

Term load_candidate(Problem& p, const std::string& path) { return parse_candidate(p, read_file(path)); }

std::string Diagnostic::str() const {
    std::string s = code + "(" + std::to_string(item);
    if (other >= 0) s += "," + std::to_string(other);
    s += ")";
    if (!reason.empty()) s += ": " + reason;
    return s;
}

std::vector<Diagnostic> validate(const Problem& p) {
    std::vector<Diagnostic> out;
    if (p.x.type.order() <= 1) out.push_back({"OrderTooLow", -1, -1, "type of " + p.x.name + " has order 1"});
    std::vector<std::set<std::string>> names(p.items.size());
    for (std::size_t i = 0; i < p.items.size(); ++i) {
        const auto& it = p.items[i];
        int ii = static_cast<int>(i);
        if (it.args.size() != p.x.type.arity()) {
            out.push_back({"ArgCount", ii, -1,
                           "expected " + std::to_string(p.x.type.arity()) + " arguments, got " + std::to_string(it.args.size())});
        } else {
            for (std::size_t j = 0; j < it.args.size(); ++j)
                if (!(it.args[j].type() == p.x.type.arg(j)))
                    out.push_back({"ArgType", ii, static_cast<int>(j),
                                   "expected " + p.x.type.arg(j).str() + ", got " + it.args[j].type().str()});
        }
        if (!it.rhs.type().is_base()) out.push_back({"NonGroundRhs", ii, -1, "right term has type " + it.rhs.type().str()});
        bool closed = is_closed(it.rhs);
        for (const auto& a : it.args) closed = closed && is_closed(a);
        if (!closed) out.push_back({"NotClosed", ii, -1, "item contains free variables"});
        bool long_form = is_eta_long(it.rhs) && is_beta_normal(it.rhs);
        for (const auto& a : it.args) long_form = long_form && is_eta_long(a) && is_beta_normal(a);
        if (!long_form) out.push_back({"NotLongNormal", ii, -1, "terms must be in eta-long normal form"});
        std::vector<Const> cs;
        for (const auto& a : it.args) constants_of(a, cs);
        constants_of(it.rhs, cs);
        for (const auto& c : cs) {
            auto d = p.constants.find(c.name);
            if (d == p.constants.end() || !(d->second == c.type))
                out.push_back({"UndeclaredConstant", ii, -1, c.name});
        }
        std::vector<Var> bv;
        for (const auto& a : it.args) bound_vars(a, bv);
        bound_vars(it.rhs, bv);
        for (const auto& v : bv) names[i].insert(v.name);
    }
    for (std::size_t i = 0; i < p.items.size(); ++i)
        for (std::size_t j = i + 1; j < p.items.size(); ++j) {
            std::vector<std::string> shared;
            std::set_intersection(names[i].begin(), names[i].end(), names[j].begin(), names[j].end(),
                                  std::back_inserter(shared));
            if (!shared.empty())
                out.push_back({"SharedBoundVars", static_cast<int>(i), static_cast<int>(j), shared.front()});
        }
    return out;
}

// ----------------------------------------------------------- derived sets

namespace {

void closure_rec(const Term& w, const std::map<VarId, Const>& c, std::vector<Term>& out) {
    if (w.is_abs()) {
        std::map<VarId, Term> s;
        for (const auto& b : w.binders()) {
            auto it = c.find(b.id);
            if (it == c.end()) throw TypeError(show(w), "no constant for bound variable " + b.name);
            s[b.id] = Term::constant(it->second);
        }
        closure_rec(instantiate(w.body(), s), c, out);
        return;
    }
    insert_unique(out, w);
    for (const auto& a : w.spine()) closure_rec(a, c, out);
}

void sub_rec(const Term& w, const std::vector<Const>& c, bool prime, std::vector<Term>& out);

void sub_abs_prime(const Term& w, const std::vector<Const>& c, std::vector<Term>& out) {
    const auto& bs = w.binders();
    std::vector<std::vector<Const>> choices;
    for (const auto& b : bs) {
        std::vector<Const> same;
        for (const auto& k : c)
            if (k.type == b.type) same.push_back(k);
        if (same.empty()) return;
        choices.push_back(std::move(same));
    }
    std::vector<std::size_t> idx(bs.size(), 0);
    while (true) {
        std::map<VarId, Term> s;
        for (std::size_t i = 0; i < bs.size(); ++i) s[bs[i].id] = Term::constant(choices[i][idx[i]]);
        sub_rec(instantiate(w.body(), s), c, false, out);
        std::size_t k = 0;
        while (k < bs.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
        if (k == bs.size()) break;
    }
}

void sub_rec(const Term& w, const std::vector<Const>& c, bool prime, std::vector<Term>& out) {
    if (w.is_abs()) {
        if (prime) {
            sub_abs_prime(w, c, out);
        } else {
            insert_unique(out, w);
            sub_rec(w.body(), c, false, out);
        }
        return;
    }
    insert_unique(out, w);
    bool const_head = w.head().is_const();
    for (const auto& a : w.spine()) sub_rec(a, c, const_head, out);
}

int right_size_rec(const Term& u) {
    if (u.is_abs()) return right_size_rec(u.body());
    if (u.spine().empty()) return 0;
    int n = 1;
    for (const auto& a : u.spine()) n += right_size_rec(a);
    return n;
}

void term_types(const Term& t, std::vector<Type>& out) {
    collect_subtypes(t.type(), out);
    if (t.is_abs()) {
        for (const auto& b : t.binders()) collect_subtypes(b.type, out);
        term_types(t.body(), out);
        return;
    }
    collect_subtypes(t.head().type(), out);
    for (const auto& a : t.spine()) term_types(a, out);
}

} // namespace

std::vector<Term> ground_closure(const Term& w, const std::map<VarId, Const>& c) {
    std::vector<Term> out;
    closure_rec(w, c, out);
    return out;
}

std::vector<Term> subterms_rel(const Term& w, const std::vector<Const>& c) {
    std::vector<Term> out;
    sub_rec(w, c, false, out);
    return out;
}

int right_size(const Term& u) { return right_size_rec(u); }

int branch_count(const Term& u) {
    if (u.is_abs()) return branch_count(u.body());
    if (u.spine().empty()) return 1;
    int n = 0;
    for (const auto& a : u.spine()) n += branch_count(a);
    return n;
}

int right_size_of(const Problem& p) {
    int n = 0;
    for (const auto& it : p.items) n += right_size(it.rhs);
    return n;
}

ProblemSets build_sets(const Problem& p) {
    ProblemSets s;
    collect_subtypes(p.x.type, s.T);
    for (const auto& it : p.items) {
        for (const auto& r : ground_closure(it.rhs, it.forbidden_for)) insert_unique(s.R, r);
        std::vector<Term> li;
        for (const auto& c : it.forbidden) insert_unique(li, Term::constant(c));
        for (const auto& v : it.args)
            for (const auto& l : subterms_rel(v, it.forbidden)) insert_unique(li, l);
        for (const auto& l : li) insert_unique(s.L, l);
        s.L_items.push_back(std::move(li));
        term_types(it.rhs, s.T);
    }
    return s;
}

Metrics metrics(const Problem& p) {
    Metrics m;
    ProblemSets s = build_sets(p);
    for (const auto& t : s.T) m.alpha = std::max(m.alpha, static_cast<int>(t.arity()));
    for (const auto& it : p.items) {
        m.delta += right_size(it.rhs);
        m.p += branch_count(it.rhs);
    }
    return m;
}

} // namespace hom
