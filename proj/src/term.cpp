#include "hom/term.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <unordered_map>

namespace hom {

VarId fresh_id() {
    static std::atomic<VarId> next{1};
    return next.fetch_add(1, std::memory_order_relaxed);
}

struct Term::Node {
    Kind kind;
    Type type;
    Var var;
    Const cst;
    std::vector<Var> binders;
    Term body;
    Term fn;
    std::vector<Term> args;
};

namespace {

const std::vector<Term>& no_terms() {
    static const std::vector<Term> empty;
    return empty;
}

} // namespace

Term Term::var(const Var& v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->type = v.type;
    n->var = v;
    return Term(std::move(n));
}

Term Term::constant(const Const& c) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->type = c.type;
    n->cst = c;
    return Term(std::move(n));
}

Term Term::abs(std::vector<Var> binders, const Term& body) {
    if (!body.valid()) throw TypeError("abs", "empty body");
    if (binders.empty()) return body;
    if (body.is_abs()) {
        binders.insert(binders.end(), body.binders().begin(), body.binders().end());
        return abs(std::move(binders), body.body());
    }
    std::vector<Type> tys;
    for (const auto& b : binders) tys.push_back(b.type);
    tys.insert(tys.end(), body.type().args().begin(), body.type().args().end());
    auto n = std::make_shared<Node>();
    n->kind = Kind::Abs;
    n->type = Type(std::move(tys));
    n->binders = std::move(binders);
    n->body = body;
    return Term(std::move(n));
}

Term Term::app(const Term& fn, std::vector<Term> args) {
    if (!fn.valid()) throw TypeError("app", "empty function");
    if (args.empty()) return fn;
    if (fn.is_app()) {
        std::vector<Term> all = fn.args();
        all.insert(all.end(), args.begin(), args.end());
        return app(fn.fn(), std::move(all));
    }
    const Type& ft = fn.type();
    if (args.size() > ft.arity())
        throw TypeError(show(fn), "too many arguments (" + std::to_string(args.size()) + ") for type " + ft.str());
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].valid()) throw TypeError(show(fn), "empty argument");
        if (!(args[i].type() == ft.arg(i)))
            throw TypeError(show(fn) + " arg " + std::to_string(i + 1),
                            "expected " + ft.arg(i).str() + " but got " + args[i].type().str() + " for " +
                                show(args[i]));
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::App;
    n->type = drop_args(ft, args.size());
    n->fn = fn;
    n->args = std::move(args);
    return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const Type& Term::type() const { return node_->type; }
const Var& Term::as_var() const { return node_->var; }
const Const& Term::as_const() const { return node_->cst; }
const std::vector<Var>& Term::binders() const { return node_->binders; }
const Term& Term::body() const { return node_->body; }
const Term& Term::fn() const { return node_->fn; }
const std::vector<Term>& Term::args() const { return node_->args; }

const Term& Term::head() const { return is_app() ? node_->fn : *this; }
const std::vector<Term>& Term::spine() const { return is_app() ? node_->args : no_terms(); }

// ---------------------------------------------------------------- equality

namespace {

using Levels = std::unordered_map<VarId, int>;

bool alpha_eq(const Term& a, const Term& b, Levels& la, Levels& lb, int depth) {
    if (a.identity() == b.identity() && la.empty() && lb.empty()) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Term::Kind::Var: {
        auto ia = la.find(a.as_var().id);
        auto ib = lb.find(b.as_var().id);
        if (ia == la.end() || ib == lb.end())
            return ia == la.end() && ib == lb.end() && a.as_var().id == b.as_var().id;
        return ia->second == ib->second;
    }
    case Term::Kind::Const:
        return a.as_const().name == b.as_const().name && a.type() == b.type();
    case Term::Kind::Abs: {
        const auto& ba = a.binders();
        const auto& bb = b.binders();
        if (ba.size() != bb.size()) return false;
        for (std::size_t i = 0; i < ba.size(); ++i)
            if (!(ba[i].type == bb[i].type)) return false;
        for (std::size_t i = 0; i < ba.size(); ++i) {
            la[ba[i].id] = depth + static_cast<int>(i);
            lb[bb[i].id] = depth + static_cast<int>(i);
        }
        bool r = alpha_eq(a.body(), b.body(), la, lb, depth + static_cast<int>(ba.size()));
        for (std::size_t i = 0; i < ba.size(); ++i) {
            la.erase(ba[i].id);
            lb.erase(bb[i].id);
        }
        return r;
    }
    case Term::Kind::App: {
        if (a.args().size() != b.args().size()) return false;
        if (!alpha_eq(a.fn(), b.fn(), la, lb, depth)) return false;
        for (std::size_t i = 0; i < a.args().size(); ++i)
            if (!alpha_eq(a.args()[i], b.args()[i], la, lb, depth)) return false;
        return true;
    }
    }
    return false;
}

void key_of(const Term& t, Levels& lv, int depth, std::string& out) {
    switch (t.kind()) {
    case Term::Kind::Var: {
        auto it = lv.find(t.as_var().id);
        if (it != lv.end())
            out += "#" + std::to_string(it->second);
        else
            out += "$" + t.as_var().name + "/" + std::to_string(t.as_var().id);
        return;
    }
    case Term::Kind::Const:
        out += t.as_const().name;
        return;
    case Term::Kind::Abs:
        out += "(\\";
        for (std::size_t i = 0; i < t.binders().size(); ++i) {
            lv[t.binders()[i].id] = depth + static_cast<int>(i);
            out += t.binders()[i].type.tuple_str();
            out += ";";
        }
        out += ".";
        key_of(t.body(), lv, depth + static_cast<int>(t.binders().size()), out);
        for (const auto& b : t.binders()) lv.erase(b.id);
        out += ")";
        return;
    case Term::Kind::App:
        out += "(";
        key_of(t.fn(), lv, depth, out);
        for (const auto& a : t.args()) {
            out += " ";
            key_of(a, lv, depth, out);
        }
        out += ")";
        return;
    }
}

} // namespace

bool alpha_equal(const Term& a, const Term& b) {
    Levels la, lb;
    return alpha_eq(a, b, la, lb, 0);
}

std::string alpha_key(const Term& t) {
    Levels lv;
    std::string out;
    key_of(t, lv, 0, out);
    return out;
}

// ------------------------------------------------------------ substitution

Term subst(const Term& t, const std::map<VarId, Term>& s) {
    switch (t.kind()) {
    case Term::Kind::Var: {
        auto it = s.find(t.as_var().id);
        return it == s.end() ? t : it->second;
    }
    case Term::Kind::Const:
        return t;
    case Term::Kind::Abs: {
        std::map<VarId, Term> inner = s;
        std::vector<Var> bs;
        for (const auto& b : t.binders()) {
            Var nb = Var::fresh(b.name, b.type);
            inner[b.id] = Term::var(nb);
            bs.push_back(nb);
        }
        return Term::abs(std::move(bs), subst(t.body(), inner));
    }
    case Term::Kind::App: {
        std::vector<Term> args;
        for (const auto& a : t.args()) args.push_back(subst(a, s));
        return Term::app(subst(t.fn(), s), std::move(args));
    }
    }
    return t;
}

Term instantiate(const Term& t, const std::map<VarId, Term>& s) {
    switch (t.kind()) {
    case Term::Kind::Var: {
        auto it = s.find(t.as_var().id);
        return it == s.end() ? t : it->second;
    }
    case Term::Kind::Const:
        return t;
    case Term::Kind::Abs:
        return Term::abs(t.binders(), instantiate(t.body(), s));
    case Term::Kind::App: {
        std::vector<Term> args;
        for (const auto& a : t.args()) args.push_back(instantiate(a, s));
        return Term::app(instantiate(t.fn(), s), std::move(args));
    }
    }
    return t;
}

// ----------------------------------------------------------- normalisation

namespace {

// Contract as many leading redexes as the argument list allows.
Term contract(const Term& lam, std::vector<Term> args) {
    Term f = lam;
    while (!args.empty()) {
        if (f.is_app()) {
            std::vector<Term> all = f.args();
            all.insert(all.end(), args.begin(), args.end());
            return Term::app(f.fn(), std::move(all));
        }
        if (!f.is_abs()) return Term::app(f, std::move(args));
        const auto& bs = f.binders();
        std::size_t n = std::min(bs.size(), args.size());
        std::map<VarId, Term> s;
        for (std::size_t i = 0; i < n; ++i) s[bs[i].id] = args[i];
        std::vector<Var> rest(bs.begin() + static_cast<std::ptrdiff_t>(n), bs.end());
        f = subst(Term::abs(std::move(rest), f.body()), s);
        args.erase(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return f;
}

Term whnf(const Term& t) {
    Term cur = t;
    while (cur.is_app() && cur.fn().is_abs()) cur = contract(cur.fn(), cur.args());
    return cur;
}

} // namespace

Term beta_normalize(const Term& t) {
    Term h = whnf(t);
    switch (h.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
        return h;
    case Term::Kind::Abs:
        return Term::abs(h.binders(), beta_normalize(h.body()));
    case Term::Kind::App: {
        std::vector<Term> args;
        args.reserve(h.args().size());
        for (const auto& a : h.args()) args.push_back(beta_normalize(a));
        return Term::app(h.fn(), std::move(args));
    }
    }
    return h;
}

Term beta_normalize_applicative(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
        return t;
    case Term::Kind::Abs:
        return Term::abs(t.binders(), beta_normalize_applicative(t.body()));
    case Term::Kind::App: {
        Term f = beta_normalize_applicative(t.fn());
        std::vector<Term> args;
        for (const auto& a : t.args()) args.push_back(beta_normalize_applicative(a));
        if (!f.is_abs()) return Term::app(f, std::move(args));
        return beta_normalize_applicative(contract(f, std::move(args)));
    }
    }
    return t;
}

bool is_beta_normal(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
        return true;
    case Term::Kind::Abs:
        return is_beta_normal(t.body());
    case Term::Kind::App:
        if (t.fn().is_abs()) return false;
        return std::all_of(t.args().begin(), t.args().end(), [](const Term& a) { return is_beta_normal(a); });
    }
    return false;
}

Term eta_long(const Term& t) {
    std::vector<Var> bs;
    Term body = t;
    if (t.is_abs()) {
        bs = t.binders();
        body = t.body();
    }
    const Term& h = body.head();
    if (h.is_abs()) throw TypeError(show(t), "eta_long needs a beta-normal term");
    std::vector<Term> args;
    for (const auto& a : body.spine()) args.push_back(eta_long(a));
    // missing arguments become fresh eta variables
    const Type& bt = body.type();
    for (std::size_t i = 0; i < bt.arity(); ++i) {
        Var z = Var::fresh("w", bt.arg(i));
        bs.push_back(z);
        args.push_back(eta_long(Term::var(z)));
    }
    return Term::abs(std::move(bs), Term::app(h, std::move(args)));
}

Term long_normal(const Term& t) { return eta_long(beta_normalize(t)); }

bool is_eta_long(const Term& t) {
    Term body = t.is_abs() ? t.body() : t;
    if (!body.type().is_base()) return false;
    if (body.head().is_abs()) return false;
    return std::all_of(body.spine().begin(), body.spine().end(), [](const Term& a) { return is_eta_long(a); });
}

// ----------------------------------------------------------------- queries

Type type_of(const Term& t, const std::map<std::string, Type>& env) {
    std::vector<Var> fv;
    free_vars(t, fv);
    for (const auto& v : fv) {
        auto it = env.find(v.name);
        if (it == env.end()) throw TypeError(v.name, "unbound variable");
        if (!(it->second == v.type))
            throw TypeError(v.name, "variable annotated " + v.type.str() + " but environment gives " + it->second.str());
    }
    return t.type();
}

namespace {

void free_rec(const Term& t, std::set<VarId>& bound, std::set<VarId>& seen, std::vector<Var>& out) {
    switch (t.kind()) {
    case Term::Kind::Var:
        if (!bound.count(t.as_var().id) && seen.insert(t.as_var().id).second) out.push_back(t.as_var());
        return;
    case Term::Kind::Const:
        return;
    case Term::Kind::Abs: {
        std::vector<VarId> added;
        for (const auto& b : t.binders())
            if (bound.insert(b.id).second) added.push_back(b.id);
        free_rec(t.body(), bound, seen, out);
        for (auto id : added) bound.erase(id);
        return;
    }
    case Term::Kind::App:
        free_rec(t.fn(), bound, seen, out);
        for (const auto& a : t.args()) free_rec(a, bound, seen, out);
        return;
    }
}

} // namespace

void free_vars(const Term& t, std::vector<Var>& out) {
    std::set<VarId> bound, seen;
    free_rec(t, bound, seen, out);
}

bool is_closed(const Term& t) {
    std::vector<Var> fv;
    free_vars(t, fv);
    return fv.empty();
}

void constants_of(const Term& t, std::vector<Const>& out) {
    switch (t.kind()) {
    case Term::Kind::Var:
        return;
    case Term::Kind::Const:
        if (std::find(out.begin(), out.end(), t.as_const()) == out.end()) out.push_back(t.as_const());
        return;
    case Term::Kind::Abs:
        constants_of(t.body(), out);
        return;
    case Term::Kind::App:
        constants_of(t.fn(), out);
        for (const auto& a : t.args()) constants_of(a, out);
        return;
    }
}

void bound_vars(const Term& t, std::vector<Var>& out) {
    switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
        return;
    case Term::Kind::Abs:
        out.insert(out.end(), t.binders().begin(), t.binders().end());
        bound_vars(t.body(), out);
        return;
    case Term::Kind::App:
        bound_vars(t.fn(), out);
        for (const auto& a : t.args()) bound_vars(a, out);
        return;
    }
}

// ---------------------------------------------------------------- printing

namespace {

class Printer {
public:
    explicit Printer(bool typed) : typed_(typed) {}

    std::string run(const Term& t) {
        // free names stay as they are; binders must not shadow them
        std::vector<Var> fv;
        free_vars(t, fv);
        for (const auto& v : fv) in_scope_.insert(v.name);
        std::string out;
        go(t, out, false);
        return out;
    }

private:
    bool typed_;
    std::unordered_map<VarId, std::string> names_;
    std::multiset<std::string> in_scope_;

    std::string bind(const Var& v) {
        std::string n = v.name.empty() ? "v" : v.name;
        if (in_scope_.count(n)) {
            for (int k = 1;; ++k) {
                std::string c = n + "_" + std::to_string(k);
                if (!in_scope_.count(c)) {
                    n = c;
                    break;
                }
            }
        }
        in_scope_.insert(n);
        names_[v.id] = n;
        return n;
    }

    void unbind(const Var& v) {
        auto it = names_.find(v.id);
        in_scope_.erase(in_scope_.find(it->second));
        names_.erase(it);
    }

    void go(const Term& t, std::string& out, bool atom) {
        switch (t.kind()) {
        case Term::Kind::Var: {
            auto it = names_.find(t.as_var().id);
            out += it == names_.end() ? t.as_var().name : it->second;
            return;
        }
        case Term::Kind::Const:
            out += t.as_const().name;
            return;
        case Term::Kind::Abs: {
            if (atom) out += "(";
            out += "\\";
            bool first = true;
            for (const auto& b : t.binders()) {
                if (!first) out += " ";
                first = false;
                out += bind(b);
                if (typed_) {
                    out += ":";
                    out += b.type.is_base() ? "o" : "(" + b.type.str() + ")";
                }
            }
            out += ". ";
            go(t.body(), out, false);
            for (const auto& b : t.binders()) unbind(b);
            if (atom) out += ")";
            return;
        }
        case Term::Kind::App:
            if (atom) out += "(";
            go(t.fn(), out, true);
            for (const auto& a : t.args()) {
                out += " ";
                go(a, out, true);
            }
            if (atom) out += ")";
            return;
        }
    }
};

} // namespace

std::string show(const Term& t) { return Printer(false).run(t); }
std::string print_source(const Term& t) { return Printer(true).run(t); }

} // namespace hom
