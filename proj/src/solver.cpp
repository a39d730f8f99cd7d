#include "hom/solver.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "hom/oracle.hpp"
#include "hom/transforms.hpp"

#ifdef HOM_HAVE_OPENMP
#include <omp.h>
#endif

namespace hom {

// ---------------------------------------------------------------- enumeration

namespace {

class Enumerator {
public:
    explicit Enumerator(const std::vector<Const>& alphabet) : alphabet_(alphabet) {}

    std::vector<Term> of_type(const std::vector<Var>& ctx, const Type& ty, int size, int depth) {
        std::vector<Var> inner = ctx;
        std::vector<Var> binders;
        for (const auto& a : ty.args()) {
            binders.push_back(Var::fresh("x" + std::to_string(inner.size() + 1), a));
            inner.push_back(binders.back());
        }
        auto bodies = body(inner, size, depth);
        if (binders.empty()) return bodies;
        std::vector<Term> out;
        out.reserve(bodies.size());
        for (const auto& b : bodies) out.push_back(Term::abs(binders, b));
        return out;
    }

private:
    std::vector<Term> body(const std::vector<Var>& ctx, int size, int depth) {
        std::vector<Term> out;
        for (const auto& v : ctx) with_head(Term::var(v), ctx, size, depth, out);
        for (const auto& c : alphabet_) with_head(Term::constant(c), ctx, size, depth, out);
        return out;
    }

    void with_head(const Term& h, const std::vector<Var>& ctx, int size, int depth, std::vector<Term>& out) {
        const Type& ht = h.type();
        std::size_t k = ht.arity();
        if (k == 0) {
            if (size == 0) out.push_back(h);
            return;
        }
        if (size < 1 || depth < 1) return;
        std::vector<int> parts(k, 0);
        // compositions of size - 1 into k parts, in lexicographic order
        std::function<void(std::size_t, int)> split = [&](std::size_t i, int left) {
            if (i + 1 == k) {
                parts[i] = left;
                product(h, ctx, parts, depth - 1, out);
                return;
            }
            for (int s = 0; s <= left; ++s) {
                parts[i] = s;
                split(i + 1, left - s);
            }
        };
        split(0, size - 1);
    }

    void product(const Term& h, const std::vector<Var>& ctx, const std::vector<int>& parts, int depth,
                 std::vector<Term>& out) {
        const Type& ht = h.type();
        std::vector<std::vector<Term>> choices;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            choices.push_back(of_type(ctx, ht.arg(i), parts[i], depth));
            if (choices.back().empty()) return;
        }
        std::vector<std::size_t> idx(choices.size(), 0);
        while (true) {
            std::vector<Term> args;
            for (std::size_t i = 0; i < choices.size(); ++i) args.push_back(choices[i][idx[i]]);
            out.push_back(Term::app(h, std::move(args)));
            std::size_t i = choices.size();
            while (i > 0) {
                --i;
                if (++idx[i] < choices[i].size()) break;
                idx[i] = 0;
                if (i == 0) return;
            }
        }
    }

    const std::vector<Const>& alphabet_;
};

} // namespace

std::vector<Term> terms_of_size(const Type& ty, const std::vector<Const>& alphabet, int size, int max_depth) {
    return Enumerator(alphabet).of_type({}, ty, size, max_depth);
}

void enumerate_terms(const Type& ty, const std::vector<Const>& alphabet, const SearchConfig& cfg,
                     const std::function<bool(const Term&)>& visit) {
    for (int s = 0; s <= cfg.max_total_tiles; ++s)
        for (const auto& t : terms_of_size(ty, alphabet, s, cfg.max_depth_tiles))
            if (!visit(t)) return;
}

EffectiveCaps effective_caps(const Problem& p, const SearchConfig& cfg) {
    EffectiveCaps c{cfg.max_total_tiles, cfg.max_depth_tiles, {}};
    if (!cfg.use_bound) return c;
    BoundReport r = bounds(p);
    Bounded b = p.order() <= 3 ? r.third_order_bound : r.general_bound;
    if (!b) {
        c.note = "bound exceeds 2^64; using explicit caps";
        return c;
    }
    if (*b > static_cast<std::uint64_t>(kBoundCap)) {
        c.note = "bound " + std::to_string(*b) + " clipped to " + std::to_string(kBoundCap);
        c.max_total_tiles = kBoundCap;
    } else {
        c.max_total_tiles = static_cast<int>(*b);
    }
    c.max_depth_tiles = c.max_total_tiles;
    return c;
}

bool accepts(const Term& t, const Problem& p, const StepBudget& budget) {
    try {
        return Game(TermTree(t), p).verdict(budget);
    } catch (const GameError& e) {
        if (e.kind() == GameError::Kind::BudgetExceeded) return false;
        throw;
    }
}

namespace {

// errors inside a parallel region would terminate the process
bool accepts_quietly(const Term& t, const Problem& p, const StepBudget& budget) {
    try {
        return accepts(t, p, budget);
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace

SolveResult solve(const Problem& p, const SearchConfig& cfg) {
    SolveResult r;
    EffectiveCaps caps = effective_caps(p, cfg);
    StepBudget budget;
    budget.positions_per_play = cfg.step_budget;
    auto alphabet = p.solution_alphabet();
    for (int s = 0; s <= caps.max_total_tiles; ++s) {
        auto bucket = terms_of_size(p.x.type, alphabet, s, caps.max_depth_tiles);
        const long n = static_cast<long>(bucket.size());
        long best = std::numeric_limits<long>::max();
#ifdef HOM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 8) reduction(min : best)
#endif
        for (long i = 0; i < n; ++i)
            if (i < best && accepts_quietly(bucket[static_cast<std::size_t>(i)], p, budget)) best = std::min(best, i);
        if (best == std::numeric_limits<long>::max()) {
            r.tried += bucket.size();
            continue;
        }
        r.tried += static_cast<std::size_t>(best) + 1;
        r.term = bucket[static_cast<std::size_t>(best)];
        r.size = s;
        r.oracle_confirmed = solves(*r.term, p).overall;
        return r;
    }
    return r;
}

// -------------------------------------------------------------------- fuzzing

ConstEnv fuzz_signature() {
    Type o = Type::base();
    Type oo = Type::arrow(o, o);
    return {
        {"a", o},
        {"b", o},
        {"f", oo},
        {"g", Type::arrow(o, oo)},
        {"h", Type::arrow(oo, o)},
    };
}

namespace {

int pick(std::mt19937_64& rng, int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)); }

Term random_in(std::mt19937_64& rng, std::vector<Var>& ctx, const Type& ty, const std::vector<Const>& constants,
               int depth) {
    std::size_t mark = ctx.size();
    std::vector<Var> binders;
    for (const auto& a : ty.args()) {
        binders.push_back(Var::fresh("v" + std::to_string(ctx.size() + 1), a));
        ctx.push_back(binders.back());
    }
    std::vector<Term> heads;
    for (const auto& v : ctx)
        if (depth > 0 || v.type.is_base()) heads.push_back(Term::var(v));
    for (const auto& c : constants)
        if (depth > 0 || c.type.is_base()) heads.push_back(Term::constant(c));
    // bias towards bound variables so that plays travel through the arguments
    Term h;
    std::size_t vars = 0;
    for (const auto& t : heads) vars += t.is_var() ? 1 : 0;
    if (vars > 0 && pick(rng, 3) > 0)
        h = heads[static_cast<std::size_t>(pick(rng, static_cast<int>(vars)))];
    else
        h = heads[static_cast<std::size_t>(pick(rng, static_cast<int>(heads.size())))];
    Term body = h;
    if (!h.type().is_base()) {
        std::vector<Term> args;
        for (const auto& a : h.type().args()) args.push_back(random_in(rng, ctx, a, constants, depth - 1));
        body = Term::app(h, std::move(args));
    }
    ctx.resize(mark);
    return binders.empty() ? body : Term::abs(std::move(binders), body);
}

Type random_of_order(std::mt19937_64& rng, int order) {
    if (order <= 1) return Type::base();
    int n = 1 + pick(rng, 2);
    int exact = pick(rng, n);
    std::vector<Type> args;
    for (int i = 0; i < n; ++i) {
        int ord = i == exact ? order - 1 : 1 + pick(rng, std::min(order - 1, 2));
        args.push_back(random_of_order(rng, ord));
    }
    return Type(std::move(args));
}

std::vector<Const> signature_constants() {
    std::vector<Const> out;
    for (const auto& [n, t] : fuzz_signature()) out.push_back(Const{n, t});
    return out;
}

} // namespace

Term random_term(std::mt19937_64& rng, const Type& ty, const std::vector<Const>& constants, int depth) {
    std::vector<Var> ctx;
    return random_in(rng, ctx, ty, constants, depth);
}

Type random_type(std::mt19937_64& rng, int max_order, bool exact) {
    int order = exact ? max_order : 2 + pick(rng, std::max(1, max_order - 1));
    return random_of_order(rng, std::max(2, order));
}

Planted random_planted(std::uint64_t seed, int max_order, int max_delta, bool exact_order) {
    std::mt19937_64 rng(seed);
    auto constants = signature_constants();
    for (int attempt = 0;; ++attempt) {
        Var x = Var::fresh("x", random_type(rng, max_order, exact_order));
        Term t = random_term(rng, x.type, constants, 2 + pick(rng, 2));
        int n_items = 1 + pick(rng, 2);
        std::vector<Item> items;
        for (int i = 0; i < n_items; ++i) {
            Item it;
            for (const auto& a : x.type.args()) it.args.push_back(random_term(rng, a, constants, 1 + pick(rng, 2)));
            it.rhs = subst(long_normal(Term::app(t, it.args)), {});
            items.push_back(std::move(it));
        }
        Problem p = make_problem(x, fuzz_signature(), std::move(items));
        if (!validate(p).empty()) continue;
        if (metrics(p).delta > max_delta) {
            if (attempt > 100000) throw std::runtime_error("no planted problem within the delta limit");
            continue;
        }
        return {std::move(p), t};
    }
}

// one pair: the planted problem, plus an optional disequation, against either
// the planted solution or a random term
namespace {

struct PairOutcome {
    bool budget = false;
    std::string error;
    bool game = false;
    bool oracle = false;
    std::string problem;
    std::string term;
};

PairOutcome run_pair(const FuzzConfig& cfg, int index) {
    std::uint64_t s = cfg.seed + static_cast<std::uint64_t>(index);
    Planted pl = random_planted(s, cfg.max_order, cfg.max_delta);
    std::mt19937_64 rng(s ^ 0x9e3779b97f4a7c15ULL);
    Problem p = pl.problem;
    if (pick(rng, 3) == 0) {
        // disequation against the normal form of another random term
        Term other = random_term(rng, p.x.type, signature_constants(), 2);
        Item it;
        for (const auto& a : p.x.type.args()) it.args.push_back(random_term(rng, a, signature_constants(), 1));
        it.rhs = subst(long_normal(Term::app(other, it.args)), {});
        it.rel = Rel::Neq;
        auto items = p.items;
        items.push_back(std::move(it));
        Problem q = make_problem(p.x, p.constants, std::move(items));
        if (validate(q).empty()) p = std::move(q);
    }
    Term t = pl.solution;
    if (pick(rng, 2) == 0) {
        auto alphabet = p.solution_alphabet();
        t = random_term(rng, p.x.type, alphabet, 1 + pick(rng, 3));
    }
    PairOutcome o;
    StepBudget budget;
    budget.positions_per_play = cfg.step_budget;
    try {
        o.game = Game(TermTree(t), p).verdict(budget);
    } catch (const GameError& e) {
        if (e.kind() != GameError::Kind::BudgetExceeded) throw;
        o.budget = true;
        return o;
    }
    o.oracle = solves(t, p).overall;
    if (o.game != o.oracle) {
        o.problem = print_problem(p);
        o.term = print_source(t);
    }
    return o;
}

PairOutcome guarded_pair(const FuzzConfig& cfg, int index) {
    try {
        return run_pair(cfg, index);
    } catch (const std::exception& e) {
        PairOutcome o;
        o.error = e.what();
        return o;
    }
}

FuzzReport collect(const std::vector<PairOutcome>& outs) {
    FuzzReport r;
    r.pairs = static_cast<int>(outs.size());
    for (std::size_t i = 0; i < outs.size(); ++i) {
        const auto& o = outs[i];
        if (!o.error.empty()) {
            r.errors.push_back({static_cast<int>(i), o.error});
        } else if (o.budget) {
            ++r.budget_skips;
        } else if (o.game != o.oracle) {
            r.mismatches.push_back({static_cast<int>(i), o.problem, o.term, o.game, o.oracle});
        } else if (o.game) {
            ++r.agree_true;
        } else {
            ++r.agree_false;
        }
    }
    return r;
}

} // namespace

FuzzReport fuzz(const FuzzConfig& cfg) {
    std::vector<PairOutcome> outs(static_cast<std::size_t>(std::max(0, cfg.count)));
    const int n = static_cast<int>(outs.size());
#ifdef HOM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < n; ++i) outs[static_cast<std::size_t>(i)] = guarded_pair(cfg, i);
    return collect(outs);
}

FuzzReport fuzz_serial(const FuzzConfig& cfg) {
    std::vector<PairOutcome> outs;
    for (int i = 0; i < cfg.count; ++i) outs.push_back(guarded_pair(cfg, i));
    return collect(outs);
}

std::string FuzzReport::str() const {
    std::ostringstream os;
    os << "pairs\t" << pairs << "\n";
    os << "agree true\t" << agree_true << "\n";
    os << "agree false\t" << agree_false << "\n";
    os << "budget skips\t" << budget_skips << "\n";
    os << "errors\t" << errors.size() << "\n";
    os << "mismatches\t" << mismatches.size() << "\n";
    for (const auto& [i, what] : errors) os << "error " << i << "\t" << what << "\n";
    for (const auto& m : mismatches) {
        os << "mismatch " << m.index << "\tgame " << (m.game ? "true" : "false") << "\toracle "
           << (m.oracle ? "true" : "false") << "\n";
        os << m.problem << "term " << m.term << "\n";
    }
    return os.str();
}

} // namespace hom
