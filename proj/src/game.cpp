#include "hom/game.hpp"

#include <algorithm>
#include <sstream>

namespace hom {

// ------------------------------------------------------------------ tables

namespace {

bool same_entry(const ThetaEntry& a, const ThetaEntry& b);
bool same_entry(const XiEntry& a, const XiEntry& b);

template <class E>
bool tables_equal(const Table<E>& a, const Table<E>& b) {
    if (a.same_storage(b)) return true;
    if (a.size() != b.size()) return false;
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    for (; ia != a.entries().end(); ++ia, ++ib)
        if (ia->first != ib->first || !same_entry(ia->second, ib->second)) return false;
    return true;
}

bool same_entry(const ThetaEntry& a, const ThetaEntry& b) {
    return a.pos == b.pos && alpha_equal(a.left, b.left) && tables_equal(a.xi, b.xi);
}

bool same_entry(const XiEntry& a, const XiEntry& b) {
    return a.pos == b.pos && a.node == b.node && tables_equal(a.theta, b.theta);
}

template <class E>
bool table_extends(const Table<E>& a, const Table<E>& b) {
    if (a.same_storage(b)) return true;
    for (const auto& [v, e] : b.entries()) {
        const E* o = a.find(v);
        if (!o || !same_entry(*o, e)) return false;
    }
    return true;
}

template <class E>
bool same_domain(const Table<E>& a, const Table<E>& b) {
    if (a.size() != b.size()) return false;
    auto ia = a.entries().begin();
    auto ib = b.entries().begin();
    for (; ia != a.entries().end(); ++ia, ++ib)
        if (ia->first != ib->first) return false;
    return true;
}

} // namespace

bool operator==(const Theta& a, const Theta& b) { return tables_equal(a, b); }
bool operator==(const Xi& a, const Xi& b) { return tables_equal(a, b); }
bool extends(const Theta& a, const Theta& b) { return table_extends(a, b); }
bool extends(const Xi& a, const Xi& b) { return table_extends(a, b); }

bool similar_except(const Theta& a, const Theta& b, const VarPredicate& skip) {
    if (a == b) return true;
    if (!same_domain(a, b)) return false;
    for (const auto& [v, e] : a.entries()) {
        if (skip && skip(v)) continue;
        const ThetaEntry* o = b.find(v);
        if (!alpha_equal(e.left, o->left) || !similar_except(e.xi, o->xi, skip)) return false;
    }
    return true;
}

bool similar_except(const Xi& a, const Xi& b, const VarPredicate& skip) {
    if (a == b) return true;
    if (!same_domain(a, b)) return false;
    for (const auto& [v, e] : a.entries()) {
        const XiEntry* o = b.find(v);
        if (e.node != o->node || !similar_except(e.theta, o->theta, skip)) return false;
    }
    return true;
}

// ------------------------------------------------------------------ states

std::string State::str() const {
    switch (kind) {
    case StateKind::Args: {
        std::string s = "q[(";
        for (std::size_t i = 0; i < lefts.size(); ++i) s += (i ? "," : "") + show(lefts[i]);
        return s + "), " + show(right) + "]";
    }
    case StateKind::Value:
        return "q[" + show(left) + ", " + show(right) + "]";
    case StateKind::Empty:
        return "q[-, " + show(right) + "]";
    case StateKind::Forall:
        return "q[A]";
    case StateKind::Exists:
        return "q[E]";
    }
    return "q[?]";
}

std::string move_name(Move m) {
    switch (m) {
    case Move::Init: return "init";
    case Move::A1: return "A1";
    case Move::A2: return "A2";
    case Move::A3: return "A3";
    case Move::B1: return "B1";
    case Move::C1: return "C1";
    case Move::C2: return "C2";
    case Move::C3: return "C3";
    case Move::C4: return "C4";
    }
    return "?";
}

// -------------------------------------------------------------------- game

namespace {

bool is_atom(const Term& r, const std::string& name) {
    return r.is_const() && r.spine().empty() && r.as_const().name == name;
}

bool headed_by(const Term& r, const std::string& name, std::size_t k) {
    const Term& h = r.head();
    return h.is_const() && h.as_const().name == name && r.spine().size() == k;
}

[[noreturn]] void internal(const std::string& msg) { throw GameError(GameError::Kind::Internal, msg); }

} // namespace

Game::Game(TermTree tree, Problem problem) : tree_(std::move(tree)), problem_(std::move(problem)) {}

Position Game::initial(int item) const {
    const Item& it = problem_.items.at(static_cast<std::size_t>(item));
    const TreeNode& root = tree_.at(tree_.root());
    if (root.binders.size() != it.args.size())
        throw GameError(GameError::Kind::ArityMismatch,
                        "term takes " + std::to_string(root.binders.size()) + " arguments, item " +
                            std::to_string(item) + " supplies " + std::to_string(it.args.size()));
    Position p;
    p.node = tree_.root();
    p.state = State::args(it.args, it.rhs);
    return p;
}

// State entered after the refuter picks the argument s of a right term.
State Game::enter_branch(const Term& s, const Item& it) const {
    if (!s.is_abs()) return State::args({}, s);
    std::vector<Term> cs;
    std::map<VarId, Term> sub;
    for (const auto& x : s.binders()) {
        auto f = it.forbidden_for.find(x.id);
        if (f == it.forbidden_for.end()) internal("no forbidden constant for " + x.name);
        Term c = Term::constant(f->second);
        cs.push_back(c);
        sub[x.id] = c;
    }
    return State::args(std::move(cs), instantiate(s.body(), sub));
}

int Game::branching(const Position& pos) const {
    const State& q = pos.state;
    if (q.is_final()) return 0;
    if (q.kind == StateKind::Empty) return static_cast<int>(q.right.spine().size());
    if (q.kind != StateKind::Value) return 1;
    Term body = q.left.is_abs() ? q.left.body() : q.left;
    const Term& h = body.head();
    if (!h.is_const() || h.type().is_base()) return 1;
    std::size_t k = body.spine().empty() ? h.type().arity() : body.spine().size();
    if (!headed_by(q.right, h.as_const().name, k)) return 1;
    return static_cast<int>(k);
}

Position Game::step(const Position& pos, int m, int item, std::optional<int> choice) const {
    int k = branching(pos);
    if (k == 0) internal("no move from a final position");
    int d = choice.value_or(1);
    if (!choice && k > 1)
        throw GameError(GameError::Kind::IllegalChoice, "a direction is required at position " + std::to_string(m));
    if (d < 1 || d > k)
        throw GameError(GameError::Kind::IllegalChoice,
                        "direction " + std::to_string(d) + " out of range 1.." + std::to_string(k));
    return advance(pos, m, item, d);
}

std::vector<Position> Game::successors(const Position& pos, int m, int item) const {
    std::vector<Position> out;
    int k = branching(pos);
    for (int d = 1; d <= k; ++d) out.push_back(advance(pos, m, item, d));
    return out;
}

Position Game::advance(const Position& pos, int m, int item, int d) const {
    Position next = move_from(pos, m, item, d);
    if (branching(pos) <= 1) next.choice = 0;
    return next;
}

Position Game::move_from(const Position& pos, int m, int item, int d) const {
    const Item& it = problem_.items.at(static_cast<std::size_t>(item));
    const TreeNode& n = tree_.at(pos.node);
    const State& q = pos.state;
    Position next;
    next.theta = pos.theta;
    next.xi = pos.xi;

    switch (q.kind) {
    case StateKind::Args: {
        if (n.label != Label::Lambda) internal("argument state away from a lambda node");
        if (n.binders.size() != q.lefts.size()) internal("binder count differs from argument count");
        for (std::size_t i = 0; i < n.binders.size(); ++i)
            next.theta = next.theta.with(n.binders[i].id, ThetaEntry{q.lefts[i], pos.xi, m});
        next.node = n.succ.at(0);
        const TreeNode& c = tree_.at(next.node);
        if (c.label == Label::Const) {
            if (c.succ.empty()) {
                next.move = Move::A1;
                next.state = is_atom(q.right, c.cst.name) ? State::exists() : State::forall();
            } else {
                next.move = Move::A2;
                next.parent = m;
                next.state = headed_by(q.right, c.cst.name, c.succ.size()) ? State::empty(q.right) : State::forall();
                if (next.state.is_final()) next.parent = 0;
            }
        } else {
            const ThetaEntry* e = next.theta.find(c.var.id);
            if (!e) internal("unbound variable " + c.var.name);
            next.move = Move::A3;
            next.xi = e->xi;
            next.parent = e->pos;
            next.state = State::value(e->left, q.right);
        }
        return next;
    }
    case StateKind::Empty: {
        if (n.label != Label::Const) internal("empty state away from a constant node");
        next.move = Move::B1;
        next.choice = d;
        next.parent = m;
        next.node = n.succ.at(static_cast<std::size_t>(d - 1));
        next.state = enter_branch(q.right.spine().at(static_cast<std::size_t>(d - 1)), it);
        return next;
    }
    case StateKind::Value: {
        if (n.label != Label::Var) internal("value state away from a variable node");
        Term body = q.left;
        if (q.left.is_abs()) {
            const auto& zs = q.left.binders();
            if (zs.size() != n.succ.size()) internal("left term binders differ from node successors");
            for (std::size_t i = 0; i < zs.size(); ++i)
                next.xi = next.xi.with(zs[i].id, XiEntry{n.succ[i], pos.theta, m});
            body = q.left.body();
        }
        const Term& h = body.head();
        if (h.is_const()) {
            const std::string& f = h.as_const().name;
            next.node = pos.node;
            if (body.spine().empty() && h.type().is_base()) {
                next.move = Move::C1;
                next.state = is_atom(q.right, f) ? State::exists() : State::forall();
                return next;
            }
            if (body.spine().empty()) {
                // bare constant of higher type
                next.move = Move::C2;
                std::size_t k = h.type().arity();
                if (!headed_by(q.right, f, k)) {
                    next.state = State::forall();
                    return next;
                }
                next.choice = d;
                next.parent = m;
                next.node = n.succ.at(static_cast<std::size_t>(d - 1));
                next.state = enter_branch(q.right.spine().at(static_cast<std::size_t>(d - 1)), it);
                return next;
            }
            next.move = Move::C3;
            std::size_t k = body.spine().size();
            if (!headed_by(q.right, f, k)) {
                next.state = State::forall();
                return next;
            }
            next.choice = d;
            next.parent = m;
            const Term& s = q.right.spine().at(static_cast<std::size_t>(d - 1));
            const Term& w = body.spine().at(static_cast<std::size_t>(d - 1));
            if (!s.is_abs()) {
                next.state = State::value(w, s);
                return next;
            }
            if (!w.is_abs() || w.binders().size() != s.binders().size())
                internal("left and right arguments disagree in shape");
            std::map<VarId, Term> ws, ss;
            for (std::size_t i = 0; i < s.binders().size(); ++i) {
                auto f2 = it.forbidden_for.find(s.binders()[i].id);
                if (f2 == it.forbidden_for.end()) internal("no forbidden constant for " + s.binders()[i].name);
                Term c = Term::constant(f2->second);
                ws[w.binders()[i].id] = c;
                ss[s.binders()[i].id] = c;
            }
            next.state = State::value(instantiate(w.body(), ws), instantiate(s.body(), ss));
            return next;
        }
        const XiEntry* e = next.xi.find(h.as_var().id);
        if (!e) internal("unbound left variable " + h.as_var().name);
        next.move = Move::C4;
        next.node = e->node;
        next.theta = e->theta;
        next.parent = e->pos;
        next.state = State::args(body.spine(), q.right);
        return next;
    }
    case StateKind::Forall:
    case StateKind::Exists:
        break;
    }
    internal("no move from a final position");
}

std::vector<Play> Game::plays(int item, const StepBudget& budget) const {
    std::vector<Play> out;
    Play start;
    start.item = item;
    start.positions.push_back(initial(item));
    std::vector<Play> stack{std::move(start)};
    while (!stack.empty()) {
        Play p = std::move(stack.back());
        stack.pop_back();
        while (!p.last().state.is_final()) {
            if (p.positions.size() >= budget.positions_per_play)
                throw GameError(GameError::Kind::BudgetExceeded,
                                "play exceeded " + std::to_string(budget.positions_per_play) + " positions");
            int m = p.size();
            int k = branching(p.last());
            if (k > 1) {
                // explore direction 1 now, push the rest in reverse for order
                for (int d = k; d >= 2; --d) {
                    Play alt = p;
                    alt.positions.push_back(advance(p.last(), m, item, d));
                    alt.choices.emplace_back(m, d);
                    stack.push_back(std::move(alt));
                }
                p.choices.emplace_back(m, 1);
            }
            p.positions.push_back(advance(p.last(), m, item, 1));
        }
        out.push_back(std::move(p));
        if (out.size() > budget.plays)
            throw GameError(GameError::Kind::BudgetExceeded, "more than " + std::to_string(budget.plays) + " plays");
    }
    return out;
}

Play Game::replay(int item, const std::vector<int>& choices, const StepBudget& budget) const {
    Play p;
    p.item = item;
    p.positions.push_back(initial(item));
    std::size_t next_choice = 0;
    while (!p.last().state.is_final()) {
        if (p.positions.size() >= budget.positions_per_play)
            throw GameError(GameError::Kind::BudgetExceeded,
                            "play exceeded " + std::to_string(budget.positions_per_play) + " positions");
        int m = p.size();
        int k = branching(p.last());
        int d = 1;
        if (k > 1) {
            if (next_choice < choices.size()) d = choices[next_choice++];
            p.choices.emplace_back(m, d);
        }
        p.positions.push_back(step(p.last(), m, item, d));
    }
    return p;
}

std::vector<bool> Game::item_results(const StepBudget& budget) const {
    std::vector<bool> out;
    for (std::size_t i = 0; i < problem_.items.size(); ++i) {
        auto ps = plays(static_cast<int>(i), budget);
        bool all_e = std::all_of(ps.begin(), ps.end(), [](const Play& p) { return p.exists_wins(); });
        bool some_a = !all_e;
        out.push_back(problem_.items[i].rel == Rel::Eq ? all_e : some_a);
    }
    return out;
}

bool Game::verdict(const StepBudget& budget) const {
    auto r = item_results(budget);
    return std::all_of(r.begin(), r.end(), [](bool b) { return b; });
}

// --------------------------------------------------------------- relations

int parent(const Play& play, int j) {
    if (j <= 1 || j > play.size()) throw std::out_of_range("parent: index " + std::to_string(j));
    return play.at(j).parent;
}

bool descendent(const Play& play, int i, int j) {
    while (j > i) {
        if (j >= play.size()) return false;
        j = play.at(j).parent;
        if (j == 0) return false;
    }
    return j == i;
}

bool is_ri(const Play& play, int i, int j) {
    if (i == j) return true;
    const State& a = play.at(i).state;
    const State& b = play.at(j).state;
    if (!a.has_right() || !b.has_right()) return false;
    return alpha_equal(a.right, b.right);
}

bool is_nri(const Play& play, int i, int j) { return !is_ri(play, i, j) && !play.at(j).state.is_final(); }

namespace {

bool left_agree(const State& a, const State& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case StateKind::Args:
        if (a.lefts.size() != b.lefts.size()) return false;
        for (std::size_t i = 0; i < a.lefts.size(); ++i)
            if (!alpha_equal(a.lefts[i], b.lefts[i])) return false;
        return true;
    case StateKind::Value:
        return alpha_equal(a.left, b.left);
    default:
        return true;
    }
}

} // namespace

bool correspond(const Play& a, int i, int j, const Play& b, int i2, int j2) {
    if (j - i != j2 - i2 || j >= a.size() || j2 >= b.size() || i < 1 || i2 < 1) return false;
    for (int k = 0; k <= j - i; ++k) {
        const Position& p = a.at(i + k);
        const Position& q = b.at(i2 + k);
        if (p.node != q.node || !left_agree(p.state, q.state)) return false;
    }
    return true;
}

bool correspond(const Play& play, int i, int j, int i2, int j2) { return correspond(play, i, j, play, i2, j2); }

std::vector<Interval> b_partition(const Play& play, int j) {
    if (j < 1 || j > play.size()) throw std::out_of_range("b_partition: index " + std::to_string(j));
    if (play.at(j).state.is_final()) throw std::invalid_argument("b_partition: final position");
    std::vector<Interval> rev;
    int cur = j;
    while (cur > 1) {
        int i = play.at(cur).parent;
        if (i <= 0 || i >= cur) throw std::logic_error("b_partition: broken parent chain at " + std::to_string(cur));
        // a stay run at a variable node belongs to one tile play
        while (i > 1 && play.at(i).node == play.at(i - 1).node &&
               (play.at(i).move == Move::C3 || play.at(i).move == Move::C1))
            --i;
        rev.push_back({i, cur});
        cur = i - 1;
    }
    if (cur != 1) throw std::logic_error("b_partition: did not reach the root");
    rev.push_back({1, 1});
    std::reverse(rev.begin(), rev.end());
    return rev;
}

Variation vary_at(const Play& play, int j, int j2) {
    if (j == j2) throw std::invalid_argument("vary_at: same position");
    if (play.at(j).node != play.at(j2).node) throw std::invalid_argument("vary_at: positions at different nodes");
    auto a = b_partition(play, j);
    auto b = b_partition(play, j2);
    if (a.size() != b.size()) throw std::logic_error("vary_at: b-partitions of different length");
    for (std::size_t k = 1; k < a.size(); ++k) {
        if (a[k].first == b[k].first && a[k].last != b[k].last) {
            Variation v;
            v.stage = static_cast<int>(k);
            v.at = a[k].last;
            v.at2 = b[k].last;
            // tile root: the node of the stage's first position
            v.tile = play.at(a[k].first).node;
            return v;
        }
    }
    throw std::logic_error("vary_at: b-partitions agree");
}

// --------------------------------------------------------------- rendering

std::string render_theta(const Theta& t) {
    std::string s = "{";
    bool first = true;
    for (const auto& [v, e] : t.entries()) {
        s += (first ? "" : ", ") + show(e.left) + "@" + std::to_string(e.pos) + "/v" + std::to_string(v);
        first = false;
    }
    return s + "}";
}

std::string render_xi(const Xi& x) {
    std::string s = "{";
    bool first = true;
    for (const auto& [v, e] : x.entries()) {
        s += (first ? "" : ", ") + std::string("(") + std::to_string(e.node) + ")@" + std::to_string(e.pos) + "/v" +
             std::to_string(v);
        first = false;
    }
    return s + "}";
}

std::string render_trace(const Play& play, bool tables) {
    std::ostringstream os;
    for (int j = 1; j <= play.size(); ++j) {
        const Position& p = play.at(j);
        os << j << '\t' << p.node << '\t' << move_name(p.move) << '\t' << p.state.str();
        if (p.choice > 0) os << '\t' << p.choice;
        else if (tables) os << '\t';
        if (tables) os << '\t' << render_theta(p.theta) << '\t' << render_xi(p.xi);
        os << '\n';
    }
    return os.str();
}

} // namespace hom
