#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hom/oracle.hpp"
#include "hom/partition.hpp"
#include "hom/solver.hpp"
#include "hom/tiletree.hpp"
#include "hom/transforms.hpp"

using namespace hom;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFails = 1, kError = 2 };

struct Global {
    std::string format = "text";
    bool quiet = false;
    bool json() const { return format == "json"; }
};

void emit(const Global& g, const json& j, const std::string& text) {
    if (g.json())
        std::cout << j.dump(2) << "\n";
    else if (!g.quiet)
        std::cout << text;
}

std::string items_word(const Problem& p) {
    for (const auto& it : p.items)
        if (it.rel != Rel::Eq) return "items";
    return "equations";
}

// term file with the constant declarations it needs
std::string term_file(const Term& t) {
    std::vector<Const> cs;
    constants_of(t, cs);
    std::map<std::string, Type> decl;
    for (const auto& c : cs) decl.emplace(c.name, c.type);
    std::string out;
    for (const auto& [n, ty] : decl) out += "const " + n + " : " + ty.str() + "\n";
    return out + print_source(t) + "\n";
}

std::vector<int> parse_choices(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size() || v < 1) throw std::invalid_argument("choices must be positive integers: " + s);
        out.push_back(v);
    }
    return out;
}

StepBudget budget_of(std::size_t steps) {
    StepBudget b;
    b.positions_per_play = steps;
    return b;
}

int cmd_check(const Global& g, const std::string& prob, const std::string& term, std::size_t steps) {
    Problem p = load_problem(prob);
    Term t = load_candidate(p, term);
    Game game(TermTree(t), p);
    auto res = game.item_results(budget_of(steps));
    OracleReport orc = solves(t, p);
    int ok = static_cast<int>(std::count(res.begin(), res.end(), true));
    int n = static_cast<int>(res.size());
    bool verdict = ok == n;
    std::ostringstream os;
    os << ok << "/" << n << " " << items_word(p) << " hold\n";
    if (orc.overall != verdict) os << "warning: oracle disagrees with the game\n";
    json j{{"holding", ok}, {"items", n}, {"verdict", verdict}, {"oracle", orc.overall}, {"per_item", res}};
    emit(g, j, os.str());
    return verdict ? kOk : kFails;
}

int cmd_trace(const Global& g, const std::string& prob, const std::string& term, int eq, const std::string& choices,
              bool tables, std::size_t steps) {
    Problem p = load_problem(prob);
    Term t = load_candidate(p, term);
    if (eq < 1 || eq > static_cast<int>(p.items.size()))
        throw std::invalid_argument("--eq must be between 1 and " + std::to_string(p.items.size()));
    Game game(TermTree(t), p);
    Play play = game.replay(eq - 1, parse_choices(choices), budget_of(steps));
    json rows = json::array();
    for (int k = 1; k <= play.size(); ++k) {
        const Position& pos = play.at(k);
        json r{{"index", k}, {"node", pos.node}, {"move", move_name(pos.move)}, {"state", pos.state.str()}};
        if (tables) {
            r["theta"] = render_theta(pos.theta);
            r["xi"] = render_xi(pos.xi);
        }
        rows.push_back(r);
    }
    json j{{"item", eq}, {"positions", rows}, {"exists_wins", play.exists_wins()}};
    emit(g, j, render_trace(play, tables));
    return kOk;
}

int cmd_tiles(const Global& g, const std::string& prob, const std::string& term, bool partitions, std::size_t steps) {
    Problem p = load_problem(prob);
    Term t = load_candidate(p, term);
    TermTree tree(t);
    Game game(tree, p);
    auto plays = all_plays(game, budget_of(steps));
    TreeOfTiles tt = tree_of_tiles(tree, plays);
    std::ostringstream os;
    json jp = json::array();
    if (partitions) {
        for (std::size_t k = 0; k < plays.size(); ++k) {
            PPartition pp = p_partition(plays[k], tree);
            os << "play " << k << " (item " << plays[k].item + 1 << ")\n";
            json stages = json::array();
            for (const auto& s : pp.stages) {
                os << "  t" << s.k << "\t" << tree.label_str(s.tile) << "@" << s.tile << "\t(" << s.interval.first << ","
                   << s.interval.last << ")";
                json js{{"stage", s.k}, {"root", s.tile}, {"first", s.interval.first}, {"last", s.interval.last}};
                if (s.edge) {
                    os << "\t=> " << tree.label_str(s.edge->leaf) << "@t" << s.edge->target;
                    js["edge"] = {{"leaf", s.edge->leaf}, {"target", s.edge->target}};
                }
                os << "\n";
                stages.push_back(js);
            }
            jp.push_back({{"play", k}, {"item", plays[k].item + 1}, {"stages", stages}});
        }
    }
    os << dump_tiles(tt, tree);
    json occ = json::array();
    for (const auto& o : tt.occ) {
        json jo{{"id", o.id},
                {"root", o.origin},
                {"tile", o.shape.str()},
                {"nri", o.flags.nri},
                {"final", o.flags.final},
                {"separator", o.flags.separator}};
        if (auto lv = tt.level(o.id)) jo["level"] = *lv;
        if (o.up) jo["up"] = {{"target", o.up->first}, {"leaf", o.up->second}};
        json ps = json::array();
        for (const auto& op : o.plays) ps.push_back({{"play", op.play}, {"first", op.interval.first}, {"last", op.interval.last}});
        jo["plays"] = ps;
        occ.push_back(jo);
    }
    json j{{"occurrences", occ}};
    if (partitions) j["partitions"] = jp;
    emit(g, j, os.str());
    return kOk;
}

int cmd_shrink(const Global& g, const std::string& prob, const std::string& term, const std::string& out,
               std::size_t steps) {
    Problem p = load_problem(prob);
    Term t = load_candidate(p, term);
    ShrinkResult r = shrink(t, p, budget_of(steps));
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << term_file(r.term);
    }
    std::ostringstream os;
    os << render_steps(r.steps);
    auto before = sizes(t);
    auto after = sizes(r.term);
    os << "size " << before.total_tiles << " -> " << after.total_tiles << "\n" << show(r.term) << "\n";
    json js = json::array();
    for (const auto& s : r.steps)
        js.push_back({{"step", s.step},
                      {"kind", s.kind},
                      {"root", s.root},
                      {"leaf", s.leaf},
                      {"before", s.before},
                      {"after", s.after},
                      {"verdict", s.verdict}});
    json j{{"steps", js}, {"before", before.total_tiles}, {"after", after.total_tiles}, {"term", show(r.term)}};
    emit(g, j, os.str());
    return kOk;
}

int cmd_solve(const Global& g, const std::string& prob, const SearchConfig& cfg) {
    Problem p = load_problem(prob);
    auto diags = validate(p);
    if (!diags.empty()) {
        for (const auto& d : diags) std::cerr << d.str() << "\n";
        return kError;
    }
    EffectiveCaps caps = effective_caps(p, cfg);
    if (cfg.use_bound && !g.quiet) {
        std::cerr << "warning: the size bound is far beyond what enumeration can reach except for tiny parameters\n";
        if (!caps.note.empty()) std::cerr << "note: " << caps.note << "\n";
    }
    SolveResult r = solve(p, cfg);
    std::ostringstream os;
    json j{{"tried", r.tried}, {"max_size", caps.max_total_tiles}, {"max_depth", caps.max_depth_tiles}};
    if (r.term) {
        os << "found " << show(*r.term) << "\nsize " << r.size << "\ntried " << r.tried << "\noracle "
           << (r.oracle_confirmed ? "true" : "false") << "\n";
        j["term"] = show(*r.term);
        j["size"] = r.size;
        j["oracle"] = r.oracle_confirmed;
    } else {
        os << "exhausted after " << r.tried << " terms\n";
        j["term"] = nullptr;
    }
    emit(g, j, os.str());
    return r.term ? kOk : kFails;
}

int cmd_bound(const Global& g, const std::string& prob, int k) {
    Problem p = load_problem(prob);
    BoundReport r = bounds(p, k);
    auto val = [](const Bounded& b) { return b ? json(*b) : json("exceeds 2^64"); };
    json gt = json::array();
    for (const auto& v : r.g_table) gt.push_back(val(v));
    json j{{"order", r.order},
           {"n", r.order_n},
           {"delta", r.delta},
           {"alpha", r.alpha},
           {"p", r.p},
           {"g", gt},
           {"N", val(r.N_n)},
           {"third_order_bound", val(r.third_order_bound)},
           {"fifth_order_bound", val(r.fifth_order_bound)},
           {"top_tiles", r.top_tiles},
           {"general_bound", val(r.general_bound)}};
    emit(g, j, render_bounds(r));
    return kOk;
}

int cmd_fuzz(const Global& g, const FuzzConfig& cfg) {
    FuzzReport r = fuzz(cfg);
    json ms = json::array();
    for (const auto& m : r.mismatches)
        ms.push_back({{"index", m.index}, {"problem", m.problem}, {"term", m.term}, {"game", m.game}, {"oracle", m.oracle}});
    json es = json::array();
    for (const auto& [i, what] : r.errors) es.push_back({{"index", i}, {"error", what}});
    json j{{"pairs", r.pairs},
           {"agree_true", r.agree_true},
           {"agree_false", r.agree_false},
           {"budget_skips", r.budget_skips},
           {"errors", es},
           {"mismatches", ms}};
    emit(g, j, r.str());
    return r.mismatches.empty() && r.errors.empty() ? kOk : kFails;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"higher-order matching toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--quiet", g.quiet, "suppress the text report");

    std::string prob, term, choices, out;
    int eq = 1, k = 1;
    bool tables = false, partitions = false;
    std::size_t steps = 1'000'000;

    auto* check = app.add_subcommand("check", "check a candidate term against a problem");
    check->add_option("problem", prob)->required()->check(CLI::ExistingFile);
    check->add_option("term", term)->required()->check(CLI::ExistingFile);
    check->add_option("--steps", steps, "positions per play");

    auto* trace = app.add_subcommand("trace", "print one play of the game");
    trace->add_option("problem", prob)->required()->check(CLI::ExistingFile);
    trace->add_option("term", term)->required()->check(CLI::ExistingFile);
    trace->add_option("--eq", eq, "item number, from 1");
    trace->add_option("--choices", choices, "comma-separated directions at choice points");
    trace->add_flag("--tables", tables, "print the look-up tables");
    trace->add_option("--steps", steps, "positions per play");

    auto* tiles = app.add_subcommand("tiles", "dump the tree of tiles");
    tiles->add_option("problem", prob)->required()->check(CLI::ExistingFile);
    tiles->add_option("term", term)->required()->check(CLI::ExistingFile);
    tiles->add_flag("--partitions", partitions, "also print the stages of every play");
    tiles->add_option("--steps", steps, "positions per play");

    auto* shr = app.add_subcommand("shrink", "apply T1 and T2 to a fixpoint");
    shr->add_option("problem", prob)->required()->check(CLI::ExistingFile);
    shr->add_option("term", term)->required()->check(CLI::ExistingFile);
    shr->add_option("--out", out, "write the result as a term file");
    shr->add_option("--steps", steps, "positions per play");

    SearchConfig sc;
    auto* sol = app.add_subcommand("solve", "search for a solution by enumeration");
    sol->add_option("problem", prob)->required()->check(CLI::ExistingFile);
    sol->add_option("--max-size", sc.max_total_tiles, "cap on the number of tiles")->check(CLI::PositiveNumber);
    sol->add_option("--max-depth", sc.max_depth_tiles, "cap on tiles along a branch")->check(CLI::PositiveNumber);
    sol->add_option("--steps", sc.step_budget, "positions per play")->check(CLI::PositiveNumber);
    sol->add_flag("--use-paper-bound", sc.use_bound, "derive the size cap from the small model bound");

    auto* bnd = app.add_subcommand("bound", "print the size bounds of a problem");
    bnd->add_option("problem", prob)->required()->check(CLI::ExistingFile);
    bnd->add_option("--k", k, "top tiles for the fifth-order bound")->check(CLI::PositiveNumber);

    FuzzConfig fc;
    auto* fz = app.add_subcommand("fuzz", "compare the game with the oracle on random problems");
    fz->add_option("--seed", fc.seed, "base seed");
    fz->add_option("--count", fc.count, "number of pairs")->check(CLI::NonNegativeNumber);
    fz->add_option("--max-order", fc.max_order, "largest order of x")->check(CLI::Range(2, 5));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (*check) return cmd_check(g, prob, term, steps);
        if (*trace) return cmd_trace(g, prob, term, eq, choices, tables, steps);
        if (*tiles) return cmd_tiles(g, prob, term, partitions, steps);
        if (*shr) return cmd_shrink(g, prob, term, out, steps);
        if (*sol) return cmd_solve(g, prob, sc);
        if (*bnd) return cmd_bound(g, prob, k);
        if (*fz) return cmd_fuzz(g, fc);
    } catch (const TransformError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == TransformError::Kind::PreconditionFailed ? kFails : kError;
    } catch (const ParseError& e) {
        std::cerr << "parse error " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
