#include "hom/parse.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace hom {

namespace {

enum class Tok { Ident, Lambda, Dot, Colon, LParen, RParen, Arrow, Eq, Neq, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

const std::set<std::string>& keywords() {
    static const std::set<std::string> k{"base", "const", "var", "eq", "neq"};
    return k;
}

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto adv = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') adv(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv(1);
            continue;
        }
        int l = line, cl = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            out.push_back({Tok::Ident, src.substr(i, j - i), l, cl});
            adv(j - i);
            continue;
        }
        if (c == '\\') {
            out.push_back({Tok::Lambda, "\\", l, cl});
            adv(1);
            continue;
        }
        // UTF-8 lambda
        if (static_cast<unsigned char>(c) == 0xCE && i + 1 < src.size() &&
            static_cast<unsigned char>(src[i + 1]) == 0xBB) {
            out.push_back({Tok::Lambda, "\\", l, cl});
            i += 2;
            ++col;
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", l, cl});
            adv(2);
            continue;
        }
        if (c == '!' && i + 1 < src.size() && src[i + 1] == '=') {
            out.push_back({Tok::Neq, "!=", l, cl});
            adv(2);
            continue;
        }
        Tok k;
        switch (c) {
        case '.': k = Tok::Dot; break;
        case ':': k = Tok::Colon; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '=': k = Tok::Eq; break;
        default:
            throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
        }
        out.push_back({k, std::string(1, c), l, cl});
        adv(1);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    Parser(const std::string& src, const ConstEnv& env) : toks_(lex(src)), env_(env) {}

    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_keyword() const { return at(Tok::Ident) && keywords().count(peek().text); }
    bool at_keyword(const std::string& w) const { return at(Tok::Ident) && peek().text == w; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().line, peek().col, msg); }

    Token expect(Tok k, const std::string& what) {
        if (!at(k)) fail("expected " + what + (peek().kind == Tok::End ? " but reached end of input" : " but found '" + peek().text + "'"));
        return next();
    }

    Type type() {
        Type lhs = type_atom();
        if (at(Tok::Arrow)) {
            next();
            return Type::arrow(lhs, type());
        }
        return lhs;
    }

    Type type_atom() {
        if (at(Tok::LParen)) {
            next();
            Type t = type();
            expect(Tok::RParen, "')'");
            return t;
        }
        Token t = expect(Tok::Ident, "type");
        if (t.text != "o" && t.text != "0") throw ParseError(t.line, t.col, "unknown base type '" + t.text + "'");
        return Type::base();
    }

    Term term() {
        if (at(Tok::Lambda)) return lambda();
        return application();
    }

    Term lambda() {
        expect(Tok::Lambda, "'\\'");
        std::vector<Var> bs;
        while (!at(Tok::Dot)) {
            bool paren = false;
            if (at(Tok::LParen)) {
                next();
                paren = true;
            }
            Token n = expect(Tok::Ident, "binder name");
            if (keywords().count(n.text)) throw ParseError(n.line, n.col, "keyword '" + n.text + "' used as binder");
            expect(Tok::Colon, "':' after binder " + n.text);
            Type ty = type();
            if (paren) expect(Tok::RParen, "')'");
            bs.push_back(Var::fresh(n.text, ty));
        }
        if (bs.empty()) fail("lambda needs at least one binder");
        next();
        for (const auto& b : bs) scope_.push_back(b);
        Term body = term();
        scope_.resize(scope_.size() - bs.size());
        return Term::abs(std::move(bs), body);
    }

    bool at_atom() const { return (at(Tok::Ident) && !at_keyword()) || at(Tok::LParen); }

    Term atom() {
        if (at(Tok::LParen)) {
            next();
            Term t = term();
            expect(Tok::RParen, "')'");
            return t;
        }
        Token n = expect(Tok::Ident, "term");
        return resolve(n);
    }

    Term application() {
        const Token& start = peek();
        if (!at_atom()) fail("expected term");
        int l = start.line, c = start.col;
        Term f = atom();
        std::vector<Term> args;
        while (at_atom() || at(Tok::Lambda)) {
            if (at(Tok::Lambda)) {
                args.push_back(lambda());
                break;
            }
            args.push_back(atom());
        }
        try {
            return Term::app(f, std::move(args));
        } catch (const TypeError& e) {
            throw ParseError(l, c, e.what());
        }
    }

    Term resolve(const Token& n) {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (it->name == n.text) return Term::var(*it);
        auto c = env_.find(n.text);
        if (c != env_.end()) return Term::constant(Const{n.text, c->second});
        throw ParseError(n.line, n.col, "unknown identifier '" + n.text + "'");
    }

    // "const name : T" or "base o"; returns false if no declaration follows
    bool declaration(ConstEnv& into) {
        if (at_keyword("base")) {
            next();
            Token b = expect(Tok::Ident, "base type name");
            if (b.text != "o") throw ParseError(b.line, b.col, "only the base type o is supported");
            return true;
        }
        if (at_keyword("const")) {
            next();
            Token n = expect(Tok::Ident, "constant name");
            if (keywords().count(n.text)) throw ParseError(n.line, n.col, "keyword used as constant name");
            expect(Tok::Colon, "':'");
            Type t = type();
            auto [it, fresh] = into.emplace(n.text, t);
            if (!fresh && !(it->second == t)) throw ParseError(n.line, n.col, "constant '" + n.text + "' redeclared with a different type");
            env_[n.text] = t;
            return true;
        }
        return false;
    }

    ConstEnv& env() { return env_; }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    ConstEnv env_;
    std::vector<Var> scope_;
};

Term normalise(const Term& t, int line, int col) {
    try {
        return long_normal(t);
    } catch (const TypeError& e) {
        throw ParseError(line, col, e.what());
    }
}

} // namespace

Type parse_type(const std::string& src) {
    Parser p(src, {});
    Type t = p.type();
    p.expect(Tok::End, "end of type");
    return t;
}

Term parse_term_raw(const std::string& src, const ConstEnv& env) {
    Parser p(src, env);
    Term t = p.term();
    p.expect(Tok::End, "end of term");
    return t;
}

Term parse_term(const std::string& src, const ConstEnv& env) { return normalise(parse_term_raw(src, env), 1, 1); }

Term parse_term_file(const std::string& src, ConstEnv& env) {
    Parser p(src, env);
    while (p.declaration(env)) {
    }
    int l = p.peek().line, c = p.peek().col;
    Term t = p.term();
    p.expect(Tok::End, "end of term");
    return normalise(t, l, c);
}

RawProblem parse_problem_source(const std::string& src) {
    Parser p(src, {});
    RawProblem out;
    bool have_var = false;
    while (!p.at(Tok::End)) {
        if (p.declaration(out.constants)) continue;
        if (p.at_keyword("var")) {
            p.next();
            Token n = p.expect(Tok::Ident, "variable name");
            if (have_var) throw ParseError(n.line, n.col, "only one free variable is allowed");
            p.expect(Tok::Colon, "':'");
            out.x = Var::fresh(n.text, p.type());
            have_var = true;
            continue;
        }
        if (p.at_keyword("eq") || p.at_keyword("neq")) {
            Token kw = p.next();
            if (!have_var) throw ParseError(kw.line, kw.col, "item before 'var' declaration");
            RawItem item;
            item.eq = kw.text == "eq";
            item.line = kw.line;
            while (p.at_atom()) {
                int l = p.peek().line, c = p.peek().col;
                item.args.push_back(normalise(p.atom(), l, c));
            }
            if (item.eq)
                p.expect(Tok::Eq, "'='");
            else
                p.expect(Tok::Neq, "'!='");
            int l = p.peek().line, c = p.peek().col;
            item.rhs = normalise(p.term(), l, c);
            out.items.push_back(std::move(item));
            continue;
        }
        p.fail("expected 'base', 'const', 'var', 'eq' or 'neq'");
    }
    if (!have_var) throw ParseError(1, 1, "missing 'var' declaration");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace hom
