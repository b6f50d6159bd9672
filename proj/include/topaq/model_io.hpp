#pragma once

#include "regions.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace topaq {

struct ParseError : ModelError {
    int line = 0, column = 0;
    ParseError(int l, int c, const std::string& m)
        : ModelError(std::to_string(l) + ":" + std::to_string(c) + ": " + m), line(l), column(c) {}
};

inline bool is_identifier_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'' || c == '@' || c == '|' ||
           c == '$';
}

inline bool is_identifier(const std::string& s) {
    if (s.empty() || s == "eps" || s == "true") return false;
    return std::all_of(s.begin(), s.end(), is_identifier_char);
}

namespace detail {

struct Token {
    enum Kind { Word, Punct, End } kind = End;
    std::string text;
    int line = 1, column = 1;
};

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto adv = [&](std::size_t k = 1) {
        for (std::size_t j = 0; j < k; ++j, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv();
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') adv();
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        auto two = src.substr(i, 2);
        if (two == "->" || two == "&&" || two == "<=" || two == ">=" || two == "==") {
            t.kind = Token::Punct;
            t.text = two;
            adv(2);
        } else if (c == '{' || c == '}' || c == ';' || c == ':' || c == ',' || c == '<' || c == '>' || c == '=') {
            t.kind = Token::Punct;
            t.text = std::string(1, c);
            adv();
        } else if (is_identifier_char(c) || c == '-' || c == '/') {
            t.kind = Token::Word;
            std::size_t start = i;
            adv();
            while (i < src.size() && (is_identifier_char(src[i]) || src[i] == '/')) adv();
            t.text = src.substr(start, i - start);
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(lex(src)) {}

    TimedAutomaton parse() {
        expect_word("ta");
        TimedAutomaton ta;
        ta.name = identifier("automaton name").text;
        expect("{");
        std::set<std::string> keys;
        std::optional<Token> init;
        std::vector<Token> priv, fin;
        struct PendingLoc {
            Token name;
            std::vector<std::pair<Token, ClockConstraint>> inv;
            std::vector<std::pair<Token, std::string>> raw;
        };
        struct PendingEdge {
            Token src, dst;
            std::optional<Token> act;
            std::vector<std::pair<Token, std::string>> guard_clocks;
            Guard guard;
            std::vector<Token> resets;
        };
        std::vector<PendingLoc> locs;
        std::vector<PendingEdge> edges;
        auto once = [&](const Token& k) {
            if (!keys.insert(k.text).second) throw ParseError(k.line, k.column, "duplicate field '" + k.text + "'");
        };
        std::vector<Token> clock_toks, action_toks;
        while (!peek_punct("}")) {
            Token k = word("a field name");
            if (k.text == "loc") {
                PendingLoc pl{identifier("location name"), {}, {}};
                if (peek_punct("{")) {
                    next();
                    std::set<std::string> sub;
                    while (!peek_punct("}")) {
                        Token sk = word("a location field");
                        if (sk.text != "inv") throw ParseError(sk.line, sk.column, "unknown location field '" + sk.text + "'");
                        if (!sub.insert(sk.text).second)
                            throw ParseError(sk.line, sk.column, "duplicate field '" + sk.text + "'");
                        expect(":");
                        pl.raw = guard(pl.inv);
                        expect(";");
                    }
                    expect("}");
                    if (peek_punct(";")) next();
                } else {
                    expect(";");
                }
                locs.push_back(std::move(pl));
                continue;
            }
            if (k.text == "edge") {
                PendingEdge pe;
                pe.src = identifier("source location");
                expect("->");
                pe.dst = identifier("target location");
                expect("{");
                std::set<std::string> sub;
                while (!peek_punct("}")) {
                    Token sk = word("an edge field");
                    if (!sub.insert(sk.text).second)
                        throw ParseError(sk.line, sk.column, "duplicate field '" + sk.text + "'");
                    expect(":");
                    if (sk.text == "when") {
                        std::vector<std::pair<Token, ClockConstraint>> g;
                        pe.guard_clocks = guard(g);
                        for (auto& [_, c] : g) pe.guard.push_back(c);
                    } else if (sk.text == "act") {
                        Token a = next();
                        if (a.kind != Token::Word || (a.text != "eps" && !is_identifier(a.text)))
                            throw ParseError(a.line, a.column, "expected an action name or eps");
                        pe.act = a;
                    } else if (sk.text == "reset") {
                        pe.resets = list("clock name");
                    } else {
                        throw ParseError(sk.line, sk.column, "unknown edge field '" + sk.text + "'");
                    }
                    expect(";");
                }
                if (!pe.act) throw ParseError(pe.src.line, pe.src.column, "edge is missing the field 'act'");
                expect("}");
                if (peek_punct(";")) next();
                edges.push_back(std::move(pe));
                continue;
            }
            once(k);
            expect(":");
            if (k.text == "time") {
                Token t = word("dense or discrete");
                if (t.text == "dense")
                    ta.time = TimeDomain::Dense;
                else if (t.text == "discrete")
                    ta.time = TimeDomain::Discrete;
                else
                    throw ParseError(t.line, t.column, "time must be dense or discrete, not '" + t.text + "'");
            } else if (k.text == "clocks") {
                clock_toks = list("clock name");
            } else if (k.text == "actions") {
                action_toks = list("action name");
            } else if (k.text == "init") {
                init = identifier("initial location");
            } else if (k.text == "private") {
                priv = list("location name");
            } else if (k.text == "final") {
                fin = list("location name");
            } else {
                throw ParseError(k.line, k.column, "unknown field '" + k.text + "'");
            }
            expect(";");
        }
        Token close = next();
        if (peek().kind != Token::End) throw ParseError(peek().line, peek().column, "trailing input after automaton");

        auto declare = [&](std::vector<std::string>& into, const std::vector<Token>& toks, const char* kind) {
            for (const auto& t : toks) {
                if (TimedAutomaton::index_in(into, t.text) >= 0)
                    throw ParseError(t.line, t.column, std::string("duplicate ") + kind + " name '" + t.text + "'");
                into.push_back(t.text);
            }
        };
        declare(ta.clocks, clock_toks, "clock");
        declare(ta.actions, action_toks, "action");
        auto clock_of = [&](const Token& t) {
            int c = ta.clock_index(t.text);
            if (c < 0) throw ParseError(t.line, t.column, "undeclared clock '" + t.text + "'");
            return c;
        };
        for (auto& pl : locs) {
            if (ta.location_index(pl.name.text) >= 0)
                throw ParseError(pl.name.line, pl.name.column, "duplicate location name '" + pl.name.text + "'");
            Guard inv;
            for (std::size_t i = 0; i < pl.inv.size(); ++i) {
                ClockConstraint c = pl.inv[i].second;
                c.clock = clock_of(pl.raw[i].first);
                inv.push_back(c);
            }
            ta.add_location(pl.name.text, std::move(inv));
        }
        auto loc_of = [&](const Token& t) {
            int l = ta.location_index(t.text);
            if (l < 0) throw ParseError(t.line, t.column, "undeclared location '" + t.text + "'");
            return l;
        };
        if (!init) throw ParseError(close.line, close.column, "missing field 'init'");
        if (ta.locations.empty()) throw ParseError(close.line, close.column, "automaton declares no location");
        ta.init = loc_of(*init);
        for (const auto& t : priv) ta.priv[loc_of(t)] = 1;
        for (const auto& t : fin) ta.fin[loc_of(t)] = 1;
        for (auto& pe : edges) {
            Edge e;
            e.source = loc_of(pe.src);
            e.target = loc_of(pe.dst);
            if (pe.act->text == "eps") {
                e.action = kEps;
            } else {
                e.action = ta.action_index(pe.act->text);
                if (e.action < 0)
                    throw ParseError(pe.act->line, pe.act->column, "undeclared action '" + pe.act->text + "'");
            }
            for (std::size_t i = 0; i < pe.guard.size(); ++i) {
                ClockConstraint c = pe.guard[i];
                c.clock = clock_of(pe.guard_clocks[i].first);
                e.guard.push_back(c);
            }
            for (const auto& r : pe.resets) e.resets.push_back(clock_of(r));
            ta.edges.push_back(std::move(e));
        }
        for (const auto& d : validate(ta))
            if (!d.warning) throw ModelError(d.message);
        return ta;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek() const { return toks_[pos_]; }
    Token next() {
        Token t = toks_[pos_];
        if (t.kind != Token::End) ++pos_;
        return t;
    }
    bool peek_punct(const std::string& p) const { return peek().kind == Token::Punct && peek().text == p; }
    [[noreturn]] void fail(const Token& t, const std::string& what) const {
        std::string got = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(t.line, t.column, "expected " + what + ", got " + got);
    }
    void expect(const std::string& p) {
        if (!peek_punct(p)) fail(peek(), "'" + p + "'");
        next();
    }
    Token word(const std::string& what) {
        if (peek().kind != Token::Word) fail(peek(), what);
        return next();
    }
    void expect_word(const std::string& w) {
        if (peek().kind != Token::Word || peek().text != w) fail(peek(), "'" + w + "'");
        next();
    }
    Token identifier(const std::string& what) {
        Token t = word(what);
        if (!is_identifier(t.text)) throw ParseError(t.line, t.column, "invalid " + what + " '" + t.text + "'");
        return t;
    }
    std::vector<Token> list(const std::string& what) {
        std::vector<Token> r;
        if (peek_punct(";")) return r;
        r.push_back(identifier(what));
        while (peek_punct(",")) {
            next();
            r.push_back(identifier(what));
        }
        return r;
    }
    // Returns the clock tokens alongside the constraints (clock ids resolved later).
    std::vector<std::pair<Token, std::string>> guard(std::vector<std::pair<Token, ClockConstraint>>& out) {
        std::vector<std::pair<Token, std::string>> clocks;
        if (peek().kind == Token::Word && peek().text == "true") {
            next();
            return clocks;
        }
        for (;;) {
            Token c = identifier("clock name");
            Token op = next();
            ClockConstraint k;
            if (op.kind != Token::Punct) fail(op, "a comparison operator");
            if (op.text == "<")
                k.cmp = Cmp::Lt;
            else if (op.text == "<=")
                k.cmp = Cmp::Le;
            else if (op.text == "=" || op.text == "==")
                k.cmp = Cmp::Eq;
            else if (op.text == ">=")
                k.cmp = Cmp::Ge;
            else if (op.text == ">")
                k.cmp = Cmp::Gt;
            else
                fail(op, "a comparison operator");
            Token b = word("a bound");
            Rational v;
            try {
                v = parse_rational(b.text);
            } catch (const std::invalid_argument&) {
                throw ParseError(b.line, b.column, "invalid bound '" + b.text + "'");
            }
            if (!is_integral(v))
                throw ParseError(b.line, b.column, "bound '" + b.text + "' is not an integer; scale the model first");
            k.bound = to_ll(floor_of(v));
            out.push_back({c, k});
            clocks.push_back({c, c.text});
            if (!peek_punct("&&")) break;
            next();
        }
        return clocks;
    }
};

}  // namespace detail

inline TimedAutomaton parse_model(const std::string& text) { return detail::Parser(text).parse(); }

inline TimedAutomaton load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

inline std::string print_model(const TimedAutomaton& ta) {
    auto need = [](const std::string& s, const char* kind) {
        if (!is_identifier(s)) throw ModelError(std::string("cannot print ") + kind + " name '" + s + "'");
    };
    need(ta.name, "automaton");
    for (const auto& c : ta.clocks) need(c, "clock");
    for (const auto& a : ta.actions) need(a, "action");
    for (const auto& l : ta.locations) need(l, "location");
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
        return s;
    };
    std::vector<std::string> priv, fin;
    for (int l = 0; l < static_cast<int>(ta.num_locations()); ++l) {
        if (ta.is_private(l)) priv.push_back(ta.locations[l]);
        if (ta.is_final(l)) fin.push_back(ta.locations[l]);
    }
    std::ostringstream o;
    o << "ta " << ta.name << " {\n";
    o << "  time: " << (ta.discrete() ? "discrete" : "dense") << ";\n";
    o << "  clocks: " << join(ta.clocks) << ";\n";
    o << "  actions: " << join(ta.actions) << ";\n";
    o << "  init: " << ta.locations[ta.init] << ";\n";
    o << "  private: " << join(priv) << ";\n";
    o << "  final: " << join(fin) << ";\n";
    for (std::size_t l = 0; l < ta.num_locations(); ++l) {
        if (ta.invariant[l].empty())
            o << "  loc " << ta.locations[l] << ";\n";
        else
            o << "  loc " << ta.locations[l] << " { inv: " << format_guard(ta, ta.invariant[l]) << "; }\n";
    }
    for (const auto& e : ta.edges) {
        o << "  edge " << ta.locations[e.source] << " -> " << ta.locations[e.target] << " {";
        if (!e.guard.empty()) o << " when: " << format_guard(ta, e.guard) << ";";
        o << " act: " << ta.action_name(e.action) << ";";
        if (!e.resets.empty()) {
            std::vector<std::string> r;
            for (int x : e.resets) r.push_back(ta.clocks[x]);
            o << " reset: " << join(r) << ";";
        }
        o << " }\n";
    }
    o << "}\n";
    return o.str();
}

inline nlohmann::json to_json(const TimedAutomaton& ta) {
    nlohmann::json j;
    j["name"] = ta.name;
    j["time"] = ta.discrete() ? "discrete" : "dense";
    j["clocks"] = ta.clocks;
    j["actions"] = ta.actions;
    j["init"] = ta.locations[ta.init];
    j["locations"] = nlohmann::json::array();
    for (int l = 0; l < static_cast<int>(ta.num_locations()); ++l)
        j["locations"].push_back({{"name", ta.locations[l]},
                                  {"private", ta.is_private(l)},
                                  {"final", ta.is_final(l)},
                                  {"invariant", format_guard(ta, ta.invariant[l])}});
    j["edges"] = nlohmann::json::array();
    for (const auto& e : ta.edges) {
        std::vector<std::string> r;
        for (int x : e.resets) r.push_back(ta.clocks[x]);
        j["edges"].push_back({{"source", ta.locations[e.source]},
                              {"target", ta.locations[e.target]},
                              {"action", ta.action_name(e.action)},
                              {"guard", format_guard(ta, e.guard)},
                              {"resets", r}});
    }
    return j;
}

inline nlohmann::json to_json(const RegionAutomaton& ra) {
    nlohmann::json j;
    j["initial"] = ra.initial;
    j["states"] = nlohmann::json::array();
    for (std::size_t s = 0; s < ra.size(); ++s)
        j["states"].push_back({{"id", s},
                               {"location", ra.locations[ra.states[s].loc]},
                               {"region", region_label(ra.clocks, ra.states[s].cr)},
                               {"final", ra.final[s] != 0}});
    j["edges"] = nlohmann::json::array();
    for (std::size_t s = 0; s < ra.size(); ++s)
        for (const auto& m : ra.out[s])
            j["edges"].push_back({{"source", s},
                                  {"target", m.target},
                                  {"label", m.letter == kEps ? std::string("eps") : ra.alphabet[m.letter]},
                                  {"delay", m.edge < 0}});
    return j;
}

inline std::string dot_escape(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r;
}

inline std::string to_dot(const TimedAutomaton& ta) {
    std::ostringstream o;
    o << "digraph \"" << dot_escape(ta.name) << "\" {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (int l = 0; l < static_cast<int>(ta.num_locations()); ++l) {
        std::string label = ta.locations[l];
        if (!ta.invariant[l].empty()) label += "\\n" + format_guard(ta, ta.invariant[l]);
        o << "  n" << l << " [label=\"" << dot_escape(label) << "\", shape=" << (ta.is_final(l) ? "doublecircle" : "circle");
        if (ta.is_private(l)) o << ", style=filled, fillcolor=gray80";
        o << "];\n";
    }
    o << "  __start -> n" << ta.init << ";\n";
    for (const auto& e : ta.edges) {
        std::string label;
        if (!e.guard.empty()) label += format_guard(ta, e.guard) + "\\n";
        label += ta.action_name(e.action);
        if (!e.resets.empty()) {
            label += "\\n";
            for (std::size_t i = 0; i < e.resets.size(); ++i) label += (i ? ", " : "") + ta.clocks[e.resets[i]] + ":=0";
        }
        o << "  n" << e.source << " -> n" << e.target << " [label=\"" << dot_escape(label) << "\"];\n";
    }
    o << "}\n";
    return o.str();
}

inline std::string to_dot(const RegionAutomaton& ra) {
    std::ostringstream o;
    o << "digraph regions {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (std::size_t s = 0; s < ra.size(); ++s)
        o << "  r" << s << " [label=\"" << dot_escape(ra.label(static_cast<int>(s))) << "\", shape="
          << (ra.final[s] ? "doublecircle" : "box") << "];\n";
    if (ra.initial >= 0) o << "  __start -> r" << ra.initial << ";\n";
    for (std::size_t s = 0; s < ra.size(); ++s)
        for (const auto& m : ra.out[s])
            o << "  r" << s << " -> r" << m.target << " [label=\""
              << dot_escape(m.letter == kEps ? std::string("eps") : ra.alphabet[m.letter]) << "\""
              << (m.edge < 0 ? ", style=dashed" : "") << "];\n";
    o << "}\n";
    return o.str();
}

}  // namespace topaq
