#include "ioident/parser.hpp"

#include "ioident/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace ioident {

namespace {

// ---------------------------------------------------------------- lexing --

struct Token {
    enum Kind { Ident, Int, Plus, Minus, Star, Slash, Caret, LParen, RParen, Arrow, Prime, Assign, End };
    Kind kind;
    std::string text;
    int col; // 1-based
};

std::vector<Token> lex_line(const std::string& line, int lineno) {
    std::vector<Token> out;
    size_t i = 0;
    auto push = [&](Token::Kind k, std::string text, size_t at) {
        out.push_back({k, std::move(text), static_cast<int>(at) + 1});
    };
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < line.size() &&
                   (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'))
                ++i;
            push(Token::Ident, line.substr(start, i - start), start);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
            push(Token::Int, line.substr(start, i - start), start);
        } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            push(Token::Arrow, "->", start);
            i += 2;
        } else {
            Token::Kind k;
            switch (c) {
                case '+': k = Token::Plus; break;
                case '-': k = Token::Minus; break;
                case '*': k = Token::Star; break;
                case '/': k = Token::Slash; break;
                case '^': k = Token::Caret; break;
                case '(': k = Token::LParen; break;
                case ')': k = Token::RParen; break;
                case '\'': k = Token::Prime; break;
                case '=': k = Token::Assign; break;
                default:
                    throw ParseError(lineno, static_cast<int>(start) + 1,
                                     std::string("unexpected character '") + c + "'");
            }
            push(k, line.substr(start, 1), start);
            ++i;
        }
    }
    push(Token::End, "", line.size());
    return out;
}

// one logical line of the document
struct Line {
    int number;
    std::vector<Token> tokens;
};

std::vector<Line> lex_document(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        Line l{lineno, lex_line(raw, lineno)};
        if (l.tokens.size() > 1) lines.push_back(std::move(l)); // drop blank/comment lines
    }
    return lines;
}

// ------------------------------------------------------- expression parse --

// Value of an expression that is affine in the model variables: a constant
// part in Q(params) plus one coefficient per referenced state/input.
struct Affine {
    RatFunc c;
    std::map<int, RatFunc> lin;
};

class ExprParser {
  public:
    // vars == nullptr means "no state/input symbols allowed" (param-expr)
    ExprParser(const std::vector<Token>& tokens, size_t pos, int lineno, SymTab table,
               const std::map<std::string, int>* vars)
        : toks_(tokens), pos_(pos), lineno_(lineno), table_(std::move(table)), vars_(vars) {}

    Affine parse_all() {
        Affine a = parse_expr();
        expect_end();
        return a;
    }

    size_t position() const { return pos_; }

  private:
    const Token& cur() const { return toks_[pos_]; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(lineno_, cur().col, msg); }
    void expect_end() const {
        if (cur().kind != Token::End) fail("unexpected trailing input");
    }

    Affine make_const(RatFunc v) const { return Affine{std::move(v), {}}; }

    Affine add(Affine a, const Affine& b, int sign) const {
        a.c = sign > 0 ? a.c + b.c : a.c - b.c;
        for (const auto& [v, coeff] : b.lin) {
            auto it = a.lin.find(v);
            RatFunc merged = it == a.lin.end()
                                 ? (sign > 0 ? coeff : -coeff)
                                 : (sign > 0 ? it->second + coeff : it->second - coeff);
            if (merged.is_zero())
                a.lin.erase(v);
            else
                a.lin[v] = std::move(merged);
        }
        return a;
    }

    Affine mul(const Affine& a, const Affine& b) const {
        if (!a.lin.empty() && !b.lin.empty())
            throw SemanticError("line " + std::to_string(lineno_) +
                                ": product of two state/input terms has degree > 1");
        const Affine& lin_side = a.lin.empty() ? b : a;
        const Affine& const_side = a.lin.empty() ? a : b;
        Affine r = make_const(const_side.c * lin_side.c);
        for (const auto& [v, coeff] : lin_side.lin) {
            RatFunc merged = coeff * const_side.c;
            if (!merged.is_zero()) r.lin[v] = std::move(merged);
        }
        return r;
    }

    Affine parse_expr() {
        int sign = 1;
        if (cur().kind == Token::Plus || cur().kind == Token::Minus) {
            sign = cur().kind == Token::Minus ? -1 : 1;
            ++pos_;
        }
        Affine a = parse_term();
        if (sign < 0) a = add(make_const(RatFunc::zero(table_)), a, -1);
        while (cur().kind == Token::Plus || cur().kind == Token::Minus) {
            int s = cur().kind == Token::Plus ? 1 : -1;
            ++pos_;
            a = add(std::move(a), parse_term(), s);
        }
        return a;
    }

    Affine parse_term() {
        Affine a = parse_factor();
        while (cur().kind == Token::Star || cur().kind == Token::Slash) {
            bool divide = cur().kind == Token::Slash;
            ++pos_;
            Affine b = parse_factor();
            if (divide) {
                if (!b.lin.empty())
                    throw SemanticError("line " + std::to_string(lineno_) +
                                        ": division by a state/input term");
                if (b.c.is_zero())
                    throw SemanticError("line " + std::to_string(lineno_) + ": division by zero");
                b.c = b.c.inverse();
            }
            a = mul(a, b);
        }
        return a;
    }

    Affine parse_factor() {
        if (cur().kind == Token::Minus) {
            ++pos_;
            return add(make_const(RatFunc::zero(table_)), parse_factor(), -1);
        }
        if (cur().kind == Token::Plus) {
            ++pos_;
            return parse_factor();
        }
        Affine base = parse_primary();
        if (cur().kind == Token::Caret) {
            ++pos_;
            if (cur().kind != Token::Int) fail("exponent must be a nonnegative integer");
            int e = std::stoi(cur().text);
            ++pos_;
            if (!base.lin.empty()) {
                if (e == 1) return base;
                throw SemanticError("line " + std::to_string(lineno_) +
                                    ": power of a state/input term has degree > 1");
            }
            RatFunc r = RatFunc::one(table_);
            for (int k = 0; k < e; ++k) r = r * base.c;
            return make_const(std::move(r));
        }
        return base;
    }

    Affine parse_primary() {
        if (cur().kind == Token::Int) {
            Rational v(cur().text);
            ++pos_;
            return make_const(RatFunc::constant(table_, std::move(v)));
        }
        if (cur().kind == Token::LParen) {
            ++pos_;
            Affine a = parse_expr();
            if (cur().kind != Token::RParen) fail("expected ')'");
            ++pos_;
            return a;
        }
        if (cur().kind == Token::Ident) {
            const std::string& name = cur().text;
            ++pos_;
            if (vars_) {
                auto it = vars_->find(name);
                if (it != vars_->end()) {
                    Affine a = make_const(RatFunc::zero(table_));
                    a.lin[it->second] = RatFunc::one(table_);
                    return a;
                }
            }
            int idx = table_->index_of(name);
            if (idx < 0 || idx == table_->s_index())
                throw SemanticError("line " + std::to_string(lineno_) + ": unknown symbol '" +
                                    name + "'");
            return make_const(RatFunc::variable(table_, idx));
        }
        fail("expected a number, symbol, or '('");
    }

    const std::vector<Token>& toks_;
    size_t pos_;
    int lineno_;
    SymTab table_;
    const std::map<std::string, int>* vars_;
};

// ------------------------------------------------------------ block parse --

int parse_vertex(const Line& l, size_t& pos, int n, const char* what) {
    const Token& t = l.tokens[pos];
    if (t.kind != Token::Int) throw ParseError(l.number, t.col, std::string("expected ") + what);
    int v = std::stoi(t.text);
    if (v < 1 || v > n)
        throw SemanticError("line " + std::to_string(l.number) + ": vertex " + t.text +
                            " out of range 1.." + std::to_string(n));
    ++pos;
    return v;
}

std::string expect_ident(const Line& l, size_t& pos, const char* what) {
    const Token& t = l.tokens[pos];
    if (t.kind != Token::Ident) throw ParseError(l.number, t.col, std::string("expected ") + what);
    ++pos;
    return t.text;
}

void expect_done(const Line& l, size_t pos) {
    if (l.tokens[pos].kind != Token::End)
        throw ParseError(l.number, l.tokens[pos].col, "unexpected trailing input");
}

void check_fresh(std::set<std::string>& seen, const std::string& name, int lineno) {
    if (name == "s")
        throw SemanticError("line " + std::to_string(lineno) +
                            ": 's' is reserved for the differential operator");
    if (!seen.insert(name).second)
        throw SemanticError("line " + std::to_string(lineno) + ": duplicate name '" + name + "'");
}

LinearModel parse_system(const std::string& name, const std::vector<Line>& lines, size_t at) {
    LinearModel m;
    m.name = name;

    std::set<std::string> seen;
    size_t body_start = at;
    // declaration section: params / states / inputs, each at most once
    std::set<std::string> decl_seen;
    for (; body_start < lines.size(); ++body_start) {
        const Line& l = lines[body_start];
        const std::string& kw = l.tokens[0].text;
        if (kw != "params" && kw != "states" && kw != "inputs") break;
        if (!decl_seen.insert(kw).second)
            throw SemanticError("line " + std::to_string(l.number) + ": repeated '" + kw +
                                "' declaration");
        std::vector<std::string>* dst = kw == "params" ? &m.params
                                        : kw == "states" ? &m.states
                                                         : &m.inputs;
        size_t pos = 1;
        while (l.tokens[pos].kind == Token::Ident) {
            check_fresh(seen, l.tokens[pos].text, l.number);
            dst->push_back(l.tokens[pos].text);
            ++pos;
        }
        expect_done(l, pos);
        if (kw != "inputs" && dst->empty())
            throw SemanticError("line " + std::to_string(l.number) + ": '" + kw +
                                "' declares no names");
    }
    if (m.states.empty()) throw SemanticError("model '" + name + "' declares no states");
    m.table = SymbolTable::make(m.params);

    std::map<std::string, int> vars; // states then inputs
    for (size_t i = 0; i < m.states.size(); ++i) vars[m.states[i]] = static_cast<int>(i);
    for (size_t i = 0; i < m.inputs.size(); ++i)
        vars[m.inputs[i]] = static_cast<int>(m.states.size() + i);

    const int n = m.n(), kappa = m.kappa();
    const RatFunc zero = RatFunc::zero(m.table);
    m.A.assign(n, RatVector(n, zero));
    m.B.assign(n, RatVector(kappa, zero));
    m.f0.assign(n, zero);
    std::vector<bool> has_eq(n, false);

    auto scatter = [&](const Affine& a, RatVector& arow, RatVector& brow, RatFunc& konst) {
        konst = a.c;
        for (const auto& [v, coeff] : a.lin) {
            if (v < n)
                arow[v] = coeff;
            else
                brow[v - n] = coeff;
        }
    };

    for (size_t li = body_start; li < lines.size(); ++li) {
        const Line& l = lines[li];
        const std::string& kw = l.tokens[0].text;
        if (kw == "eq") {
            size_t pos = 1;
            std::string st = expect_ident(l, pos, "state name");
            if (l.tokens[pos].kind != Token::Prime)
                throw ParseError(l.number, l.tokens[pos].col, "expected ' after state name");
            ++pos;
            if (l.tokens[pos].kind != Token::Assign)
                throw ParseError(l.number, l.tokens[pos].col, "expected '='");
            ++pos;
            auto it = vars.find(st);
            if (it == vars.end() || it->second >= n)
                throw SemanticError("line " + std::to_string(l.number) + ": '" + st +
                                    "' is not a declared state");
            int idx = it->second;
            if (has_eq[idx])
                throw SemanticError("line " + std::to_string(l.number) +
                                    ": second equation for state '" + st + "'");
            has_eq[idx] = true;
            ExprParser ep(l.tokens, pos, l.number, m.table, &vars);
            Affine a = ep.parse_all();
            scatter(a, m.A[idx], m.B[idx], m.f0[idx]);
        } else if (kw == "out") {
            size_t pos = 1;
            std::string yname = expect_ident(l, pos, "output name");
            check_fresh(seen, yname, l.number);
            if (l.tokens[pos].kind != Token::Assign)
                throw ParseError(l.number, l.tokens[pos].col, "expected '='");
            ++pos;
            ExprParser ep(l.tokens, pos, l.number, m.table, &vars);
            Affine a = ep.parse_all();
            m.outputs.push_back(yname);
            m.C.emplace_back(n, zero);
            m.D.emplace_back(kappa, zero);
            m.g0.push_back(zero);
            scatter(a, m.C.back(), m.D.back(), m.g0.back());
        } else if (kw == "params" || kw == "states" || kw == "inputs") {
            throw SemanticError("line " + std::to_string(l.number) +
                                ": declarations must precede equations");
        } else {
            throw ParseError(l.number, l.tokens[0].col, "unknown directive '" + kw + "'");
        }
    }

    for (int i = 0; i < n; ++i)
        if (!has_eq[i])
            throw SemanticError("model '" + name + "': no equation for state '" + m.states[i] + "'");
    if (m.outputs.empty()) throw SemanticError("model '" + name + "' declares no outputs");
    return m;
}

std::string default_rate(int to, int from) {
    if (to < 10 && from < 10) return "a" + std::to_string(to) + std::to_string(from);
    return "a" + std::to_string(to) + "_" + std::to_string(from); // unambiguous split
}

CompartmentModel parse_compartment(const std::string& name, const std::vector<Line>& lines,
                                   size_t at) {
    CompartmentModel m;
    m.name = name;

    // pass 1: declared params, vertex count, and every rate symbol (the rates
    // are parameters too and must be in the table before scalings are parsed)
    std::vector<std::string> declared;
    std::set<std::string> declared_set;
    std::optional<int> vertices;
    struct PendingEdge { const Line* l; int from, to; std::string rate; };
    struct PendingVertexLine { const Line* l; int v; std::string rate; size_t scale_pos; };
    std::vector<PendingEdge> edges;
    std::vector<PendingVertexLine> leaks, ins, outs;
    std::set<std::string> rate_seen;
    std::set<std::pair<int, int>> edge_seen;

    auto note_rate = [&](const std::string& r, int lineno) {
        if (r == "s")
            throw SemanticError("line " + std::to_string(lineno) +
                                ": 's' is reserved for the differential operator");
        if (!rate_seen.insert(r).second)
            throw SemanticError("line " + std::to_string(lineno) + ": rate symbol '" + r +
                                "' is reused; each edge/leak needs its own parameter");
    };

    for (size_t li = at; li < lines.size(); ++li) {
        const Line& l = lines[li];
        const std::string& kw = l.tokens[0].text;
        size_t pos = 1;
        if (kw == "params") {
            while (l.tokens[pos].kind == Token::Ident) {
                const std::string& p = l.tokens[pos].text;
                if (p == "s")
                    throw SemanticError("line " + std::to_string(l.number) +
                                        ": 's' is reserved for the differential operator");
                if (!declared_set.insert(p).second)
                    throw SemanticError("line " + std::to_string(l.number) + ": duplicate name '" +
                                        p + "'");
                declared.push_back(p);
                ++pos;
            }
            expect_done(l, pos);
            if (declared.empty())
                throw SemanticError("line " + std::to_string(l.number) + ": 'params' declares no names");
        } else if (kw == "vertices") {
            if (vertices)
                throw SemanticError("line " + std::to_string(l.number) + ": repeated 'vertices'");
            if (l.tokens[pos].kind != Token::Int)
                throw ParseError(l.number, l.tokens[pos].col, "expected vertex count");
            vertices = std::stoi(l.tokens[pos].text);
            ++pos;
            expect_done(l, pos);
            if (*vertices < 1)
                throw SemanticError("line " + std::to_string(l.number) + ": vertex count must be >= 1");
        } else if (kw == "edge") {
            if (!vertices)
                throw SemanticError("line " + std::to_string(l.number) +
                                    ": 'vertices' must precede edges");
            int from = parse_vertex(l, pos, *vertices, "source vertex");
            if (l.tokens[pos].kind != Token::Arrow)
                throw ParseError(l.number, l.tokens[pos].col, "expected '->'");
            ++pos;
            int to = parse_vertex(l, pos, *vertices, "target vertex");
            std::string r = default_rate(to, from);
            if (l.tokens[pos].kind == Token::Ident && l.tokens[pos].text == "rate") {
                ++pos;
                r = expect_ident(l, pos, "rate symbol");
            }
            expect_done(l, pos);
            if (from == to)
                throw SemanticError("line " + std::to_string(l.number) + ": self-loop at vertex " +
                                    std::to_string(from));
            if (!edge_seen.insert({from, to}).second)
                throw SemanticError("line " + std::to_string(l.number) + ": duplicate edge " +
                                    std::to_string(from) + " -> " + std::to_string(to));
            note_rate(r, l.number);
            edges.push_back({&l, from, to, std::move(r)});
        } else if (kw == "leak" || kw == "input" || kw == "output") {
            if (!vertices)
                throw SemanticError("line " + std::to_string(l.number) + ": 'vertices' must precede '" +
                                    kw + "'");
            int v = parse_vertex(l, pos, *vertices, "vertex");
            PendingVertexLine p{&l, v, "", 0};
            if (kw == "leak") {
                p.rate = default_rate(0, v);
                if (l.tokens[pos].kind == Token::Ident && l.tokens[pos].text == "rate") {
                    ++pos;
                    p.rate = expect_ident(l, pos, "rate symbol");
                }
                expect_done(l, pos);
                note_rate(p.rate, l.number);
                leaks.push_back(std::move(p));
            } else {
                if (l.tokens[pos].kind == Token::Ident && l.tokens[pos].text == "scale") {
                    ++pos;
                    p.scale_pos = pos; // expression parsed in pass 2
                } else {
                    expect_done(l, pos);
                }
                (kw == "input" ? ins : outs).push_back(std::move(p));
            }
        } else {
            throw ParseError(l.number, l.tokens[0].col, "unknown directive '" + kw + "'");
        }
    }

    if (!vertices) throw SemanticError("model '" + name + "' has no 'vertices' line");
    m.n = *vertices;

    // parameter order: declared first, then rates in line order (skipping
    // rates the user also declared explicitly)
    m.params = declared;
    for (const auto& e : edges)
        if (!declared_set.count(e.rate)) m.params.push_back(e.rate);
    for (const auto& p : leaks)
        if (!declared_set.count(p.rate)) m.params.push_back(p.rate);
    m.table = SymbolTable::make(m.params);

    for (auto& e : edges) m.edges.push_back({e.from, e.to, e.rate});
    for (auto& p : leaks) {
        if (!m.leaks.emplace(p.v, p.rate).second)
            throw SemanticError("line " + std::to_string(p.l->number) + ": duplicate leak at vertex " +
                                std::to_string(p.v));
    }

    auto parse_scale = [&](const PendingVertexLine& p) {
        if (p.scale_pos == 0) return RatFunc::one(m.table);
        ExprParser ep(p.l->tokens, p.scale_pos, p.l->number, m.table, nullptr);
        Affine a = ep.parse_all();
        if (a.c.is_zero())
            throw SemanticError("line " + std::to_string(p.l->number) + ": scaling must be nonzero");
        return a.c;
    };
    for (const auto& p : ins) {
        RatFunc sc = parse_scale(p);
        if (!m.in_scale.emplace(p.v, std::move(sc)).second)
            throw SemanticError("line " + std::to_string(p.l->number) +
                                ": duplicate input at vertex " + std::to_string(p.v));
    }
    for (const auto& p : outs) {
        RatFunc sc = parse_scale(p);
        if (!m.out_scale.emplace(p.v, std::move(sc)).second)
            throw SemanticError("line " + std::to_string(p.l->number) +
                                ": duplicate output at vertex " + std::to_string(p.v));
    }
    if (m.out_scale.empty()) throw SemanticError("model '" + name + "' declares no outputs");
    return m;
}

// ---------------------------------------------------------------- printer --

// wraps an expression string when it would not re-parse as a single factor
std::string as_factor(const std::string& s) {
    if (s.find(' ') != std::string::npos || (!s.empty() && s[0] == '-')) return "(" + s + ")";
    return s;
}

void append_term(std::string& acc, const RatFunc& coeff, const std::string& var) {
    std::string piece;
    if (var.empty()) {
        piece = coeff.str();
    } else if (coeff == RatFunc::one(coeff.table())) {
        piece = var;
    } else if (coeff == -RatFunc::one(coeff.table())) {
        piece = "-" + var;
    } else {
        piece = as_factor(coeff.str()) + "*" + var;
    }
    if (acc.empty()) {
        acc = piece;
    } else if (piece[0] == '-') {
        acc += " - " + piece.substr(1);
    } else {
        acc += " + " + piece;
    }
}

std::string affine_str(const LinearModel& m, const RatVector& arow, const RatVector& brow,
                       const RatFunc& konst) {
    std::string acc;
    for (size_t j = 0; j < arow.size(); ++j)
        if (!arow[j].is_zero()) append_term(acc, arow[j], m.states[j]);
    for (size_t j = 0; j < brow.size(); ++j)
        if (!brow[j].is_zero()) append_term(acc, brow[j], m.inputs[j]);
    if (!konst.is_zero()) append_term(acc, konst, "");
    return acc.empty() ? "0" : acc;
}

void print_names(std::ostringstream& out, const char* kw, const std::vector<std::string>& names) {
    if (names.empty()) return;
    out << kw;
    for (const auto& n : names) out << " " << n;
    out << "\n";
}

} // namespace

Model parse_model(const std::string& text) {
    std::vector<Line> lines = lex_document(text);
    if (lines.empty()) throw ParseError(1, 1, "empty model document");
    const Line& head = lines[0];
    const std::string& kw = head.tokens[0].text;
    if (kw != "system" && kw != "compartment")
        throw ParseError(head.number, head.tokens[0].col,
                         "document must start with 'system <name>' or 'compartment <name>'");
    size_t pos = 1;
    std::string name = expect_ident(head, pos, "model name");
    expect_done(head, pos);
    if (kw == "system") return parse_system(name, lines, 1);
    return parse_compartment(name, lines, 1);
}

std::string print_model(const LinearModel& m) {
    std::ostringstream out;
    out << "system " << m.name << "\n";
    print_names(out, "params", m.params);
    print_names(out, "states", m.states);
    print_names(out, "inputs", m.inputs);
    for (int i = 0; i < m.n(); ++i)
        out << "eq " << m.states[i] << "' = " << affine_str(m, m.A[i], m.B[i], m.f0[i]) << "\n";
    for (int i = 0; i < m.m(); ++i)
        out << "out " << m.outputs[i] << " = " << affine_str(m, m.C[i], m.D[i], m.g0[i]) << "\n";
    return out.str();
}

std::string print_model(const CompartmentModel& m) {
    std::ostringstream out;
    out << "compartment " << m.name << "\n";
    print_names(out, "params", m.params);
    out << "vertices " << m.n << "\n";
    for (const auto& e : m.edges)
        out << "edge " << e.from << " -> " << e.to << " rate " << e.rate << "\n";
    for (const auto& [v, r] : m.leaks) out << "leak " << v << " rate " << r << "\n";
    auto scaled_line = [&](const char* kw, int v, const RatFunc& sc) {
        out << kw << " " << v;
        if (sc != RatFunc::one(m.table)) out << " scale " << as_factor(sc.str());
        out << "\n";
    };
    for (const auto& [v, sc] : m.in_scale) scaled_line("input", v, sc);
    for (const auto& [v, sc] : m.out_scale) scaled_line("output", v, sc);
    return out.str();
}

std::string print_model(const Model& m) {
    return std::visit([](const auto& mm) { return print_model(mm); }, m);
}

} // namespace ioident
