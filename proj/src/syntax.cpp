#include "clpz/syntax.hpp"

#include <cctype>
#include <cstring>
#include <map>
#include <sstream>

namespace clpz {

namespace {

const std::map<std::string, OpInfo>& op_table() {
    static const std::map<std::string, OpInfo> table = {
        {":-", {1200, OpAssoc::XFX}}, {",", {1000, OpAssoc::XFY}},
        {"=", {700, OpAssoc::XFX}},   {"is", {700, OpAssoc::XFX}},
        {"in", {700, OpAssoc::XFX}},  {"#=", {700, OpAssoc::XFX}},
        {"#\\=", {700, OpAssoc::XFX}},{"#<", {700, OpAssoc::XFX}},
        {"#=<", {700, OpAssoc::XFX}}, {"#>", {700, OpAssoc::XFX}},
        {"#>=", {700, OpAssoc::XFX}}, {"\\/", {550, OpAssoc::YFX}},
        {"..", {500, OpAssoc::XFX}},  {"+", {400, OpAssoc::YFX}},
        {"-", {400, OpAssoc::YFX}},   {"*", {300, OpAssoc::YFX}},
        {"/", {300, OpAssoc::YFX}},   {"^", {200, OpAssoc::XFY}},
    };
    return table;
}

struct Token {
    enum class Kind { Atom, Var, Int, Punct, End, Eof };
    Kind kind;
    std::string text;  // atom/var name, punct char, operator
    Int value = 0;
    int line = 1, col = 1;
    bool glued = false;  // no whitespace between this token and the previous
};

bool is_symbol_char(char c) {
    return std::strchr("#=<>\\+-*/^:.", c) != nullptr;
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : src_(text) { advance(); }

    const Token& peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        bool glued = skip_layout();
        cur_ = Token{};
        cur_.line = line_;
        cur_.col = col_;
        cur_.glued = glued;
        if (pos_ >= src_.size()) {
            cur_.kind = Token::Kind::Eof;
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < src_.size() &&
                   std::isdigit(static_cast<unsigned char>(src_[pos_])))
                digits += get();
            cur_.kind = Token::Kind::Int;
            cur_.value = Int(digits);
            return;
        }
        if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
            cur_.kind = Token::Kind::Var;
            cur_.text = ident();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            cur_.kind = Token::Kind::Atom;
            cur_.text = ident();
            return;
        }
        if (std::strchr("()[]|,", c)) {
            cur_.kind = Token::Kind::Punct;
            cur_.text = std::string(1, get());
            return;
        }
        if (is_symbol_char(c)) {
            std::string sym;
            while (pos_ < src_.size() && is_symbol_char(src_[pos_])) sym += get();
            if (sym == ".") {
                cur_.kind = Token::Kind::End;
                return;
            }
            // A trailing clause terminator can glue onto a symbolic atom,
            // e.g. "X = f(X)." never reaches here but "p :- q." could lex
            // ":-" fine while "a=." must split into "=" and ".".
            if (!op_table().count(sym) && sym.size() > 1 && sym.back() == '.' &&
                op_table().count(sym.substr(0, sym.size() - 1))) {
                unget();
                sym.pop_back();
            }
            if (!op_table().count(sym))
                throw SyntaxError(cur_.line, cur_.col, "unknown operator `" + sym + "`");
            cur_.kind = Token::Kind::Atom;
            cur_.text = sym;
            return;
        }
        throw SyntaxError(line_, col_, std::string("unexpected character `") + c + "`");
    }

    // Returns true when no layout was skipped (token glued to previous one).
    bool skip_layout() {
        bool glued = true;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                glued = false;
                while (pos_ < src_.size() && src_[pos_] != '\n') get();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                glued = false;
                get();
            } else {
                break;
            }
        }
        return glued;
    }

    std::string ident() {
        std::string s;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '_' || std::isalnum(static_cast<unsigned char>(c)))
                s += get();
            else
                break;
        }
        return s;
    }

    char get() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    void unget() {
        --pos_;
        --col_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    bool at_eof() { return lex_.peek().kind == Token::Kind::Eof; }

    SourceTerm parse_clause_term() {
        SourceTerm t = parse(1200);
        expect_end();
        return t;
    }

private:
    friend SourceTerm clpz::parse_term(const std::string&);

    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw SyntaxError(t.line, t.col, msg);
    }

    void expect_end() {
        Token t = lex_.take();
        if (t.kind != Token::Kind::End)
            fail(t, t.kind == Token::Kind::Eof ? "unterminated clause (missing `.`)"
                                               : "expected `.`");
    }

    void expect_punct(const char* p) {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Punct || t.text != p)
            fail(t, std::string("expected `") + p + "`");
    }

    SourceTerm parse(int max_prec) {
        SourceTerm left = primary();
        int left_prec = 0;
        for (;;) {
            const Token& t = lex_.peek();
            std::string opname;
            if (t.kind == Token::Kind::Atom && infix_op(t.text))
                opname = t.text;
            else if (t.kind == Token::Kind::Punct && t.text == ",")
                opname = ",";
            else
                break;
            const OpInfo& op = *infix_op(opname);
            if (op.prec > max_prec) break;
            int left_max = op.assoc == OpAssoc::YFX ? op.prec : op.prec - 1;
            if (left_prec > left_max) break;
            Token optok = lex_.take();
            int right_max = op.assoc == OpAssoc::XFY ? op.prec : op.prec - 1;
            SourceTerm right = parse(right_max);
            SourceTerm node = SourceTerm::compound(opname, {std::move(left), std::move(right)});
            node.line = optok.line;
            node.col = optok.col;
            left = std::move(node);
            left_prec = op.prec;
        }
        return left;
    }

    SourceTerm primary() {
        Token t = lex_.take();
        switch (t.kind) {
        case Token::Kind::Int: {
            SourceTerm r = SourceTerm::integer(t.value);
            r.line = t.line;
            r.col = t.col;
            return r;
        }
        case Token::Kind::Var: {
            SourceTerm r = SourceTerm::var(t.text);
            r.line = t.line;
            r.col = t.col;
            return r;
        }
        case Token::Kind::Atom: {
            if (t.text == "-" ) {
                const Token& nxt = lex_.peek();
                if (nxt.kind == Token::Kind::Int) {
                    Token num = lex_.take();
                    SourceTerm r = SourceTerm::integer(-num.value);
                    r.line = t.line;
                    r.col = t.col;
                    return r;
                }
            }
            if (infix_op(t.text) && !std::isalpha(static_cast<unsigned char>(t.text[0])))
                fail(t, "operator `" + t.text + "` in argument position");
            const Token& nxt = lex_.peek();
            if (nxt.kind == Token::Kind::Punct && nxt.text == "(" && nxt.glued) {
                lex_.take();
                std::vector<SourceTerm> args;
                args.push_back(parse(999));
                while (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == ",") {
                    lex_.take();
                    args.push_back(parse(999));
                }
                expect_punct(")");
                SourceTerm r = SourceTerm::compound(t.text, std::move(args));
                r.line = t.line;
                r.col = t.col;
                return r;
            }
            SourceTerm r = SourceTerm::atom(t.text);
            r.line = t.line;
            r.col = t.col;
            return r;
        }
        case Token::Kind::Punct:
            if (t.text == "(") {
                SourceTerm inner = parse(1200);
                expect_punct(")");
                return inner;
            }
            if (t.text == "[") return list_tail(t);
            fail(t, "unexpected `" + t.text + "`");
        case Token::Kind::End:
            fail(t, "unexpected `.`");
        case Token::Kind::Eof:
            fail(t, "unexpected end of input");
        }
        fail(t, "unreachable");
    }

    SourceTerm list_tail(const Token& open) {
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "]") {
            lex_.take();
            SourceTerm nil = SourceTerm::atom(kNilAtom);
            nil.line = open.line;
            nil.col = open.col;
            return nil;
        }
        std::vector<SourceTerm> elems;
        elems.push_back(parse(999));
        while (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == ",") {
            lex_.take();
            elems.push_back(parse(999));
        }
        SourceTerm tail = SourceTerm::atom(kNilAtom);
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "|") {
            lex_.take();
            tail = parse(999);
        }
        expect_punct("]");
        for (auto it = elems.rbegin(); it != elems.rend(); ++it)
            tail = SourceTerm::compound(kConsFunctor, {std::move(*it), std::move(tail)});
        return tail;
    }

    Lexer lex_;
};

void flatten_conj(const SourceTerm& t, std::vector<SourceTerm>& out) {
    if (t.is(SourceTerm::Kind::Compound) && t.name == "," && t.args.size() == 2) {
        flatten_conj(t.args[0], out);
        flatten_conj(t.args[1], out);
    } else {
        out.push_back(t);
    }
}

}  // namespace

const OpInfo* infix_op(const std::string& name) {
    auto it = op_table().find(name);
    return it == op_table().end() ? nullptr : &it->second;
}

bool same_term(const SourceTerm& a, const SourceTerm& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case SourceTerm::Kind::Var:
    case SourceTerm::Kind::Atom:
        return a.name == b.name;
    case SourceTerm::Kind::Int:
        return a.value == b.value;
    case SourceTerm::Kind::Compound:
        if (a.name != b.name || a.args.size() != b.args.size()) return false;
        for (size_t i = 0; i < a.args.size(); ++i)
            if (!same_term(a.args[i], b.args[i])) return false;
        return true;
    }
    return false;
}

std::vector<Clause> parse_program(const std::string& text) {
    Parser p(text);
    std::vector<Clause> clauses;
    while (!p.at_eof()) {
        SourceTerm t = p.parse_clause_term();
        Clause c;
        if (t.is(SourceTerm::Kind::Compound) && t.name == ":-" && t.args.size() == 2) {
            c.head = t.args[0];
            flatten_conj(t.args[1], c.body);
        } else {
            c.head = t;
        }
        if (c.head.is(SourceTerm::Kind::Var) || c.head.is(SourceTerm::Kind::Int))
            throw SyntaxError(c.head.line, c.head.col, "clause head must be an atom or compound");
        clauses.push_back(std::move(c));
    }
    return clauses;
}

std::vector<SourceTerm> parse_query(const std::string& text) {
    Parser p(text);
    SourceTerm t = p.parse_clause_term();
    if (!p.at_eof()) {
        throw SyntaxError(t.line, t.col, "trailing input after query");
    }
    std::vector<SourceTerm> goals;
    flatten_conj(t, goals);
    return goals;
}

SourceTerm parse_term(const std::string& text) {
    Parser p(text);
    return p.parse_clause_term();
}

namespace {

bool is_list_cell(const SourceTerm& t) {
    return t.is(SourceTerm::Kind::Compound) && t.name == kConsFunctor && t.args.size() == 2;
}

void write_rec(std::ostringstream& os, const SourceTerm& t, int max_prec);

// A negative literal to the right of an operator needs a separating space
// so that e.g. `Y+ -1` does not lex as the unknown operator `+-`.
void write_right_operand(std::ostringstream& os, const SourceTerm& t, int max_prec) {
    std::ostringstream sub;
    write_rec(sub, t, max_prec);
    std::string s = sub.str();
    if (!s.empty() && s[0] == '-') os << ' ';
    os << s;
}

void write_rec(std::ostringstream& os, const SourceTerm& t, int max_prec) {
    switch (t.kind) {
    case SourceTerm::Kind::Var:
        os << t.name;
        return;
    case SourceTerm::Kind::Int:
        os << t.value.get_str();
        return;
    case SourceTerm::Kind::Atom:
        os << t.name;
        return;
    case SourceTerm::Kind::Compound:
        break;
    }
    if (is_list_cell(t)) {
        os << '[';
        const SourceTerm* cur = &t;
        bool first = true;
        while (is_list_cell(*cur)) {
            if (!first) os << ',';
            write_rec(os, cur->args[0], 999);
            first = false;
            cur = &cur->args[1];
        }
        if (!(cur->is(SourceTerm::Kind::Atom) && cur->name == kNilAtom)) {
            os << '|';
            write_rec(os, *cur, 999);
        }
        os << ']';
        return;
    }
    const OpInfo* op = t.args.size() == 2 ? infix_op(t.name) : nullptr;
    if (op) {
        bool parens = op->prec > max_prec;
        if (parens) os << '(';
        int lmax = op->assoc == OpAssoc::YFX ? op->prec : op->prec - 1;
        int rmax = op->assoc == OpAssoc::XFY ? op->prec : op->prec - 1;
        write_rec(os, t.args[0], lmax);
        os << t.name;
        write_right_operand(os, t.args[1], rmax);
        if (parens) os << ')';
        return;
    }
    os << t.name << '(';
    for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) os << ',';
        write_rec(os, t.args[i], 999);
    }
    os << ')';
}

}  // namespace

std::string write_term(const SourceTerm& t) {
    std::ostringstream os;
    write_rec(os, t, 1200);
    return os.str();
}

}  // namespace clpz
