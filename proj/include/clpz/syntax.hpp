#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "clpz/ints.hpp"

namespace clpz {

struct SourceTerm {
    enum class Kind { Var, Int, Atom, Compound };

    Kind kind = Kind::Atom;
    std::string name;               // variable name, atom name, or functor
    Int value = 0;                  // Kind::Int only
    std::vector<SourceTerm> args;   // Kind::Compound only
    int line = 0;
    int col = 0;

    static SourceTerm var(std::string n) {
        SourceTerm t;
        t.kind = Kind::Var;
        t.name = std::move(n);
        return t;
    }
    static SourceTerm integer(Int v) {
        SourceTerm t;
        t.kind = Kind::Int;
        t.value = std::move(v);
        return t;
    }
    static SourceTerm atom(std::string n) {
        SourceTerm t;
        t.kind = Kind::Atom;
        t.name = std::move(n);
        return t;
    }
    static SourceTerm compound(std::string f, std::vector<SourceTerm> a) {
        SourceTerm t;
        t.kind = Kind::Compound;
        t.name = std::move(f);
        t.args = std::move(a);
        return t;
    }

    bool is(Kind k) const { return kind == k; }
};

// Structural equality ignoring source positions.
bool same_term(const SourceTerm& a, const SourceTerm& b);

struct Clause {
    SourceTerm head;
    std::vector<SourceTerm> body;  // empty = fact
};

struct SyntaxError : std::runtime_error {
    int line;
    int col;
    SyntaxError(int l, int c, const std::string& msg)
        : std::runtime_error("syntax error at " + std::to_string(l) + ":" +
                             std::to_string(c) + ": " + msg),
          line(l),
          col(c) {}
};

std::vector<Clause> parse_program(const std::string& text);
std::vector<SourceTerm> parse_query(const std::string& text);

// Parses a single term terminated by `.` (used by tests and the REPL).
SourceTerm parse_term(const std::string& text);

// Canonical writer; output re-parses to a structurally identical term.
std::string write_term(const SourceTerm& t);

// Operator table shared with the heap-term printer.
enum class OpAssoc { XFX, XFY, YFX };
struct OpInfo {
    int prec;
    OpAssoc assoc;
};
// Returns nullptr when name/2 is not an infix operator.
const OpInfo* infix_op(const std::string& name);

// The canonical list constructor functor and empty-list atom.
inline const std::string kConsFunctor = ".";
inline const std::string kNilAtom = "[]";

}  // namespace clpz
