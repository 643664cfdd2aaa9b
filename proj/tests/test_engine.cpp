#include <doctest.h>

#include <map>
#include <vector>

#include "clpz/engine.hpp"

using namespace clpz;

namespace {

// ---- reference interpreter ----
// Minimal substitution-based SLD resolution over source terms, supporting
// user predicates, =/2, true/0 and fail/0. Used as ground truth for
// constraint-free programs: the engine must produce the same answer
// sequence.

using Subst = std::map<std::string, SourceTerm>;

SourceTerm walk(const SourceTerm& t, const Subst& s) {
    if (t.is(SourceTerm::Kind::Var)) {
        auto it = s.find(t.name);
        if (it != s.end()) return walk(it->second, s);
    }
    return t;
}

SourceTerm deep_walk(const SourceTerm& t, const Subst& s) {
    SourceTerm w = walk(t, s);
    if (w.is(SourceTerm::Kind::Compound))
        for (SourceTerm& a : w.args) a = deep_walk(a, s);
    return w;
}

bool ref_unify(const SourceTerm& a, const SourceTerm& b, Subst& s) {
    SourceTerm x = walk(a, s), y = walk(b, s);
    if (x.is(SourceTerm::Kind::Var) && y.is(SourceTerm::Kind::Var) && x.name == y.name)
        return true;
    if (x.is(SourceTerm::Kind::Var)) {
        s[x.name] = y;
        return true;
    }
    if (y.is(SourceTerm::Kind::Var)) return ref_unify(y, x, s);
    if (x.kind != y.kind) return false;
    if (x.is(SourceTerm::Kind::Int)) return x.value == y.value;
    if (x.is(SourceTerm::Kind::Atom)) return x.name == y.name;
    if (x.name != y.name || x.args.size() != y.args.size()) return false;
    for (size_t i = 0; i < x.args.size(); ++i)
        if (!ref_unify(x.args[i], y.args[i], s)) return false;
    return true;
}

SourceTerm rename(const SourceTerm& t, int suffix) {
    if (t.is(SourceTerm::Kind::Var))
        return SourceTerm::var(t.name + "__r" + std::to_string(suffix));
    SourceTerm out = t;
    for (SourceTerm& a : out.args) a = rename(a, suffix);
    return out;
}

struct RefInterp {
    std::vector<Clause> program;
    std::vector<std::string> query_vars;
    std::vector<std::map<std::string, std::string>> answers;
    int rename_counter = 0;
    size_t limit = 1000;

    void solve(std::vector<SourceTerm> goals, Subst s) {
        if (answers.size() >= limit) return;
        if (goals.empty()) {
            std::map<std::string, std::string> a;
            for (const std::string& v : query_vars) {
                SourceTerm w = deep_walk(SourceTerm::var(v), s);
                if (!(w.is(SourceTerm::Kind::Var) && w.name == v))
                    a[v] = write_term(w);
            }
            answers.push_back(std::move(a));
            return;
        }
        SourceTerm g = goals.front();
        std::vector<SourceTerm> rest(goals.begin() + 1, goals.end());
        if (g.is(SourceTerm::Kind::Atom) && g.name == "true") return solve(rest, s);
        if (g.is(SourceTerm::Kind::Atom) && (g.name == "fail" || g.name == "false"))
            return;
        if (g.name == "=" && g.args.size() == 2) {
            Subst s2 = s;
            if (ref_unify(g.args[0], g.args[1], s2)) solve(rest, std::move(s2));
            return;
        }
        size_t arity = g.is(SourceTerm::Kind::Compound) ? g.args.size() : 0;
        for (const Clause& c : program) {
            size_t ca = c.head.is(SourceTerm::Kind::Compound) ? c.head.args.size() : 0;
            if (c.head.name != g.name || ca != arity) continue;
            int suffix = ++rename_counter;
            Subst s2 = s;
            if (!ref_unify(g, rename(c.head, suffix), s2)) continue;
            std::vector<SourceTerm> next;
            for (const SourceTerm& b : c.body) next.push_back(rename(b, suffix));
            next.insert(next.end(), rest.begin(), rest.end());
            solve(std::move(next), std::move(s2));
            if (answers.size() >= limit) return;
        }
    }
};

void compare_with_reference(const std::string& program, const std::string& query) {
    RefInterp ref;
    ref.program = parse_program(program);
    std::vector<SourceTerm> goals = parse_query(query);
    std::function<void(const SourceTerm&)> collect = [&](const SourceTerm& t) {
        if (t.is(SourceTerm::Kind::Var) && t.name != "_") {
            for (const std::string& v : ref.query_vars)
                if (v == t.name) return;
            ref.query_vars.push_back(t.name);
        }
        for (const SourceTerm& a : t.args) collect(a);
    };
    for (const SourceTerm& g : goals) collect(g);
    ref.solve(goals, {});

    Engine eng;
    eng.consult_text(program);
    SolveStatus st;
    auto got = eng.run_query(query, 1000, &st);

    CAPTURE(query);
    REQUIRE(got.size() == ref.answers.size());
    for (size_t i = 0; i < got.size(); ++i) {
        for (const auto& [var, val] : ref.answers[i]) {
            CAPTURE(i);
            CAPTURE(var);
            CHECK(got[i].binding(var) == val);
        }
    }
}

const char* kListProgram =
    "app([], L, L).\n"
    "app([H|T], L, [H|R]) :- app(T, L, R).\n"
    "mem(X, [X|_]).\n"
    "mem(X, [_|T]) :- mem(X, T).\n"
    "rev([], []).\n"
    "rev([H|T], R) :- rev(T, RT), app(RT, [H], R).\n";

}  // namespace

TEST_CASE("engine matches the reference interpreter on constraint-free programs") {
    compare_with_reference(kListProgram, "app(X, Y, [1,2,3]).");
    compare_with_reference(kListProgram, "mem(X, [a,b,c]).");
    compare_with_reference(kListProgram, "rev([1,2,3,4], R).");
    compare_with_reference(kListProgram, "app([1], [2], Z), mem(W, Z).");
    compare_with_reference(
        "edge(a,b).\nedge(b,c).\nedge(b,d).\n"
        "path(A,B) :- edge(A,B).\npath(A,B) :- edge(A,C), path(C,B).\n",
        "path(a, X).");
    compare_with_reference(
        "add(z, Y, Y).\nadd(s(X), Y, s(Z)) :- add(X, Y, Z).\n",
        "add(X, Y, s(s(z))).");
    compare_with_reference(kListProgram, "mem(x, []).");  // no answers
}

TEST_CASE("reported ground answers re-succeed when substituted back") {
    Engine eng;
    eng.consult_text(kListProgram);
    auto as = eng.run_query("app(X, Y, [1,2,3]).", 10);
    REQUIRE(as.size() == 4);
    for (const Answer& a : as) {
        std::string q = "app(X, Y, [1,2,3]), X = " + *a.binding("X") +
                        ", Y = " + *a.binding("Y") + ".";
        Engine e2;
        e2.consult_text(kListProgram);
        CHECK(e2.run_query(q, 1).size() == 1);
    }
}

TEST_CASE("state equals its pre-query snapshot after exhaustion") {
    Engine eng;
    eng.consult_text(kListProgram);
    size_t cells = eng.state.store().size();
    size_t trail = eng.state.store().trail_size();
    {
        SolveStatus st;
        eng.run_query("app(X, Y, [1,2]), X = [A|_], Z in 0..3, Z #> A.", 100, &st);
        CHECK(st == SolveStatus::Exhausted);
    }
    CHECK(eng.state.store().trail_size() == trail);
    CHECK(eng.state.attr_count() == 0);
    CHECK(eng.state.active_propagator_count() == 0);
    // Cells are only appended, never mutated back, so growth is fine; the
    // trail going back to the mark is what restores semantics.
    CHECK(eng.state.store().size() >= cells);
}

TEST_CASE("builtin errors surface as typed errors") {
    Engine eng;
    CHECK_THROWS_WITH_AS(eng.run_query("nonsuch(1).", 1),
                         doctest::Contains("existence_error"), PrologError);
    CHECK_THROWS_WITH_AS(eng.run_query("X is Y+1.", 1),
                         doctest::Contains("instantiation_error"), PrologError);
    CHECK_THROWS_WITH_AS(eng.run_query("X is 1/0.", 1),
                         doctest::Contains("evaluation_error"), PrologError);
    CHECK_THROWS_WITH_AS(eng.run_query("set_prolog_flag(bogus, true).", 1),
                         doctest::Contains("domain_error"), PrologError);
    CHECK_THROWS_WITH_AS(eng.run_query("labeling([bogus], [X]).", 1),
                         doctest::Contains("domain_error"), PrologError);
    // Infinite domains cannot be labeled.
    CHECK_THROWS_WITH_AS(eng.run_query("X #> 0, labeling([], [X]).", 1),
                         doctest::Contains("instantiation_error"), PrologError);
}

TEST_CASE("is/2 is moded") {
    Engine eng;
    auto as = eng.run_query("X is 3+4.", 2);
    REQUIRE(as.size() == 1);
    CHECK(as[0].binding("X") == "7");
    SolveStatus st;
    CHECK(eng.run_query("7 is 3+3.", 1, &st).empty());
    CHECK(st == SolveStatus::Exhausted);
    CHECK(eng.run_query("7 is 3+4.", 1).size() == 1);
}

TEST_CASE("occurs-check flag switches at runtime") {
    Engine eng;
    // Default rational-tree mode: the cyclic binding succeeds.
    CHECK(eng.run_query("X = f(X).", 1).size() == 1);
    SolveStatus st;
    CHECK(eng.run_query("set_prolog_flag(occurs_check, true), X = f(X).", 1, &st)
              .empty());
    CHECK(st == SolveStatus::Exhausted);
    CHECK_THROWS_WITH_AS(
        eng.run_query("set_prolog_flag(occurs_check, error), X = f(X).", 1),
        doctest::Contains("occurs_check"), PrologError);
    // The flag change itself is engine state; reset for later queries.
    eng.set_occurs_mode(OccursMode::False);
}

TEST_CASE("step limit reports instead of hanging") {
    Engine eng;
    eng.consult_text("loop :- loop.\n");
    SolveStatus st;
    auto as = eng.run_query("loop.", 1, &st, 10000);
    CHECK(as.empty());
    CHECK(st == SolveStatus::StepLimit);
    // And the machine undid everything on the way out.
    CHECK(eng.state.store().trail_size() == 0);
}

TEST_CASE("answers expose domains and residual constraints") {
    Engine eng;
    auto as = eng.run_query("X in 0..9, X #> 3, X #< Y.", 1);
    REQUIRE(as.size() == 1);
    CHECK(as[0].domain("X") == "4..9");
    REQUIRE(as[0].residuals.size() == 1);
    CHECK(as[0].residuals[0] == "X#<Y");
    CHECK(as[0].str().find("X in 4..9") != std::string::npos);
}

TEST_CASE("labeling goal enumerates and backtracks") {
    Engine eng;
    SolveStatus st;
    auto as = eng.run_query(
        "X in 1..3, Y in 1..3, X #> Y, labeling([], [X, Y]).", 10, &st);
    REQUIRE(as.size() == 3);
    CHECK(st == SolveStatus::Exhausted);
    CHECK(as[0].binding("X") == "2");
    CHECK(as[0].binding("Y") == "1");
    CHECK(as[2].binding("X") == "3");
    CHECK(as[2].binding("Y") == "2");
}

TEST_CASE("true yields one empty answer") {
    Engine eng;
    SolveStatus st;
    auto as = eng.run_query("true.", 2, &st);
    REQUIRE(as.size() == 1);
    CHECK(!as[0].visible());
    CHECK(as[0].str() == "true");
    CHECK(st == SolveStatus::Exhausted);
}
