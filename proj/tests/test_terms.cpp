#include <doctest.h>

#include <map>
#include <random>

#include "clpz/syntax.hpp"
#include "clpz/terms.hpp"

using namespace clpz;

namespace {

TermRef heap(Store& st, const SourceTerm& t, std::map<std::string, TermRef>& vars) {
    switch (t.kind) {
    case SourceTerm::Kind::Int:
        return st.make_int(t.value);
    case SourceTerm::Kind::Atom:
        return st.make_atom(t.name);
    case SourceTerm::Kind::Var: {
        auto it = vars.find(t.name);
        if (it != vars.end()) return it->second;
        return vars[t.name] = st.make_var();
    }
    case SourceTerm::Kind::Compound: {
        std::vector<TermRef> args;
        for (const SourceTerm& a : t.args) args.push_back(heap(st, a, vars));
        return st.make_struct(t.name, std::move(args));
    }
    }
    return kNoRef;
}

TermRef heap(Store& st, const std::string& text, std::map<std::string, TermRef>& vars) {
    return heap(st, parse_term(text), vars);
}

// Substitution-based finite-tree unification, the textbook oracle.
using Subst = std::map<std::string, SourceTerm>;

SourceTerm walk(const SourceTerm& t, const Subst& s) {
    if (t.is(SourceTerm::Kind::Var)) {
        auto it = s.find(t.name);
        if (it != s.end()) return walk(it->second, s);
    }
    return t;
}

bool occurs(const std::string& v, const SourceTerm& t, const Subst& s) {
    SourceTerm w = walk(t, s);
    if (w.is(SourceTerm::Kind::Var)) return w.name == v;
    for (const SourceTerm& a : w.args)
        if (occurs(v, a, s)) return true;
    return false;
}

bool oracle_unify(const SourceTerm& a, const SourceTerm& b, Subst& s) {
    SourceTerm x = walk(a, s), y = walk(b, s);
    if (x.is(SourceTerm::Kind::Var) && y.is(SourceTerm::Kind::Var) && x.name == y.name)
        return true;
    if (x.is(SourceTerm::Kind::Var)) {
        if (occurs(x.name, y, s)) return false;
        s[x.name] = y;
        return true;
    }
    if (y.is(SourceTerm::Kind::Var)) return oracle_unify(y, x, s);
    if (x.kind != y.kind) return false;
    if (x.is(SourceTerm::Kind::Int)) return x.value == y.value;
    if (x.is(SourceTerm::Kind::Atom)) return x.name == y.name;
    if (x.name != y.name || x.args.size() != y.args.size()) return false;
    for (size_t i = 0; i < x.args.size(); ++i)
        if (!oracle_unify(x.args[i], y.args[i], s)) return false;
    return true;
}

SourceTerm random_finite_term(std::mt19937_64& rng, int depth) {
    auto pick = [&](int n) { return (int)(rng() % n); };
    int k = pick(depth > 0 ? 10 : 6);
    if (k < 3) return SourceTerm::var(std::string(1, char('A' + pick(3))));
    if (k < 5) return SourceTerm::atom(std::string(1, char('a' + pick(2))));
    if (k < 6) return SourceTerm::integer(pick(3));
    int arity = 1 + pick(2);
    std::vector<SourceTerm> args;
    for (int i = 0; i < arity; ++i) args.push_back(random_finite_term(rng, depth - 1));
    return SourceTerm::compound(k < 8 ? "f" : "g", std::move(args));
}

}  // namespace

TEST_CASE("basic unification") {
    Store st;
    std::map<std::string, TermRef> v;
    CHECK(st.unify(heap(st, "f(X,b).", v), heap(st, "f(a,Y).", v),
                   OccursMode::False) == UnifyResult::Success);
    CHECK(st.print(st.deref(v["X"])) == "a");
    CHECK(st.print(st.deref(v["Y"])) == "b");
    CHECK(st.unify(heap(st, "g(1).", v), heap(st, "g(2).", v), OccursMode::False) ==
          UnifyResult::Failure);
    CHECK(st.unify(heap(st, "f(Z).", v), heap(st, "g(Z).", v), OccursMode::False) ==
          UnifyResult::Failure);
    CHECK(st.unify(heap(st, "f(A,A).", v), heap(st, "f(1,2).", v),
                   OccursMode::False) == UnifyResult::Failure);
}

TEST_CASE("undo restores unbound variables") {
    Store st;
    std::map<std::string, TermRef> v;
    TermRef x = heap(st, "X.", v);
    TrailMark m = st.mark();
    REQUIRE(st.unify(x, heap(st, "f(1).", v), OccursMode::False) ==
            UnifyResult::Success);
    CHECK(!st.is_unbound_var(st.deref(x)));
    st.undo_to(m);
    CHECK(st.is_unbound_var(st.deref(x)));
    CHECK(st.trail_size() == m);
}

TEST_CASE("occurs modes on X = f(X)") {
    auto cyclic = [](OccursMode mode) {
        Store st;
        std::map<std::string, TermRef> v;
        TermRef x = st.make_var();
        v["X"] = x;
        TermRef fx = st.make_struct("f", {x});
        return st.unify(x, fx, mode);
    };
    CHECK(cyclic(OccursMode::False) == UnifyResult::Success);
    CHECK(cyclic(OccursMode::True) == UnifyResult::Failure);
    CHECK(cyclic(OccursMode::Error) == UnifyResult::StoError);
}

TEST_CASE("rational-tree unification terminates on cyclic terms") {
    Store st;
    TermRef x = st.make_var();
    TermRef fx = st.make_struct("f", {x});
    REQUIRE(st.unify(x, fx, OccursMode::False) == UnifyResult::Success);
    TermRef y = st.make_var();
    TermRef fy = st.make_struct("f", {y});
    REQUIRE(st.unify(y, fy, OccursMode::False) == UnifyResult::Success);
    // Two distinct cyclic f-chains unify (same rational tree).
    CHECK(st.unify(x, y, OccursMode::False) == UnifyResult::Success);
    // And printing one is depth-limited rather than divergent.
    CHECK(st.print(x, 4).find("...") != std::string::npos);
}

TEST_CASE("occurs_in is cycle-safe") {
    Store st;
    TermRef x = st.make_var();
    TermRef fx = st.make_struct("f", {x});
    REQUIRE(st.unify(x, fx, OccursMode::False) == UnifyResult::Success);
    TermRef z = st.make_var();
    CHECK(!st.occurs_in(z, x));
    CHECK(st.occurs_in(x, fx));
}

TEST_CASE("fresh variables skip the occurs-check scan") {
    Store st;
    st.occurs_checks_done = 0;
    TermRef x = st.make_var();  // never stored in any compound: fresh
    std::map<std::string, TermRef> v;
    TermRef t = heap(st, "f(g(a),h(b)).", v);
    REQUIRE(st.unify(x, t, OccursMode::True) == UnifyResult::Success);
    CHECK(st.occurs_checks_done == 0);

    TermRef y = st.make_var();
    st.make_struct("wrap", {y});  // y now appears inside a compound
    TermRef t2 = heap(st, "f(c).", v);
    REQUIRE(st.unify(y, t2, OccursMode::True) == UnifyResult::Success);
    CHECK(st.occurs_checks_done == 1);
}

TEST_CASE("unifier agrees with the substitution oracle on finite terms") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        SourceTerm a = random_finite_term(rng, 3);
        SourceTerm b = random_finite_term(rng, 3);
        Subst s;
        bool want = oracle_unify(a, b, s);
        Store st;
        std::map<std::string, TermRef> vars;
        TermRef ra = heap(st, a, vars);
        TermRef rb = heap(st, b, vars);
        bool got = st.unify(ra, rb, OccursMode::True) == UnifyResult::Success;
        CAPTURE(write_term(a));
        CAPTURE(write_term(b));
        CHECK(want == got);
    }
}

TEST_CASE("printer uses operator and list notation") {
    Store st;
    std::map<std::string, TermRef> v;
    CHECK(st.print(heap(st, "1+2*3.", v)) == "1+2*3");
    CHECK(st.print(heap(st, "[1,2,3].", v)) == "[1,2,3]");
    CHECK(st.print(heap(st, "[1|T].", v)).substr(0, 3) == "[1|");
    CHECK(st.print(heap(st, "f(a,B).", v)).substr(0, 4) == "f(a,");
    CHECK(st.print(heap(st, "X #= Y+ -1.", v)).find("+ -1") != std::string::npos);
}
