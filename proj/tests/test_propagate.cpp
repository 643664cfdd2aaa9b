#include <doctest.h>

#include <map>

#include "clpz/errors.hpp"
#include "clpz/propagate.hpp"
#include "clpz/syntax.hpp"

using namespace clpz;

namespace {

struct Fix {
    SolverState st;
    std::map<std::string, TermRef> vars;

    TermRef term(const SourceTerm& t) {
        switch (t.kind) {
        case SourceTerm::Kind::Int:
            return st.store().make_int(t.value);
        case SourceTerm::Kind::Atom:
            return st.store().make_atom(t.name);
        case SourceTerm::Kind::Var: {
            auto it = vars.find(t.name);
            if (it != vars.end()) return it->second;
            return vars[t.name] = st.store().make_var();
        }
        case SourceTerm::Kind::Compound: {
            std::vector<TermRef> args;
            for (const SourceTerm& a : t.args) args.push_back(term(a));
            return st.store().make_struct(t.name, std::move(args));
        }
        }
        return kNoRef;
    }

    // Posts "Lhs REL Rhs" or "V in D" given in query syntax.
    PostResult post(const std::string& text) {
        SourceTerm t = parse_term(text + ".");
        REQUIRE(t.args.size() == 2);
        if (t.name == "in") {
            TermRef v = term(t.args[0]);
            return st.post_in(v, domain_of(t.args[1]));
        }
        Rel rel = t.name == "#="    ? Rel::Eq
                  : t.name == "#\\=" ? Rel::Neq
                  : t.name == "#<"   ? Rel::Lt
                  : t.name == "#=<"  ? Rel::Leq
                  : t.name == "#>"   ? Rel::Gt
                                     : Rel::Geq;
        return st.post_relation(rel, term(t.args[0]), term(t.args[1]));
    }

    Domain domain_of(const SourceTerm& t) {
        if (t.is(SourceTerm::Kind::Int)) return Domain::singleton(t.value);
        if (t.name == "\\/") return domain_of(t.args[0]).unite(domain_of(t.args[1]));
        REQUIRE(t.name == "..");
        auto endpoint = [](const SourceTerm& e, bool low) {
            if (e.is(SourceTerm::Kind::Int)) return Ext::fin(e.value);
            return low ? Ext::neg_inf() : Ext::pos_inf();
        };
        return Domain::range(endpoint(t.args[0], true), endpoint(t.args[1], false));
    }

    std::string dom(const std::string& v) {
        return st.term_domain(st.store().deref(vars.at(v))).str();
    }
};

}  // namespace

TEST_CASE("relations narrow bounds") {
    Fix f;
    CHECK(f.post("X in 0..5") == PostResult::Consistent);
    CHECK(f.post("X #> 2") == PostResult::Consistent);
    CHECK(f.dom("X") == "3..5");
    CHECK(f.post("X #\\= 4") == PostResult::Consistent);
    CHECK(f.dom("X") == "3\\/5");
    CHECK(f.post("X #< 2") == PostResult::Inconsistent);
}

TEST_CASE("equality propagates through arithmetic") {
    Fix f;
    REQUIRE(f.post("X in 0..3") == PostResult::Consistent);
    REQUIRE(f.post("Y #= X+1") == PostResult::Consistent);
    CHECK(f.dom("Y") == "1..4");
    REQUIRE(f.post("Y #= 4") == PostResult::Consistent);
    CHECK(f.dom("X") == "3");
}

TEST_CASE("division removes the zero divisor immediately") {
    Fix f;
    REQUIRE(f.post("X in 0..2") == PostResult::Consistent);
    REQUIRE(f.post("0/X #= 0") == PostResult::Consistent);
    CHECK(f.dom("X") == "1..2");
    // Nothing further pends: the relation is entailed.
    CHECK(f.st.active_propagator_count() == 0);
}

TEST_CASE("ground relations create no propagators") {
    Fix f;
    CHECK(f.post("3+4 #= 7") == PostResult::Consistent);
    CHECK(f.post("3*3 #> 8") == PostResult::Consistent);
    CHECK(f.post("3 #= 4") == PostResult::Inconsistent);
    CHECK(f.post("7/0 #= 2") == PostResult::Inconsistent);  // undefined: just false
    CHECK(f.st.propagators_created == 0);
}

TEST_CASE("moded fast path binds a plain variable") {
    Fix f;
    REQUIRE(f.post("X #= 6*7") == PostResult::Consistent);
    CHECK(f.st.propagators_created == 0);
    CHECK(f.st.store().print(f.st.store().deref(f.vars["X"])) == "42");
}

TEST_CASE("circular inequalities stop after bounded work") {
    Fix f;
    REQUIRE(f.post("X #> Y") == PostResult::Consistent);
    REQUIRE(f.post("Y #> X") == PostResult::Consistent);
    REQUIRE(f.post("X #> 0") == PostResult::Consistent);
    uint64_t bound = f.st.propagators_created * (f.st.attr_count() + 2);
    CHECK(f.st.total_runs <= bound);
    CHECK(f.st.active_propagator_count() >= 2);  // the cycle stays residual
}

TEST_CASE("the same cycle over finite domains reaches the fixpoint") {
    Fix f;
    REQUIRE(f.post("X in 0..9") == PostResult::Consistent);
    REQUIRE(f.post("Y in 0..9") == PostResult::Consistent);
    // On finite domains the once-only rule does not apply, so the
    // contradiction must be found by propagation alone.
    PostResult a = f.post("X #> Y");
    PostResult b = PostResult::Consistent;
    if (a == PostResult::Consistent) b = f.post("Y #> X");
    CHECK((a == PostResult::Inconsistent || b == PostResult::Inconsistent));
}

TEST_CASE("nonlinear cycle from the termination example") {
    Fix f;
    CHECK(f.post("X #> X*X") == PostResult::Consistent);  // no hang, no error
    Fix g;
    REQUIRE(g.post("abs(X) #< 1000") == PostResult::Consistent);
    PostResult a = g.post("X #> Y");
    PostResult b = PostResult::Consistent;
    if (a == PostResult::Consistent) b = g.post("Y #> X");
    CHECK((a == PostResult::Inconsistent || b == PostResult::Inconsistent));
}

TEST_CASE("aliasing constrained variables intersects their domains") {
    Fix f;
    REQUIRE(f.post("X in 0..5") == PostResult::Consistent);
    REQUIRE(f.post("Y in 3..9") == PostResult::Consistent);
    REQUIRE(f.st.unify(f.vars["X"], f.vars["Y"]) == UnifyResult::Success);
    CHECK(f.dom("X") == "3..5");
    CHECK(f.dom("Y") == "3..5");
}

TEST_CASE("binding a constrained variable outside its domain fails") {
    Fix f;
    REQUIRE(f.post("X in 0..5") == PostResult::Consistent);
    TermRef seven = f.st.store().make_int(7);
    CHECK(f.st.unify(f.vars["X"], seven) == UnifyResult::Failure);
    TermRef three = f.st.store().make_int(3);
    CHECK(f.st.unify(f.vars["X"], three) == UnifyResult::Success);
}

TEST_CASE("narrowing is monotone and undoable") {
    Fix f;
    REQUIRE(f.post("X in 0..9") == PostResult::Consistent);
    TrailMark m = f.st.store().mark();
    REQUIRE(f.post("X #> 4") == PostResult::Consistent);
    CHECK(f.dom("X") == "5..9");
    f.st.store().undo_to(m);
    CHECK(f.dom("X") == "0..9");
    CHECK(f.st.active_propagator_count() == 0);  // the Leq was popped too
}

TEST_CASE("pow and abs propagate") {
    Fix f;
    REQUIRE(f.post("X in 0..10") == PostResult::Consistent);
    REQUIRE(f.post("X^2 #= 49") == PostResult::Consistent);
    CHECK(f.dom("X") == "7");
    Fix g;
    REQUIRE(g.post("abs(X) #= 3") == PostResult::Consistent);
    CHECK(g.dom("X") == "-3\\/3");
    Fix h;
    REQUIRE(h.post("Y in 0..sup") == PostResult::Consistent);
    CHECK(h.post("2^Y #= 1024") == PostResult::Consistent);
    CHECK(h.dom("Y") == "10");
}

TEST_CASE("eval_arith statuses") {
    Fix f;
    Int out;
    CHECK(eval_arith(f.st.store(), f.term(parse_term("2+3*4.")), out) ==
          EvalStatus::Ok);
    CHECK(out == 14);
    CHECK(eval_arith(f.st.store(), f.term(parse_term("-7/2.")), out) ==
          EvalStatus::Ok);
    CHECK(out == -3);  // truncates toward zero
    CHECK(eval_arith(f.st.store(), f.term(parse_term("X+1.")), out) ==
          EvalStatus::NonGround);
    CHECK(eval_arith(f.st.store(), f.term(parse_term("1/0.")), out) ==
          EvalStatus::ZeroDivisor);
    CHECK(eval_arith(f.st.store(), f.term(parse_term("2^(0-1).")), out) ==
          EvalStatus::NegExponent);
    CHECK_THROWS_AS(eval_arith(f.st.store(), f.term(parse_term("foo+1.")), out),
                    PrologError);
}

TEST_CASE("residual printing uses relation syntax") {
    Fix f;
    REQUIRE(f.post("X #< Y") == PostResult::Consistent);
    auto pids = f.st.residual_propagators({f.st.store().deref(f.vars["X"])});
    REQUIRE(pids.size() == 1);
    auto namer = [&](TermRef r) -> std::string {
        if (r == f.st.store().deref(f.vars["X"])) return "X";
        if (r == f.st.store().deref(f.vars["Y"])) return "Y";
        return "";
    };
    CHECK(f.st.print_propagator(pids[0], namer) == "X#<Y");
}
