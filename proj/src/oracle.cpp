#include "clpz/oracle.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "clpz/label.hpp"
#include "clpz/propagate.hpp"

namespace clpz {

std::string Formula::str() const {
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& s) {
        if (!first) os << ", ";
        os << s;
        first = false;
    };
    for (const BoxVar& v : vars)
        emit(v.name + " in " + v.lo.get_str() + ".." + v.hi.get_str());
    for (const SourceTerm& r : relations) emit(write_term(r));
    return os.str();
}

std::string Formula::query(bool with_labeling) const {
    std::string q = str();
    if (with_labeling) {
        q += ", labeling([], [";
        for (size_t i = 0; i < vars.size(); ++i) {
            if (i) q += ",";
            q += vars[i].name;
        }
        q += "])";
    }
    return q + ".";
}

std::optional<Int> eval_formula_expr(const Formula& f, const SourceTerm& t,
                                     const std::vector<Int>& assignment) {
    switch (t.kind) {
    case SourceTerm::Kind::Int:
        return t.value;
    case SourceTerm::Kind::Var:
        for (size_t i = 0; i < f.vars.size(); ++i)
            if (f.vars[i].name == t.name) return assignment[i];
        return std::nullopt;
    case SourceTerm::Kind::Atom:
        return std::nullopt;
    case SourceTerm::Kind::Compound:
        break;
    }
    if (t.name == "abs" && t.args.size() == 1) {
        auto a = eval_formula_expr(f, t.args[0], assignment);
        if (!a) return std::nullopt;
        return abs(*a);
    }
    if (t.args.size() != 2) return std::nullopt;
    auto a = eval_formula_expr(f, t.args[0], assignment);
    auto b = eval_formula_expr(f, t.args[1], assignment);
    if (!a || !b) return std::nullopt;
    if (t.name == "+") return *a + *b;
    if (t.name == "-") return *a - *b;
    if (t.name == "*") return *a * *b;
    if (t.name == "/") {
        if (*b == 0) return std::nullopt;
        return div_trunc(*a, *b);
    }
    if (t.name == "^") {
        if (*b < 0) return std::nullopt;
        return pow_nonneg(*a, *b);
    }
    return std::nullopt;
}

bool satisfies(const Formula& f, const std::vector<Int>& assignment) {
    for (const SourceTerm& r : f.relations) {
        if (!r.is(SourceTerm::Kind::Compound) || r.args.size() != 2) return false;
        auto a = eval_formula_expr(f, r.args[0], assignment);
        auto b = eval_formula_expr(f, r.args[1], assignment);
        if (!a || !b) return false;
        bool ok;
        if (r.name == "#=") ok = *a == *b;
        else if (r.name == "#\\=") ok = *a != *b;
        else if (r.name == "#<") ok = *a < *b;
        else if (r.name == "#=<") ok = *a <= *b;
        else if (r.name == "#>") ok = *a > *b;
        else if (r.name == "#>=") ok = *a >= *b;
        else return false;
        if (!ok) return false;
    }
    return true;
}

namespace {

// Iterates the full assignment grid; callback returns false to stop early.
// Returns false when the grid exceeds cap (callback never invoked then).
bool for_each_assignment(const Formula& f, uint64_t cap,
                         const std::function<bool(const std::vector<Int>&)>& fn) {
    Int grid = 1;
    for (const BoxVar& v : f.vars) {
        if (v.hi < v.lo) return true;  // empty box: empty grid
        grid *= v.hi - v.lo + 1;
        if (grid > Int(cap)) return false;
    }
    std::vector<Int> a;
    for (const BoxVar& v : f.vars) a.push_back(v.lo);
    for (;;) {
        if (!fn(a)) return true;
        size_t i = f.vars.size();
        while (i > 0) {
            --i;
            if (a[i] < f.vars[i].hi) {
                ++a[i];
                for (size_t j = i + 1; j < f.vars.size(); ++j) a[j] = f.vars[j].lo;
                break;
            }
            if (i == 0) return true;
        }
        if (f.vars.empty()) return true;
    }
}

std::string show_assignment(const Formula& f, const std::vector<Int>& a) {
    std::string s;
    for (size_t i = 0; i < f.vars.size(); ++i) {
        if (i) s += ", ";
        s += f.vars[i].name + " = " + a[i].get_str();
    }
    return s;
}

TermRef heap_term(Store& store, const SourceTerm& t,
                  std::map<std::string, TermRef>& vars) {
    switch (t.kind) {
    case SourceTerm::Kind::Int:
        return store.make_int(t.value);
    case SourceTerm::Kind::Atom:
        return store.make_atom(t.name);
    case SourceTerm::Kind::Var: {
        auto it = vars.find(t.name);
        if (it != vars.end()) return it->second;
        TermRef v = store.make_var();
        vars[t.name] = v;
        return v;
    }
    case SourceTerm::Kind::Compound: {
        std::vector<TermRef> args;
        for (const SourceTerm& a : t.args) args.push_back(heap_term(store, a, vars));
        return store.make_struct(t.name, std::move(args));
    }
    }
    return kNoRef;
}

Rel rel_of_name(const std::string& n) {
    if (n == "#=") return Rel::Eq;
    if (n == "#\\=") return Rel::Neq;
    if (n == "#<") return Rel::Lt;
    if (n == "#=<") return Rel::Leq;
    if (n == "#>") return Rel::Gt;
    return Rel::Geq;
}

struct Posted {
    SolverState st;
    std::vector<TermRef> var_refs;
    std::vector<std::pair<Rel, std::pair<TermRef, TermRef>>> rels;
    bool boxes_ok = true;

    explicit Posted(const Formula& f) {
        std::map<std::string, TermRef> vars;
        for (const BoxVar& v : f.vars) {
            TermRef r = st.store().make_var();
            vars[v.name] = r;
            var_refs.push_back(r);
            if (st.post_in(r, Domain::range(Ext::fin(v.lo), Ext::fin(v.hi))) !=
                PostResult::Consistent)
                boxes_ok = false;
        }
        for (const SourceTerm& rel : f.relations) {
            TermRef lhs = heap_term(st.store(), rel.args[0], vars);
            TermRef rhs = heap_term(st.store(), rel.args[1], vars);
            rels.push_back({rel_of_name(rel.name), {lhs, rhs}});
        }
    }

    bool post_relations() {
        for (const auto& [rel, sides] : rels)
            if (st.post_relation(rel, sides.first, sides.second) !=
                PostResult::Consistent)
                return false;
        return true;
    }

    bool bind(const std::vector<Int>& a) {
        for (size_t i = 0; i < var_refs.size(); ++i) {
            TermRef iv = st.store().make_int(a[i]);
            if (st.unify(var_refs[i], iv) != UnifyResult::Success) return false;
        }
        return true;
    }
};

}  // namespace

std::optional<std::vector<std::vector<Int>>> brute_solutions(const Formula& f,
                                                             uint64_t cap) {
    std::vector<std::vector<Int>> out;
    bool fit = for_each_assignment(f, cap, [&](const std::vector<Int>& a) {
        if (satisfies(f, a)) out.push_back(a);
        return true;
    });
    if (!fit) return std::nullopt;
    return out;
}

namespace {

// Both posting orders, reused across assignments via trail snapshots.
struct CommutationRig {
    const Formula& f;
    Posted pa;  // constraints first, then values
    Posted pb;  // values first, then constraints
    bool posts_ok;
    TrailMark ma, mb;

    explicit CommutationRig(const Formula& formula)
        : f(formula), pa(formula), pb(formula) {
        posts_ok = pa.boxes_ok && pa.post_relations();
        ma = pa.st.store().mark();
        mb = pb.st.store().mark();
    }

    bool check(const std::vector<Int>& a, CheckReport& rep) {
        bool expected = satisfies(f, a);

        bool got_a = posts_ok && pa.bind(a);
        pa.st.store().undo_to(ma);

        bool got_b = pb.boxes_ok && pb.bind(a) && pb.post_relations();
        pb.st.store().undo_to(mb);

        if (got_a != expected || got_b != expected) {
            rep.ok = false;
            rep.detail = "commutation mismatch on ?- " + f.query(false) + "\n  at " +
                         show_assignment(f, a) + ": ground=" +
                         (expected ? "true" : "false") + " constraints-then-values=" +
                         (got_a ? "true" : "false") + " values-then-constraints=" +
                         (got_b ? "true" : "false");
            return false;
        }
        return true;
    }
};

}  // namespace

CheckReport check_commutation(const Formula& f, uint64_t cap) {
    CheckReport rep;
    CommutationRig rig(f);
    bool fit = for_each_assignment(
        f, cap, [&](const std::vector<Int>& a) { return rig.check(a, rep); });
    if (!fit) rep.detail = "grid too large; skipped";
    return rep;
}

CheckReport check_commutation_sampled(const Formula& f, size_t samples,
                                      std::mt19937_64& rng) {
    CheckReport rep;
    for (const BoxVar& v : f.vars)
        if (v.hi < v.lo) return rep;  // empty box: nothing to sample
    CommutationRig rig(f);
    std::vector<Int> a(f.vars.size());
    for (size_t s = 0; s < samples; ++s) {
        for (size_t i = 0; i < f.vars.size(); ++i) {
            long lo = f.vars[i].lo.get_si(), hi = f.vars[i].hi.get_si();
            a[i] = std::uniform_int_distribution<long>(lo, hi)(rng);
        }
        if (!rig.check(a, rep)) break;
    }
    return rep;
}

CheckReport check_soundness(const Formula& f, uint64_t cap) {
    CheckReport rep;
    auto brute = brute_solutions(f, cap);
    if (!brute) {
        rep.detail = "grid too large; skipped";
        return rep;
    }

    Posted p(f);
    std::vector<std::vector<Int>> got;
    if (p.boxes_ok && p.post_relations()) {
        enumerate(p.st, p.var_refs, LabelOptions{}, [&] {
            std::vector<Int> a;
            for (TermRef r : p.var_refs) {
                TermRef d = p.st.store().deref(r);
                a.push_back(p.st.store().cell(d).value);
            }
            got.push_back(std::move(a));
            return true;
        });
    }

    std::sort(got.begin(), got.end());
    std::vector<std::vector<Int>> want = *brute;
    std::sort(want.begin(), want.end());
    if (got != want) {
        rep.ok = false;
        std::ostringstream os;
        os << "soundness mismatch on ?- " << f.query(true) << "\n  ground has "
           << want.size() << " solutions, solver found " << got.size();
        for (const auto& a : want)
            if (!std::binary_search(got.begin(), got.end(), a)) {
                os << "\n  lost: " << show_assignment(f, a);
                break;
            }
        for (const auto& a : got)
            if (!std::binary_search(want.begin(), want.end(), a)) {
                os << "\n  invented: " << show_assignment(f, a);
                break;
            }
        rep.detail = os.str();
    }
    return rep;
}

Formula random_formula(std::mt19937_64& rng, const GenOptions& opts) {
    Formula f;
    auto rand_int = [&](long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng);
    };
    long hw = (long)opts.box_halfwidth.get_si();
    for (int i = 0; i < opts.num_vars; ++i) {
        BoxVar v;
        v.name = "X" + std::to_string(i + 1);
        v.lo = rand_int(-hw, hw);
        v.hi = v.lo + rand_int(0, 4);
        if (v.hi > opts.box_halfwidth) v.hi = opts.box_halfwidth;
        f.vars.push_back(std::move(v));
    }

    std::function<SourceTerm(int)> expr = [&](int depth) -> SourceTerm {
        if (depth <= 0 || rand_int(0, 99) < 35) {
            if (rand_int(0, 99) < 70)
                return SourceTerm::var(f.vars[rand_int(0, opts.num_vars - 1)].name);
            return SourceTerm::integer(rand_int(-3, 3));
        }
        int pick = (int)rand_int(0, 99);
        if (pick < 20)
            return SourceTerm::compound("+", {expr(depth - 1), expr(depth - 1)});
        if (pick < 35)
            return SourceTerm::compound("-", {expr(depth - 1), expr(depth - 1)});
        if (pick < 60)
            return SourceTerm::compound("*", {expr(depth - 1), expr(depth - 1)});
        if (pick < 75)
            return SourceTerm::compound("/", {expr(depth - 1), expr(depth - 1)});
        if (pick < 90) return SourceTerm::compound("abs", {expr(depth - 1)});
        SourceTerm e = rand_int(0, 99) < 80
                           ? SourceTerm::integer(rand_int(0, 3))
                           : expr(depth - 1);
        return SourceTerm::compound("^", {expr(depth - 1), std::move(e)});
    };

    const char* rels[] = {"#=", "#=", "#=", "#\\=", "#<", "#=<", "#>", "#>="};
    for (int i = 0; i < opts.num_relations; ++i)
        f.relations.push_back(SourceTerm::compound(
            rels[rand_int(0, 7)], {expr(opts.depth), expr(opts.depth)}));
    return f;
}

}  // namespace clpz
