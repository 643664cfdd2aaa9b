#include "clpz/label.hpp"

#include "clpz/errors.hpp"

namespace clpz {

std::optional<TermRef> choose_unbound(SolverState& st,
                                      const std::vector<TermRef>& vars,
                                      const LabelOptions& opts) {
    std::optional<TermRef> best;
    std::optional<Int> best_size;
    for (TermRef r : vars) {
        TermRef d = st.store().deref(r);
        if (!st.store().is_unbound_var(d)) continue;
        Domain dom = st.term_domain(d);
        auto size = dom.count();
        if (!size)
            throw PrologError("instantiation_error",
                              "labeling requires finite domains, " +
                                  st.store().print(d) + " in " + dom.str());
        if (opts.var_order == LabelOptions::VarOrder::Leftmost) return d;
        if (!best || *size < *best_size) {
            best = d;
            best_size = size;
        }
    }
    return best;
}

std::vector<Int> label_values(SolverState& st, TermRef v) {
    return st.term_domain(v).values();
}

bool try_value(SolverState& st, TermRef v, const Int& value) {
    TermRef iv = st.store().make_int(value);
    return st.unify(v, iv) == UnifyResult::Success;
}

namespace {

bool enumerate_rec(SolverState& st, const std::vector<TermRef>& vars,
                   const LabelOptions& opts,
                   const std::function<bool()>& on_solution) {
    auto v = choose_unbound(st, vars, opts);
    if (!v) return on_solution();
    for (const Int& value : label_values(st, *v)) {
        TrailMark m = st.store().mark();
        bool keep_going = true;
        if (try_value(st, *v, value))
            keep_going = enumerate_rec(st, vars, opts, on_solution);
        st.store().undo_to(m);
        if (!keep_going) return false;
    }
    return true;
}

}  // namespace

bool enumerate(SolverState& st, const std::vector<TermRef>& vars,
               const LabelOptions& opts,
               const std::function<bool()>& on_solution) {
    // Fail fast on infinite domains before any search happens.
    for (TermRef r : vars) {
        TermRef d = st.store().deref(r);
        if (st.store().is_unbound_var(d) && !st.term_domain(d).is_finite())
            throw PrologError("instantiation_error",
                              "labeling requires finite domains, " +
                                  st.store().print(d) + " in " +
                                  st.term_domain(d).str());
    }
    return enumerate_rec(st, vars, opts, on_solution);
}

size_t solutions_count(SolverState& st, const std::vector<TermRef>& vars,
                       const LabelOptions& opts, size_t limit) {
    size_t n = 0;
    enumerate(st, vars, opts, [&] {
        ++n;
        return n < limit;
    });
    return n;
}

}  // namespace clpz
