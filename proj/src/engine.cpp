#include "clpz/engine.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace clpz {

void ClauseDB::consult(const std::vector<Clause>& clauses) {
    for (const Clause& c : clauses) {
        size_t arity =
            c.head.is(SourceTerm::Kind::Compound) ? c.head.args.size() : 0;
        preds_[{c.head.name, arity}].clauses.push_back(c);
    }
}

void ClauseDB::consult_text(const std::string& text) { consult(parse_program(text)); }

const Pred* ClauseDB::lookup(const std::string& name, size_t arity) const {
    auto it = preds_.find({name, arity});
    return it == preds_.end() ? nullptr : &it->second;
}

void Engine::consult_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PrologError("existence_error", "file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    consult_text(ss.str());
}

std::string Answer::str() const {
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& s) {
        if (!first) os << ",\n";
        os << s;
        first = false;
    };
    for (const auto& [n, v] : bindings) emit(n + " = " + v);
    for (const auto& [n, d] : domains) emit(n + " in " + d);
    for (const auto& r : residuals) emit(r);
    if (first) return "true";
    return os.str();
}

std::optional<std::string> Answer::binding(const std::string& var) const {
    for (const auto& [n, v] : bindings)
        if (n == var) return v;
    return std::nullopt;
}

std::optional<std::string> Answer::domain(const std::string& var) const {
    for (const auto& [n, d] : domains)
        if (n == var) return d;
    return std::nullopt;
}

Domain parse_domain_term(SolverState& st, TermRef t) {
    Store& store = st.store();
    t = store.deref(t);
    const auto& c = store.cell(t);
    switch (c.tag) {
    case Store::Cell::Tag::Int:
        return Domain::singleton(c.value);
    case Store::Cell::Tag::Var:
        throw PrologError("instantiation_error", "domain expression");
    case Store::Cell::Tag::Atom:
        break;
    case Store::Cell::Tag::Struct:
        if (c.name == "\\/" && c.args.size() == 2)
            return parse_domain_term(st, c.args[0])
                .unite(parse_domain_term(st, c.args[1]));
        if (c.name == ".." && c.args.size() == 2) {
            auto endpoint = [&](TermRef r, bool low) -> Ext {
                r = store.deref(r);
                const auto& e = store.cell(r);
                if (e.tag == Store::Cell::Tag::Int) return Ext::fin(e.value);
                if (e.tag == Store::Cell::Tag::Atom && e.name == "inf" && low)
                    return Ext::neg_inf();
                if (e.tag == Store::Cell::Tag::Atom && e.name == "sup" && !low)
                    return Ext::pos_inf();
                if (e.tag == Store::Cell::Tag::Var)
                    throw PrologError("instantiation_error", "domain endpoint");
                throw PrologError("type_error", "domain endpoint " + store.print(r));
            };
            return Domain::range(endpoint(c.args[0], true), endpoint(c.args[1], false));
        }
        break;
    }
    throw PrologError("type_error", "domain expression " + store.print(t));
}

Machine::Machine(Engine& eng, const std::vector<SourceTerm>& goals) : eng_(eng) {
    base_mark_ = eng_.state.store().mark();
    std::map<std::string, TermRef> vars;
    // Build front-to-back so variables are created in source order.
    std::vector<RtGoal> rt;
    for (const SourceTerm& g : goals) rt.push_back(make_goal(g, vars));
    GoalList cont;
    for (auto it = rt.rbegin(); it != rt.rend(); ++it)
        cont = std::make_shared<GoalNode>(GoalNode{std::move(*it), cont});
    goals_ = cont;
    for (const auto& [name, ref] : vars)
        if (name[0] != '_') query_vars_.push_back({name, ref});
    // map iteration is alphabetical; restore first-occurrence order
    std::stable_sort(query_vars_.begin(), query_vars_.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
}

Machine::~Machine() {
    if (!finished_) finish();
}

void Machine::finish() {
    finished_ = true;
    goals_ = nullptr;
    cps_.clear();
    eng_.state.store().undo_to(base_mark_);
}

TermRef Machine::instantiate(const SourceTerm& t, std::map<std::string, TermRef>& vars) {
    Store& store = eng_.state.store();
    switch (t.kind) {
    case SourceTerm::Kind::Int:
        return store.make_int(t.value);
    case SourceTerm::Kind::Atom:
        return store.make_atom(t.name);
    case SourceTerm::Kind::Var: {
        if (t.name == "_") return store.make_var();
        auto it = vars.find(t.name);
        if (it != vars.end()) return it->second;
        TermRef v = store.make_var();
        vars[t.name] = v;
        return v;
    }
    case SourceTerm::Kind::Compound: {
        std::vector<TermRef> args;
        args.reserve(t.args.size());
        for (const SourceTerm& a : t.args) args.push_back(instantiate(a, vars));
        return store.make_struct(t.name, std::move(args));
    }
    }
    return kNoRef;
}

Machine::RtGoal Machine::make_goal(const SourceTerm& t,
                                   std::map<std::string, TermRef>& vars) {
    switch (t.kind) {
    case SourceTerm::Kind::Atom:
        return {t.name, {}};
    case SourceTerm::Kind::Compound: {
        RtGoal g{t.name, {}};
        g.args.reserve(t.args.size());
        for (const SourceTerm& a : t.args) g.args.push_back(instantiate(a, vars));
        return g;
    }
    case SourceTerm::Kind::Var:
        throw PrologError("instantiation_error", "goal is an unbound variable");
    case SourceTerm::Kind::Int:
        throw PrologError("type_error", "callable " + t.value.get_str());
    }
    return {"fail", {}};
}

Machine::GoalList Machine::body_goals(const std::vector<SourceTerm>& body,
                                      std::map<std::string, TermRef>& vars,
                                      GoalList cont) {
    std::vector<RtGoal> rt;
    rt.reserve(body.size());
    for (const SourceTerm& g : body) rt.push_back(make_goal(g, vars));
    for (auto it = rt.rbegin(); it != rt.rend(); ++it)
        cont = std::make_shared<GoalNode>(GoalNode{std::move(*it), cont});
    return cont;
}

SolveStatus Machine::next(Answer& out) {
    if (finished_) return SolveStatus::Exhausted;
    try {
        if (!started_) {
            started_ = true;
        } else if (!backtrack()) {
            finish();
            return SolveStatus::Exhausted;
        }
        for (;;) {
            if (abort_requested_ || (abort_flag_ && abort_flag_->load())) {
                abort_requested_ = false;
                throw PrologError("interrupted", "query aborted");
            }
            if (step_limit_ && steps_ >= step_limit_) {
                finish();
                return SolveStatus::StepLimit;
            }
            if (!goals_) {
                out = capture();
                return SolveStatus::Answer;
            }
            RtGoal g = goals_->goal;
            goals_ = goals_->next;
            ++steps_;
            if (!dispatch(g) && !backtrack()) {
                finish();
                return SolveStatus::Exhausted;
            }
        }
    } catch (...) {
        finish();
        throw;
    }
}

SolveStatus Machine::collect(size_t max_answers, std::vector<Answer>& out) {
    SolveStatus st = SolveStatus::Answer;
    while (out.size() < max_answers) {
        Answer a;
        st = next(a);
        if (st != SolveStatus::Answer) break;
        out.push_back(std::move(a));
    }
    return st;
}

bool Machine::dispatch(const RtGoal& g) {
    bool handled = false;
    bool ok = builtin(g, handled);
    if (handled) return ok;
    const Pred* pred = eng_.db.lookup(g.functor, g.args.size());
    if (!pred)
        throw PrologError("existence_error",
                          "procedure " + g.functor + "/" + std::to_string(g.args.size()));
    Choicepoint cp;
    cp.kind = Choicepoint::Kind::Clauses;
    cp.cont = goals_;
    cp.mark = eng_.state.store().mark();
    cp.pred = pred;
    cp.call_args = g.args;
    cps_.push_back(std::move(cp));
    return try_clauses(cps_.back());
}

bool Machine::try_clauses(Choicepoint& cp) {
    Store& store = eng_.state.store();
    while (cp.clause_idx < cp.pred->clauses.size()) {
        store.undo_to(cp.mark);
        const Clause& cl = cp.pred->clauses[cp.clause_idx++];
        std::map<std::string, TermRef> vars;
        UnifyResult r = UnifyResult::Success;
        if (cl.head.is(SourceTerm::Kind::Compound)) {
            for (size_t i = 0; i < cl.head.args.size(); ++i) {
                TermRef ha = instantiate(cl.head.args[i], vars);
                r = eng_.state.unify(cp.call_args[i], ha);
                if (r != UnifyResult::Success) break;
            }
        }
        if (r == UnifyResult::StoError)
            throw PrologError("occurs_check",
                              store.print(store.sto_var) + " = " + store.sto_term);
        if (r == UnifyResult::Success) {
            GoalList cont = body_goals(cl.body, vars, cp.cont);
            bool last = cp.clause_idx >= cp.pred->clauses.size();
            goals_ = cont;
            if (last) cps_.pop_back();
            return true;
        }
    }
    eng_.state.store().undo_to(cp.mark);
    cps_.pop_back();
    return false;
}

bool Machine::try_label_values(Choicepoint& cp) {
    SolverState& st = eng_.state;
    while (cp.value_idx < cp.values.size()) {
        st.store().undo_to(cp.mark);
        const Int v = cp.values[cp.value_idx++];
        if (try_value(st, cp.label_var, v)) {
            RtGoal again{"labeling", {cp.label_opts, cp.label_vars}};
            goals_ = std::make_shared<GoalNode>(GoalNode{std::move(again), cp.cont});
            if (cp.value_idx >= cp.values.size()) cps_.pop_back();
            return true;
        }
    }
    st.store().undo_to(cp.mark);
    cps_.pop_back();
    return false;
}

bool Machine::backtrack() {
    while (!cps_.empty()) {
        Choicepoint& cp = cps_.back();
        bool ok = cp.kind == Choicepoint::Kind::Clauses ? try_clauses(cp)
                                                        : try_label_values(cp);
        if (ok) return true;
    }
    return false;
}

namespace {

Rel rel_of(const std::string& name) {
    if (name == "#=") return Rel::Eq;
    if (name == "#\\=") return Rel::Neq;
    if (name == "#<") return Rel::Lt;
    if (name == "#=<") return Rel::Leq;
    if (name == "#>") return Rel::Gt;
    return Rel::Geq;
}

// Proper-list walk; throws on a non-list term.
std::vector<TermRef> list_elements(Store& store, TermRef t) {
    std::vector<TermRef> out;
    std::set<TermRef> seen;
    t = store.deref(t);
    for (;;) {
        const auto& c = store.cell(t);
        if (c.tag == Store::Cell::Tag::Atom && c.name == kNilAtom) return out;
        if (c.tag == Store::Cell::Tag::Struct && c.name == kConsFunctor &&
            c.args.size() == 2) {
            if (!seen.insert(t).second)
                throw PrologError("type_error", "list is cyclic");
            out.push_back(c.args[0]);
            t = store.deref(c.args[1]);
            continue;
        }
        throw PrologError("type_error", "list expected, got " + store.print(t));
    }
}

}  // namespace

bool Machine::builtin(const RtGoal& g, bool& handled) {
    handled = true;
    SolverState& st = eng_.state;
    Store& store = st.store();
    const size_t arity = g.args.size();
    const std::string& n = g.functor;

    if (arity == 0) {
        if (n == "true") return true;
        if (n == "fail" || n == "false") return false;
        handled = false;
        return false;
    }
    if (arity != 2) {
        handled = false;
        return false;
    }
    if (n == "=") {
        UnifyResult r = st.unify(g.args[0], g.args[1]);
        if (r == UnifyResult::StoError)
            throw PrologError("occurs_check",
                              store.print(store.sto_var) + " = " + store.sto_term);
        return r == UnifyResult::Success;
    }
    if (n == "in") {
        Domain d = parse_domain_term(st, g.args[1]);
        TermRef v = store.deref(g.args[0]);
        const auto& c = store.cell(v);
        if (c.tag != Store::Cell::Tag::Var && c.tag != Store::Cell::Tag::Int)
            throw PrologError("type_error", "in/2 expects a variable or integer");
        return st.post_in(v, d) == PostResult::Consistent;
    }
    if (n == "#=" || n == "#\\=" || n == "#<" || n == "#=<" || n == "#>" ||
        n == "#>=") {
        return st.post_relation(rel_of(n), g.args[0], g.args[1]) ==
               PostResult::Consistent;
    }
    if (n == "is") {
        Int v;
        switch (eval_arith(store, g.args[1], v)) {
        case EvalStatus::Ok:
            break;
        case EvalStatus::NonGround:
            throw PrologError("instantiation_error",
                              "is/2 right side must be ground");
        case EvalStatus::ZeroDivisor:
            throw PrologError("evaluation_error", "zero_divisor");
        case EvalStatus::NegExponent:
            throw PrologError("evaluation_error", "negative exponent");
        case EvalStatus::TooBig:
            throw PrologError("resource_error", "number too large");
        }
        UnifyResult r = st.unify(g.args[0], store.make_int(v));
        return r == UnifyResult::Success;
    }
    if (n == "labeling") {
        LabelOptions opts;
        for (TermRef o : list_elements(store, g.args[0])) {
            TermRef d = store.deref(o);
            const auto& c = store.cell(d);
            if (c.tag == Store::Cell::Tag::Atom && c.name == "ff")
                opts.var_order = LabelOptions::VarOrder::FirstFail;
            else
                throw PrologError("domain_error",
                                  "labeling option " + store.print(d));
        }
        std::vector<TermRef> vars = list_elements(store, g.args[1]);
        for (TermRef v : vars) {
            TermRef d = store.deref(v);
            const auto& c = store.cell(d);
            if (c.tag == Store::Cell::Tag::Atom || c.tag == Store::Cell::Tag::Struct)
                throw PrologError("type_error",
                                  "labeling variable " + store.print(d));
            if (c.tag == Store::Cell::Tag::Var && !st.term_domain(d).is_finite())
                throw PrologError("instantiation_error",
                                  "labeling requires finite domains, " +
                                      store.print(d) + " in " +
                                      st.term_domain(d).str());
        }
        auto chosen = choose_unbound(st, vars, opts);
        if (!chosen) return true;  // everything bound
        Choicepoint cp;
        cp.kind = Choicepoint::Kind::Label;
        cp.cont = goals_;
        cp.mark = store.mark();
        cp.label_var = *chosen;
        cp.values = label_values(st, *chosen);
        cp.label_opts = g.args[0];
        cp.label_vars = g.args[1];
        cps_.push_back(std::move(cp));
        return try_label_values(cps_.back());
    }
    if (n == "set_prolog_flag") {
        TermRef f = store.deref(g.args[0]);
        TermRef v = store.deref(g.args[1]);
        const auto& fc = store.cell(f);
        const auto& vc = store.cell(v);
        if (fc.tag != Store::Cell::Tag::Atom || fc.name != "occurs_check")
            throw PrologError("domain_error", "prolog_flag " + store.print(f));
        if (vc.tag != Store::Cell::Tag::Atom)
            throw PrologError("domain_error", "flag_value " + store.print(v));
        if (vc.name == "false")
            st.occurs_mode = OccursMode::False;
        else if (vc.name == "true")
            st.occurs_mode = OccursMode::True;
        else if (vc.name == "error")
            st.occurs_mode = OccursMode::Error;
        else
            throw PrologError("domain_error", "flag_value " + vc.name);
        return true;
    }
    handled = false;
    return false;
}

Answer Machine::capture() {
    SolverState& st = eng_.state;
    Store& store = st.store();
    Answer ans;
    ans.propagator_runs = st.total_runs;
    std::set<TermRef> roots;
    std::map<TermRef, std::string> names;

    auto collect_constrained = [&](TermRef t) {
        std::vector<TermRef> stack{store.deref(t)};
        std::set<TermRef> seen;
        while (!stack.empty()) {
            TermRef r = stack.back();
            stack.pop_back();
            if (!seen.insert(r).second) continue;
            const auto& c = store.cell(r);
            if (c.tag == Store::Cell::Tag::Var && st.constrained(r)) roots.insert(r);
            if (c.tag == Store::Cell::Tag::Struct)
                for (TermRef a : c.args) stack.push_back(store.deref(a));
        }
    };

    for (const auto& [name, ref] : query_vars_) {
        TermRef d = store.deref(ref);
        if (!names.count(d)) names[d] = name;
        if (store.is_unbound_var(d)) {
            if (st.constrained(d)) {
                roots.insert(d);
                Domain dom = st.attr(store.attr_of(d)).dom;
                if (dom != Domain::full()) ans.domains.push_back({name, dom.str()});
            }
        } else {
            ans.bindings.push_back({name, store.print(d)});
            collect_constrained(d);
        }
    }
    auto namer = [&](TermRef r) -> std::string {
        auto it = names.find(r);
        return it == names.end() ? std::string() : it->second;
    };
    for (uint32_t pid : st.residual_propagators(roots))
        ans.residuals.push_back(st.print_propagator(pid, namer));
    return ans;
}

std::vector<Answer> Engine::run_query(const std::string& query, size_t max_answers,
                                      SolveStatus* last_status, uint64_t step_limit) {
    Machine m(*this, parse_query(query));
    if (step_limit) m.set_step_limit(step_limit);
    std::vector<Answer> out;
    SolveStatus st = m.collect(max_answers, out);
    if (last_status) *last_status = st;
    return out;
}

}  // namespace clpz
