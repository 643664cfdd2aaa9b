#include "clpz/propagate.hpp"

#include <algorithm>
#include <cassert>

#include "clpz/errors.hpp"

namespace clpz {

namespace {

constexpr long kSupportCap = 4096;

bool small_pair(const Domain& a, const Domain& b) {
    auto ca = a.count(), cb = b.count();
    if (!ca || !cb) return false;
    if (!ca->fits_slong_p() || !cb->fits_slong_p()) return false;
    long la = ca->get_si(), lb = cb->get_si();
    return la > 0 && lb > 0 && la <= kSupportCap && lb <= kSupportCap &&
           la * lb <= kSupportCap;
}

// Members of dx having a support y in dy with op(x, y) in dz.
template <typename F>
Domain filter_supports(const Domain& dx, const Domain& dy, const Domain& dz, F op) {
    std::vector<Int> keep;
    dx.for_each([&](const Int& x) {
        bool ok = false;
        dy.for_each([&](const Int& y) {
            if (ok) return;
            if (auto r = op(x, y); r && dz.contains(*r)) ok = true;
        });
        if (ok) keep.push_back(x);
    });
    return Domain::from_values(std::move(keep));
}

std::optional<Int> op_mul(const Int& x, const Int& y) { return x * y; }
std::optional<Int> op_divT(const Int& x, const Int& y) {
    if (y == 0) return std::nullopt;
    return div_trunc(x, y);
}
std::optional<Int> op_pow(const Int& x, const Int& y) {
    if (y < 0) return std::nullopt;
    return pow_nonneg(x, y);
}

}  // namespace

EvalStatus eval_arith(const Store& store, TermRef t, Int& out) {
    struct Ev {
        const Store& store;
        int depth = 0;
        EvalStatus go(TermRef r, Int& v) {
            if (++depth > 10000)
                throw PrologError("resource_error", "arithmetic expression too deep");
            r = store.deref(r);
            const auto& c = store.cell(r);
            switch (c.tag) {
            case Store::Cell::Tag::Int:
                v = c.value;
                return EvalStatus::Ok;
            case Store::Cell::Tag::Var:
                return EvalStatus::NonGround;
            case Store::Cell::Tag::Atom:
                throw PrologError("type_error", "evaluable " + c.name + "/0");
            case Store::Cell::Tag::Struct:
                break;
            }
            if (c.name == "abs" && c.args.size() == 1) {
                Int x;
                if (auto s = go(c.args[0], x); s != EvalStatus::Ok) return s;
                v = abs(x);
                return EvalStatus::Ok;
            }
            if (c.args.size() != 2)
                throw PrologError("type_error",
                                  "evaluable " + c.name + "/" + std::to_string(c.args.size()));
            Int x, y;
            if (auto s = go(c.args[0], x); s != EvalStatus::Ok) return s;
            if (auto s = go(c.args[1], y); s != EvalStatus::Ok) return s;
            if (c.name == "+") v = x + y;
            else if (c.name == "-") v = x - y;
            else if (c.name == "*") v = x * y;
            else if (c.name == "/") {
                if (y == 0) return EvalStatus::ZeroDivisor;
                v = div_trunc(x, y);
            } else if (c.name == "^") {
                if (y < 0) return EvalStatus::NegExponent;
                auto r2 = pow_nonneg(x, y);
                if (!r2) return EvalStatus::TooBig;
                v = *r2;
            } else {
                throw PrologError("type_error", "evaluable " + c.name + "/2");
            }
            return EvalStatus::Ok;
        }
    };
    Ev ev{store};
    return ev.go(t, out);
}

bool SolverState::constrained(TermRef var) const {
    return store_.attr_of(var) != kNoIdx;
}

Domain SolverState::term_domain(TermRef t) const {
    t = store_.deref(t);
    const auto& c = store_.cell(t);
    if (c.tag == Store::Cell::Tag::Int) return Domain::singleton(c.value);
    assert(c.tag == Store::Cell::Tag::Var);
    uint32_t idx = c.attr;
    return idx == kNoIdx ? Domain::full() : attrs_[idx].dom;
}

uint32_t SolverState::ensure_attr(TermRef v) {
    v = store_.deref(v);
    uint32_t idx = store_.attr_of(v);
    if (idx != kNoIdx) return idx;
    attrs_.push_back(Attr{});
    idx = static_cast<uint32_t>(attrs_.size() - 1);
    store_.push_trail({TrailEntry::Kind::HookAttrPop, 0, 0, {}});
    store_.set_attr(v, idx);
    store_.clear_fresh(v);
    return idx;
}

void SolverState::undo(const TrailEntry& e) {
    switch (e.kind) {
    case TrailEntry::Kind::HookDomain:
        attrs_[e.a].dom = e.dom;
        break;
    case TrailEntry::Kind::HookWatchers:
        attrs_[e.a].watchers.resize(e.b);
        break;
    case TrailEntry::Kind::HookAttrPop:
        attrs_.pop_back();
        break;
    case TrailEntry::Kind::HookPropPop:
        props_.pop_back();
        break;
    case TrailEntry::Kind::HookPropState:
        props_[e.a].entailed = e.b != 0;
        break;
    default:
        assert(false);
    }
}

void SolverState::schedule_watchers(uint32_t attr_idx) {
    Attr& a = attrs_[attr_idx];
    if (!a.dom.is_finite()) {
        // The once-only rule: an infinite-domain change wakes watchers at
        // most once per episode.
        if (a.spent_epoch == episode_epoch_) return;
        a.spent_epoch = episode_epoch_;
    }
    for (uint32_t pid : a.watchers) {
        Propagator& p = props_[pid];
        if (!p.queued && !p.entailed) {
            p.queued = true;
            queue_.push_back(pid);
        }
    }
}

SolverState::NarrowResult SolverState::narrow(TermRef v, const Domain& d) {
    v = store_.deref(v);
    const auto& c = store_.cell(v);
    if (c.tag == Store::Cell::Tag::Int) {
        if (d.contains(c.value)) return NarrowResult::Unchanged;
        failed_flag_ = true;
        return NarrowResult::Wiped;
    }
    uint32_t idx = ensure_attr(v);
    Domain nd = attrs_[idx].dom.intersect(d);
    if (nd == attrs_[idx].dom) return NarrowResult::Unchanged;
    assert(nd.subset_of(attrs_[idx].dom));  // monotonicity
    store_.push_trail({TrailEntry::Kind::HookDomain, idx, 0, attrs_[idx].dom});
    attrs_[idx].dom = std::move(nd);
    if (attrs_[idx].dom.is_empty()) {
        failed_flag_ = true;
        return NarrowResult::Wiped;
    }
    schedule_watchers(idx);
    if (auto s = attrs_[idx].dom.singleton_value(); s && store_.is_unbound_var(v))
        store_.bind_var(v, store_.make_int(*s));
    return NarrowResult::Changed;
}

uint32_t SolverState::add_propagator(Propagator p) {
    props_.push_back(std::move(p));
    uint32_t pid = static_cast<uint32_t>(props_.size() - 1);
    store_.push_trail({TrailEntry::Kind::HookPropPop, 0, 0, {}});
    ++propagators_created;
    std::vector<TermRef> vars;
    for (TermRef r : {props_[pid].a, props_[pid].b, props_[pid].c}) {
        if (r == kNoRef) continue;
        TermRef d = store_.deref(r);
        if (store_.cell(d).tag != Store::Cell::Tag::Var) continue;
        if (std::find(vars.begin(), vars.end(), d) == vars.end()) vars.push_back(d);
    }
    for (TermRef v : vars) watch(v, pid);
    return pid;
}

void SolverState::watch(TermRef v, uint32_t pid) {
    uint32_t idx = ensure_attr(v);
    store_.push_trail({TrailEntry::Kind::HookWatchers, idx,
                       static_cast<uint32_t>(attrs_[idx].watchers.size()), {}});
    attrs_[idx].watchers.push_back(pid);
}

bool SolverState::check_entailed(Propagator& p) {
    auto da = term_domain(p.a);
    auto db = p.b == kNoRef ? Domain() : term_domain(p.b);
    auto dc = p.c == kNoRef ? Domain() : term_domain(p.c);
    bool ent = false;
    switch (p.kind) {
    case PropKind::Leq:
        ent = da.hi() <= ext_add_int(db.lo(), p.k);
        break;
    case PropKind::Neq:
        ent = da.intersect(db.shift(p.k)).is_empty();
        break;
    case PropKind::Abs: {
        // Entailed when every remaining value pair satisfies the relation:
        // the image collapses onto the (singleton) result domain.
        auto c0 = dc.singleton_value();
        ent = c0 && image_abs(da) == Domain::singleton(*c0);
        break;
    }
    default: {
        auto c0 = dc.singleton_value();
        if (c0) {
            ArithOp op = p.kind == PropKind::Add   ? ArithOp::Add
                         : p.kind == PropKind::Mul ? ArithOp::Mul
                         : p.kind == PropKind::DivT ? ArithOp::DivT
                                                    : ArithOp::Pow;
            // image() may be a hull, but a singleton hull is still exact.
            ent = image(op, da, db) == Domain::singleton(*c0);
        }
        break;
    }
    }
    if (ent && !p.entailed) {
        uint32_t pid = static_cast<uint32_t>(&p - props_.data());
        store_.push_trail({TrailEntry::Kind::HookPropState, pid, 0, {}});
        p.entailed = true;
    }
    return ent;
}

bool SolverState::run_propagator(uint32_t pid) {
    Propagator& p = props_[pid];
    switch (p.kind) {
    case PropKind::Add: {
        if (narrow(p.c, image(ArithOp::Add, term_domain(p.a), term_domain(p.b))) ==
            NarrowResult::Wiped)
            return false;
        if (narrow(p.a, image(ArithOp::Sub, term_domain(p.c), term_domain(p.b))) ==
            NarrowResult::Wiped)
            return false;
        if (narrow(p.b, image(ArithOp::Sub, term_domain(p.c), term_domain(p.a))) ==
            NarrowResult::Wiped)
            return false;
        break;
    }
    case PropKind::Mul: {
        if (narrow(p.c, image(ArithOp::Mul, term_domain(p.a), term_domain(p.b))) ==
            NarrowResult::Wiped)
            return false;
        for (auto [x, y] : {std::pair{p.a, p.b}, std::pair{p.b, p.a}}) {
            Domain dx = term_domain(x), dy = term_domain(y), dc = term_domain(p.c);
            Domain cand = small_pair(dx, dy) ? filter_supports(dx, dy, dc, op_mul)
                                             : quotient_hull(dc, dy);
            if (narrow(x, cand) == NarrowResult::Wiped) return false;
        }
        break;
    }
    case PropKind::DivT: {
        if (narrow(p.c, image(ArithOp::DivT, term_domain(p.a), term_domain(p.b))) ==
            NarrowResult::Wiped)
            return false;
        {
            Domain da = term_domain(p.a), db = term_domain(p.b), dc = term_domain(p.c);
            Domain cand = small_pair(da, db) ? filter_supports(da, db, dc, op_divT)
                                             : divT_preimage_hull(dc, db);
            if (narrow(p.a, cand) == NarrowResult::Wiped) return false;
        }
        {
            Domain da = term_domain(p.a), db = term_domain(p.b), dc = term_domain(p.c);
            if (small_pair(db, da)) {
                Domain cand = filter_supports(
                    db, da, dc, [](const Int& y, const Int& x) { return op_divT(x, y); });
                if (narrow(p.b, cand) == NarrowResult::Wiped) return false;
            }
        }
        break;
    }
    case PropKind::Abs: {
        if (narrow(p.c, image_abs(term_domain(p.a))
                            .intersect(Domain::range(Ext::fin(0), Ext::pos_inf()))) ==
            NarrowResult::Wiped)
            return false;
        Domain dc = term_domain(p.c);
        if (narrow(p.a, dc.unite(dc.negate())) == NarrowResult::Wiped) return false;
        break;
    }
    case PropKind::Pow: {
        if (narrow(p.c, image(ArithOp::Pow, term_domain(p.a), term_domain(p.b))) ==
            NarrowResult::Wiped)
            return false;
        {
            Domain da = term_domain(p.a), db = term_domain(p.b), dc = term_domain(p.c);
            if (small_pair(da, db) &&
                narrow(p.a, filter_supports(da, db, dc, op_pow)) == NarrowResult::Wiped)
                return false;
        }
        {
            // When every base value has |a| >= 2 and the result is finite,
            // |a^y| >= 2^y bounds the exponent by the result's bit length.
            // This turns an infinite exponent domain finite, after which the
            // exact support filter below can take over.
            Domain da = term_domain(p.a), dc = term_domain(p.c);
            if (!da.is_empty() && !da.contains(-1) && !da.contains(0) &&
                !da.contains(1) && dc.lo().is_fin() && dc.hi().is_fin()) {
                Int cmax = abs(dc.lo().value);
                if (abs(dc.hi().value) > cmax) cmax = abs(dc.hi().value);
                if (cmax >= 1) {
                    long bits = (long)mpz_sizeinbase(cmax.get_mpz_t(), 2);
                    if (narrow(p.b, Domain::range(Ext::fin(0), Ext::fin(bits))) ==
                        NarrowResult::Wiped)
                        return false;
                }
            }
        }
        {
            Domain da = term_domain(p.a), db = term_domain(p.b), dc = term_domain(p.c);
            if (small_pair(db, da)) {
                Domain cand = filter_supports(
                    db, da, dc, [](const Int& y, const Int& x) { return op_pow(x, y); });
                if (narrow(p.b, cand) == NarrowResult::Wiped) return false;
            }
        }
        break;
    }
    case PropKind::Leq: {
        Domain db = term_domain(p.b);
        if (narrow(p.a, Domain::range(Ext::neg_inf(), ext_add_int(db.hi(), p.k))) ==
            NarrowResult::Wiped)
            return false;
        Domain da = term_domain(p.a);
        if (narrow(p.b, Domain::range(ext_add_int(da.lo(), -p.k), Ext::pos_inf())) ==
            NarrowResult::Wiped)
            return false;
        break;
    }
    case PropKind::Neq: {
        Domain db = term_domain(p.b);
        if (auto v = db.singleton_value()) {
            if (narrow(p.a, term_domain(p.a).remove(*v + p.k)) == NarrowResult::Wiped)
                return false;
        }
        Domain da = term_domain(p.a);
        if (auto v = da.singleton_value()) {
            if (narrow(p.b, term_domain(p.b).remove(*v - p.k)) == NarrowResult::Wiped)
                return false;
        }
        break;
    }
    }
    check_entailed(props_[pid]);
    return true;
}

PostResult SolverState::run_episode(const std::vector<uint32_t>& seeds) {
    ++episode_epoch_;
    episode_runs = 0;
    failed_flag_ = false;
    for (uint32_t pid : seeds) {
        Propagator& p = props_[pid];
        if (!p.queued && !p.entailed) {
            p.queued = true;
            queue_.push_back(pid);
        }
    }
    while (queue_head_ < queue_.size()) {
        if (failed_flag_) break;
        uint32_t pid = queue_[queue_head_++];
        props_[pid].queued = false;
        if (props_[pid].entailed) continue;
        ++episode_runs;
        ++total_runs;
        if (!run_propagator(pid)) break;
    }
    bool failed = failed_flag_;
    for (size_t i = queue_head_; i < queue_.size(); ++i) props_[queue_[i]].queued = false;
    queue_.clear();
    queue_head_ = 0;
    failed_flag_ = false;
    return failed ? PostResult::Inconsistent : PostResult::Consistent;
}

bool SolverState::on_bind_int(TermRef var, const Int& value) {
    // `value` may point into a cell; narrowing below can reallocate cells.
    Int v = value;
    var = store_.deref(var);
    uint32_t idx = store_.attr_of(var);
    assert(idx != kNoIdx);
    if (!attrs_[idx].dom.contains(v)) return false;
    if (narrow(var, Domain::singleton(v)) == NarrowResult::Wiped) return false;
    if (store_.is_unbound_var(var)) store_.bind_var(var, store_.make_int(v));
    return run_episode({}) == PostResult::Consistent;
}

bool SolverState::on_alias(TermRef a, TermRef b) {
    a = store_.deref(a);
    b = store_.deref(b);
    uint32_t ia = store_.attr_of(a);
    uint32_t ib = store_.attr_of(b);
    assert(ia != kNoIdx && ib != kNoIdx);
    Domain db = attrs_[ib].dom;
    std::vector<uint32_t> seeds = attrs_[ib].watchers;
    store_.bind_var(b, a);
    store_.push_trail({TrailEntry::Kind::HookWatchers, ia,
                       static_cast<uint32_t>(attrs_[ia].watchers.size()), {}});
    attrs_[ia].watchers.insert(attrs_[ia].watchers.end(), seeds.begin(), seeds.end());
    if (narrow(a, db) == NarrowResult::Wiped) {
        run_episode({});  // clears bookkeeping
        return false;
    }
    return run_episode(seeds) == PostResult::Consistent;
}

PostResult SolverState::post_in(TermRef v, const Domain& d) {
    v = store_.deref(v);
    const auto& c = store_.cell(v);
    if (c.tag == Store::Cell::Tag::Int)
        return d.contains(c.value) ? PostResult::Consistent : PostResult::Inconsistent;
    if (c.tag != Store::Cell::Tag::Var)
        throw PrologError("type_error", "in/2 expects a variable or integer");
    ensure_attr(v);
    if (narrow(v, d) == NarrowResult::Wiped) {
        run_episode({});
        return PostResult::Inconsistent;
    }
    return run_episode({});
}

TermRef SolverState::flatten(TermRef t, std::vector<uint32_t>& new_props, int depth) {
    if (depth > 10000)
        throw PrologError("resource_error", "constraint expression too deep");
    t = store_.deref(t);
    // Copy out of the cell: creating auxiliaries below may reallocate cells.
    std::string name;
    std::vector<TermRef> args;
    {
        const auto& c = store_.cell(t);
        switch (c.tag) {
        case Store::Cell::Tag::Int:
            return t;
        case Store::Cell::Tag::Var:
            ensure_attr(t);
            return t;
        case Store::Cell::Tag::Atom:
            throw PrologError("type_error", "evaluable " + c.name + "/0");
        case Store::Cell::Tag::Struct:
            name = c.name;
            args = c.args;
            break;
        }
    }
    if (name == "abs" && args.size() == 1) {
        TermRef x = flatten(args[0], new_props, depth + 1);
        TermRef aux = store_.make_var();
        ensure_attr(aux);
        new_props.push_back(add_propagator({PropKind::Abs, x, kNoRef, aux}));
        return aux;
    }
    if (args.size() != 2)
        throw PrologError("type_error",
                          "evaluable " + name + "/" + std::to_string(args.size()));
    TermRef x = flatten(args[0], new_props, depth + 1);
    TermRef y = flatten(args[1], new_props, depth + 1);
    TermRef aux = store_.make_var();
    ensure_attr(aux);
    if (name == "+") {
        new_props.push_back(add_propagator({PropKind::Add, x, y, aux}));
    } else if (name == "-") {
        // aux = x - y  encoded as  aux + y = x
        new_props.push_back(add_propagator({PropKind::Add, aux, y, x}));
    } else if (name == "*") {
        new_props.push_back(add_propagator({PropKind::Mul, x, y, aux}));
    } else if (name == "/") {
        narrow(y, Domain::full().remove(0));
        new_props.push_back(add_propagator({PropKind::DivT, x, y, aux}));
    } else if (name == "^") {
        narrow(y, Domain::range(Ext::fin(0), Ext::pos_inf()));
        new_props.push_back(add_propagator({PropKind::Pow, x, y, aux}));
    } else {
        throw PrologError("type_error", "evaluable " + name + "/2");
    }
    return aux;
}

namespace {

bool rel_holds(Rel rel, const Int& l, const Int& r) {
    switch (rel) {
    case Rel::Eq: return l == r;
    case Rel::Neq: return l != r;
    case Rel::Lt: return l < r;
    case Rel::Leq: return l <= r;
    case Rel::Gt: return l > r;
    case Rel::Geq: return l >= r;
    }
    return false;
}

}  // namespace

PostResult SolverState::post_relation(Rel rel, TermRef lhs, TermRef rhs) {
    Int lv, rv;
    EvalStatus ls = eval_arith(store_, lhs, lv);
    EvalStatus rs = eval_arith(store_, rhs, rv);
    if (ls == EvalStatus::Ok && rs == EvalStatus::Ok)
        return rel_holds(rel, lv, rv) ? PostResult::Consistent : PostResult::Inconsistent;
    if (ls == EvalStatus::ZeroDivisor || ls == EvalStatus::NegExponent ||
        rs == EvalStatus::ZeroDivisor || rs == EvalStatus::NegExponent)
        return PostResult::Inconsistent;  // a ground subexpression is undefined

    if (rel == Rel::Eq) {
        // Moded fast path: plain variable against a ground expression binds
        // directly, creating no propagators.
        TermRef lr = store_.deref(lhs), rr = store_.deref(rhs);
        if (rs == EvalStatus::Ok && store_.is_unbound_var(lr)) {
            if (constrained(lr)) return on_bind_int(lr, rv) ? PostResult::Consistent
                                                            : PostResult::Inconsistent;
            store_.bind_var(lr, store_.make_int(rv));
            return PostResult::Consistent;
        }
        if (ls == EvalStatus::Ok && store_.is_unbound_var(rr)) {
            if (constrained(rr)) return on_bind_int(rr, lv) ? PostResult::Consistent
                                                            : PostResult::Inconsistent;
            store_.bind_var(rr, store_.make_int(lv));
            return PostResult::Consistent;
        }
    }

    ++episode_epoch_;
    failed_flag_ = false;
    std::vector<uint32_t> new_props;
    TermRef x = flatten(lhs, new_props, 0);
    TermRef y = flatten(rhs, new_props, 0);
    if (failed_flag_) {
        run_episode({});
        return PostResult::Inconsistent;
    }
    if (rel == Rel::Eq) {
        if (run_episode(new_props) == PostResult::Inconsistent)
            return PostResult::Inconsistent;
        UnifyResult r = unify(x, y);
        return r == UnifyResult::Success ? PostResult::Consistent
                                         : PostResult::Inconsistent;
    }
    Propagator p;
    switch (rel) {
    case Rel::Neq: p = {PropKind::Neq, x, y, kNoRef, 0}; break;
    case Rel::Lt:  p = {PropKind::Leq, x, y, kNoRef, -1}; break;
    case Rel::Leq: p = {PropKind::Leq, x, y, kNoRef, 0}; break;
    case Rel::Gt:  p = {PropKind::Leq, y, x, kNoRef, -1}; break;
    case Rel::Geq: p = {PropKind::Leq, y, x, kNoRef, 0}; break;
    case Rel::Eq:  break;  // handled above
    }
    new_props.push_back(add_propagator(std::move(p)));
    return run_episode(new_props);
}

std::vector<uint32_t> SolverState::residual_propagators(
    const std::set<TermRef>& roots) const {
    std::set<TermRef> vars;
    for (TermRef r : roots) vars.insert(store_.deref(r));
    std::set<uint32_t> pids;
    bool changed = true;
    while (changed) {
        changed = false;
        for (uint32_t pid = 0; pid < props_.size(); ++pid) {
            if (props_[pid].entailed || pids.count(pid)) continue;
            const Propagator& p = props_[pid];
            TermRef args[3] = {p.a, p.b, p.c};
            bool touches = false;
            for (TermRef r : args) {
                if (r == kNoRef) continue;
                TermRef d = store_.deref(r);
                if (store_.cell(d).tag == Store::Cell::Tag::Var && vars.count(d))
                    touches = true;
            }
            if (!touches) continue;
            pids.insert(pid);
            changed = true;
            for (TermRef r : args) {
                if (r == kNoRef) continue;
                TermRef d = store_.deref(r);
                if (store_.cell(d).tag == Store::Cell::Tag::Var) vars.insert(d);
            }
        }
    }
    return {pids.begin(), pids.end()};
}

std::string SolverState::print_propagator(
    uint32_t pid, const std::function<std::string(TermRef)>& namer) const {
    const Propagator& p = props_[pid];
    auto arg = [&](TermRef r) -> std::string {
        r = store_.deref(r);
        const auto& c = store_.cell(r);
        if (c.tag == Store::Cell::Tag::Int) return c.value.get_str();
        if (namer) {
            std::string n = namer(r);
            if (!n.empty()) return n;
        }
        return "_G" + std::to_string(r);
    };
    auto offset_side = [&](TermRef b, const Int& k) {
        std::string s = arg(b);
        if (k > 0) s += "+" + k.get_str();
        if (k < 0) s += "-" + Int(-k).get_str();
        return s;
    };
    switch (p.kind) {
    case PropKind::Add: return arg(p.a) + "+" + arg(p.b) + "#=" + arg(p.c);
    case PropKind::Mul: return arg(p.a) + "*" + arg(p.b) + "#=" + arg(p.c);
    case PropKind::DivT: return arg(p.a) + "/" + arg(p.b) + "#=" + arg(p.c);
    case PropKind::Abs: return "abs(" + arg(p.a) + ")#=" + arg(p.c);
    case PropKind::Pow: return arg(p.a) + "^" + arg(p.b) + "#=" + arg(p.c);
    case PropKind::Leq:
        if (p.k == -1) return arg(p.a) + "#<" + arg(p.b);
        return arg(p.a) + "#=<" + offset_side(p.b, p.k);
    case PropKind::Neq:
        return arg(p.a) + "#\\=" + offset_side(p.b, p.k);
    }
    return "?";
}

size_t SolverState::active_propagator_count() const {
    size_t n = 0;
    for (const auto& p : props_)
        if (!p.entailed) ++n;
    return n;
}

}  // namespace clpz
