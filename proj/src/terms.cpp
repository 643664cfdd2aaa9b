#include "clpz/terms.hpp"

#include <cassert>
#include <set>
#include <sstream>
#include <utility>

#include "clpz/syntax.hpp"

namespace clpz {

TermRef Store::make_var() {
    Cell c;
    c.tag = Cell::Tag::Var;
    cells_.push_back(std::move(c));
    return static_cast<TermRef>(cells_.size() - 1);
}

TermRef Store::make_int(Int v) {
    Cell c;
    c.tag = Cell::Tag::Int;
    c.value = std::move(v);
    cells_.push_back(std::move(c));
    return static_cast<TermRef>(cells_.size() - 1);
}

TermRef Store::make_atom(std::string name) {
    Cell c;
    c.tag = Cell::Tag::Atom;
    c.name = std::move(name);
    cells_.push_back(std::move(c));
    return static_cast<TermRef>(cells_.size() - 1);
}

TermRef Store::make_struct(std::string functor, std::vector<TermRef> args) {
    for (TermRef a : args) {
        TermRef d = deref(a);
        if (is_unbound_var(d) && cells_[d].fresh) clear_fresh(d);
    }
    Cell c;
    c.tag = Cell::Tag::Struct;
    c.name = std::move(functor);
    c.args = std::move(args);
    cells_.push_back(std::move(c));
    return static_cast<TermRef>(cells_.size() - 1);
}

TermRef Store::deref(TermRef r) const {
    while (cells_[r].tag == Cell::Tag::Var && cells_[r].binding != kNoRef)
        r = cells_[r].binding;
    return r;
}

bool Store::is_unbound_var(TermRef r) const {
    return cells_[r].tag == Cell::Tag::Var && cells_[r].binding == kNoRef;
}

void Store::bind_var(TermRef v, TermRef target) {
    assert(is_unbound_var(v));
    // Aliasing a variable that already sits inside a compound makes the
    // target reachable from that compound, so the target loses freshness.
    TermRef t = deref(target);
    if (is_unbound_var(t) && !cells_[v].fresh && cells_[t].fresh) clear_fresh(t);
    cells_[v].binding = target;
    trail_.push_back({TrailEntry::Kind::BindVar, v, 0, {}});
}

void Store::clear_fresh(TermRef v) {
    if (!cells_[v].fresh) return;
    cells_[v].fresh = false;
    trail_.push_back({TrailEntry::Kind::ClearFresh, v, 0, {}});
}

void Store::set_attr(TermRef v, uint32_t slot) {
    trail_.push_back({TrailEntry::Kind::AttrSlot, v, cells_[v].attr, {}});
    cells_[v].attr = slot;
}

void Store::undo_to(TrailMark m) {
    while (trail_.size() > m) {
        TrailEntry e = std::move(trail_.back());
        trail_.pop_back();
        switch (e.kind) {
        case TrailEntry::Kind::BindVar:
            cells_[e.a].binding = kNoRef;
            break;
        case TrailEntry::Kind::ClearFresh:
            cells_[e.a].fresh = true;
            break;
        case TrailEntry::Kind::AttrSlot:
            cells_[e.a].attr = e.b;
            break;
        default:
            assert(hooks_ != nullptr);
            hooks_->undo(e);
            break;
        }
    }
}

bool Store::occurs_in(TermRef var, TermRef t) const {
    var = deref(var);
    std::vector<TermRef> stack{deref(t)};
    std::set<TermRef> seen;
    while (!stack.empty()) {
        TermRef r = stack.back();
        stack.pop_back();
        if (r == var) return true;
        const Cell& c = cells_[r];
        if (c.tag != Cell::Tag::Struct) continue;
        if (!seen.insert(r).second) continue;
        for (TermRef a : c.args) stack.push_back(deref(a));
    }
    return false;
}

bool Store::unify_var(TermRef v, TermRef t, OccursMode mode, UnifyResult& out) {
    const Cell& tc = cells_[t];
    bool v_constrained = hooks_ && hooks_->constrained(v);
    switch (tc.tag) {
    case Cell::Tag::Var: {
        bool t_constrained = hooks_ && hooks_->constrained(t);
        if (v_constrained && t_constrained) {
            out = hooks_->on_alias(v, t) ? UnifyResult::Success : UnifyResult::Failure;
            return true;
        }
        // Keep the constrained variable as the representative.
        if (v_constrained)
            bind_var(t, v);
        else
            bind_var(v, t);
        out = UnifyResult::Success;
        return true;
    }
    case Cell::Tag::Int:
        if (v_constrained) {
            out = hooks_->on_bind_int(v, tc.value) ? UnifyResult::Success
                                                   : UnifyResult::Failure;
            return true;
        }
        bind_var(v, t);
        out = UnifyResult::Success;
        return true;
    case Cell::Tag::Atom:
    case Cell::Tag::Struct:
        if (v_constrained) {
            // Domain variables range over integers only.
            out = UnifyResult::Failure;
            return true;
        }
        if (tc.tag == Cell::Tag::Struct && mode != OccursMode::False) {
            if (cells_[v].fresh) {
                // A fresh variable cannot occur inside any compound; skip the scan.
            } else {
                ++occurs_checks_done;
                if (occurs_in(v, t)) {
                    if (mode == OccursMode::True) {
                        out = UnifyResult::Failure;
                    } else {
                        sto_var = v;
                        sto_term = print(t, 5);
                        out = UnifyResult::StoError;
                    }
                    return true;
                }
            }
        }
        bind_var(v, t);
        out = UnifyResult::Success;
        return true;
    }
    return false;
}

UnifyResult Store::unify(TermRef a, TermRef b, OccursMode mode) {
    last_unify_steps = 0;
    std::vector<std::pair<TermRef, TermRef>> work{{a, b}};
    // Visited pairs of compound nodes; makes rational-tree unification (and
    // any unification over an already-cyclic store) terminate.
    std::set<std::pair<TermRef, TermRef>> visited;
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        ++last_unify_steps;
        x = deref(x);
        y = deref(y);
        if (x == y) continue;
        const Cell& cx = cells_[x];
        const Cell& cy = cells_[y];
        if (cx.tag == Cell::Tag::Var || cy.tag == Cell::Tag::Var) {
            TermRef v = cx.tag == Cell::Tag::Var ? x : y;
            TermRef t = cx.tag == Cell::Tag::Var ? y : x;
            UnifyResult r;
            unify_var(v, t, mode, r);
            if (r != UnifyResult::Success) return r;
            continue;
        }
        if (cx.tag != cy.tag) return UnifyResult::Failure;
        switch (cx.tag) {
        case Cell::Tag::Int:
            if (cx.value != cy.value) return UnifyResult::Failure;
            break;
        case Cell::Tag::Atom:
            if (cx.name != cy.name) return UnifyResult::Failure;
            break;
        case Cell::Tag::Struct: {
            if (cx.name != cy.name || cx.args.size() != cy.args.size())
                return UnifyResult::Failure;
            auto key = x < y ? std::make_pair(x, y) : std::make_pair(y, x);
            if (!visited.insert(key).second) break;
            for (size_t i = 0; i < cx.args.size(); ++i)
                work.emplace_back(cx.args[i], cy.args[i]);
            break;
        }
        case Cell::Tag::Var:
            break;  // unreachable
        }
    }
    return UnifyResult::Success;
}

namespace {

bool is_cons(const Store::Cell& c) {
    return c.tag == Store::Cell::Tag::Struct && c.name == kConsFunctor &&
           c.args.size() == 2;
}

struct Printer {
    const Store& store;
    std::ostringstream os;

    void write(TermRef r, int depth, int max_prec) {
        r = store.deref(r);
        const auto& c = store.cell(r);
        switch (c.tag) {
        case Store::Cell::Tag::Var:
            os << "_G" << r;
            return;
        case Store::Cell::Tag::Int:
            os << c.value.get_str();
            return;
        case Store::Cell::Tag::Atom:
            os << c.name;
            return;
        case Store::Cell::Tag::Struct:
            break;
        }
        if (depth <= 0) {
            os << "...";
            return;
        }
        if (is_cons(c)) {
            os << '[';
            TermRef cur = r;
            int budget = depth;
            bool first = true;
            for (;;) {
                cur = store.deref(cur);
                const auto& cc = store.cell(cur);
                if (is_cons(cc) && budget > 0) {
                    if (!first) os << ',';
                    write(cc.args[0], budget - 1, 999);
                    first = false;
                    cur = cc.args[1];
                    --budget;
                    continue;
                }
                if (cc.tag == Store::Cell::Tag::Atom && cc.name == kNilAtom) break;
                os << '|';
                if (budget <= 0)
                    os << "...";
                else
                    write(cur, budget - 1, 999);
                break;
            }
            os << ']';
            return;
        }
        const OpInfo* op = c.args.size() == 2 ? infix_op(c.name) : nullptr;
        if (op) {
            bool parens = op->prec > max_prec;
            if (parens) os << '(';
            int lmax = op->assoc == OpAssoc::YFX ? op->prec : op->prec - 1;
            int rmax = op->assoc == OpAssoc::XFY ? op->prec : op->prec - 1;
            write(c.args[0], depth - 1, lmax);
            os << c.name;
            write_right(c.args[1], depth - 1, rmax);
            if (parens) os << ')';
            return;
        }
        os << c.name << '(';
        for (size_t i = 0; i < c.args.size(); ++i) {
            if (i) os << ',';
            write(c.args[i], depth - 1, 999);
        }
        os << ')';
    }

    void write_right(TermRef r, int depth, int max_prec) {
        TermRef d = store.deref(r);
        const auto& c = store.cell(d);
        if (c.tag == Store::Cell::Tag::Int && c.value < 0) {
            os << ' ' << c.value.get_str();
            return;
        }
        write(r, depth, max_prec);
    }
};

}  // namespace

std::string Store::print(TermRef t, int depth_limit) const {
    Printer p{*this, {}};
    p.write(t, depth_limit, 1200);
    return p.os.str();
}

}  // namespace clpz
