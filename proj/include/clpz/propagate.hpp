#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "clpz/domain.hpp"
#include "clpz/terms.hpp"

namespace clpz {

enum class PropKind : uint8_t {
    Add,   // a + b = c
    Mul,   // a * b = c
    DivT,  // a / b = c, truncating toward zero, 0 removed from b at post
    Abs,   // |a| = c
    Pow,   // a ^ b = c, b intersected with 0..sup at post
    Leq,   // a <= b + k
    Neq    // a != b + k
};

struct Propagator {
    PropKind kind;
    TermRef a = kNoRef;
    TermRef b = kNoRef;
    TermRef c = kNoRef;
    Int k = 0;  // Leq / Neq offset
    bool entailed = false;
    bool queued = false;
};

struct Attr {
    Domain dom = Domain::full();
    std::vector<uint32_t> watchers;
    uint64_t spent_epoch = 0;  // episode-local, never trailed
};

enum class PostResult { Consistent, Inconsistent };
enum class Rel { Eq, Neq, Lt, Leq, Gt, Geq };

enum class EvalStatus { Ok, NonGround, ZeroDivisor, NegExponent, TooBig };

// Exact ground evaluation over + - * / abs ^; throws PrologError on a
// non-arithmetic subterm.
EvalStatus eval_arith(const Store& store, TermRef t, Int& out);

// Variable store + propagator store + episode scheduler. Owns the heap and
// acts as the attributed-variable hook for unification.
class SolverState : public AttrHooks {
public:
    SolverState() { store_.set_hooks(this); }

    Store& store() { return store_; }
    const Store& store() const { return store_; }

    OccursMode occurs_mode = OccursMode::False;

    UnifyResult unify(TermRef a, TermRef b) { return store_.unify(a, b, occurs_mode); }

    // AttrHooks
    bool constrained(TermRef var) const override;
    bool on_bind_int(TermRef var, const Int& value) override;
    bool on_alias(TermRef a, TermRef b) override;
    void undo(const TrailEntry& e) override;

    // Domain of an integer or (possibly constrained) variable term.
    Domain term_domain(TermRef t) const;
    // Attaches an inf..sup attribute (and clears freshness: the variable now
    // participates in a constraint).
    uint32_t ensure_attr(TermRef v);
    const Attr& attr(uint32_t idx) const { return attrs_[idx]; }

    // `V in D`; v must dereference to a variable or integer.
    PostResult post_in(TermRef v, const Domain& d);
    // Relation over expression trees of integers, variables, + - * / abs ^.
    PostResult post_relation(Rel rel, TermRef lhs, TermRef rhs);

    enum class NarrowResult { Unchanged, Changed, Wiped };
    NarrowResult narrow(TermRef v, const Domain& d);

    PostResult run_episode(const std::vector<uint32_t>& seeds);

    // Active propagators touching the transitive watcher closure of `roots`.
    std::vector<uint32_t> residual_propagators(const std::set<TermRef>& roots) const;
    std::string print_propagator(uint32_t pid,
                                 const std::function<std::string(TermRef)>& namer) const;

    const std::vector<Propagator>& propagators() const { return props_; }
    size_t active_propagator_count() const;
    size_t attr_count() const { return attrs_.size(); }

    // Instrumentation.
    uint64_t total_runs = 0;
    uint64_t episode_runs = 0;  // runs in the most recent episode
    uint64_t propagators_created = 0;

private:
    TermRef flatten(TermRef t, std::vector<uint32_t>& new_props, int depth);
    uint32_t add_propagator(Propagator p);
    void watch(TermRef v, uint32_t pid);
    bool run_propagator(uint32_t pid);
    void schedule_watchers(uint32_t attr_idx);
    bool check_entailed(Propagator& p);

    Store store_;
    std::vector<Attr> attrs_;
    std::vector<Propagator> props_;
    std::vector<uint32_t> queue_;
    size_t queue_head_ = 0;
    uint64_t episode_epoch_ = 0;
    bool failed_flag_ = false;  // set when a domain wipes mid-episode
};

}  // namespace clpz
