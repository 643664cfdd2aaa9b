#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clpz/domain.hpp"
#include "clpz/ints.hpp"

namespace clpz {

using TermRef = uint32_t;
constexpr TermRef kNoRef = UINT32_MAX;
constexpr uint32_t kNoIdx = UINT32_MAX;

enum class OccursMode { False, True, Error };

enum class UnifyResult { Success, Failure, StoError };

struct TrailEntry {
    enum class Kind : uint8_t {
        BindVar,      // a = var ref; undo clears binding
        ClearFresh,   // a = var ref; undo restores fresh flag
        AttrSlot,     // a = var ref, b = old attr index
        HookDomain,   // a = attr index, dom = old domain
        HookWatchers, // a = attr index, b = old watcher count
        HookAttrPop,  // pop the newest attribute slot
        HookPropPop,  // pop the newest propagator
        HookPropState // a = propagator id, b = old state
    };
    Kind kind;
    uint32_t a = 0;
    uint32_t b = 0;
    Domain dom;
};

using TrailMark = size_t;

// Callbacks into the constraint layer; a bare Store works without them.
struct AttrHooks {
    virtual ~AttrHooks() = default;
    // True when the variable carries constraint attributes.
    virtual bool constrained(TermRef var) const = 0;
    // Unifying a constrained variable with an integer. Performs the store
    // binding itself and runs a propagation episode; false = inconsistent.
    virtual bool on_bind_int(TermRef var, const Int& value) = 0;
    // Unifying two constrained variables; as above.
    virtual bool on_alias(TermRef a, TermRef b) = 0;
    // Undo one of the Hook* trail entries.
    virtual void undo(const TrailEntry& e) = 0;
};

class Store {
public:
    struct Cell {
        enum class Tag : uint8_t { Var, Int, Atom, Struct };
        Tag tag = Tag::Var;
        TermRef binding = kNoRef;  // Var
        bool fresh = true;         // Var: never stored inside a compound
        uint32_t attr = kNoIdx;    // Var: constraint attribute slot
        Int value;                 // Int
        std::string name;          // Atom / Struct functor
        std::vector<TermRef> args; // Struct
    };

    TermRef make_var();
    TermRef make_int(Int v);
    TermRef make_atom(std::string name);
    // Clears the fresh flag of every argument variable.
    TermRef make_struct(std::string functor, std::vector<TermRef> args);

    const Cell& cell(TermRef r) const { return cells_[r]; }
    size_t size() const { return cells_.size(); }

    TermRef deref(TermRef r) const;
    bool is_unbound_var(TermRef r) const;
    bool fresh(TermRef v) const { return cells_[v].fresh; }

    // Trailed mutations.
    void bind_var(TermRef v, TermRef target);
    void clear_fresh(TermRef v);
    void set_attr(TermRef v, uint32_t slot);
    uint32_t attr_of(TermRef v) const { return cells_[v].attr; }

    void push_trail(TrailEntry e) { trail_.push_back(std::move(e)); }
    TrailMark mark() const { return trail_.size(); }
    void undo_to(TrailMark m);
    size_t trail_size() const { return trail_.size(); }

    void set_hooks(AttrHooks* h) { hooks_ = h; }
    AttrHooks* hooks() const { return hooks_; }

    UnifyResult unify(TermRef a, TermRef b, OccursMode mode);
    // Cycle-safe reachability of `var` inside `t` (after dereferencing).
    bool occurs_in(TermRef var, TermRef t) const;

    std::string print(TermRef t, int depth_limit = 12) const;

    // Instrumentation and sto_error details from the latest unify call.
    uint64_t last_unify_steps = 0;
    uint64_t occurs_checks_done = 0;
    TermRef sto_var = kNoRef;
    std::string sto_term;

private:
    bool unify_var(TermRef v, TermRef t, OccursMode mode, UnifyResult& out);

    std::vector<Cell> cells_;
    std::vector<TrailEntry> trail_;
    AttrHooks* hooks_ = nullptr;
};

}  // namespace clpz
