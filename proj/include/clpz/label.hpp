#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "clpz/propagate.hpp"

namespace clpz {

struct LabelOptions {
    enum class VarOrder { Leftmost, FirstFail };
    VarOrder var_order = VarOrder::Leftmost;  // value order is always ascending
};

// Next unbound variable per the option's ordering; nullopt when all are
// bound. Throws an instantiation error when a listed variable still has an
// infinite domain.
std::optional<TermRef> choose_unbound(SolverState& st,
                                      const std::vector<TermRef>& vars,
                                      const LabelOptions& opts);

// Ascending candidate values of an unbound finite-domain variable.
std::vector<Int> label_values(SolverState& st, TermRef v);

// One labeling decision: bind v to value through unification (runs an
// episode). False = inconsistent; caller undoes via the trail.
bool try_value(SolverState& st, TermRef v, const Int& value);

// Depth-first enumeration of all solutions. The callback returns false to
// stop early. Returns false when stopped early.
bool enumerate(SolverState& st, const std::vector<TermRef>& vars,
               const LabelOptions& opts,
               const std::function<bool()>& on_solution);

// Number of solutions, capped at limit.
size_t solutions_count(SolverState& st, const std::vector<TermRef>& vars,
                       const LabelOptions& opts, size_t limit);

}  // namespace clpz
