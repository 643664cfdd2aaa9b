#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "clpz/ints.hpp"
#include "clpz/syntax.hpp"

namespace clpz {

// A randomly generated conjunction of arithmetic relations over variables
// with small finite boxes, small enough that exhaustive grid evaluation is an
// independent ground truth for the solver.
struct BoxVar {
    std::string name;
    Int lo;
    Int hi;
};

struct Formula {
    std::vector<BoxVar> vars;
    std::vector<SourceTerm> relations;  // e.g. X1*X2 #= X3+1

    // "X1 in 0..3, X1+X2 #= 3" — a query fragment usable for reproduction.
    std::string str() const;
    // Full query text, optionally with a trailing labeling goal.
    std::string query(bool with_labeling) const;
};

// All satisfying assignments (in grid order: last variable fastest), found by
// evaluating every relation under every assignment. A relation whose ground
// evaluation hits a zero divisor, a negative exponent, or an infeasibly large
// power counts as unsatisfied. nullopt when the grid exceeds `cap` points.
std::optional<std::vector<std::vector<Int>>> brute_solutions(const Formula& f,
                                                             uint64_t cap = 1000000);

// Ground evaluation of one expression tree under an assignment (parallel to
// f.vars). nullopt = undefined (zero divisor, negative exponent, too big).
std::optional<Int> eval_formula_expr(const Formula& f, const SourceTerm& t,
                                     const std::vector<Int>& assignment);
bool satisfies(const Formula& f, const std::vector<Int>& assignment);

struct CheckReport {
    bool ok = true;
    std::string detail;  // reproduction query + what disagreed, on failure
};

// Posting constraints then binding values must succeed exactly when binding
// values then posting constraints succeeds, and both must match the ground
// evaluator, for every assignment in the grid.
CheckReport check_commutation(const Formula& f, uint64_t cap = 1000000);
// Same check on `samples` randomly drawn in-box assignments instead of the
// whole grid (for large batches).
CheckReport check_commutation_sampled(const Formula& f, size_t samples,
                                      std::mt19937_64& rng);

// Posting constraints then labeling must produce exactly the ground
// evaluator's solution set (nothing lost, nothing invented).
CheckReport check_soundness(const Formula& f, uint64_t cap = 1000000);

struct GenOptions {
    int num_vars = 3;
    int num_relations = 2;
    int depth = 2;        // max expression-tree depth
    Int box_halfwidth = 3;  // endpoints drawn from [-3, 3]
};

// Deterministic for a given rng state; biased toward variable sharing and
// toward * / abs ^, where interval reasoning is weakest.
Formula random_formula(std::mt19937_64& rng, const GenOptions& opts = {});

}  // namespace clpz
