#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clpz/errors.hpp"
#include "clpz/label.hpp"
#include "clpz/propagate.hpp"
#include "clpz/syntax.hpp"
#include "clpz/terms.hpp"

namespace clpz {

struct Pred {
    std::vector<Clause> clauses;  // source order
};

class ClauseDB {
public:
    void consult(const std::vector<Clause>& clauses);
    void consult_text(const std::string& text);
    const Pred* lookup(const std::string& name, size_t arity) const;

private:
    std::map<std::pair<std::string, size_t>, Pred> preds_;
};

// One reported solution, captured as printable snapshots (the machine
// backtracks past the live bindings when pulling further answers).
struct Answer {
    std::vector<std::pair<std::string, std::string>> bindings;  // X = f(Y)
    std::vector<std::pair<std::string, std::string>> domains;   // X in 1..2
    std::vector<std::string> residuals;                         // X#<Y
    uint64_t propagator_runs = 0;  // total runs when captured

    bool visible() const {
        return !bindings.empty() || !domains.empty() || !residuals.empty();
    }
    // Joined "X = 1,\nY in 1..2" form; "true" for an empty answer.
    std::string str() const;
    std::optional<std::string> binding(const std::string& var) const;
    std::optional<std::string> domain(const std::string& var) const;
};

enum class SolveStatus { Answer, Exhausted, StepLimit };

class Engine;

// Lazy SLD resolution over one query; next() resumes the search.
class Machine {
public:
    Machine(Engine& eng, const std::vector<SourceTerm>& goals);
    ~Machine();
    Machine(const Machine&) = delete;
    Machine& operator=(const Machine&) = delete;

    SolveStatus next(Answer& out);
    // Drains up to max_answers answers; status of the last next() call.
    SolveStatus collect(size_t max_answers, std::vector<Answer>& out);

    uint64_t steps() const { return steps_; }
    void set_step_limit(uint64_t limit) { step_limit_ = limit; }  // 0 = off
    void request_abort() { abort_requested_ = true; }
    // Polled every resolution step; lets a signal handler abort a running
    // query (the machine restores the pre-query state and stays usable).
    void set_abort_flag(const std::atomic<bool>* f) { abort_flag_ = f; }

private:
    struct RtGoal {
        std::string functor;
        std::vector<TermRef> args;
    };
    struct GoalNode {
        RtGoal goal;
        std::shared_ptr<GoalNode> next;
    };
    using GoalList = std::shared_ptr<GoalNode>;

    struct Choicepoint {
        enum class Kind { Clauses, Label };
        Kind kind;
        GoalList cont;
        TrailMark mark;
        // Clauses
        const Pred* pred = nullptr;
        size_t clause_idx = 0;
        std::vector<TermRef> call_args;
        // Label
        TermRef label_var = kNoRef;
        std::vector<Int> values;
        size_t value_idx = 0;
        TermRef label_opts = kNoRef;
        TermRef label_vars = kNoRef;
    };

    bool backtrack();  // false = no alternatives left
    bool try_clauses(Choicepoint& cp);
    bool try_label_values(Choicepoint& cp);
    bool dispatch(const RtGoal& g);  // false = failure (backtrack)
    bool builtin(const RtGoal& g, bool& handled);
    Answer capture();
    void finish();

    TermRef instantiate(const SourceTerm& t, std::map<std::string, TermRef>& vars);
    RtGoal make_goal(const SourceTerm& t, std::map<std::string, TermRef>& vars);
    GoalList body_goals(const std::vector<SourceTerm>& body,
                        std::map<std::string, TermRef>& vars, GoalList cont);

    Engine& eng_;
    GoalList goals_;
    std::vector<Choicepoint> cps_;
    std::vector<std::pair<std::string, TermRef>> query_vars_;
    TrailMark base_mark_;
    bool started_ = false;
    bool finished_ = false;
    uint64_t steps_ = 0;
    uint64_t step_limit_ = 0;
    bool abort_requested_ = false;
    const std::atomic<bool>* abort_flag_ = nullptr;
};

class Engine {
public:
    ClauseDB db;
    SolverState state;

    void consult_text(const std::string& text) { db.consult_text(text); }
    void consult_file(const std::string& path);

    void set_occurs_mode(OccursMode m) { state.occurs_mode = m; }

    // Convenience: run a query text, return up to max_answers answers.
    std::vector<Answer> run_query(const std::string& query, size_t max_answers,
                                  SolveStatus* last_status = nullptr,
                                  uint64_t step_limit = 0);
};

// Domain of an `in/2` right-hand side heap term (L..H, unions, integers).
Domain parse_domain_term(SolverState& st, TermRef t);

}  // namespace clpz
