// Command-line frontend: interactive toplevel, batch query runner, the
// is/2-vs-#=/2 micro-benchmark, and the randomized solver checker.

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clpz/engine.hpp"
#include "clpz/oracle.hpp"

namespace {

std::atomic<bool> g_interrupt{false};

void on_sigint(int) { g_interrupt.store(true); }

const char* kBenchProgram = R"PL(
loop_is(0).
loop_is(N) :- N #> 0, N1 is N - 1, loop_is(N1).
loop_eq(0).
loop_eq(N) :- N #> 0, N1 #= N - 1, loop_eq(N1).
)PL";

double time_query(clpz::Engine& eng, const std::string& q) {
    auto t0 = std::chrono::steady_clock::now();
    clpz::SolveStatus st;
    eng.run_query(q, 1, &st);
    auto t1 = std::chrono::steady_clock::now();
    if (st != clpz::SolveStatus::Answer)
        throw std::runtime_error("benchmark loop failed: " + q);
    return std::chrono::duration<double>(t1 - t0).count();
}

int run_bench(long iterations) {
    clpz::Engine eng;
    eng.consult_text(kBenchProgram);
    std::string n = std::to_string(iterations);
    // Warm both paths once, then take the best of two timed runs each.
    time_query(eng, "loop_is(" + n + ").");
    time_query(eng, "loop_eq(" + n + ").");
    double t_is = std::min(time_query(eng, "loop_is(" + n + ")."),
                           time_query(eng, "loop_is(" + n + ")."));
    uint64_t props_before = eng.state.propagators_created;
    double t_eq = std::min(time_query(eng, "loop_eq(" + n + ")."),
                           time_query(eng, "loop_eq(" + n + ")."));
    uint64_t props = eng.state.propagators_created - props_before;
    double ratio = t_eq / t_is;
    std::cout << "iterations:          " << iterations << "\n"
              << "is/2 loop:           " << t_is << " s\n"
              << "#=/2 loop (ground):  " << t_eq << " s\n"
              << "ratio:               " << ratio << "\n"
              << "propagators created: " << props << "\n";
    if (props != 0) {
        std::cout << "FAIL: the ground #=/2 loop should not create propagators\n";
        return 1;
    }
    return 0;
}

int run_seed_test(long seeds) {
    using namespace clpz;
    long failures = 0;
    for (long seed = 0; seed < seeds; ++seed) {
        std::mt19937_64 rng(static_cast<uint64_t>(seed));
        GenOptions opts;
        opts.num_vars = 1 + (int)(rng() % 3);
        opts.num_relations = 1 + (int)(rng() % 3);
        opts.depth = 2;
        opts.box_halfwidth = 4;
        Formula f = random_formula(rng, opts);
        CheckReport c = check_commutation_sampled(f, 5, rng);
        CheckReport s = check_soundness(f);
        if (!c.ok || !s.ok) {
            ++failures;
            std::cout << "seed " << seed << ":\n";
            if (!c.ok) std::cout << "  " << c.detail << "\n";
            if (!s.ok) std::cout << "  " << s.detail << "\n";
        }
    }
    std::cout << seeds << " seeds, " << failures << " mismatches\n";
    return failures == 0 ? 0 : 1;
}

// Prints one answer; returns the propagator-runs line when requested.
void print_answer(const clpz::Answer& a, bool show_runs) {
    std::cout << a.str();
    if (show_runs) std::cout << "\n% propagator runs: " << a.propagator_runs;
}

int run_batch(clpz::Engine& eng, const std::vector<std::string>& queries,
              size_t max_answers, bool show_runs) {
    int rc = 0;
    for (const std::string& q : queries) {
        try {
            clpz::Machine m(eng, clpz::parse_query(q));
            m.set_abort_flag(&g_interrupt);
            clpz::Answer a;
            size_t n = 0;
            for (;;) {
                clpz::SolveStatus st = m.next(a);
                if (st != clpz::SolveStatus::Answer) {
                    if (n) std::cout << " ;\n";
                    std::cout << "false.\n";
                    break;
                }
                if (n) std::cout << " ;\n";
                print_answer(a, show_runs);
                ++n;
                if (max_answers && n >= max_answers) {
                    std::cout << ".\n";
                    break;
                }
            }
        } catch (const clpz::PrologError& e) {
            std::cout << e.what() << "\n";
            rc = 1;
        } catch (const clpz::SyntaxError& e) {
            std::cout << "error(syntax_error, " << e.what() << ")\n";
            rc = 1;
        }
    }
    return rc;
}

int repl(clpz::Engine& eng, bool show_runs) {
    std::signal(SIGINT, on_sigint);
    std::string line;
    for (;;) {
        std::cout << "?- " << std::flush;
        std::string query;
        for (;;) {
            if (!std::getline(std::cin, line)) {
                std::cout << "\n";
                return 0;
            }
            query += line;
            // A clause terminator at the end of the line ends the query.
            std::string trimmed = query;
            while (!trimmed.empty() && isspace((unsigned char)trimmed.back()))
                trimmed.pop_back();
            if (!trimmed.empty() && trimmed.back() == '.') break;
            query += "\n";
            std::cout << "|  " << std::flush;
        }
        g_interrupt.store(false);
        try {
            clpz::Machine m(eng, clpz::parse_query(query));
            m.set_abort_flag(&g_interrupt);
            clpz::Answer a;
            for (;;) {
                clpz::SolveStatus st = m.next(a);
                if (st != clpz::SolveStatus::Answer) {
                    std::cout << "false.\n";
                    break;
                }
                print_answer(a, show_runs);
                std::cout << " " << std::flush;
                if (!std::getline(std::cin, line)) {
                    std::cout << ".\n";
                    return 0;
                }
                if (line.empty() || line[0] != ';') {
                    std::cout << ".\n";
                    break;
                }
            }
        } catch (const clpz::PrologError& e) {
            std::cout << e.what() << "\n";
        } catch (const clpz::SyntaxError& e) {
            std::cout << "error(syntax_error, " << e.what() << ")\n";
        }
        g_interrupt.store(false);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CLP(Z) toplevel: a Prolog subset with terminating integer "
                 "constraint propagation"};

    std::string occurs = "false";
    std::vector<std::string> consults;
    std::vector<std::string> queries;
    size_t answers = 0;
    long bench_iters = 0;
    long seed_count = 0;
    bool show_runs = false;

    app.add_option("--occurs-check", occurs, "Unification occurs-check mode")
        ->check(CLI::IsMember({"false", "true", "error"}));
    app.add_option("--consult", consults, "Consult a program file (repeatable)");
    app.add_option("--query", queries, "Run a query and exit (repeatable)");
    app.add_option("--answers", answers, "Max answers per batch query (0 = all)");
    app.add_option("--bench", bench_iters, "Compare is/2 vs ground #=/2 over N iterations");
    app.add_option("--seed-test", seed_count, "Check N random formulas against brute force");
    app.add_flag("--show-runs", show_runs, "Print propagator run counts per answer");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (bench_iters) {
        if (bench_iters < 10000) {
            std::cerr << "--bench needs at least 10000 iterations\n";
            return 2;
        }
        return run_bench(bench_iters);
    }
    if (seed_count) return run_seed_test(seed_count);

    clpz::Engine eng;
    if (occurs == "true") eng.set_occurs_mode(clpz::OccursMode::True);
    if (occurs == "error") eng.set_occurs_mode(clpz::OccursMode::Error);
    try {
        for (const std::string& f : consults) eng.consult_file(f);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    if (!queries.empty()) return run_batch(eng, queries, answers, show_runs);
    return repl(eng, show_runs);
}
