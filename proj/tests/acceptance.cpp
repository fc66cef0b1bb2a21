// Acceptance suite. Every criterion prints exactly one [PASS]/[FAIL] status
// line; the directional-trend criterion is a soft gate and reports without
// affecting the exit code. Exit status is 0 iff every hard criterion passed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nps/bench.hpp"
#include "nps/search.hpp"
#include "nps/tsptw.hpp"
#include "nps/weakschur.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace nps;

namespace {

int g_hard_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n" << std::flush;
    if (!pass)
        ++g_hard_failures;
}

void report_soft(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[SOFT-FAIL] ") << name << " (soft gate): " << detail << "\n"
              << std::flush;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    int workers = std::min<int>(bench::worker_count(), static_cast<int>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count)
                    return;
                fn(i);
            }
        });
    for (auto& t : pool)
        t.join();
}

// Terminal partitions retained from the weak Schur runs, checked at the end.
struct PartitionLog {
    std::atomic<long> validated{0};
    std::atomic<long> violations{0};
    std::mutex detail_mutex;
    std::string first_violation;

    void check(const std::vector<std::vector<std::int32_t>>& parts) {
        auto v = weakschur::validate_partition(parts);
        ++validated;
        if (v) {
            ++violations;
            std::lock_guard<std::mutex> lock(detail_mutex);
            if (first_violation.empty())
                first_violation = v->message;
        }
    }
};

PartitionLog g_partitions;

// ---- weak Schur exact optima ---------------------------------------------

struct SchurTarget {
    int parts;
    Score target;
    double budget_seconds;
};

// The selective move menu provably caps two parts at 7 and three parts at 21
// (exhaustive enumeration; the optimal partitions need same-partition-rule
// breaks), so these exact-optimum runs use the full admissible menu.
bool schur_optima(Algorithm algorithm, const std::string& name) {
    const std::vector<SchurTarget> targets = {{1, 2, 1.0}, {2, 8, 1.0}, {3, 23, 60.0}};
    std::ostringstream detail;
    bool pass = true;
    for (const auto& target : targets) {
        weakschur::SchurProblem problem(target.parts, weakschur::MoveMenu::full);
        std::vector<int> hit(10, 0);
        parallel_for(10, [&](std::size_t i) {
            SearchConfig cfg;
            cfg.algorithm = algorithm;
            cfg.level = 2;
            cfg.iterations = 100;
            cfg.repetitions = 0;
            cfg.alpha = 1.0;
            cfg.seed = static_cast<std::uint64_t>(i) + 1;
            cfg.time_budget_seconds = target.budget_seconds;
            Rng rng(cfg.seed);
            SearchMonitor monitor(cfg.time_budget_seconds);
            monitor.on_improvement = [&](const AnytimeRecord& rec) {
                if (rec.best_score >= target.target)
                    monitor.request_abort(); // target met: no need to burn the budget
            };
            auto result = run_search(problem, cfg, rng, monitor);
            hit[i] = (result.best.score >= target.target) ? 1 : 0;
            g_partitions.check(replay(problem, result.best.sequence).parts);
        });
        int hits = 0;
        for (int h : hit)
            hits += h;
        if (hits < 9)
            pass = false;
        detail << "k=" << target.parts << " " << hits << "/10 reached " << target.target << "; ";
    }
    report(name, pass, detail.str() + "full admissible menu (the selective menu caps at 7/21)");
    return pass;
}

// ---- TSPTW brute-force oracle ---------------------------------------------

bool tsptw_oracle() {
    Rng gen(20240815);
    const int count = 10;
    std::vector<tsptw::Instance> instances;
    for (int i = 0; i < count; ++i) {
        int n = 6 + i % 4; // 6..9
        instances.push_back(tsptw::parse_instance(oracle::random_feasible_instance_text(gen, n)));
    }
    std::vector<Score> optima(count), found(count);
    parallel_for(count, [&](std::size_t i) {
        optima[i] = oracle::brute_force_optimum(instances[i]);
        tsptw::TsptwProblem problem(instances[i]);
        SearchConfig cfg;
        cfg.algorithm = Algorithm::gnrpa;
        cfg.level = 2;
        cfg.iterations = 100;
        cfg.alpha = 1.0;
        cfg.seed = 1;
        cfg.time_budget_seconds = 30.0;
        Rng rng(cfg.seed);
        SearchMonitor monitor(cfg.time_budget_seconds);
        monitor.on_improvement = [&](const AnytimeRecord& rec) {
            if (rec.best_score >= optima[i])
                monitor.request_abort(); // matched (or, if buggy, exceeded): stop early
        };
        found[i] = run_search(problem, cfg, rng, monitor).best.score;
    });
    int matched = 0;
    bool never_above = true;
    for (int i = 0; i < count; ++i) {
        if (found[i] == optima[i])
            ++matched;
        if (found[i] > optima[i])
            never_above = false;
    }
    bool pass = never_above && matched >= 9;
    std::ostringstream detail;
    detail << matched << "/" << count << " matched the enumerated optimum exactly; "
           << (never_above ? "never exceeded it" : "EXCEEDED the enumerated optimum");
    report("tsptw-brute-force-oracle", pass, detail.str());
    return pass;
}

// ---- structural laws -------------------------------------------------------

bool playout_count_law() {
    oracle::ChainProblem chain;
    bool pass = true;
    std::ostringstream detail;
    for (auto [level, n] : {std::pair{1, 5}, std::pair{2, 7}, std::pair{3, 4}}) {
        std::uint64_t expected = 1;
        for (int i = 0; i < level; ++i)
            expected *= static_cast<std::uint64_t>(n);
        Policy policy;
        Rng rng(1);
        SearchMonitor monitor;
        SearchConfig cfg;
        cfg.iterations = n;
        gnrpa(chain, level, policy, cfg, rng, monitor);
        bool ok = monitor.playouts() == expected;
        pass = pass && ok;
        detail << "(" << level << "," << n << ")->" << monitor.playouts() << (ok ? " " : "! ");
    }
    report("playout-count-law", pass, detail.str() + "all exact");
    return pass;
}

bool repetition_law() {
    bool pass = true;
    std::ostringstream detail;
    for (int r : {0, 1, 5}) {
        oracle::ScriptedScoreProblem stub;
        stub.script = {11};
        SearchConfig cfg;
        cfg.repetitions = r;
        Policy policy;
        Rng rng(1);
        SearchMonitor monitor;
        gnrpalr(stub, 1, policy, cfg, rng, monitor);
        bool ok = monitor.playouts() == static_cast<std::uint64_t>(r) + 2;
        pass = pass && ok;
        detail << "R=" << r << "->" << monitor.playouts() << (ok ? " " : "! ");
    }
    report("repetition-law", pass, detail.str() + "all R+2");
    return pass;
}

// ---- adapt and softmax invariants ------------------------------------------

template <Problem P>
bool adapt_fixtures(const P& problem, int fixtures, Rng& rng, bool log_partitions,
                    std::ostringstream& detail) {
    long bad_sum = 0, bad_direction = 0, bad_softmax = 0, mismatched = 0;
    SearchMonitor monitor;
    for (int f = 0; f < fixtures; ++f) {
        Policy probe_policy;
        auto probe = playout(problem, probe_policy, rng, monitor);
        Policy policy;
        {
            auto state = problem.root();
            for (const auto& move : probe.sequence) {
                for (const auto& m : problem.legal_moves(state))
                    policy.set(problem.code(state, m), (rng.next_double() - 0.5) * 6.0);
                problem.play(state, move);
            }
        }
        auto fixture = playout(problem, policy, rng, monitor);
        if constexpr (std::is_same_v<P, weakschur::SchurProblem>) {
            if (log_partitions)
                g_partitions.check(replay(problem, fixture.sequence).parts);
        }
        double alpha = rng.next_double() * 2.0;

        std::vector<oracle::AdaptStep> steps;
        auto expected = oracle::adapt_reference(problem, policy, fixture.sequence, alpha, true, &steps);
        auto actual = adapt(problem, policy, fixture.sequence, alpha);
        for (const auto& [code, weight] : expected.entries())
            if (std::abs(actual.weight(code) - weight) > 1e-9) {
                ++mismatched;
                break;
            }

        for (const auto& step : steps) {
            double sum = 0.0;
            for (double d : step.deltas)
                sum += d;
            if (std::abs(sum) > 1e-9)
                ++bad_sum;
            if (step.played_delta < 0.0)
                ++bad_direction;
        }

        auto state = problem.root();
        for (const auto& move : fixture.sequence) {
            auto moves = problem.legal_moves(state);
            auto probs = move_probabilities(problem, policy, state, moves);
            double sum = 0.0;
            for (double p : probs)
                sum += p;
            if (std::abs(sum - 1.0) > 1e-12)
                ++bad_softmax;
            problem.play(state, move);
        }
    }
    detail << fixtures << " fixtures: " << bad_sum << " step-sum breaches, " << bad_direction
           << " direction breaches, " << bad_softmax << " softmax breaches, " << mismatched
           << " reference mismatches";
    return bad_sum == 0 && bad_direction == 0 && bad_softmax == 0 && mismatched == 0;
}

bool adapt_invariants() {
    Rng rng(991);
    std::ostringstream detail;
    weakschur::SchurProblem ws(3);
    detail << "weakschur ";
    bool ws_ok = adapt_fixtures(ws, 1000, rng, true, detail);

    auto inst = tsptw::parse_instance(oracle::random_feasible_instance_text(rng, 7));
    tsptw::TsptwProblem tw(inst);
    detail << "; tsptw ";
    bool tw_ok = adapt_fixtures(tw, 1000, rng, false, detail);

    report("adapt-invariants", ws_ok && tw_ok, detail.str());
    return ws_ok && tw_ok;
}

// ---- determinism -------------------------------------------------------------

std::string stable_columns(const fs::path& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    std::string line, out;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string f;
        while (std::getline(row, f, ','))
            fields.push_back(f);
        if (fields.size() == 4)
            out += fields[0] + "," + fields[2] + "," + fields[3] + "\n";
    }
    return out;
}

bool determinism(const fs::path& out_root) {
    bench::ExperimentSpec spec;
    spec.problem = bench::ProblemKind::weakschur;
    spec.schur_parts = 2;
    spec.config.algorithm = Algorithm::gnrpa;
    spec.config.level = 2;
    spec.config.iterations = 50;
    spec.seed_lo = 1;
    spec.seed_hi = 5;
    // the selective-menu score 7 is an absolute cap reached in milliseconds,
    // so no improvement can fall near the budget edge and reruns stay
    // byte-identical
    spec.budget_seconds = 2.0;

    spec.out_dir = (out_root / "det_a").string();
    auto a = bench::run_experiment(spec);
    spec.out_dir = (out_root / "det_b").string();
    auto b = bench::run_experiment(spec);

    bool pass = a.all_completed && b.all_completed &&
                stable_columns(a.raw_csv_path) == stable_columns(b.raw_csv_path);
    report("determinism", pass,
           pass ? "identical seed/score/playout columns across reruns"
                : "reruns diverged in the score or playout columns");
    return pass;
}

// ---- directional trend (soft gate) -------------------------------------------

double median_units(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void directional_trend(const fs::path& out_root) {
    fs::path instance = fs::path(NPS_SOURCE_DIR) / "data" / "rc204.1";
    if (const char* env = std::getenv("NPS_RC204"))
        instance = env;

    std::string label = "rc204.1";
    bool real_instance = fs::exists(instance);
    if (!real_instance) {
        // The benchmark file is not distributable with this repository; the
        // protocol still runs end to end on a generated 46-node instance so
        // the comparison machinery is exercised. Drop the real file into
        // data/rc204.1 (or set NPS_RC204) for the verbatim run.
        label = "synthetic-46";
        Rng gen(4601);
        auto text = oracle::random_feasible_instance_text(gen, 46);
        fs::create_directories(out_root);
        instance = out_root / "synthetic46.txt";
        std::ofstream out(instance, std::ios::binary);
        out << text;
    }

    auto make_spec = [&](Algorithm alg, const char* dir) {
        bench::ExperimentSpec spec;
        spec.problem = bench::ProblemKind::tsptw;
        spec.instance_path = instance.string();
        spec.config.algorithm = alg;
        spec.config.level = 3;
        spec.config.iterations = 100;
        spec.config.repetitions = 5;
        spec.config.alpha = 1.0;
        spec.seed_lo = 1;
        spec.seed_hi = 20;
        spec.budget_seconds = 60.0;
        spec.out_dir = (out_root / dir).string();
        return spec;
    };

    auto gnrpa_result = bench::run_experiment(make_spec(Algorithm::gnrpa, "trend_gnrpa"));
    auto gnrpalr_result = bench::run_experiment(make_spec(Algorithm::gnrpalr, "trend_gnrpalr"));

    std::vector<double> gnrpa_finals, gnrpalr_finals;
    for (const auto& o : gnrpa_result.outcomes)
        gnrpa_finals.push_back(o.final_score_units);
    for (const auto& o : gnrpalr_result.outcomes)
        gnrpalr_finals.push_back(o.final_score_units);
    double med_gnrpa = median_units(gnrpa_finals);
    double med_gnrpalr = median_units(gnrpalr_finals);

    std::cout << "---- comparison table (" << label << ", 60 s, seeds 1-20) ----\n";
    try {
        bench::compare_runs((out_root / "trend_gnrpa").string(),
                            (out_root / "trend_gnrpalr").string(), std::cout);
    } catch (const std::exception& e) {
        std::cout << "compare failed: " << e.what() << "\n";
    }
    std::cout << "----------------------------------------------------------\n";

    std::ostringstream detail;
    detail << "median final score on " << label << ": gnrpalr(R=5) " << med_gnrpalr
           << " vs gnrpa " << med_gnrpa;
    if (!real_instance)
        detail << " [rc204.1 not present: ran the protocol on a generated 46-node instance; "
                  "place the benchmark file at data/rc204.1 for the verbatim run]";
    report_soft("directional-trend", med_gnrpalr >= med_gnrpa, detail.str());
}

bool partition_validity() {
    long total = g_partitions.validated.load();
    long bad = g_partitions.violations.load();
    std::ostringstream detail;
    detail << total << " terminal partitions validated, " << bad << " violations";
    if (bad > 0)
        detail << " (first: " << g_partitions.first_violation << ")";
    report("weak-schur-validity", bad == 0 && total > 0, detail.str());
    return bad == 0;
}

} // namespace

int main() {
    auto started = std::chrono::steady_clock::now();
    fs::path out_root = fs::current_path() / "acceptance_out";
    fs::create_directories(out_root);
    std::cout << "acceptance outputs under " << out_root.string() << "\n";

    schur_optima(Algorithm::gnrpa, "weak-schur-optima-gnrpa");
    schur_optima(Algorithm::gnrpalr, "weak-schur-optima-gnrpalr-R0");
    tsptw_oracle();
    playout_count_law();
    repetition_law();
    adapt_invariants();
    determinism(out_root);
    directional_trend(out_root);
    partition_validity();

    double minutes =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() / 60.0;
    std::cout << "acceptance suite finished in " << minutes << " min; " << g_hard_failures
              << " hard failure(s)\n";
    return g_hard_failures == 0 ? 0 : 1;
}
