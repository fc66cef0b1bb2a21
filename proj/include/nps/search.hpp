#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "nps/policy.hpp"
#include "nps/problem.hpp"
#include "nps/rng.hpp"

namespace nps {

enum class Algorithm { nrpa, gnrpa, gnrpalr };

struct SearchConfig {
    Algorithm algorithm = Algorithm::gnrpa;
    int level = 2;
    int iterations = 100;   // N, governs nrpa/gnrpa level loops
    int repetitions = 0;    // R, governs gnrpalr level loops
    double alpha = 1.0;
    std::optional<std::uint64_t> iteration_cap; // per-level safety cap (gnrpalr)
    std::uint64_t seed = 1;
    std::optional<double> time_budget_seconds;
};

inline void validate_config(const SearchConfig& cfg) {
    if (cfg.level < 0)
        throw ConfigError("level must be >= 0");
    if ((cfg.algorithm == Algorithm::nrpa || cfg.algorithm == Algorithm::gnrpa) && cfg.iterations < 1)
        throw ConfigError("iterations (N) must be >= 1");
    if (cfg.algorithm == Algorithm::gnrpalr && cfg.repetitions < 0)
        throw ConfigError("repetitions (R) must be >= 0");
    if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha))
        throw ConfigError("alpha must be a finite non-negative real");
    if (cfg.iteration_cap && *cfg.iteration_cap < 1)
        throw ConfigError("iteration cap must be >= 1 when set");
    if (cfg.time_budget_seconds && !(*cfg.time_budget_seconds >= 0.0))
        throw ConfigError("time budget must be >= 0");
}

// (elapsed, best-so-far) event emitted whenever the global best improves.
struct AnytimeRecord {
    double elapsed_seconds = 0.0;
    Score best_score = 0;
    std::uint64_t playouts = 0;
};

// Cross-cutting search state: playout counter, global-best anytime records,
// and the wall-clock budget. Budget expiry is only consulted at level-loop
// boundaries, so a playout is never interrupted mid-trajectory.
class SearchMonitor {
public:
    using Clock = std::chrono::steady_clock;

    explicit SearchMonitor(std::optional<double> budget_seconds = {})
        : budget_seconds_(budget_seconds), start_(Clock::now()) {}

    void observe_playout(Score score) {
        ++playouts_;
        if (!has_best_ || score > best_) {
            has_best_ = true;
            best_ = score;
            AnytimeRecord rec{elapsed_seconds(), score, playouts_};
            records_.push_back(rec);
            if (on_improvement)
                on_improvement(rec);
        }
    }

    // Stops the search at the next loop boundary (usable from the
    // improvement callback, e.g. once a known target score is reached).
    void request_abort() { abort_ = true; }

    bool expired() const {
        if (abort_)
            return true;
        return budget_seconds_ && elapsed_seconds() >= *budget_seconds_;
    }

    double elapsed_seconds() const {
        return std::chrono::duration<double>(Clock::now() - start_).count();
    }

    std::uint64_t playouts() const { return playouts_; }
    const std::vector<AnytimeRecord>& records() const { return records_; }

    std::function<void(const AnytimeRecord&)> on_improvement;

private:
    std::optional<double> budget_seconds_;
    Clock::time_point start_;
    std::uint64_t playouts_ = 0;
    bool has_best_ = false;
    bool abort_ = false;
    Score best_ = 0;
    std::vector<AnytimeRecord> records_;
};

// Softmax with max-subtraction so large weights cannot overflow exp.
inline std::vector<double> softmax(std::vector<double> logits) {
    double hi = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double& x : logits) {
        x = std::exp(x - hi);
        z += x;
    }
    for (double& x : logits)
        x /= z;
    return logits;
}

// p_m proportional to exp(w_code(m) + beta_m) over the given legal moves.
// With use_bias false every beta is 0 and the adapter's bias is not consulted,
// which is exactly the zero-bias configuration the plain policy-adaptation
// search uses.
template <Problem P>
std::vector<double> move_probabilities(const P& problem, const Policy& policy,
                                       const typename P::state_type& state,
                                       const std::vector<typename P::move_type>& moves,
                                       bool use_bias = true) {
    if (moves.empty())
        throw DeadEndError("move_probabilities: no legal moves");
    std::vector<double> logits(moves.size());
    for (std::size_t i = 0; i < moves.size(); ++i) {
        double beta = use_bias ? problem.bias(state, moves[i]) : 0.0;
        logits[i] = policy.weight(problem.code(state, moves[i])) + beta;
    }
    return softmax(std::move(logits));
}

namespace detail {

// Index sampled from an explicit distribution; consumes one draw.
inline std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
    double u = rng.next_double();
    double c = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        c += probs[i];
        if (u < c)
            return i;
    }
    return probs.size() - 1; // rounding fell past 1.0
}

} // namespace detail

// One playout: walk from the root sampling each move from the biased softmax
// until a terminal state, returning its score and the move sequence.
template <Problem P>
PlayoutResult<P> playout(const P& problem, const Policy& policy, Rng& rng,
                         SearchMonitor& monitor, bool use_bias = true) {
    PlayoutResult<P> result;
    auto state = problem.root();
    while (!problem.is_terminal(state)) {
        auto moves = problem.legal_moves(state);
        if (moves.empty()) {
            if constexpr (HasDeadEndScore<P>) {
                result.score = problem.dead_end_score(state);
                monitor.observe_playout(result.score);
                return result;
            } else {
                throw DeadEndError("playout: non-terminal state with no legal moves");
            }
        }
        auto probs = move_probabilities(problem, policy, state, moves, use_bias);
        std::size_t pick = detail::sample_index(probs, rng);
        result.sequence.push_back(moves[pick]);
        problem.play(state, moves[pick]);
    }
    result.score = problem.score(state);
    monitor.observe_playout(result.score);
    return result;
}

// Policy gradient step toward a best sequence: at every step of the sequence
// the played move's weight rises and every legal move's weight drops by
// alpha times its probability. All probabilities are computed from the
// unmodified input policy; the returned table is a separate copy.
template <Problem P>
Policy adapt(const P& problem, const Policy& policy,
             const std::vector<typename P::move_type>& sequence,
             double alpha, bool use_bias = true) {
    Policy adapted = policy;
    auto state = problem.root();
    for (std::size_t step = 0; step < sequence.size(); ++step) {
        const auto& played = sequence[step];
        auto moves = problem.legal_moves(state);
        auto probs = move_probabilities(problem, policy, state, moves, use_bias);
        bool found = false;
        for (std::size_t i = 0; i < moves.size(); ++i) {
            double delta_bm = (moves[i] == played) ? 1.0 : 0.0;
            found = found || delta_bm > 0.0;
            adapted.add(problem.code(state, moves[i]), -alpha * (probs[i] - delta_bm));
        }
        if (!found)
            throw ContractViolation("adapt: sequence not replayable at step " + std::to_string(step));
        problem.play(state, played);
    }
    return adapted;
}

// Nested search with a fixed number of iterations per level. Level 0 is a
// playout; a level above runs N children, keeps the best result (ties
// replace the kept sequence) and adapts its local policy toward it after
// every child. Each level works on its own copy of the caller's policy, so
// lower-level adaptation never leaks upward.
template <Problem P>
PlayoutResult<P> gnrpa(const P& problem, int level, const Policy& policy,
                       const SearchConfig& cfg, Rng& rng, SearchMonitor& monitor,
                       bool use_bias = true) {
    if (level <= 0)
        return playout(problem, policy, rng, monitor, use_bias);

    Policy local = policy;
    PlayoutResult<P> best;
    best.score = std::numeric_limits<Score>::min();
    for (int i = 0; i < cfg.iterations; ++i) {
        auto child = gnrpa(problem, level - 1, local, cfg, rng, monitor, use_bias);
        if (child.score >= best.score)
            best = std::move(child);
        local = adapt(problem, local, best.sequence, cfg.alpha, use_bias);
        if (monitor.expired())
            break;
    }
    return best;
}

// Nested search with a repetition limit instead of an iteration count: a
// level keeps running children until the best score has been returned R more
// times after it was found (a strict improvement resets the counter, a score
// below the best does not count). Equal scores leave the kept sequence
// unchanged.
template <Problem P>
PlayoutResult<P> gnrpalr(const P& problem, int level, const Policy& policy,
                         const SearchConfig& cfg, Rng& rng, SearchMonitor& monitor,
                         bool use_bias = true) {
    if (level <= 0)
        return playout(problem, policy, rng, monitor, use_bias);

    Policy local = policy;
    PlayoutResult<P> best;
    best.score = std::numeric_limits<Score>::min();
    bool has_best = false;
    int repetition_count = 0;
    std::uint64_t iterations_done = 0;
    while (repetition_count <= cfg.repetitions) {
        auto child = gnrpalr(problem, level - 1, local, cfg, rng, monitor, use_bias);
        if (has_best && child.score == best.score)
            ++repetition_count;
        if (!has_best || child.score > best.score) {
            repetition_count = 0;
            has_best = true;
            best = std::move(child);
        }
        local = adapt(problem, local, best.sequence, cfg.alpha, use_bias);
        ++iterations_done;
        if (cfg.iteration_cap && iterations_done >= *cfg.iteration_cap)
            break;
        if (monitor.expired())
            break;
    }
    return best;
}

template <Problem P>
struct SearchResult {
    PlayoutResult<P> best;
    std::vector<AnytimeRecord> records;
    std::uint64_t playouts = 0;
};

// Top-level driver: validates the configuration, seeds the generator, runs
// the selected algorithm and returns the best result together with the
// anytime improvement records.
template <Problem P>
SearchResult<P> run_search(const P& problem, const SearchConfig& cfg) {
    validate_config(cfg);
    Rng rng(cfg.seed);
    SearchMonitor monitor(cfg.time_budget_seconds);
    return run_search(problem, cfg, rng, monitor);
}

// Variant taking caller-owned rng/monitor (for instrumentation hooks).
// Under a time budget the search restarts with a fresh policy whenever it
// completes before expiry, continuing the same rng stream, so short
// self-terminating searches (low levels, small repetition limits) still use
// the whole budget and the anytime records span all restarts.
template <Problem P>
SearchResult<P> run_search(const P& problem, const SearchConfig& cfg, Rng& rng,
                           SearchMonitor& monitor) {
    validate_config(cfg);
    SearchResult<P> result;
    bool first = true;
    for (;;) {
        Policy policy;
        PlayoutResult<P> run;
        switch (cfg.algorithm) {
        case Algorithm::nrpa:
            run = gnrpa(problem, cfg.level, policy, cfg, rng, monitor, /*use_bias=*/false);
            break;
        case Algorithm::gnrpa:
            run = gnrpa(problem, cfg.level, policy, cfg, rng, monitor, /*use_bias=*/true);
            break;
        case Algorithm::gnrpalr:
            run = gnrpalr(problem, cfg.level, policy, cfg, rng, monitor, /*use_bias=*/true);
            break;
        }
        if (first || run.score > result.best.score) {
            result.best = std::move(run);
            first = false;
        }
        if (!cfg.time_budget_seconds || monitor.expired())
            break;
    }
    result.records = monitor.records();
    result.playouts = monitor.playouts();
    return result;
}

} // namespace nps
