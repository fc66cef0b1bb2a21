#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include "nps/errors.hpp"
#include "nps/policy.hpp"

namespace nps {

// Scores are exact 64-bit integers. Problems that measure real-valued costs
// map them to a fixed-point representation so that the repetition test in the
// limited-repetitions search (score == bestScore) compares exactly.
using Score = std::int64_t;

// Contract a combinatorial problem implements so the engine stays
// problem-agnostic. Adapters must be immutable after construction; states are
// owned by a single search. `play` must be a pure transition: the same
// (state, move) pair always produces the same successor.
template <typename P>
concept Problem = requires(const P& p, const typename P::state_type& s,
                           typename P::state_type& state, const typename P::move_type& m) {
    typename P::state_type;
    typename P::move_type;
    requires std::equality_comparable<typename P::move_type>;
    { p.root() } -> std::convertible_to<typename P::state_type>;
    { p.legal_moves(s) } -> std::convertible_to<std::vector<typename P::move_type>>;
    { p.play(state, m) };
    { p.is_terminal(s) } -> std::convertible_to<bool>;
    { p.score(s) } -> std::convertible_to<Score>;
    { p.code(s, m) } -> std::convertible_to<MoveCode>;
    { p.bias(s, m) } -> std::convertible_to<double>;
};

// Optional adapter hook: a score to report when a playout hits a non-terminal
// state with no legal moves. Without it such a state is a hard error.
template <typename P>
concept HasDeadEndScore = requires(const P& p, const typename P::state_type& s) {
    { p.dead_end_score(s) } -> std::convertible_to<Score>;
};

// Optional adapter hook for printing scores in problem units (fixed-point
// problems override this; the default prints the raw integer).
template <typename P>
concept HasScoreFormat = requires(const P& p, Score s) {
    { p.format_score(s) } -> std::convertible_to<std::string>;
};

template <Problem P>
std::string format_score(const P& problem, Score s) {
    if constexpr (HasScoreFormat<P>)
        return problem.format_score(s);
    else
        return std::to_string(s);
}

// Optional adapter hook mapping an exact score to problem units as a real
// (used for aggregate curves). Defaults to the integer value itself.
template <typename P>
concept HasScoreUnits = requires(const P& p, Score s) {
    { p.score_units(s) } -> std::convertible_to<double>;
};

template <Problem P>
double score_units(const P& problem, Score s) {
    if constexpr (HasScoreUnits<P>)
        return problem.score_units(s);
    else
        return static_cast<double>(s);
}

template <Problem P>
struct PlayoutResult {
    Score score = 0;
    std::vector<typename P::move_type> sequence;
};

// Applies a move sequence from the root. Legality is the transition's own
// contract (play throws on an illegal move), not the playout policy's move
// menu, so sequences a selective policy would never generate still replay as
// long as every step is admissible.
template <Problem P>
typename P::state_type replay(const P& problem, const std::vector<typename P::move_type>& sequence) {
    auto state = problem.root();
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        try {
            problem.play(state, sequence[i]);
        } catch (const ContractViolation& e) {
            throw ContractViolation("replay: step " + std::to_string(i) + ": " + e.what());
        }
    }
    return state;
}

} // namespace nps
