#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nps/problem.hpp"

namespace nps::tsptw {

// Traveling salesman with time windows. Node 0 is the depot; a tour visits
// every city once and closes back at the depot. Travel times and windows are
// held as fixed-point integers at the instance's own decimal precision, so
// every reachable score is exact.

struct TimeWindow {
    std::int64_t ready = 0;
    std::int64_t due = 0;
};

struct Instance {
    int n = 0;                                   // nodes, depot included
    int scale_digits = 0;                        // fixed-point decimals
    std::int64_t scale = 1;                      // 10^scale_digits
    std::vector<std::int64_t> cost;              // n*n, row-major
    std::vector<TimeWindow> windows;             // per node
    std::int64_t min_cost = 0, max_cost = 0;     // off-diagonal extremes

    std::int64_t cost_at(int from, int to) const { return cost[static_cast<std::size_t>(from) * n + to]; }
};

// Reads the Solomon-Potvin-Bengio layout: node count, n rows of n travel
// times, then n "ready due" lines. '#' comments and blank lines are skipped.
// Throws ParseError naming the offending line.
Instance parse_instance(std::istream& in);
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

enum class BiasSign { positive, negative };

struct State {
    std::vector<std::uint8_t> visited;
    int visited_count = 0;
    int current = 0;
    std::int64_t time = 0;             // fixed-point
    std::int64_t travel_cost = 0;      // fixed-point
    int violations = 0;
    bool returned = false;             // depot re-entered after the last city
};

class TsptwProblem {
public:
    using state_type = State;
    using move_type = int; // next node to visit (0 = return to depot)

    explicit TsptwProblem(Instance instance, BiasSign sign = BiasSign::negative);

    State root() const;
    std::vector<int> legal_moves(const State& s) const;
    void play(State& s, int next) const;
    bool is_terminal(const State& s) const;
    Score score(const State& s) const;
    MoveCode code(const State& s, int next) const;
    double bias(const State& s, int next) const;

    std::string format_score(Score s) const;
    double score_units(Score s) const;

    const Instance& instance() const { return instance_; }
    BiasSign bias_sign() const { return sign_; }

private:
    Instance instance_;
    BiasSign sign_;
    double bias_span_; // max - min as a double, 0 when degenerate
};

} // namespace nps::tsptw
