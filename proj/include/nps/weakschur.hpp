#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nps/problem.hpp"

namespace nps::weakschur {

// Weak Schur partition search: place 1, 2, 3, ... into k parts so that no
// part contains x + y = z for two distinct earlier members x < y. The score
// of a terminal partition is the last integer that could be placed.

constexpr std::uint64_t kMaxEncodableInteger = (1ULL << 28) - 1;

// Injective 64-bit code for (part, integer to place, previous integer in that
// part): part in the high 8 bits, the integer in the next 28, the previous
// member (0 for an empty part) in the low 28.
MoveCode encode_move(int part, std::int64_t next, std::int64_t prev);

struct State {
    std::vector<std::vector<std::int32_t>> parts;
    // Per part, bit z set when z is a sum of two distinct members.
    std::vector<std::vector<std::uint64_t>> forbidden;
    std::int32_t next = 1;
    std::int32_t last_placed = 0;
    int prev_part = -1; // part holding next-1, -1 before the first placement
};

struct Violation {
    std::int64_t x = 0, y = 0, z = 0;
    int part = -1;
    std::string message;
};

// Test oracle for the weakly-sum-free invariant: checks every part against
// the distinct-pair rule by brute force and, unless disabled, that the parts
// jointly cover {1..max} with no repeats.
std::optional<Violation> validate_partition(const std::vector<std::vector<std::int32_t>>& parts,
                                            bool check_cover = true);

// Which moves the playout policy considers. The selective menu follows the
// same-partition-as-the-previous-number heuristic; note it prunes every
// optimal partition for k >= 2 (placing 4 beside {1, 2} requires breaking
// the rule), so exact-optimum runs need the full menu.
enum class MoveMenu { selective, full };

class SchurProblem {
public:
    using state_type = State;
    using move_type = int; // part index receiving the next integer

    explicit SchurProblem(int parts, MoveMenu menu = MoveMenu::selective);

    State root() const;
    // Selective menu: when the part holding next-1 admits next, that single
    // move is the only one considered; otherwise every admissible part.
    // Full menu: every admissible part.
    std::vector<int> legal_moves(const State& s) const;
    void play(State& s, int part) const;
    bool is_terminal(const State& s) const;
    Score score(const State& s) const;
    MoveCode code(const State& s, int part) const;
    double bias(const State&, int) const { return 0.0; }

    bool admits(const State& s, int part) const;
    int parts() const { return parts_; }
    MoveMenu menu() const { return menu_; }

private:
    int parts_;
    MoveMenu menu_;
};

} // namespace nps::weakschur
