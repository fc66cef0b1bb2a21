#pragma once

#include <stdexcept>
#include <string>

namespace nps {

// A playout reached a non-terminal state with no legal moves.
struct DeadEndError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller broke an adapter or engine precondition (illegal move on replay,
// score on a non-terminal state, ...).
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// Invalid search configuration, reported before any search work starts.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance file could not be parsed; message names the offending line.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    int line_number;
};

} // namespace nps
