#include "nps/weakschur.hpp"

#include <algorithm>

namespace nps::weakschur {

MoveCode encode_move(int part, std::int64_t next, std::int64_t prev) {
    if (part < 0 || part > 255)
        throw ContractViolation("weakschur: part index out of the 8-bit code range");
    if (next < 0 || static_cast<std::uint64_t>(next) > kMaxEncodableInteger ||
        prev < 0 || static_cast<std::uint64_t>(prev) > kMaxEncodableInteger)
        throw ContractViolation("weakschur: integer exceeds the 28-bit code range");
    return (static_cast<MoveCode>(part) << 56) |
           (static_cast<MoveCode>(next) << 28) |
           static_cast<MoveCode>(prev);
}

namespace {

bool forbidden_bit(const std::vector<std::uint64_t>& bits, std::int64_t z) {
    std::size_t word = static_cast<std::size_t>(z) >> 6;
    if (word >= bits.size())
        return false;
    return (bits[word] >> (z & 63)) & 1ULL;
}

void set_forbidden_bit(std::vector<std::uint64_t>& bits, std::int64_t z) {
    std::size_t word = static_cast<std::size_t>(z) >> 6;
    if (word >= bits.size())
        bits.resize(word + 1, 0);
    bits[word] |= 1ULL << (z & 63);
}

} // namespace

std::optional<Violation> validate_partition(const std::vector<std::vector<std::int32_t>>& parts,
                                            bool check_cover) {
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const auto& part = parts[p];
        for (std::size_t i = 0; i < part.size(); ++i)
            for (std::size_t j = i + 1; j < part.size(); ++j) {
                std::int64_t z = static_cast<std::int64_t>(part[i]) + part[j];
                if (std::find(part.begin(), part.end(), z) != part.end()) {
                    Violation v{part[i], part[j], z, static_cast<int>(p),
                                std::to_string(part[i]) + " + " + std::to_string(part[j]) +
                                    " = " + std::to_string(z) + " in part " + std::to_string(p)};
                    return v;
                }
            }
    }
    if (check_cover) {
        std::vector<std::int32_t> all;
        for (const auto& part : parts)
            all.insert(all.end(), part.begin(), part.end());
        std::sort(all.begin(), all.end());
        for (std::size_t i = 0; i < all.size(); ++i)
            if (all[i] != static_cast<std::int32_t>(i) + 1) {
                Violation v;
                v.message = "parts do not cover {1.." + std::to_string(all.size()) +
                            "} consecutively (saw " + std::to_string(all[i]) + " at rank " +
                            std::to_string(i + 1) + ")";
                return v;
            }
    }
    return std::nullopt;
}

SchurProblem::SchurProblem(int parts, MoveMenu menu) : parts_(parts), menu_(menu) {
    if (parts < 1 || parts > 255)
        throw ConfigError("weakschur: part count must be in [1, 255]");
}

State SchurProblem::root() const {
    State s;
    s.parts.resize(parts_);
    s.forbidden.resize(parts_);
    return s;
}

bool SchurProblem::admits(const State& s, int part) const {
    return !forbidden_bit(s.forbidden[part], s.next);
}

std::vector<int> SchurProblem::legal_moves(const State& s) const {
    if (menu_ == MoveMenu::selective && s.prev_part >= 0 && admits(s, s.prev_part))
        return {s.prev_part};
    std::vector<int> moves;
    for (int p = 0; p < parts_; ++p)
        if (admits(s, p))
            moves.push_back(p);
    return moves;
}

void SchurProblem::play(State& s, int part) const {
    if (part < 0 || part >= parts_)
        throw ContractViolation("weakschur: part index out of range");
    if (!admits(s, part))
        throw ContractViolation("weakschur: " + std::to_string(s.next) +
                                " is a sum of two members of part " + std::to_string(part));
    if (static_cast<std::uint64_t>(s.next) > kMaxEncodableInteger)
        throw ContractViolation("weakschur: integer exceeds the 28-bit code range");
    auto& members = s.parts[part];
    for (std::int32_t y : members)
        set_forbidden_bit(s.forbidden[part], static_cast<std::int64_t>(y) + s.next);
    members.push_back(s.next);
    s.last_placed = s.next;
    ++s.next;
    s.prev_part = part;
}

bool SchurProblem::is_terminal(const State& s) const {
    for (int p = 0; p < parts_; ++p)
        if (admits(s, p))
            return false;
    return true;
}

Score SchurProblem::score(const State& s) const {
    if (!is_terminal(s))
        throw ContractViolation("weakschur: score on non-terminal state");
    return s.last_placed;
}

MoveCode SchurProblem::code(const State& s, int part) const {
    std::int64_t prev = s.parts[part].empty() ? 0 : s.parts[part].back();
    return encode_move(part, s.next, prev);
}

} // namespace nps::weakschur
