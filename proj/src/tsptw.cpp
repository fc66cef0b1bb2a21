#include "nps/tsptw.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

namespace nps::tsptw {

namespace {

constexpr int kMaxScaleDigits = 9;
constexpr std::int64_t kViolationPenalty = 1000000; // 10^6 in problem units

struct Token {
    std::string text;
    int line = 0;
};

// Plain decimal literal split into integer and fraction digits. Exponents are
// rejected so every value stays exactly representable in fixed point.
struct Decimal {
    bool negative = false;
    std::string int_digits;
    std::string frac_digits;
};

Decimal parse_decimal(const Token& tok) {
    const std::string& s = tok.text;
    Decimal d;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        d.negative = (s[i] == '-');
        ++i;
    }
    std::size_t int_start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        ++i;
    d.int_digits = s.substr(int_start, i - int_start);
    if (i < s.size() && s[i] == '.') {
        ++i;
        std::size_t frac_start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            ++i;
        d.frac_digits = s.substr(frac_start, i - frac_start);
    }
    if (i != s.size() || (d.int_digits.empty() && d.frac_digits.empty()))
        throw ParseError("non-numeric token '" + s + "'", tok.line);
    return d;
}

std::int64_t to_fixed(const Decimal& d, int scale_digits, const Token& tok) {
    std::int64_t value = 0;
    auto push_digit = [&](char c) {
        if (value > (std::numeric_limits<std::int64_t>::max() - (c - '0')) / 10)
            throw ParseError("value out of range '" + tok.text + "'", tok.line);
        value = value * 10 + (c - '0');
    };
    for (char c : d.int_digits)
        push_digit(c);
    for (int k = 0; k < scale_digits; ++k)
        push_digit(k < static_cast<int>(d.frac_digits.size()) ? d.frac_digits[k] : '0');
    return d.negative ? -value : value;
}

std::vector<std::vector<Token>> tokenize_lines(std::istream& in) {
    std::vector<std::vector<Token>> lines;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        std::string_view sv(raw);
        auto hash = sv.find('#');
        if (hash != std::string_view::npos)
            sv = sv.substr(0, hash);
        std::vector<Token> toks;
        std::istringstream ls{std::string(sv)};
        std::string word;
        while (ls >> word)
            toks.push_back({word, line_no});
        if (!toks.empty())
            lines.push_back(std::move(toks));
    }
    return lines;
}

} // namespace

Instance parse_instance(std::istream& in) {
    auto lines = tokenize_lines(in);
    if (lines.empty())
        throw ParseError("empty instance", 1);

    std::size_t cursor = 0;
    const auto& header = lines[cursor++];
    if (header.size() != 1)
        throw ParseError("expected a single node count", header[0].line);
    Decimal nd = parse_decimal(header[0]);
    if (nd.negative || !nd.frac_digits.empty())
        throw ParseError("node count must be a positive integer", header[0].line);
    std::int64_t n64 = to_fixed(nd, 0, header[0]);
    if (n64 < 1 || n64 > 100000)
        throw ParseError("node count out of range", header[0].line);
    int n = static_cast<int>(n64);

    if (lines.size() - cursor < static_cast<std::size_t>(2 * n))
        throw ParseError("instance truncated: expected " + std::to_string(2 * n) +
                             " data lines after the node count",
                         lines.back().back().line);

    // First pass fixes the decimal precision shared by every value.
    int scale_digits = 0;
    for (std::size_t li = cursor; li < cursor + static_cast<std::size_t>(2 * n); ++li) {
        for (const auto& tok : lines[li]) {
            Decimal d = parse_decimal(tok);
            scale_digits = std::max(scale_digits, static_cast<int>(d.frac_digits.size()));
        }
    }
    if (scale_digits > kMaxScaleDigits)
        throw ParseError("more than " + std::to_string(kMaxScaleDigits) + " decimal digits",
                         lines[cursor][0].line);

    Instance inst;
    inst.n = n;
    inst.scale_digits = scale_digits;
    inst.scale = 1;
    for (int i = 0; i < scale_digits; ++i)
        inst.scale *= 10;
    inst.cost.resize(static_cast<std::size_t>(n) * n);

    for (int row = 0; row < n; ++row) {
        const auto& toks = lines[cursor++];
        if (static_cast<int>(toks.size()) != n)
            throw ParseError("cost row " + std::to_string(row) + " has " +
                                 std::to_string(toks.size()) + " entries, expected " +
                                 std::to_string(n),
                             toks[0].line);
        for (int col = 0; col < n; ++col) {
            std::int64_t v = to_fixed(parse_decimal(toks[col]), scale_digits, toks[col]);
            if (v < 0)
                throw ParseError("negative travel time", toks[col].line);
            if (row == col && v != 0)
                throw ParseError("nonzero diagonal entry", toks[col].line);
            inst.cost[static_cast<std::size_t>(row) * n + col] = v;
        }
    }

    inst.windows.resize(n);
    for (int node = 0; node < n; ++node) {
        const auto& toks = lines[cursor++];
        if (toks.size() != 2)
            throw ParseError("time window line has " + std::to_string(toks.size()) +
                                 " entries, expected 2",
                             toks[0].line);
        inst.windows[node].ready = to_fixed(parse_decimal(toks[0]), scale_digits, toks[0]);
        inst.windows[node].due = to_fixed(parse_decimal(toks[1]), scale_digits, toks[1]);
        if (inst.windows[node].ready > inst.windows[node].due)
            throw ParseError("ready exceeds due", toks[0].line);
    }

    if (cursor != lines.size())
        throw ParseError("trailing data after instance", lines[cursor][0].line);

    inst.min_cost = std::numeric_limits<std::int64_t>::max();
    inst.max_cost = std::numeric_limits<std::int64_t>::min();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) {
                inst.min_cost = std::min(inst.min_cost, inst.cost_at(i, j));
                inst.max_cost = std::max(inst.max_cost, inst.cost_at(i, j));
            }
    if (n == 1)
        inst.min_cost = inst.max_cost = 0;
    return inst;
}

Instance parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'", 0);
    return parse_instance(in);
}

TsptwProblem::TsptwProblem(Instance instance, BiasSign sign)
    : instance_(std::move(instance)), sign_(sign),
      bias_span_(static_cast<double>(instance_.max_cost - instance_.min_cost)) {}

State TsptwProblem::root() const {
    State s;
    s.visited.assign(instance_.n, 0);
    s.visited[0] = 1;
    s.visited_count = 1;
    return s;
}

std::vector<int> TsptwProblem::legal_moves(const State& s) const {
    std::vector<int> moves;
    if (s.visited_count < instance_.n) {
        moves.reserve(instance_.n - s.visited_count);
        for (int node = 1; node < instance_.n; ++node)
            if (!s.visited[node])
                moves.push_back(node);
    } else if (!s.returned) {
        moves.push_back(0);
    }
    return moves;
}

void TsptwProblem::play(State& s, int next) const {
    if (next < 0 || next >= instance_.n)
        throw ContractViolation("tsptw: node out of range");
    if (s.returned)
        throw ContractViolation("tsptw: tour already closed");
    bool closing = (s.visited_count == instance_.n);
    if (closing) {
        if (next != 0)
            throw ContractViolation("tsptw: all cities visited, only the depot remains");
    } else if (next == 0 || s.visited[next]) {
        throw ContractViolation("tsptw: node " + std::to_string(next) + " already visited");
    }

    std::int64_t edge = instance_.cost_at(s.current, next);
    std::int64_t arrival = s.time + edge;
    const TimeWindow& w = instance_.windows[next];
    if (arrival > w.due)
        ++s.violations;
    s.time = std::max(arrival, w.ready);
    s.travel_cost += edge;
    s.current = next;
    if (closing) {
        s.returned = true;
    } else {
        s.visited[next] = 1;
        ++s.visited_count;
    }
}

bool TsptwProblem::is_terminal(const State& s) const {
    return s.visited_count == instance_.n && s.returned;
}

Score TsptwProblem::score(const State& s) const {
    if (!is_terminal(s))
        throw ContractViolation("tsptw: score on non-terminal state");
    return -static_cast<Score>(s.violations) * kViolationPenalty * instance_.scale - s.travel_cost;
}

MoveCode TsptwProblem::code(const State& s, int next) const {
    return static_cast<MoveCode>(s.current) * static_cast<MoveCode>(instance_.n) +
           static_cast<MoveCode>(next);
}

double TsptwProblem::bias(const State& s, int next) const {
    if (bias_span_ <= 0.0)
        return 0.0;
    double d = static_cast<double>(instance_.cost_at(s.current, next) - instance_.min_cost);
    double b = 10.0 * d / bias_span_;
    return sign_ == BiasSign::negative ? -b : b;
}

std::string TsptwProblem::format_score(Score s) const {
    if (instance_.scale == 1)
        return std::to_string(s);
    bool neg = s < 0;
    std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(s + 1)) + 1 : static_cast<std::uint64_t>(s);
    std::uint64_t scale = static_cast<std::uint64_t>(instance_.scale);
    std::string frac = std::to_string(mag % scale);
    frac.insert(frac.begin(), instance_.scale_digits - frac.size(), '0');
    return (neg ? "-" : "") + std::to_string(mag / scale) + "." + frac;
}

double TsptwProblem::score_units(Score s) const {
    return static_cast<double>(s) / static_cast<double>(instance_.scale);
}

} // namespace nps::tsptw
