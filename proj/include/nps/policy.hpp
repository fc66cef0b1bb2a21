#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "nps/errors.hpp"

namespace nps {

using MoveCode = std::uint64_t;

// Table of move-code weights. Codes that were never written read as 0 and
// reading never inserts, so copying a policy costs only the entries that
// adaptation actually touched.
class Policy {
public:
    double weight(MoveCode code) const {
        auto it = weights_.find(code);
        return it == weights_.end() ? 0.0 : it->second;
    }

    void set(MoveCode code, double w) {
        if (!std::isfinite(w))
            throw ContractViolation("policy weight must be finite");
        weights_[code] = w;
    }

    void add(MoveCode code, double delta) {
        double w = weight(code) + delta;
        set(code, w);
    }

    std::size_t size() const { return weights_.size(); }
    bool empty() const { return weights_.empty(); }

    const std::unordered_map<MoveCode, double>& entries() const { return weights_; }

    // Equality as weight functions: stored zeros and absent codes read alike.
    friend bool operator==(const Policy& a, const Policy& b) {
        for (const auto& [code, w] : a.weights_)
            if (b.weight(code) != w)
                return false;
        for (const auto& [code, w] : b.weights_)
            if (a.weight(code) != w)
                return false;
        return true;
    }

private:
    std::unordered_map<MoveCode, double> weights_;
};

} // namespace nps
