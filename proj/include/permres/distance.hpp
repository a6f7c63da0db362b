#pragma once

#include <cstdint>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "permres/prime_field.hpp"

namespace permres {

/// Distances of every x in [1, p] from the set {1, p} under the moves
/// x -> p - x and x -> p - x + 1. Computed once per prime by BFS
/// (the move relation is its own reverse).
class DistanceTable {
public:
    static DistanceTable compute(std::uint64_t p) {
        if (!is_prime(p)) throw std::invalid_argument("p must be prime");
        if (p > 10'000'000)
            throw std::invalid_argument("p too large for a distance table");
        DistanceTable t;
        t.p_ = p;
        t.values_.assign(p + 1, unreached());
        std::deque<std::uint64_t> queue;
        t.values_[1] = 0;
        t.values_[p] = 0;
        queue.push_back(1);
        if (p != 1) queue.push_back(p);
        while (!queue.empty()) {
            std::uint64_t y = queue.front();
            queue.pop_front();
            for (std::uint64_t x : {p - y, p - y + 1}) {
                if (x < 1 || x > p || t.values_[x] != unreached()) continue;
                t.values_[x] = t.values_[y] + 1;
                queue.push_back(x);
            }
        }
        for (std::uint64_t x = 1; x <= p; ++x)
            if (t.values_[x] == unreached())
                throw std::logic_error("distance BFS did not reach every value");
        return t;
    }

    std::uint64_t p() const noexcept { return p_; }

    unsigned at(std::uint64_t x) const {
        if (x < 1 || x > p_) throw std::invalid_argument("x out of [1, p]");
        return values_[x];
    }

    unsigned max() const {
        unsigned m = 0;
        for (std::uint64_t x = 1; x <= p_; ++x) m = std::max(m, values_[x]);
        return m;
    }

private:
    static constexpr unsigned unreached() { return ~0u; }
    std::uint64_t p_ = 0;
    std::vector<unsigned> values_;
};

inline unsigned p_distance(std::uint64_t p, std::uint64_t x) {
    return DistanceTable::compute(p).at(x);
}

/// Maximal p-distance over an invariant multiset; 0 for the empty multiset.
template <class PartRange>
unsigned module_distance_over(std::uint64_t p, const PartRange& parts) {
    DistanceTable table = DistanceTable::compute(p);
    unsigned m = 0;
    for (auto x : parts) m = std::max(m, table.at(x));
    return m;
}

struct ChainStep {
    std::uint32_t value;  // the chosen predecessor x'
    std::uint32_t eps;    // 0 when x' = p - x, 1 when x' = p - x + 1
};

/// The unique neighbour of x with distance one less. Defined for 2 <= x <= p-1.
inline ChainStep chain_predecessor(std::uint64_t p, std::uint64_t x) {
    if (x < 2 || x + 1 > p) throw std::invalid_argument("no predecessor for x in {1, p}");
    DistanceTable table = DistanceTable::compute(p);
    unsigned target = table.at(x) - 1;
    bool lo = table.at(p - x) == target;
    bool hi = table.at(p - x + 1) == target;
    if (lo == hi) throw std::logic_error("predecessor is not unique");
    if (lo) return {static_cast<std::uint32_t>(p - x), 0};
    return {static_cast<std::uint32_t>(p - x + 1), 1};
}

/// sup over all modules of the minimal permutation-resolution length,
/// i.e. the maximal p-distance of an integer in [1, p].
inline unsigned group_permutation_dimension(std::uint64_t p) {
    return DistanceTable::compute(p).max();
}

/// The path 1, p-1, 2, p-2, ... covering [1, p-1]; position = distance.
/// For p = 2 it degenerates to the single entry [1].
inline std::vector<std::uint32_t> distance_chain(std::uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    std::vector<std::uint32_t> chain{1};
    bool use_plus_one = false;  // alternately p - x and p - x + 1
    while (chain.size() < p - 1) {
        std::uint64_t x = chain.back();
        chain.push_back(static_cast<std::uint32_t>(use_plus_one ? p - x + 1 : p - x));
        use_plus_one = !use_plus_one;
    }
    return chain;
}

inline std::string chain_dot(std::uint64_t p) {
    std::vector<std::uint32_t> chain = distance_chain(p);
    DistanceTable table = DistanceTable::compute(p);
    std::ostringstream out;
    out << "graph distance_chain_p" << p << " {\n";
    for (std::uint32_t x : chain)
        out << "  n" << x << " [label=\"" << x << " (size " << table.at(x) << ")\"];\n";
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        out << "  n" << chain[i] << " -- n" << chain[i + 1] << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace permres
