#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "core_model.hpp"
#include "tour_solver.hpp"

namespace mmtsp {

struct OracleBudget {
    std::uint64_t max_partitions = 2'000'000;
    std::size_t max_subset_size = kExactCap;
};

namespace detail {

// k^f, saturating at UINT64_MAX.
inline std::uint64_t partition_count(std::size_t k, std::size_t f) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < f; ++i) {
        if (total > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
        total *= k;
    }
    return total;
}

}  // namespace detail

/// True iff exact_minmax will accept the instance: at most max_partitions
/// assignments of free targets, and every vehicle's largest possible target
/// set (all free targets plus its required ones) fits Held-Karp.
inline bool oracle_feasible(const Instance& inst, const OracleBudget& budget = {}) {
    const std::size_t f = inst.free_targets().size();
    if (detail::partition_count(inst.num_vehicles(), f) > budget.max_partitions) return false;
    const std::size_t cap = std::min(budget.max_subset_size, kExactCap);
    for (int v = 0; v < static_cast<int>(inst.num_vehicles()); ++v)
        if (f + inst.required(v).size() > cap) return false;
    return true;
}

/// Optimal min-max solution by enumerating every assignment of free targets.
///
/// Each vehicle gets one Held-Karp table over its free targets plus R_i, which
/// yields the optimal closed-tour time of every candidate subset at once.
/// Targets are assigned in index order with vehicle ids as digits (a
/// mixed-radix counter walked depth-first). Under the triangle inequality a
/// tour never gets shorter by adding targets, so a partial assignment whose
/// vehicle time already reaches the incumbent cannot lead to a strictly better
/// solution and is cut when `prune` is set.
inline Solution exact_minmax(const Instance& inst, const OracleBudget& budget = {}, bool prune = true) {
    if (!oracle_feasible(inst, budget))
        throw OracleUnavailable("exact oracle: instance exceeds the enumeration budget");
    const auto free = inst.free_targets();
    const std::size_t f = free.size();
    const std::size_t k = inst.num_vehicles();

    // table[v][free_mask | required_bits]
    std::vector<std::vector<double>> table(k);
    std::vector<std::size_t> req_bits(k);
    for (std::size_t v = 0; v < k; ++v) {
        std::vector<int> ids(free.begin(), free.end());
        auto req = inst.required(static_cast<int>(v));
        ids.insert(ids.end(), req.begin(), req.end());
        const auto& veh = inst.vehicle(static_cast<int>(v));
        table[v] = subset_tour_costs(inst.targets(), veh.depot, ids, veh.speed);
        req_bits[v] = ((std::size_t{1} << req.size()) - 1) << f;
    }

    auto cost = [&](std::size_t v, std::size_t mask) { return table[v][mask | req_bits[v]]; };

    double incumbent = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> masks(k, 0), best_masks(k, 0);

    // Iterative DFS over digits; digit[i] = vehicle of free target i.
    std::vector<std::size_t> digit(f, 0);
    auto leaf = [&] {
        double worst = 0.0;
        for (std::size_t v = 0; v < k; ++v) worst = std::max(worst, cost(v, masks[v]));
        if (worst < incumbent) {
            incumbent = worst;
            best_masks = masks;
        }
    };
    if (f == 0) {
        leaf();
    } else {
        std::size_t depth = 0;
        digit[0] = 0;
        for (;;) {
            if (digit[depth] == k) {
                // Exhausted this level; backtrack.
                if (depth == 0) break;
                --depth;
                masks[digit[depth]] &= ~(std::size_t{1} << depth);
                ++digit[depth];
                continue;
            }
            const std::size_t v = digit[depth];
            masks[v] |= std::size_t{1} << depth;
            if (prune && cost(v, masks[v]) >= incumbent) {
                masks[v] &= ~(std::size_t{1} << depth);
                ++digit[depth];
                continue;
            }
            if (depth + 1 == f) {
                leaf();
                masks[v] &= ~(std::size_t{1} << depth);
                ++digit[depth];
                continue;
            }
            ++depth;
            digit[depth] = 0;
        }
    }

    std::vector<Tour> tours;
    for (std::size_t v = 0; v < k; ++v) {
        std::vector<int> ids;
        for (std::size_t i = 0; i < f; ++i)
            if (best_masks[v] >> i & 1U) ids.push_back(free[i]);
        auto req = inst.required(static_cast<int>(v));
        ids.insert(ids.end(), req.begin(), req.end());
        const auto& veh = inst.vehicle(static_cast<int>(v));
        tours.push_back(held_karp(inst.targets(), veh.depot, ids, veh.speed, static_cast<int>(v)));
    }
    return make_solution(std::move(tours));
}

}  // namespace mmtsp
