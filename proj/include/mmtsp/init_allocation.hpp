#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "core_model.hpp"
#include "detail/min_cost_flow.hpp"
#include "detail/simplex.hpp"
#include "random.hpp"
#include "tour_solver.hpp"

namespace mmtsp {

// Free targets handed to each vehicle; assign[v] is ascending and the sets
// partition inst.free_targets().
struct Allocation {
    std::vector<std::vector<int>> assign;

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct MinCounts {
    std::vector<int> lower;
};

// Depot positions used only for the depot-to-target allocation costs.
struct EffectiveDepots {
    std::vector<Point> pos;
};

enum class AllocationMethod {
    MinCostFlow,  // exact transportation solve
    LpRounding,   // LP relaxation via simplex, then largest-fraction rounding
};

inline constexpr double kColocatedRadius = 0.1;

/// Minimum number of free targets per vehicle: floor(|T| v_j / sum v) - |R_j|,
/// clamped at zero. If heavy required sets make the clamped bounds exceed the
/// free-target count, the bounds are scaled down proportionally (with floors)
/// so the system stays feasible.
inline MinCounts min_target_counts(const Instance& inst) {
    const auto vehicles = inst.vehicles();
    double total_speed = 0.0;
    for (const auto& v : vehicles) total_speed += v.speed;
    const double n = static_cast<double>(inst.num_targets());
    MinCounts mc;
    long long sum = 0;
    for (std::size_t j = 0; j < vehicles.size(); ++j) {
        // The 1e-9 keeps exact integer shares (e.g. 30 * 1.5 / 4.5) from flooring down.
        const auto share = static_cast<long long>(std::floor(n * vehicles[j].speed / total_speed + 1e-9));
        const long long req = static_cast<long long>(inst.required(static_cast<int>(j)).size());
        const long long lower = std::max(0LL, share - req);
        mc.lower.push_back(static_cast<int>(lower));
        sum += lower;
    }
    const auto free = static_cast<long long>(inst.free_targets().size());
    if (sum > free) {
        for (auto& l : mc.lower) l = static_cast<int>(free * l / sum);
    }
    return mc;
}

/// Points of an m-vehicle group spread on a circle, first at angle theta0.
inline std::vector<Point> place_on_circle(Point center, std::size_t m, double theta0, double radius) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = theta0 + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
        out.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    return out;
}

/// Vehicles sharing a depot (exact coordinate equality) are spread on a circle
/// of `radius` around it; the first vehicle of each group takes a random angle.
/// One angle is drawn per group, in order of the group's lowest vehicle id.
template <class URBG>
EffectiveDepots perturb_colocated_depots(const Instance& inst, URBG& rng, double radius = kColocatedRadius) {
    const auto vehicles = inst.vehicles();
    EffectiveDepots eff;
    for (const auto& v : vehicles) eff.pos.push_back(v.depot);
    std::vector<bool> done(vehicles.size(), false);
    for (std::size_t a = 0; a < vehicles.size(); ++a) {
        if (done[a]) continue;
        std::vector<std::size_t> group{a};
        for (std::size_t b = a + 1; b < vehicles.size(); ++b)
            if (!done[b] && vehicles[b].depot == vehicles[a].depot) group.push_back(b);
        for (auto g : group) done[g] = true;
        if (group.size() < 2) continue;
        const auto pts = place_on_circle(vehicles[a].depot, group.size(), uniform_angle(rng), radius);
        for (std::size_t i = 0; i < group.size(); ++i) eff.pos[group[i]] = pts[i];
    }
    return eff;
}

inline EffectiveDepots true_depots(const Instance& inst) {
    EffectiveDepots eff;
    for (const auto& v : inst.vehicles()) eff.pos.push_back(v.depot);
    return eff;
}

// c_tj: time for vehicle j to go from its effective depot to target t.
inline double allocation_cost(const Instance& inst, const EffectiveDepots& eff, int t, int j) {
    return travel_time(eff.pos[static_cast<std::size_t>(j)], inst.target(t), inst.vehicle(j).speed);
}

inline double allocation_cost(const Instance& inst, const EffectiveDepots& eff, const Allocation& a) {
    double total = 0.0;
    for (std::size_t j = 0; j < a.assign.size(); ++j)
        for (int t : a.assign[j]) total += allocation_cost(inst, eff, t, static_cast<int>(j));
    return total;
}

namespace detail {

inline Allocation solve_allocation_flow(const Instance& inst, const EffectiveDepots& eff, const MinCounts& counts) {
    const auto free = inst.free_targets();
    const std::size_t f = free.size();
    const std::size_t k = inst.num_vehicles();
    // Nodes: source, f targets, k vehicles, sink.
    const std::size_t src = 0, sink = 1 + f + k;
    MinCostFlow mcf(sink + 1);
    double big = 1.0;
    for (int t : free) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) worst = std::max(worst, allocation_cost(inst, eff, t, static_cast<int>(j)));
        big += worst;
    }
    std::vector<std::vector<std::size_t>> arc(f, std::vector<std::size_t>(k));
    for (std::size_t i = 0; i < f; ++i) {
        mcf.add_arc(src, 1 + i, 1, 0.0);
        for (std::size_t j = 0; j < k; ++j)
            arc[i][j] = mcf.add_arc(1 + i, 1 + f + j, 1, allocation_cost(inst, eff, free[i], static_cast<int>(j)));
    }
    // Lower bounds as a discounted first tranche of each vehicle's capacity.
    for (std::size_t j = 0; j < k; ++j) {
        if (counts.lower[j] > 0) mcf.add_arc(1 + f + j, sink, counts.lower[j], -big);
        mcf.add_arc(1 + f + j, sink, static_cast<int>(f), 0.0);
    }
    if (mcf.run(src, sink, static_cast<int>(f)) != static_cast<int>(f))
        throw InfeasibleError("load balancing: could not route every free target");
    Allocation a{std::vector<std::vector<int>>(k)};
    for (std::size_t i = 0; i < f; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (mcf.flow(arc[i][j]) > 0) a.assign[j].push_back(free[i]);
    return a;
}

inline Allocation solve_allocation_lp(const Instance& inst, const EffectiveDepots& eff, const MinCounts& counts) {
    const auto free = inst.free_targets();
    const std::size_t f = free.size();
    const std::size_t k = inst.num_vehicles();
    // Columns: x_tj (f*k), then one surplus per vehicle.
    const std::size_t n = f * k + k;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < f; ++i) {
        std::vector<double> row(n, 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            row[i * k + j] = 1.0;
            c[i * k + j] = allocation_cost(inst, eff, free[i], static_cast<int>(j));
        }
        A.push_back(std::move(row));
        b.push_back(1.0);
    }
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> row(n, 0.0);
        for (std::size_t i = 0; i < f; ++i) row[i * k + j] = 1.0;
        row[f * k + j] = -1.0;
        A.push_back(std::move(row));
        b.push_back(static_cast<double>(counts.lower[j]));
    }
    auto x = simplex_minimize(std::move(A), std::move(b), c);
    if (!x) throw InfeasibleError("load balancing LP is infeasible");
    Allocation a{std::vector<std::vector<int>>(k)};
    for (std::size_t i = 0; i < f; ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < k; ++j)
            if ((*x)[i * k + j] > (*x)[i * k + best]) best = j;
        a.assign[best].push_back(free[i]);
    }
    return a;
}

}  // namespace detail

/// Minimum-cost assignment of free targets to vehicles subject to the
/// per-vehicle lower bounds, with c_tj measured from the effective depots.
inline Allocation solve_load_balancing(const Instance& inst, const EffectiveDepots& eff, const MinCounts& counts,
                                       AllocationMethod method = AllocationMethod::MinCostFlow) {
    const std::size_t k = inst.num_vehicles();
    if (eff.pos.size() != k || counts.lower.size() != k)
        throw InvalidInput("load balancing: per-vehicle inputs must have k entries");
    long long need = 0;
    for (int l : counts.lower) {
        if (l < 0) throw InvalidInput("load balancing: negative lower bound");
        need += l;
    }
    if (need > static_cast<long long>(inst.free_targets().size()))
        throw InfeasibleError("load balancing: lower bounds exceed the number of free targets");
    return method == AllocationMethod::MinCostFlow ? detail::solve_allocation_flow(inst, eff, counts)
                                                   : detail::solve_allocation_lp(inst, eff, counts);
}

/// Free targets currently served by each vehicle of `s`.
inline Allocation allocation_of(const Instance& inst, const Solution& s) {
    Allocation a{std::vector<std::vector<int>>(inst.num_vehicles())};
    for (const auto& t : s.tours)
        for (int id : t.stops())
            if (inst.owner(id) == kUnowned) a.assign[static_cast<std::size_t>(t.vehicle)].push_back(id);
    for (auto& set : a.assign) std::sort(set.begin(), set.end());
    return a;
}

/// One tour per vehicle over its allocated free targets plus its required
/// targets, from the depots stored in `inst`.
inline Solution build_solution(const Instance& inst, const Allocation& alloc, TourMode mode) {
    if (alloc.assign.size() != inst.num_vehicles()) throw InvalidInput("allocation must have one set per vehicle");
    std::vector<Tour> tours;
    for (int v = 0; v < static_cast<int>(inst.num_vehicles()); ++v) {
        std::vector<int> ids = alloc.assign[static_cast<std::size_t>(v)];
        auto req = inst.required(v);
        ids.insert(ids.end(), req.begin(), req.end());
        tours.push_back(solve_tsp(inst, v, ids, mode));
    }
    return make_solution(std::move(tours));
}

/// Initial feasible solution. Tours always start from the true depots; the
/// effective depots only influence the allocation.
inline Solution build_initial_solution(const Instance& inst, const Allocation& alloc, TourMode mode) {
    return build_solution(inst, alloc, mode);
}

}  // namespace mmtsp
