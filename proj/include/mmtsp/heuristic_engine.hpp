#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "core_model.hpp"
#include "init_allocation.hpp"
#include "random.hpp"
#include "tour_solver.hpp"

namespace mmtsp {

struct HeuristicConfig {
    TourMode tour_mode = TourMode::Heuristic;
    AllocationMethod allocation = AllocationMethod::MinCostFlow;
    std::uint64_t seed = 0;
    // Consecutive non-improving perturbation rounds before stopping.
    int max_no_improve = 5;
    double perturb_step_deg = 144.0;
    double colocated_radius = kColocatedRadius;
    // The displacement radius r_j is a time (distance / speed). By default it
    // is used as a distance as-is; set this to multiply it back by v_j.
    bool spatial_radius = false;
    // Called with every solution accepted by local search and the perturbation
    // loop, together with the instance it is feasible for (the perturbed one
    // inside a perturbation round).
    std::function<void(const Instance&, const Solution&)> on_accept;
};

struct SavingsEntry {
    int target = -1;
    double value = 0.0;
};

struct InsertionQuote {
    int vehicle = -1;
    std::size_t edge_position = 0;  // insert between sequence[l] and sequence[l + 1]
    double delta = 0.0;
};

struct StageTrace {
    double after_init = 0.0;
    double after_local_search = 0.0;
    double after_perturbation = 0.0;
    int iterations = 0;  // perturbation rounds
    int local_search_moves = 0;
    double init_s = 0.0;
    double local_search_s = 0.0;
    double perturbation_s = 0.0;
};

// ---------------------------------------------------------------------------
// Local search

/// Savings of removing each non-required target from vehicle i's tour,
/// sorted by value descending, ties by target index ascending.
inline std::vector<SavingsEntry> compute_savings(const Solution& sol, const Instance& inst, int i) {
    const Tour& tour = sol.tours.at(static_cast<std::size_t>(i));
    const Vehicle& veh = inst.vehicle(i);
    auto at = [&](int id) { return id == kDepot ? veh.depot : inst.target(id); };
    std::vector<SavingsEntry> out;
    const auto& seq = tour.sequence;
    for (std::size_t p = 1; p + 1 < seq.size(); ++p) {
        const int t = seq[p];
        if (inst.owner(t) == i) continue;
        const Point prev = at(seq[p - 1]), cur = at(t), next = at(seq[p + 1]);
        const double value =
            travel_time(prev, cur, veh.speed) + travel_time(cur, next, veh.speed) - travel_time(prev, next, veh.speed);
        out.push_back({t, value});
    }
    std::sort(out.begin(), out.end(), [](const SavingsEntry& a, const SavingsEntry& b) {
        return a.value != b.value ? a.value > b.value : a.target < b.target;
    });
    return out;
}

inline double insertion_delta(const Instance& inst, const Tour& tour, std::size_t l, int t) {
    const Vehicle& veh = inst.vehicle(tour.vehicle);
    auto at = [&](int id) { return id == kDepot ? veh.depot : inst.target(id); };
    const Point a = at(tour.sequence[l]), b = at(tour.sequence[l + 1]), p = inst.target(t);
    return travel_time(a, p, veh.speed) + travel_time(p, b, veh.speed) - travel_time(a, b, veh.speed);
}

/// Cheapest insertion of target t into any tour other than `exclude`'s.
/// Ties go to the lower vehicle id, then the lower edge position.
inline InsertionQuote best_insertion(int t, const Solution& sol, const Instance& inst, int exclude) {
    InsertionQuote best;
    for (const Tour& tour : sol.tours) {
        if (tour.vehicle == exclude) continue;
        for (std::size_t l = 0; l + 1 < tour.sequence.size(); ++l) {
            const double d = insertion_delta(inst, tour, l, t);
            if (best.vehicle < 0 || d < best.delta) best = {tour.vehicle, l, d};
        }
    }
    if (best.vehicle < 0) throw NoCandidateError("best_insertion: no vehicle other than the excluded one");
    return best;
}

/// Repeatedly moves one free target off the maximal tour onto the vehicle with
/// the cheapest insertion, re-solving both tours, while that lowers the
/// objective. Candidates are tried in descending savings order; the search
/// stops once every candidate of the current maximal tour has failed.
inline Solution local_search(const Instance& inst, Solution sol, const HeuristicConfig& cfg, int* moves = nullptr) {
    if (inst.num_vehicles() < 2) return sol;
    int accepted = 0;
    for (;;) {
        const int i = maximal_vehicle(sol);
        bool improved = false;
        for (const auto& entry : compute_savings(sol, inst, i)) {
            const InsertionQuote q = best_insertion(entry.target, sol, inst, i);
            const int m = q.vehicle;

            std::vector<int> donor;
            for (int id : sol.tours[i].stops())
                if (id != entry.target) donor.push_back(id);
            auto recv_stops = sol.tours[m].stops();
            std::vector<int> receiver(recv_stops.begin(), recv_stops.end());
            receiver.push_back(entry.target);

            Solution cand = sol;
            cand.tours[i] = solve_tsp(inst, i, donor, cfg.tour_mode);
            cand.tours[m] = solve_tsp(inst, m, receiver, cfg.tour_mode);
            cand.objective = max_duration(cand.tours);
            if (cand.objective < sol.objective) {
                sol = std::move(cand);
                ++accepted;
                if (cfg.on_accept) cfg.on_accept(inst, sol);
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    if (moves) *moves += accepted;
    return sol;
}

// ---------------------------------------------------------------------------
// Perturbation

/// r_j: mean time from vehicle j's depot to the two targets adjacent to it;
/// 0 for a depot-only tour.
inline double perturbation_radius(const Solution& sol, const Instance& inst, int j) {
    const Tour& t = sol.tours.at(static_cast<std::size_t>(j));
    if (t.sequence.size() < 3) return 0.0;
    const Vehicle& veh = inst.vehicle(j);
    const Point first = inst.target(t.sequence[1]);
    const Point last = inst.target(t.sequence[t.sequence.size() - 2]);
    return 0.5 * (std::hypot(veh.depot.x - first.x, veh.depot.y - first.y) / veh.speed +
                  std::hypot(veh.depot.x - last.x, veh.depot.y - last.y) / veh.speed);
}

struct PerturbState {
    std::vector<double> base_angles;  // radians, one per vehicle
    int iteration = 0;
    int no_improve_streak = 0;
    double step_deg = 144.0;

    // base + iteration * step, reduced mod 360 degrees before conversion so
    // that angles recur exactly once iteration * step is a multiple of 360.
    [[nodiscard]] double angle(int vehicle, int at_iteration) const {
        const double offset_deg = std::fmod(step_deg * at_iteration, 360.0);
        return base_angles.at(static_cast<std::size_t>(vehicle)) + offset_deg * std::numbers::pi / 180.0;
    }
    [[nodiscard]] double angle(int vehicle) const { return angle(vehicle, iteration); }
};

struct PerturbOutcome {
    Solution solution;
    int iterations = 0;
    int local_search_moves = 0;
};

/// Depot positions for one perturbation round of `best`.
inline std::vector<Point> perturbed_depots(const Instance& inst, const Solution& best, const PerturbState& st,
                                           const HeuristicConfig& cfg) {
    std::vector<Point> depots;
    for (int v = 0; v < static_cast<int>(inst.num_vehicles()); ++v) {
        const auto& veh = inst.vehicle(v);
        double r = perturbation_radius(best, inst, v);
        if (cfg.spatial_radius) r *= veh.speed;
        if (r == 0.0) {
            depots.push_back(veh.depot);
            continue;
        }
        const double a = st.angle(v);
        depots.push_back({veh.depot.x + r * std::cos(a), veh.depot.y + r * std::sin(a)});
    }
    return depots;
}

/// Escapes local minima by displacing every depot, re-running local search on
/// the displaced graph, and rebuilding tours at the true depots. Stops after
/// cfg.max_no_improve consecutive rounds without a strictly better objective.
template <class URBG>
PerturbOutcome perturbation_loop(const Instance& inst, Solution sol, URBG& rng, const HeuristicConfig& cfg) {
    PerturbOutcome out{std::move(sol), 0, 0};
    if (inst.num_vehicles() < 2) return out;
    PerturbState st;
    st.step_deg = cfg.perturb_step_deg;
    for (std::size_t v = 0; v < inst.num_vehicles(); ++v) st.base_angles.push_back(uniform_angle(rng));

    while (st.no_improve_streak < cfg.max_no_improve) {
        const Instance shifted = inst.with_depots(perturbed_depots(inst, out.solution, st, cfg));
        const Allocation incumbent = allocation_of(inst, out.solution);
        Solution local = build_solution(shifted, incumbent, cfg.tour_mode);
        local = local_search(shifted, std::move(local), cfg, &out.local_search_moves);
        Solution cand = build_solution(inst, allocation_of(inst, local), cfg.tour_mode);
        if (cand.objective < out.solution.objective) {
            out.solution = std::move(cand);
            st.no_improve_streak = 0;
            if (cfg.on_accept) cfg.on_accept(inst, out.solution);
        } else {
            ++st.no_improve_streak;
        }
        ++st.iteration;
    }
    out.iterations = st.iteration;
    return out;
}

// ---------------------------------------------------------------------------
// Pipeline

struct SolveResult {
    Solution solution;  // final
    StageTrace trace;
    Solution initial;
    Solution after_local_search;
};

/// Load balancing, local search, then perturbation. Deterministic for a given
/// (instance, cfg); wall times are the only run-dependent output.
inline SolveResult solve(const Instance& inst, const HeuristicConfig& cfg) {
    using clock = std::chrono::steady_clock;
    auto seconds = [](clock::duration d) { return std::chrono::duration<double>(d).count(); };
    Rng rng(cfg.seed);
    SolveResult res;

    auto t0 = clock::now();
    const EffectiveDepots eff = perturb_colocated_depots(inst, rng, cfg.colocated_radius);
    const Allocation alloc = solve_load_balancing(inst, eff, min_target_counts(inst), cfg.allocation);
    res.initial = build_initial_solution(inst, alloc, cfg.tour_mode);
    if (cfg.on_accept) cfg.on_accept(inst, res.initial);
    res.trace.after_init = res.initial.objective;
    res.trace.init_s = seconds(clock::now() - t0);

    t0 = clock::now();
    res.after_local_search = local_search(inst, res.initial, cfg, &res.trace.local_search_moves);
    res.trace.after_local_search = res.after_local_search.objective;
    res.trace.local_search_s = seconds(clock::now() - t0);

    t0 = clock::now();
    auto pert = perturbation_loop(inst, res.after_local_search, rng, cfg);
    res.solution = std::move(pert.solution);
    res.trace.iterations = pert.iterations;
    res.trace.local_search_moves += pert.local_search_moves;
    res.trace.after_perturbation = res.solution.objective;
    res.trace.perturbation_s = seconds(clock::now() - t0);
    return res;
}

}  // namespace mmtsp
