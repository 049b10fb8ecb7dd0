#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "core_model.hpp"

namespace mmtsp {

enum class TourMode { Heuristic, Exact };

inline const char* to_string(TourMode m) { return m == TourMode::Exact ? "exact" : "heuristic"; }

// Largest target count accepted by Held-Karp (2^16 * 16 DP cells).
inline constexpr std::size_t kExactCap = 16;

struct TourRequest {
    Point depot;
    std::vector<int> targets;  // indices into the target list; order is irrelevant
    double speed = 1.0;
    TourMode mode = TourMode::Heuristic;
    int vehicle = 0;  // copied into the resulting Tour
};

namespace detail {

// Dense travel-time matrix over {depot} + requested targets. Local vertex 0 is
// the depot, local i >= 1 is ids[i - 1]; ids are sorted ascending so the
// lowest local index is also the lowest target index.
class LocalMatrix {
public:
    LocalMatrix(std::span<const Point> points, Point depot, std::vector<int> ids, double speed)
        : ids_(std::move(ids)), n_(ids_.size() + 1), m_(n_ * n_, 0.0) {
        auto pt = [&](std::size_t i) { return i == 0 ? depot : points[static_cast<std::size_t>(ids_[i - 1])]; };
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) m_[i * n_ + j] = m_[j * n_ + i] = travel_time(pt(i), pt(j), speed);
    }

    [[nodiscard]] double operator()(std::size_t a, std::size_t b) const { return m_[a * n_ + b]; }
    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] int id(std::size_t local) const { return local == 0 ? kDepot : ids_[local - 1]; }

private:
    std::vector<int> ids_;
    std::size_t n_;
    std::vector<double> m_;
};

inline std::vector<int> checked_targets(std::span<const Point> points, std::span<const int> targets) {
    std::vector<int> ids(targets.begin(), targets.end());
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw InvalidInput("tour request lists a target twice");
    for (int t : ids)
        if (t < 0 || static_cast<std::size_t>(t) >= points.size())
            throw InvalidInput("tour request: unknown target " + std::to_string(t));
    return ids;
}

inline double route_cost(const LocalMatrix& c, std::span<const std::size_t> r) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) total += c(r[i], r[i + 1]);
    return total;
}

inline double improvement_eps(const LocalMatrix& c, std::span<const std::size_t> r) {
    return 1e-12 * std::max(1.0, route_cost(c, r));
}

// First-improvement 2-opt over a closed route r[0] = r[back] = depot. Scans
// i ascending, then j ascending; restarts the sweep after every move.
inline bool two_opt_pass(const LocalMatrix& c, std::vector<std::size_t>& r) {
    const std::size_t last = r.size() - 1;
    const double eps = improvement_eps(c, r);
    bool any = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i + 2 < last && !improved; ++i) {
            for (std::size_t j = i + 2; j < last && !improved; ++j) {
                const double delta = c(r[i], r[j]) + c(r[i + 1], r[j + 1]) - c(r[i], r[i + 1]) - c(r[j], r[j + 1]);
                if (delta < -eps) {
                    std::reverse(r.begin() + static_cast<std::ptrdiff_t>(i + 1), r.begin() + static_cast<std::ptrdiff_t>(j + 1));
                    improved = any = true;
                }
            }
        }
    }
    return any;
}

// Or-opt: relocate a segment of 1..3 consecutive targets to another edge,
// optionally reversed. First improvement, restart after every move.
inline bool or_opt_pass(const LocalMatrix& c, std::vector<std::size_t>& r) {
    const double eps = improvement_eps(c, r);
    bool any = false;
    bool improved = true;
    while (improved) {
        improved = false;
        const std::size_t m = r.size() - 2;  // number of targets
        for (std::size_t len = 1; len <= 3 && !improved; ++len) {
            if (len > m) break;
            for (std::size_t s = 1; s + len - 1 <= m && !improved; ++s) {
                const std::size_t e = s + len - 1;
                const std::size_t prev = r[s - 1], next = r[e + 1], first = r[s], lastv = r[e];
                const double gain = c(prev, first) + c(lastv, next) - c(prev, next);
                for (std::size_t p = 0; p + 1 < r.size() && !improved; ++p) {
                    if (p + 1 >= s && p <= e) continue;  // edge touches the segment
                    const std::size_t a = r[p], b = r[p + 1];
                    const double base = c(a, b);
                    const double fwd = c(a, first) + c(lastv, b) - base;
                    const double rev = c(a, lastv) + c(first, b) - base;
                    const bool reversed = rev < fwd;
                    if (std::min(fwd, rev) - gain < -eps) {
                        std::vector<std::size_t> seg(r.begin() + static_cast<std::ptrdiff_t>(s),
                                                     r.begin() + static_cast<std::ptrdiff_t>(e + 1));
                        if (reversed) std::reverse(seg.begin(), seg.end());
                        std::vector<std::size_t> out;
                        out.reserve(r.size());
                        for (std::size_t q = 0; q < r.size(); ++q) {
                            if (q >= s && q <= e) continue;
                            out.push_back(r[q]);
                            if (q == p) out.insert(out.end(), seg.begin(), seg.end());
                        }
                        r = std::move(out);
                        improved = any = true;
                    }
                }
            }
        }
    }
    return any;
}

inline std::vector<std::size_t> nearest_neighbor_route(const LocalMatrix& c) {
    const std::size_t n = c.size();
    std::vector<std::size_t> r{0};
    std::vector<bool> used(n, false);
    used[0] = true;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j < n; ++j)
            if (!used[j] && c(r.back(), j) < best_d) {
                best_d = c(r.back(), j);
                best = j;
            }
        used[best] = true;
        r.push_back(best);
    }
    r.push_back(0);
    return r;
}

// Optimal route over all local vertices by DP over subsets.
inline std::vector<std::size_t> held_karp_route(const LocalMatrix& c) {
    const std::size_t m = c.size() - 1;
    if (m == 0) return {0, 0};
    const std::size_t full = (std::size_t{1} << m) - 1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp((full + 1) * m, inf);
    std::vector<std::uint8_t> parent((full + 1) * m, 0);
    for (std::size_t j = 0; j < m; ++j) dp[(std::size_t{1} << j) * m + j] = c(0, j + 1);
    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask >> j & 1U)) continue;
            const double cur = dp[mask * m + j];
            if (cur == inf) continue;
            for (std::size_t nx = 0; nx < m; ++nx) {
                if (mask >> nx & 1U) continue;
                const std::size_t nm = mask | (std::size_t{1} << nx);
                const double cand = cur + c(j + 1, nx + 1);
                if (cand < dp[nm * m + nx]) {
                    dp[nm * m + nx] = cand;
                    parent[nm * m + nx] = static_cast<std::uint8_t>(j);
                }
            }
        }
    }
    std::size_t end = 0;
    double best = inf;
    for (std::size_t j = 0; j < m; ++j) {
        const double cand = dp[full * m + j] + c(j + 1, 0);
        if (cand < best) {
            best = cand;
            end = j;
        }
    }
    std::vector<std::size_t> r(m + 2, 0);
    std::size_t mask = full;
    std::size_t cur = end;
    for (std::size_t pos = m; pos >= 1; --pos) {
        r[pos] = cur + 1;
        const std::size_t prev = parent[mask * m + cur];
        mask &= ~(std::size_t{1} << cur);
        cur = prev;
    }
    return r;
}

inline Tour to_tour(const LocalMatrix& c, std::vector<std::size_t> r, int vehicle, std::span<const Point> points,
                    Point depot, double speed, bool canonical) {
    // A cycle and its reverse have the same cost; pick the orientation whose
    // first target has the lower index so equal cycles give equal sequences.
    if (canonical && r.size() > 3 && c.id(r[1]) > c.id(r[r.size() - 2])) std::reverse(r.begin(), r.end());
    Tour t;
    t.vehicle = vehicle;
    t.sequence.clear();
    for (auto v : r) t.sequence.push_back(c.id(v));
    t.duration = sequence_duration(t.sequence, points, depot, speed);
    return t;
}

}  // namespace detail

/// Provably optimal closed tour from `depot` through `targets`.
inline Tour held_karp(std::span<const Point> points, Point depot, std::span<const int> targets, double speed,
                      int vehicle = 0, std::size_t exact_cap = kExactCap) {
    if (targets.size() > exact_cap || targets.size() > 24)
        throw CapacityError("held_karp: " + std::to_string(targets.size()) + " targets exceeds cap " +
                            std::to_string(exact_cap));
    detail::LocalMatrix c(points, depot, detail::checked_targets(points, targets), speed);
    return detail::to_tour(c, detail::held_karp_route(c), vehicle, points, depot, speed, true);
}

/// Closed tour visiting every requested target once. Heuristic mode runs
/// nearest neighbor, then alternates 2-opt and Or-opt until neither improves;
/// Exact mode runs Held-Karp.
inline Tour solve_tsp(std::span<const Point> points, const TourRequest& req, std::size_t exact_cap = kExactCap) {
    if (req.mode == TourMode::Exact)
        return held_karp(points, req.depot, req.targets, req.speed, req.vehicle, exact_cap);
    detail::LocalMatrix c(points, req.depot, detail::checked_targets(points, req.targets), req.speed);
    auto r = detail::nearest_neighbor_route(c);
    bool changed = true;
    while (changed) {
        changed = detail::two_opt_pass(c, r);
        changed = detail::or_opt_pass(c, r) || changed;
    }
    return detail::to_tour(c, std::move(r), req.vehicle, points, req.depot, req.speed, true);
}

/// Tour through `targets` for vehicle `v` of `inst`, from its (possibly moved) depot.
inline Tour solve_tsp(const Instance& inst, int v, std::span<const int> targets, TourMode mode) {
    const auto& veh = inst.vehicle(v);
    return solve_tsp(inst.targets(), TourRequest{veh.depot, {targets.begin(), targets.end()}, veh.speed, mode, v});
}

/// 2-opt local optimum reached from `t`; never longer than `t`, same target set.
inline Tour two_opt_improve(const Tour& t, std::span<const Point> points, Point depot, double speed) {
    (void)sequence_duration(t.sequence, points, depot, speed);  // validates closure and indices
    auto stops = t.stops();
    detail::LocalMatrix c(points, depot, detail::checked_targets(points, stops), speed);
    // Map the tour onto local indices, keeping its order.
    std::vector<std::size_t> r{0};
    for (int id : stops) {
        for (std::size_t l = 1; l < c.size(); ++l)
            if (c.id(l) == id) r.push_back(l);
    }
    r.push_back(0);
    if (!detail::two_opt_pass(c, r)) return t;
    return detail::to_tour(c, std::move(r), t.vehicle, points, depot, speed, false);
}

/// Closed-tour cost of every subset of `targets` (bit b of the mask selects
/// targets[b]), from one Held-Karp table. Entry 0 is the depot-only tour.
inline std::vector<double> subset_tour_costs(std::span<const Point> points, Point depot, std::span<const int> targets,
                                             double speed, std::size_t exact_cap = kExactCap) {
    if (targets.size() > exact_cap || targets.size() > 24)
        throw CapacityError("subset_tour_costs: " + std::to_string(targets.size()) + " targets exceeds cap");
    const std::size_t m = targets.size();
    std::vector<Point> pts;
    pts.reserve(m + 1);
    pts.push_back(depot);
    for (int t : targets) {
        if (t < 0 || static_cast<std::size_t>(t) >= points.size()) throw InvalidInput("subset_tour_costs: bad target");
        pts.push_back(points[static_cast<std::size_t>(t)]);
    }
    auto c = [&](std::size_t a, std::size_t b) { return travel_time(pts[a], pts[b], speed); };
    std::vector<double> cm((m + 1) * (m + 1));
    for (std::size_t a = 0; a <= m; ++a)
        for (std::size_t b = 0; b <= m; ++b) cm[a * (m + 1) + b] = c(a, b);
    auto cost = [&](std::size_t a, std::size_t b) { return cm[a * (m + 1) + b]; };

    const std::size_t subsets = std::size_t{1} << m;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(subsets * std::max<std::size_t>(m, 1), inf);
    std::vector<double> out(subsets, inf);
    out[0] = 0.0;
    for (std::size_t j = 0; j < m; ++j) dp[(std::size_t{1} << j) * m + j] = cost(0, j + 1);
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        double best = inf;
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask >> j & 1U)) continue;
            const double cur = dp[mask * m + j];
            best = std::min(best, cur + cost(j + 1, 0));
            for (std::size_t nx = 0; nx < m; ++nx) {
                if (mask >> nx & 1U) continue;
                auto& slot = dp[(mask | (std::size_t{1} << nx)) * m + nx];
                slot = std::min(slot, cur + cost(j + 1, nx + 1));
            }
        }
        out[mask] = best;
    }
    return out;
}

}  // namespace mmtsp
