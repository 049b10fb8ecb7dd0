#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace mmtsp {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Vehicle {
    double speed = 1.0;  // grid units per time unit
    Point depot;
};

// Vertex ids inside a tour sequence: target indices are >= 0, the owning
// vehicle's depot is kDepot. Depots never share ids with targets.
inline constexpr int kDepot = -1;
inline constexpr int kUnowned = -1;

/// Euclidean distance divided by speed.
inline double travel_time(Point a, Point b, double speed) {
    if (!is_finite(a) || !is_finite(b)) throw InvalidInput("travel_time: non-finite coordinate");
    if (!(speed > 0.0) || !std::isfinite(speed)) throw InvalidInput("travel_time: speed must be positive");
    return std::hypot(a.x - b.x, a.y - b.y) / speed;
}

inline double travel_time(Point a, Point b, const Vehicle& v) { return travel_time(a, b, v.speed); }

/// Targets, vehicles and the per-vehicle required-target sets. Vehicles are
/// indexed 0..k-1 in code; the file format and reports number them 1..k.
///
/// Construction validates the instance; an Instance that exists is valid.
class Instance {
public:
    Instance(std::vector<Point> targets, std::vector<Vehicle> vehicles,
             std::vector<std::vector<int>> required = {})
        : targets_(std::move(targets)), vehicles_(std::move(vehicles)), required_(std::move(required)) {
        if (targets_.empty()) throw InvalidInput("instance needs at least one target");
        if (vehicles_.empty()) throw InvalidInput("instance needs at least one vehicle");
        for (const auto& p : targets_)
            if (!is_finite(p)) throw InvalidInput("non-finite target coordinate");
        for (const auto& v : vehicles_) {
            if (!is_finite(v.depot)) throw InvalidInput("non-finite depot coordinate");
            if (!(v.speed > 0.0) || !std::isfinite(v.speed)) throw InvalidInput("vehicle speed must be positive");
        }
        if (required_.size() > vehicles_.size()) throw InvalidInput("required sets for unknown vehicles");
        required_.resize(vehicles_.size());
        owner_.assign(targets_.size(), kUnowned);
        for (std::size_t v = 0; v < required_.size(); ++v) {
            auto& r = required_[v];
            std::sort(r.begin(), r.end());
            for (int t : r) {
                if (t < 0 || static_cast<std::size_t>(t) >= targets_.size())
                    throw InvalidInput("required target index out of range: " + std::to_string(t));
                if (owner_[t] != kUnowned)
                    throw InvalidInput("target " + std::to_string(t) + " required by more than one vehicle");
                owner_[t] = static_cast<int>(v);
            }
        }
        for (int t = 0; t < static_cast<int>(targets_.size()); ++t)
            if (owner_[t] == kUnowned) free_.push_back(t);
    }

    [[nodiscard]] std::size_t num_targets() const { return targets_.size(); }
    [[nodiscard]] std::size_t num_vehicles() const { return vehicles_.size(); }
    [[nodiscard]] std::span<const Point> targets() const { return targets_; }
    [[nodiscard]] Point target(int t) const { return targets_.at(static_cast<std::size_t>(t)); }
    [[nodiscard]] std::span<const Vehicle> vehicles() const { return vehicles_; }
    [[nodiscard]] const Vehicle& vehicle(int v) const { return vehicles_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] std::span<const int> required(int v) const { return required_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] const std::vector<std::vector<int>>& required_sets() const { return required_; }
    // Vehicle that must serve target t, or kUnowned.
    [[nodiscard]] int owner(int t) const { return owner_.at(static_cast<std::size_t>(t)); }
    // T \ union(R_i), ascending.
    [[nodiscard]] std::span<const int> free_targets() const { return free_; }

    // Same targets and required sets, depots moved.
    [[nodiscard]] Instance with_depots(std::span<const Point> depots) const {
        if (depots.size() != vehicles_.size()) throw InvalidInput("with_depots: one depot per vehicle expected");
        auto vs = vehicles_;
        for (std::size_t v = 0; v < vs.size(); ++v) vs[v].depot = depots[v];
        return Instance(targets_, std::move(vs), required_);
    }

private:
    std::vector<Point> targets_;
    std::vector<Vehicle> vehicles_;
    std::vector<std::vector<int>> required_;
    std::vector<int> owner_;
    std::vector<int> free_;
};

/// Closed walk of one vehicle: sequence = (kDepot, t1, ..., tn, kDepot).
struct Tour {
    int vehicle = 0;
    std::vector<int> sequence{kDepot, kDepot};
    double duration = 0.0;

    // Visited targets in order, depots stripped.
    [[nodiscard]] std::span<const int> stops() const {
        if (sequence.size() < 2) return {};
        return std::span<const int>(sequence).subspan(1, sequence.size() - 2);
    }
};

struct Solution {
    std::vector<Tour> tours;  // tours[v] belongs to vehicle v
    double objective = 0.0;
};

inline double max_duration(std::span<const Tour> tours) {
    double m = 0.0;
    for (const auto& t : tours) m = std::max(m, t.duration);
    return m;
}

/// Lowest-indexed vehicle attaining the maximum tour duration.
inline int maximal_vehicle(const Solution& s) {
    int best = 0;
    for (int v = 1; v < static_cast<int>(s.tours.size()); ++v)
        if (s.tours[v].duration > s.tours[best].duration) best = v;
    return best;
}

inline Solution make_solution(std::vector<Tour> tours) {
    Solution s{std::move(tours), 0.0};
    s.objective = max_duration(s.tours);
    return s;
}

/// Sum of edge times along a sequence for a given depot and speed.
inline double sequence_duration(std::span<const int> seq, std::span<const Point> targets, Point depot, double speed) {
    if (seq.size() < 2 || seq.front() != kDepot || seq.back() != kDepot)
        throw InvariantViolation("tour sequence is not closed at the depot");
    auto at = [&](int id) {
        if (id == kDepot) return depot;
        if (id < 0 || static_cast<std::size_t>(id) >= targets.size())
            throw InvariantViolation("tour visits unknown target " + std::to_string(id));
        return targets[static_cast<std::size_t>(id)];
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) total += travel_time(at(seq[i]), at(seq[i + 1]), speed);
    return total;
}

inline double tour_duration(const Tour& t, const Instance& inst) {
    if (t.vehicle < 0 || static_cast<std::size_t>(t.vehicle) >= inst.num_vehicles())
        throw InvariantViolation("tour belongs to unknown vehicle " + std::to_string(t.vehicle));
    const auto& v = inst.vehicle(t.vehicle);
    return sequence_duration(t.sequence, inst.targets(), v.depot, v.speed);
}

/// Per-vehicle travel-time matrices over {depot} + targets. Entry values are
/// bit-identical to travel_time() on the same points.
class TravelTimes {
public:
    explicit TravelTimes(const Instance& inst) : n_(inst.num_targets() + 1) {
        tables_.reserve(inst.num_vehicles());
        for (const auto& veh : inst.vehicles()) {
            std::vector<double> m(n_ * n_, 0.0);
            auto pt = [&](std::size_t i) { return i == 0 ? veh.depot : inst.targets()[i - 1]; };
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = i + 1; j < n_; ++j) m[i * n_ + j] = m[j * n_ + i] = travel_time(pt(i), pt(j), veh.speed);
            tables_.push_back(std::move(m));
        }
    }

    [[nodiscard]] double operator()(int vehicle, int a, int b) const {
        return tables_[static_cast<std::size_t>(vehicle)][slot(a) * n_ + slot(b)];
    }

    [[nodiscard]] double duration(const Tour& t) const {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < t.sequence.size(); ++i) total += (*this)(t.vehicle, t.sequence[i], t.sequence[i + 1]);
        return total;
    }

private:
    static std::size_t slot(int id) { return static_cast<std::size_t>(id + 1); }

    std::size_t n_;
    std::vector<std::vector<double>> tables_;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
    Malformed,          // wrong tour count, open sequence, unknown vertex, wrong vehicle id
    UncoveredTarget,
    DuplicatedTarget,
    RequiredMisplaced,
    DurationMismatch,
    ObjectiveMismatch,
};

struct Violation {
    ViolationKind kind;
    int vehicle = -1;
    int target = -1;
    std::string detail;
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::Malformed: return "malformed";
        case ViolationKind::UncoveredTarget: return "uncovered target";
        case ViolationKind::DuplicatedTarget: return "duplicated target";
        case ViolationKind::RequiredMisplaced: return "required-assignment violated";
        case ViolationKind::DurationMismatch: return "duration mismatch";
        case ViolationKind::ObjectiveMismatch: return "objective mismatch";
    }
    return "unknown";
}

/// Checks every Solution invariant against the instance. Never throws on
/// type-correct input; each violated condition yields one entry.
inline std::vector<Violation> validate_solution(const Instance& inst, const Solution& s) {
    std::vector<Violation> out;
    const int n = static_cast<int>(inst.num_targets());
    const int k = static_cast<int>(inst.num_vehicles());

    if (static_cast<int>(s.tours.size()) != k)
        out.push_back({ViolationKind::Malformed, -1, -1,
                       "expected " + std::to_string(k) + " tours, got " + std::to_string(s.tours.size())});

    std::vector<int> served_by(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < static_cast<int>(s.tours.size()); ++v) {
        const Tour& t = s.tours[v];
        if (t.vehicle != v) {
            out.push_back({ViolationKind::Malformed, v, -1, "tour slot holds vehicle " + std::to_string(t.vehicle)});
            continue;
        }
        if (v >= k) continue;
        const auto& seq = t.sequence;
        if (seq.size() < 2 || seq.front() != kDepot || seq.back() != kDepot) {
            out.push_back({ViolationKind::Malformed, v, -1, "sequence not closed at depot"});
            continue;
        }
        bool ok = true;
        for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
            const int id = seq[i];
            if (id < 0 || id >= n) {
                out.push_back({ViolationKind::Malformed, v, id, "unknown vertex in sequence"});
                ok = false;
                continue;
            }
            if (served_by[id] != -1) {
                out.push_back({ViolationKind::DuplicatedTarget, v, id, "also served by vehicle " + std::to_string(served_by[id])});
                continue;
            }
            served_by[id] = v;
        }
        if (ok) {
            const double actual = tour_duration(t, inst);
            if (!(std::abs(actual - t.duration) <= 1e-9 * std::max(1.0, std::abs(actual))))
                out.push_back({ViolationKind::DurationMismatch, v, -1,
                               "stored " + std::to_string(t.duration) + ", actual " + std::to_string(actual)});
        }
    }
    for (int t = 0; t < n; ++t) {
        if (served_by[t] == -1) {
            out.push_back({ViolationKind::UncoveredTarget, -1, t, "target not on any tour"});
        } else if (inst.owner(t) != kUnowned && inst.owner(t) != served_by[t]) {
            out.push_back({ViolationKind::RequiredMisplaced, served_by[t], t,
                           "required by vehicle " + std::to_string(inst.owner(t))});
        }
    }
    if (s.objective != max_duration(s.tours))
        out.push_back({ViolationKind::ObjectiveMismatch, -1, -1, "objective is not the maximum tour duration"});
    return out;
}

}  // namespace mmtsp
