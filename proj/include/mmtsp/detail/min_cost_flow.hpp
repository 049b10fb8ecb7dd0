#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace mmtsp::detail {

// Successive shortest paths with Bellman-Ford. Sized for assignment problems
// of a few hundred arcs; negative arc costs are fine as long as the initial
// graph has no negative cycle.
class MinCostFlow {
public:
    explicit MinCostFlow(std::size_t nodes) : adj_(nodes) {}

    // Returns the arc id, usable with flow().
    std::size_t add_arc(std::size_t from, std::size_t to, int capacity, double cost) {
        const std::size_t id = arcs_.size();
        arcs_.push_back({to, capacity, cost});
        adj_[from].push_back(id);
        arcs_.push_back({from, 0, -cost});
        adj_[to].push_back(id + 1);
        return id;
    }

    [[nodiscard]] int flow(std::size_t arc) const { return arcs_[arc ^ 1U].capacity; }

    // Pushes up to `amount` units from s to t; returns the units sent.
    int run(std::size_t s, std::size_t t, int amount) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        const std::size_t n = adj_.size();
        int sent = 0;
        while (sent < amount) {
            std::vector<double> dist(n, inf);
            std::vector<std::size_t> via(n, npos);
            dist[s] = 0.0;
            for (std::size_t round = 0; round + 1 < n; ++round) {
                bool changed = false;
                for (std::size_t u = 0; u < n; ++u) {
                    if (dist[u] == inf) continue;
                    for (std::size_t id : adj_[u]) {
                        const Arc& a = arcs_[id];
                        if (a.capacity > 0 && dist[u] + a.cost < dist[a.to] - 1e-12) {
                            dist[a.to] = dist[u] + a.cost;
                            via[a.to] = id;
                            changed = true;
                        }
                    }
                }
                if (!changed) break;
            }
            if (dist[t] == inf) break;
            int push = amount - sent;
            for (std::size_t v = t; v != s; v = arcs_[via[v] ^ 1U].to) push = std::min(push, arcs_[via[v]].capacity);
            for (std::size_t v = t; v != s; v = arcs_[via[v] ^ 1U].to) {
                arcs_[via[v]].capacity -= push;
                arcs_[via[v] ^ 1U].capacity += push;
            }
            sent += push;
        }
        return sent;
    }

private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    struct Arc {
        std::size_t to;
        int capacity;
        double cost;
    };

    std::vector<Arc> arcs_;
    std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace mmtsp::detail
