// Acceptance suite: runs every exit criterion and prints one PASS/FAIL line
// per criterion. Exit status is non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mmtsp/mmtsp.hpp"
#include "oracles.hpp"

using namespace mmtsp;

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(const char* id, const char* name, const Outcome& o) {
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << ' ' << name << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
}

std::string num(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << std::fixed << v;
    return os.str();
}

ExperimentConfig desk_config(double fraction, std::uint64_t seed) {
    auto cfg = scenario_preset(1);
    cfg.n_targets = 10;
    cfg.n_instances = 20;
    cfg.assign_fraction = fraction;
    cfg.seed = seed;
    cfg.oracle = true;
    cfg.tour_mode = TourMode::Exact;
    return cfg;
}

// Feasibility bookkeeping shared by every benchmark run (criterion 8).
std::size_t feasibility_checks = 0;
std::size_t feasibility_violations = 0;

ExperimentReport run_checked(const ExperimentConfig& cfg) {
    auto rep = run_experiment(cfg, [](const InstanceRun& run) {
        for (const Solution* s : {&run.result.initial, &run.result.after_local_search, &run.result.solution}) {
            ++feasibility_checks;
            feasibility_violations += validate_solution(run.instance, *s).size();
            for (int v = 0; v < static_cast<int>(run.instance.num_vehicles()); ++v)
                for (int r : run.instance.required(v)) {
                    const auto stops = s->tours[static_cast<std::size_t>(v)].stops();
                    if (std::find(stops.begin(), stops.end(), r) == stops.end()) ++feasibility_violations;
                }
        }
    });
    feasibility_violations += rep.violations;  // intermediate acceptances inside each solve
    return rep;
}

std::string strip_times(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# mean_t_", 0) == 0) continue;
        if (!line.empty() && line[0] != '#')
            for (int drop = 0; drop < 2; ++drop) line = line.substr(0, line.rfind(','));
        out << line << "\n";
    }
    return out.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<Point> random_points(Rng& rng, std::size_t n) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(oracle::random_point(rng));
    return pts;
}

}  // namespace

int main() {
    const auto suite_start = clock_type::now();

    // 1 + 2: desk-scale optimality gaps and stage dominance.
    {
        const auto t0 = clock_type::now();
        const auto rep = run_checked(desk_config(0.0, 2024));
        const double elapsed = since(t0);
        const auto agg = rep.aggregates();
        bool all_above_oracle = agg.oracle_rows == 20;
        std::size_t monotone_violations = 0;
        for (const auto& r : rep.rows) {
            if (!r.oracle_obj || r.final_obj < *r.oracle_obj - 1e-9) all_above_oracle = false;
            if (r.init_obj < r.ls_obj || r.ls_obj < r.final_obj) ++monotone_violations;
        }
        report("AC1", "optimality gap (scenario 1, n=10, 20 instances, exact tours)",
               {agg.mean_gap_final_pct <= 10.0 && agg.max_gap_final_pct <= 25.0 && all_above_oracle && elapsed <= 300.0,
                "mean final gap " + num(agg.mean_gap_final_pct) + "% (<= 10), max " + num(agg.max_gap_final_pct) +
                    "% (<= 25), oracle rows " + std::to_string(agg.oracle_rows) + "/20, final >= oracle on all: " +
                    (all_above_oracle ? "yes" : "no") + ", " + num(elapsed, 1) + " s (<= 300)"});
        report("AC2", "stage dominance",
               {agg.mean_gap_init_pct > agg.mean_gap_ls_pct && agg.mean_gap_ls_pct >= agg.mean_gap_final_pct &&
                    monotone_violations == 0,
                "mean gaps init " + num(agg.mean_gap_init_pct) + "% > local search " + num(agg.mean_gap_ls_pct) +
                    "% >= final " + num(agg.mean_gap_final_pct) + "%, per-instance violations " +
                    std::to_string(monotone_violations)});
    }

    // 3: count of instances within 2% of optimum vs. assignment fraction.
    {
        int non_decreasing = 0;
        std::string counts;
        // Substreams are seed ^ index, so repetition seeds are spaced to keep their instance sets disjoint.
        for (std::uint64_t rep_seed = 0; rep_seed < 3; ++rep_seed) {
            std::vector<std::size_t> within;
            for (double frac : {0.0, 0.1, 0.2})
                within.push_back(run_checked(desk_config(frac, 1000 * (rep_seed + 1))).aggregates().within_2pct);
            if (within[0] <= within[1] && within[1] <= within[2]) ++non_decreasing;
            counts += (rep_seed ? "; " : "") + std::to_string(within[0]) + "," + std::to_string(within[1]) + "," +
                      std::to_string(within[2]);
        }
        report("AC3", "assignment-fraction trend",
               {non_decreasing >= 2, "within-2% counts at 0/10/20% per repetition: " + counts + " -> non-decreasing in " +
                                         std::to_string(non_decreasing) + "/3 (need >= 2)"});
    }

    // 4: oracle soundness against a naive enumerator.
    {
        const auto t0 = clock_type::now();
        Rng rng(4);
        int mismatches = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 2 + uniform_index(rng, 6);  // 2..7 targets
            const auto inst = oracle::random_instance(rng, n, {uniform_real(rng, 0.5, 2.0), uniform_real(rng, 0.5, 2.0)},
                                                      n > 6 ? n - 6 : uniform_index(rng, 2));
            if (std::abs(exact_minmax(inst).objective - oracle::naive_minmax(inst)) > 1e-9) ++mismatches;
        }
        const double elapsed = since(t0);
        report("AC4", "oracle soundness (50 instances, k=2, free <= 6)",
               {mismatches == 0 && elapsed <= 60.0,
                std::to_string(mismatches) + " mismatches, " + num(elapsed, 2) + " s (<= 60)"});
    }

    // 5: load-balancing exactness against brute force.
    {
        Rng rng(5);
        int mismatches = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t k = 1 + uniform_index(rng, 3);
            std::vector<double> speeds;
            for (std::size_t v = 0; v < k; ++v) speeds.push_back(uniform_real(rng, 0.5, 2.5));
            const std::size_t free = 1 + uniform_index(rng, 8);
            const std::size_t pinned = uniform_index(rng, 3);
            const auto inst = oracle::random_instance(rng, free + pinned, speeds, pinned);
            const auto eff = perturb_colocated_depots(inst, rng);
            const auto mc = min_target_counts(inst);
            const auto alloc = solve_load_balancing(inst, eff, mc);
            if (std::abs(allocation_cost(inst, eff, alloc) - oracle::brute_allocation(inst, eff.pos, mc.lower)) > 1e-9)
                ++mismatches;
        }
        report("AC5", "allocation exactness (50 instances, free <= 8, k <= 3)",
               {mismatches == 0, std::to_string(mismatches) + " mismatches"});
    }

    // 6: savings / insertion formulas against spliced recomputation.
    {
        Rng rng(6);
        int probes = 0, bad = 0;
        double worst = 0.0, min_value = 0.0;
        while (probes < 1000) {
            const auto inst = oracle::random_instance(rng, 12, {1.0, 1.5, 2.0});
            std::vector<std::vector<int>> parts(3);
            for (int t = 0; t < 12; ++t) parts[uniform_index(rng, 3)].push_back(t);
            std::vector<Tour> tours;
            for (int v = 0; v < 3; ++v) {
                auto& p = parts[static_cast<std::size_t>(v)];
                for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[uniform_index(rng, i)]);
                Tour t{v, {kDepot}, 0.0};
                t.sequence.insert(t.sequence.end(), p.begin(), p.end());
                t.sequence.push_back(kDepot);
                t.duration = tour_duration(t, inst);
                tours.push_back(std::move(t));
            }
            const auto sol = make_solution(std::move(tours));
            const int i = maximal_vehicle(sol);
            for (const auto& e : compute_savings(sol, inst, i)) {
                if (probes >= 1000) break;
                ++probes;
                Tour cut = sol.tours[static_cast<std::size_t>(i)];
                cut.sequence.erase(std::find(cut.sequence.begin(), cut.sequence.end(), e.target));
                const double err_s = std::abs(sol.tours[static_cast<std::size_t>(i)].duration - tour_duration(cut, inst) - e.value);
                const auto q = best_insertion(e.target, sol, inst, i);
                Tour grown = sol.tours[static_cast<std::size_t>(q.vehicle)];
                grown.sequence.insert(grown.sequence.begin() + static_cast<std::ptrdiff_t>(q.edge_position + 1), e.target);
                const double err_i = std::abs(tour_duration(grown, inst) - grown.duration - q.delta);
                worst = std::max({worst, err_s, err_i});
                min_value = std::min({min_value, e.value, q.delta});
                if (err_s > 1e-9 || err_i > 1e-9 || e.value < -1e-9 || q.delta < -1e-9) ++bad;
            }
        }
        report("AC6", "savings / insertion exactness (1000 probes)",
               {bad == 0, std::to_string(bad) + " bad probes, max |error| " + std::to_string(worst) + ", min value " +
                              std::to_string(min_value)});
    }

    // 7: heuristic TSP quality vs Held-Karp.
    {
        Rng rng(7);
        int below_exact = 0, within = 0;
        const int trials = 200;
        for (int trial = 0; trial < trials; ++trial) {
            const std::size_t n = 7 + uniform_index(rng, 4);
            const auto pts = random_points(rng, n);
            std::vector<int> ids(n);
            for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<int>(i);
            const Point depot = oracle::random_point(rng);
            const auto h = solve_tsp(pts, TourRequest{depot, ids, 1.0, TourMode::Heuristic});
            const auto e = solve_tsp(pts, TourRequest{depot, ids, 1.0, TourMode::Exact});
            if (h.duration < e.duration) ++below_exact;
            if (h.duration <= 1.05 * e.duration) ++within;
        }
        report("AC7", "tour-solver quality (200 requests, 7-10 targets)",
               {below_exact == 0 && within >= 190, "heuristic below exact: " + std::to_string(below_exact) +
                                                       ", within 5%: " + std::to_string(within) + "/200 (need >= 190)"});
    }

    // 9: CLI bench determinism.
    {
        const std::string a = "acceptance_bench_a.csv", b = "acceptance_bench_b.csv";
        const std::string flags = " bench --scenario 2 --n-targets 10 --assign-frac 0.1 --instances 5 --seed 42 --oracle --out ";
        const int ra = std::system((std::string(MMTSP_CLI_PATH) + flags + a + " > /dev/null").c_str());
        const int rb = std::system((std::string(MMTSP_CLI_PATH) + flags + b + " > /dev/null").c_str());
        const auto ta = slurp(a), tb = slurp(b);
        const bool same = !ta.empty() && strip_times(ta) == strip_times(tb);
        report("AC9", "bench determinism",
               {ra == 0 && rb == 0 && same, std::string("exit codes ") + std::to_string(WEXITSTATUS(ra)) + "/" +
                                                std::to_string(WEXITSTATUS(rb)) + ", CSVs identical modulo wall times: " +
                                                (same ? "yes" : "no")});
        std::remove(a.c_str());
        std::remove(b.c_str());
    }

    // 10: perturbation schedule and stopping rule.
    {
        PerturbState st;
        st.base_angles = {1.234, 5.0, 0.0};
        bool schedule_ok = true;
        for (int v = 0; v < 3; ++v) schedule_ok = schedule_ok && st.angle(v, 5) == st.angle(v, 0);
        Rng rng(10);
        bool stops_ok = true;
        for (int trial = 0; trial < 5; ++trial) {
            const auto inst = oracle::random_instance(rng, 8, {1.0, 1.5, 2.0});
            const auto opt = exact_minmax(inst);
            HeuristicConfig cfg;
            cfg.tour_mode = TourMode::Exact;
            Rng prng(static_cast<std::uint64_t>(trial));
            const auto out = perturbation_loop(inst, opt, prng, cfg);
            stops_ok = stops_ok && out.iterations == 5 && out.solution.objective == opt.objective;
        }
        report("AC10", "perturbation schedule",
               {schedule_ok && stops_ok, std::string("angle(iteration 6) == angle(iteration 1): ") +
                                             (schedule_ok ? "yes" : "no") +
                                             ", exactly 5 non-improving rounds on optimal inputs: " + (stops_ok ? "yes" : "no")});
    }

    // 11: runtime at 30 targets, heuristic tours only.
    {
        auto cfg = scenario_preset(1);
        cfg.n_targets = 30;
        cfg.n_instances = 5;
        cfg.seed = 11;
        const auto rep = run_checked(cfg);
        double worst = 0.0;
        for (const auto& r : rep.rows) worst = std::max(worst, r.t_heuristic_s);
        report("AC11", "runtime (scenario 1, n=30, heuristic tours)",
               {worst <= 30.0, "slowest instance " + num(worst, 3) + " s (<= 30), mean " +
                                   num(rep.aggregates().mean_t_heuristic_s, 3) + " s"});
    }

    // 8: feasibility across every benchmark run above.
    report("AC8", "feasibility of every stage solution",
           {feasibility_violations == 0 && feasibility_checks > 0,
            std::to_string(feasibility_checks) + " stage solutions checked (plus every accepted move), " +
                std::to_string(feasibility_violations) + " violations"});

    std::cout << (failures ? "FAILED: " : "ALL PASSED: ") << failures << " failing criteria, total "
              << num(since(suite_start), 1) << " s" << std::endl;
    return failures ? 1 : 0;
}
