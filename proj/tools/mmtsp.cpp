// mmtsp: solve, benchmark and generate min-max multi-depot TSP instances.
//
// Exit codes: 0 success, 1 invalid input, 2 I/O failure.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mmtsp/mmtsp.hpp"

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

const std::map<std::string, mmtsp::TourMode> kTourModes{{"heuristic", mmtsp::TourMode::Heuristic},
                                                        {"exact", mmtsp::TourMode::Exact}};

void write_trace(const mmtsp::StageTrace& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw mmtsp::IoError("cannot write trace: " + path);
    using mmtsp::detail::fmt_num;
    using mmtsp::detail::fmt_seconds;
    out << "stage,objective,wall_s\n";
    out << "init," << fmt_num(tr.after_init) << ',' << fmt_seconds(tr.init_s) << "\n";
    out << "local_search," << fmt_num(tr.after_local_search) << ',' << fmt_seconds(tr.local_search_s) << "\n";
    out << "perturbation," << fmt_num(tr.after_perturbation) << ',' << fmt_seconds(tr.perturbation_s) << "\n";
    out << "# perturbation_iterations=" << tr.iterations << "\n";
    out << "# local_search_moves=" << tr.local_search_moves << "\n";
    if (!out) throw mmtsp::IoError("write failed: " + path);
}

void print_solution(const mmtsp::Instance& inst, const mmtsp::Solution& s) {
    for (const auto& t : s.tours) {
        std::cout << "vehicle " << t.vehicle + 1 << " (speed " << inst.vehicle(t.vehicle).speed << ", time "
                  << std::fixed << std::setprecision(4) << t.duration << "):";
        std::cout.unsetf(std::ios::floatfield);
        std::cout << " depot";
        for (int id : t.stops()) std::cout << ' ' << id;
        std::cout << " depot\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Min-max heterogeneous multi-vehicle multi-depot TSP solver and benchmark"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Run the three-stage heuristic on an instance file");
    std::string instance_path;
    std::uint64_t seed = 1;
    mmtsp::TourMode tour_mode = mmtsp::TourMode::Heuristic;
    std::string trace_path, svg_prefix;
    bool with_oracle = false;
    solve_cmd->add_option("--instance", instance_path, "Instance JSON file")->required();
    solve_cmd->add_option("--seed", seed, "Random seed");
    solve_cmd->add_option("--tour-mode", tour_mode, "TSP sub-solver")->transform(CLI::CheckedTransformer(kTourModes));
    solve_cmd->add_option("--trace", trace_path, "Write the per-stage trace CSV here");
    solve_cmd->add_option("--svg", svg_prefix, "Write <prefix>_{init,local_search,final}.svg");
    solve_cmd->add_flag("--oracle", with_oracle, "Also run the exact oracle when within budget");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run a seeded experiment and write a CSV report");
    int scenario = 1;
    std::size_t n_targets = 10, n_instances = 20;
    double assign_frac = 0.0;
    bool oracle = false;
    std::string out_path;
    unsigned threads = 1;
    mmtsp::TourMode bench_mode = mmtsp::TourMode::Heuristic;
    bench_cmd->add_option("--scenario", scenario, "1: distinct depots, 2: vehicles 1-2 share a depot")
        ->check(CLI::IsMember({1, 2}));
    bench_cmd->add_option("--n-targets", n_targets, "Targets per instance")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--assign-frac", assign_frac, "Fraction of pre-assigned targets")->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--instances", n_instances, "Number of instances");
    bench_cmd->add_option("--seed", seed, "Experiment seed");
    bench_cmd->add_flag("--oracle", oracle, "Compute exact optima and gaps where within budget");
    bench_cmd->add_option("--tour-mode", bench_mode, "TSP sub-solver")->transform(CLI::CheckedTransformer(kTourModes));
    bench_cmd->add_option("--threads", threads, "Worker threads");
    bench_cmd->add_option("--out", out_path, "Report CSV path")->required();

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "Generate one instance file");
    std::size_t index = 0;
    gen_cmd->add_option("--scenario", scenario, "1 or 2")->check(CLI::IsMember({1, 2}));
    gen_cmd->add_option("--n-targets", n_targets, "Targets")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--assign-frac", assign_frac, "Fraction of pre-assigned targets")->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--seed", seed, "Experiment seed");
    gen_cmd->add_option("--index", index, "Instance index within the seeded stream");
    gen_cmd->add_option("--out", out_path, "Instance JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (*solve_cmd) {
            const auto inst = mmtsp::read_instance(instance_path);
            mmtsp::HeuristicConfig cfg;
            cfg.seed = seed;
            cfg.tour_mode = tour_mode;
            const auto res = mmtsp::solve(inst, cfg);
            std::cout << std::setprecision(10) << "after load balancing: " << res.trace.after_init << "\n"
                      << "after local search:   " << res.trace.after_local_search << "\n"
                      << "after perturbation:   " << res.trace.after_perturbation << " (" << res.trace.iterations
                      << " rounds)\n";
            print_solution(inst, res.solution);
            if (with_oracle) {
                if (mmtsp::oracle_feasible(inst)) {
                    const auto opt = mmtsp::exact_minmax(inst);
                    std::cout << std::setprecision(10) << "oracle optimum:       " << opt.objective << " (gap "
                              << 100.0 * (res.solution.objective - opt.objective) / opt.objective << "%)\n";
                } else {
                    std::cout << "oracle optimum:       unavailable (instance exceeds budget)\n";
                }
            }
            if (!trace_path.empty()) write_trace(res.trace, trace_path);
            if (!svg_prefix.empty())
                mmtsp::render_tours(inst,
                                    {{"init", res.initial}, {"local_search", res.after_local_search}, {"final", res.solution}},
                                    svg_prefix);
        } else if (*bench_cmd) {
            auto cfg = mmtsp::scenario_preset(scenario);
            cfg.n_targets = n_targets;
            cfg.n_instances = n_instances;
            cfg.assign_fraction = assign_frac;
            cfg.seed = seed;
            cfg.oracle = oracle;
            cfg.tour_mode = bench_mode;
            cfg.threads = threads;
            const auto rep = mmtsp::run_experiment(cfg);
            mmtsp::write_report(rep, out_path);
            const auto agg = rep.aggregates();
            std::cout << "instances: " << agg.rows << ", with oracle: " << agg.oracle_rows << "\n";
            if (agg.oracle_rows)
                std::cout << "mean gap %: init " << agg.mean_gap_init_pct << ", local search " << agg.mean_gap_ls_pct
                          << ", final " << agg.mean_gap_final_pct << "\n";
            std::cout << "mean heuristic time: " << agg.mean_t_heuristic_s << " s\n";
            if (rep.violations) {
                std::cerr << "feasibility violations: " << rep.violations << "\n";
                return kExitInvalid;
            }
        } else if (*gen_cmd) {
            auto cfg = mmtsp::scenario_preset(scenario);
            cfg.n_targets = n_targets;
            cfg.assign_fraction = assign_frac;
            cfg.seed = seed;
            mmtsp::write_instance(mmtsp::generate_instance(cfg, index), out_path);
        }
    } catch (const mmtsp::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return 0;
}
