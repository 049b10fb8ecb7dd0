#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "core_model.hpp"
#include "exact_oracle.hpp"
#include "heuristic_engine.hpp"
#include "random.hpp"

namespace mmtsp {

enum class DepotMode { Distinct, Colocated };

struct ExperimentConfig {
    std::size_t n_targets = 10;
    std::vector<double> speeds{1.0, 1.5, 2.0};  // one per vehicle; k = speeds.size()
    DepotMode depot_mode = DepotMode::Distinct;
    // Vehicle groups (0-based ids) sharing one depot when depot_mode is Colocated.
    std::vector<std::vector<int>> colocated;
    double assign_fraction = 0.0;
    std::size_t n_instances = 20;
    std::uint64_t seed = 1;
    double grid = 200.0;
    bool oracle = false;
    TourMode tour_mode = TourMode::Heuristic;
    OracleBudget budget;
    unsigned threads = 1;

    [[nodiscard]] std::size_t k() const { return speeds.size(); }
};

/// Scenario 1: speeds 1, 1.5, 2 at distinct depots. Scenario 2: speeds 1, 1, 2
/// with vehicles 1 and 2 sharing a depot.
inline ExperimentConfig scenario_preset(int scenario) {
    ExperimentConfig cfg;
    if (scenario == 1) {
        cfg.speeds = {1.0, 1.5, 2.0};
    } else if (scenario == 2) {
        cfg.speeds = {1.0, 1.0, 2.0};
        cfg.depot_mode = DepotMode::Colocated;
        cfg.colocated = {{0, 1}};
    } else {
        throw InvalidInput("unknown scenario " + std::to_string(scenario));
    }
    return cfg;
}

inline std::size_t preassigned_count(const ExperimentConfig& cfg) {
    return static_cast<std::size_t>(std::floor(cfg.assign_fraction * static_cast<double>(cfg.n_targets) + 1e-9));
}

namespace detail {

inline void check_config(const ExperimentConfig& cfg) {
    if (cfg.n_targets == 0) throw InvalidInput("n_targets must be positive");
    if (cfg.speeds.empty()) throw InvalidInput("at least one vehicle is required");
    if (!(cfg.assign_fraction >= 0.0 && cfg.assign_fraction <= 1.0)) throw InvalidInput("assign_fraction must be in [0, 1]");
    if (!(cfg.grid > 0.0)) throw InvalidInput("grid must be positive");
    for (const auto& g : cfg.colocated)
        for (int v : g)
            if (v < 0 || static_cast<std::size_t>(v) >= cfg.k()) throw InvalidInput("colocated group names unknown vehicle");
}

// Generates the instance and leaves `rng` positioned for the solver seed draw.
inline Instance generate_instance(const ExperimentConfig& cfg, Rng& rng) {
    check_config(cfg);
    const std::size_t n = cfg.n_targets, k = cfg.k();
    std::vector<Point> targets;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = uniform_real(rng, 0.0, cfg.grid);
        const double y = uniform_real(rng, 0.0, cfg.grid);
        targets.push_back({x, y});
    }
    std::vector<Vehicle> vehicles;
    for (std::size_t v = 0; v < k; ++v) {
        const double x = uniform_real(rng, 0.0, cfg.grid);
        const double y = uniform_real(rng, 0.0, cfg.grid);
        vehicles.push_back({cfg.speeds[v], {x, y}});
    }
    if (cfg.depot_mode == DepotMode::Colocated)
        for (const auto& g : cfg.colocated)
            for (int v : g) vehicles[static_cast<std::size_t>(v)].depot = vehicles[static_cast<std::size_t>(g.front())].depot;

    // Partial Fisher-Yates picks the pre-assigned targets without replacement.
    std::vector<std::vector<int>> required(k);
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    const std::size_t count = preassigned_count(cfg);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + uniform_index(rng, n - i);
        std::swap(order[i], order[j]);
        required[uniform_index(rng, k)].push_back(order[i]);
    }
    return Instance(std::move(targets), std::move(vehicles), std::move(required));
}

}  // namespace detail

/// Instance `index` of the experiment; a pure function of (cfg, seed, index).
inline Instance generate_instance(const ExperimentConfig& cfg, std::size_t index) {
    Rng rng = substream(cfg.seed, index);
    return detail::generate_instance(cfg, rng);
}

// ---------------------------------------------------------------------------
// Reports

struct ReportRow {
    std::size_t instance = 0;
    double init_obj = 0.0;
    double ls_obj = 0.0;
    double final_obj = 0.0;
    std::optional<double> oracle_obj;
    double t_heuristic_s = 0.0;
    double t_oracle_s = 0.0;

    [[nodiscard]] std::optional<double> gap(double value) const {
        if (!oracle_obj) return std::nullopt;
        return 100.0 * (value - *oracle_obj) / *oracle_obj;
    }
    [[nodiscard]] std::optional<double> gap_init() const { return gap(init_obj); }
    [[nodiscard]] std::optional<double> gap_ls() const { return gap(ls_obj); }
    [[nodiscard]] std::optional<double> gap_final() const { return gap(final_obj); }
};

struct ReportAggregates {
    std::size_t rows = 0;
    std::size_t oracle_rows = 0;
    std::size_t no_oracle_rows = 0;
    double mean_gap_init_pct = 0.0;
    double mean_gap_ls_pct = 0.0;
    double mean_gap_final_pct = 0.0;
    double max_gap_final_pct = 0.0;
    std::size_t within_2pct = 0;
    double mean_t_heuristic_s = 0.0;
    double mean_t_oracle_s = 0.0;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::size_t violations = 0;  // validate_solution findings across all stages

    [[nodiscard]] ReportAggregates aggregates() const {
        ReportAggregates a;
        a.rows = rows.size();
        for (const auto& r : rows) {
            a.mean_t_heuristic_s += r.t_heuristic_s;
            if (!r.oracle_obj) {
                ++a.no_oracle_rows;
                continue;
            }
            ++a.oracle_rows;
            a.mean_t_oracle_s += r.t_oracle_s;
            a.mean_gap_init_pct += *r.gap_init();
            a.mean_gap_ls_pct += *r.gap_ls();
            a.mean_gap_final_pct += *r.gap_final();
            a.max_gap_final_pct = std::max(a.max_gap_final_pct, *r.gap_final());
            if (*r.gap_final() <= 2.0) ++a.within_2pct;
        }
        if (a.rows) a.mean_t_heuristic_s /= static_cast<double>(a.rows);
        if (a.oracle_rows) {
            const auto n = static_cast<double>(a.oracle_rows);
            a.mean_gap_init_pct /= n;
            a.mean_gap_ls_pct /= n;
            a.mean_gap_final_pct /= n;
            a.mean_t_oracle_s /= n;
        }
        return a;
    }
};

// Every stage solution of one instance, for callers that inspect them.
struct InstanceRun {
    std::size_t index = 0;
    Instance instance;
    SolveResult result;
    std::optional<Solution> oracle;
};

/// Solves every instance of the experiment (heuristic, then the oracle when
/// enabled and within budget) and validates every stage's solution. Rows come
/// back sorted by instance index regardless of cfg.threads.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                       const std::function<void(const InstanceRun&)>& observe = {}) {
    detail::check_config(cfg);
    using clock = std::chrono::steady_clock;
    std::vector<ReportRow> rows(cfg.n_instances);
    std::vector<std::size_t> violations(cfg.n_instances, 0);
    std::vector<std::optional<InstanceRun>> runs(observe ? cfg.n_instances : 0);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t idx = next++; idx < cfg.n_instances; idx = next++) {
            Rng rng = substream(cfg.seed, idx);
            Instance inst = detail::generate_instance(cfg, rng);
            HeuristicConfig hc;
            hc.tour_mode = cfg.tour_mode;
            hc.seed = rng();
            std::size_t bad = 0;
            hc.on_accept = [&bad](const Instance& in, const Solution& s) { bad += validate_solution(in, s).size(); };

            auto t0 = clock::now();
            SolveResult res = solve(inst, hc);
            const double t_heur = std::chrono::duration<double>(clock::now() - t0).count();
            for (const Solution* s : {&res.initial, &res.after_local_search, &res.solution})
                bad += validate_solution(inst, *s).size();

            ReportRow row;
            row.instance = idx;
            row.init_obj = res.trace.after_init;
            row.ls_obj = res.trace.after_local_search;
            row.final_obj = res.trace.after_perturbation;
            row.t_heuristic_s = t_heur;
            std::optional<Solution> oracle;
            if (cfg.oracle && oracle_feasible(inst, cfg.budget)) {
                t0 = clock::now();
                oracle = exact_minmax(inst, cfg.budget);
                row.t_oracle_s = std::chrono::duration<double>(clock::now() - t0).count();
                row.oracle_obj = oracle->objective;
                bad += validate_solution(inst, *oracle).size();
            }
            rows[idx] = row;
            violations[idx] = bad;
            if (observe) runs[idx] = InstanceRun{idx, std::move(inst), std::move(res), std::move(oracle)};
        }
    };

    const unsigned threads = std::max(1U, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.n_instances)));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    }

    ExperimentReport rep;
    rep.rows = std::move(rows);
    for (auto v : violations) rep.violations += v;
    if (observe)
        for (const auto& r : runs) observe(*r);
    return rep;
}

// CSV: header, one line per row, then "# key=value" aggregate lines.
// Missing oracle values are written as NA. Wall-time data lives only in the
// t_* columns and the mean_t_* aggregate lines.
inline constexpr const char* kReportHeader =
    "instance,init_obj,ls_obj,final_obj,oracle_obj,gap_init_pct,gap_ls_pct,gap_final_pct,t_heuristic_s,t_oracle_s";

namespace detail {

inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_num(*v) : "NA"; }

inline std::string fmt_seconds(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
}

inline double parse_num(const std::string& s) {
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double v = 0.0;
    is >> v;
    if (!is || is.peek() != std::char_traits<char>::eof()) throw InvalidInput("report: bad number '" + s + "'");
    return v;
}

}  // namespace detail

inline std::string format_report(const ExperimentReport& rep) {
    using detail::fmt_num;
    using detail::fmt_opt;
    std::ostringstream os;
    os << kReportHeader << "\n";
    for (const auto& r : rep.rows) {
        os << r.instance << ',' << fmt_num(r.init_obj) << ',' << fmt_num(r.ls_obj) << ',' << fmt_num(r.final_obj) << ','
           << fmt_opt(r.oracle_obj) << ',' << fmt_opt(r.gap_init()) << ',' << fmt_opt(r.gap_ls()) << ','
           << fmt_opt(r.gap_final()) << ',' << detail::fmt_seconds(r.t_heuristic_s) << ','
           << (r.oracle_obj ? detail::fmt_seconds(r.t_oracle_s) : std::string("NA")) << "\n";
    }
    const auto a = rep.aggregates();
    os << "# rows=" << a.rows << "\n";
    os << "# oracle_rows=" << a.oracle_rows << "\n";
    os << "# no_oracle_rows=" << a.no_oracle_rows << "\n";
    os << "# violations=" << rep.violations << "\n";
    if (a.oracle_rows) {
        os << "# mean_gap_init_pct=" << fmt_num(a.mean_gap_init_pct) << "\n";
        os << "# mean_gap_ls_pct=" << fmt_num(a.mean_gap_ls_pct) << "\n";
        os << "# mean_gap_final_pct=" << fmt_num(a.mean_gap_final_pct) << "\n";
        os << "# max_gap_final_pct=" << fmt_num(a.max_gap_final_pct) << "\n";
        os << "# within_2pct=" << a.within_2pct << "\n";
    }
    os << "# mean_t_heuristic_s=" << detail::fmt_seconds(a.mean_t_heuristic_s) << "\n";
    if (a.oracle_rows) os << "# mean_t_oracle_s=" << detail::fmt_seconds(a.mean_t_oracle_s) << "\n";
    return os.str();
}

inline void write_report(const ExperimentReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path);
    out << format_report(rep);
    if (!out) throw IoError("write failed: " + path);
}

/// Reads the rows back; aggregate comment lines are skipped since they are
/// recomputable from the rows.
inline ExperimentReport parse_report(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader) throw InvalidInput("report: missing or unexpected header");
    ExperimentReport rep;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# violations=", 0) == 0) rep.violations = std::stoul(line.substr(13));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 10) throw InvalidInput("report: expected 10 columns, got " + std::to_string(cells.size()));
        ReportRow r;
        r.instance = static_cast<std::size_t>(detail::parse_num(cells[0]));
        r.init_obj = detail::parse_num(cells[1]);
        r.ls_obj = detail::parse_num(cells[2]);
        r.final_obj = detail::parse_num(cells[3]);
        if (cells[4] != "NA") r.oracle_obj = detail::parse_num(cells[4]);
        r.t_heuristic_s = detail::parse_num(cells[8]);
        if (cells[9] != "NA") r.t_oracle_s = detail::parse_num(cells[9]);
        rep.rows.push_back(r);
    }
    return rep;
}

}  // namespace mmtsp
