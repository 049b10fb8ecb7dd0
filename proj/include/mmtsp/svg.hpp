#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core_model.hpp"

namespace mmtsp {

namespace detail {

inline constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                     "#9467bd", "#8c564b", "#e377c2", "#17becf"};

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

/// One SVG document: targets as circles (required ones filled with their
/// vehicle's colour), depots as black squares, one closed polyline per
/// non-empty tour. The viewport is the [0, grid]^2 square (grown to cover any
/// point outside it) plus a 5% margin.
inline std::string render_svg(const Instance& inst, const Solution& sol, const std::string& title = "",
                              double grid = 200.0) {
    double lo_x = 0.0, lo_y = 0.0, hi_x = grid, hi_y = grid;
    auto grow = [&](Point p) {
        lo_x = std::min(lo_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_x = std::max(hi_x, p.x);
        hi_y = std::max(hi_y, p.y);
    };
    for (auto p : inst.targets()) grow(p);
    for (const auto& v : inst.vehicles()) grow(v.depot);
    const double span = std::max(hi_x - lo_x, hi_y - lo_y);
    const double margin = 0.05 * span;
    const double unit = span / 200.0;  // marker sizes scale with the drawing

    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(10);
    // Flip y so the drawing matches the usual maths orientation.
    auto X = [&](double x) { return x; };
    auto Y = [&](double y) { return hi_y + lo_y - y; };
    auto color = [](int v) { return detail::kPalette[static_cast<std::size_t>(v) % detail::kPalette.size()]; };

    os << R"(<?xml version="1.0" encoding="UTF-8"?>)" << "\n";
    os << R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox=")" << lo_x - margin << ' ' << lo_y - margin << ' '
       << (hi_x - lo_x) + 2 * margin << ' ' << (hi_y - lo_y) + 2 * margin << R"(">)" << "\n";
    if (!title.empty()) os << "  <title>" << detail::xml_escape(title) << "</title>\n";

    for (const auto& tour : sol.tours) {
        if (tour.sequence.size() < 3) continue;
        const auto& veh = inst.vehicle(tour.vehicle);
        os << R"(  <g class="tour" data-vehicle=")" << tour.vehicle + 1 << R"(">)" << "\n";
        os << R"(    <polyline fill="none" stroke=")" << color(tour.vehicle) << R"(" stroke-width=")" << 0.6 * unit
           << R"(" points=")";
        for (std::size_t i = 0; i < tour.sequence.size(); ++i) {
            const Point p = tour.sequence[i] == kDepot ? veh.depot : inst.target(tour.sequence[i]);
            os << (i ? " " : "") << X(p.x) << ',' << Y(p.y);
        }
        os << R"("/>)" << "\n  </g>\n";
    }

    for (int t = 0; t < static_cast<int>(inst.num_targets()); ++t) {
        const Point p = inst.target(t);
        const int owner = inst.owner(t);
        os << R"(  <circle class="target" cx=")" << X(p.x) << R"(" cy=")" << Y(p.y) << R"(" r=")" << 1.5 * unit
           << R"(" stroke="black" stroke-width=")" << 0.3 * unit << R"(" fill=")"
           << (owner == kUnowned ? "white" : color(owner)) << R"("/>)" << "\n";
    }
    for (int v = 0; v < static_cast<int>(inst.num_vehicles()); ++v) {
        const Point p = inst.vehicle(v).depot;
        const double s = 3.0 * unit;
        os << R"(  <rect class="depot" data-vehicle=")" << v + 1 << R"(" x=")" << X(p.x) - s / 2 << R"(" y=")"
           << Y(p.y) - s / 2 << R"(" width=")" << s << R"(" height=")" << s << R"(" fill="black"/>)" << "\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// Writes `<prefix>_<label>.svg` for each labelled solution; returns the paths.
inline std::vector<std::string> render_tours(const Instance& inst,
                                             const std::vector<std::pair<std::string, Solution>>& solutions,
                                             const std::string& prefix, double grid = 200.0) {
    std::vector<std::string> paths;
    for (const auto& [label, sol] : solutions) {
        const std::string path = prefix + "_" + label + ".svg";
        std::ofstream out(path);
        if (!out) throw IoError("cannot write SVG: " + path);
        out << render_svg(inst, sol, label, grid);
        if (!out) throw IoError("write failed: " + path);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace mmtsp
