#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "core_model.hpp"

namespace mmtsp {

// Instance document:
//   {"targets": [[x, y], ...],
//    "vehicles": [{"speed": s, "depot": [x, y]}, ...],
//    "required": {"1": [t, ...], ...}}
// Vehicle keys in "required" are 1-based; target indices are 0-based.
// Only vehicles with a non-empty required set are written.

inline nlohmann::ordered_json to_json(const Instance& inst) {
    nlohmann::ordered_json j;
    j["targets"] = nlohmann::ordered_json::array();
    for (auto p : inst.targets()) j["targets"].push_back({p.x, p.y});
    j["vehicles"] = nlohmann::ordered_json::array();
    for (const auto& v : inst.vehicles()) {
        nlohmann::ordered_json jv;
        jv["speed"] = v.speed;
        jv["depot"] = {v.depot.x, v.depot.y};
        j["vehicles"].push_back(std::move(jv));
    }
    j["required"] = nlohmann::ordered_json::object();
    for (std::size_t v = 0; v < inst.num_vehicles(); ++v) {
        auto r = inst.required(static_cast<int>(v));
        if (!r.empty()) j["required"][std::to_string(v + 1)] = std::vector<int>(r.begin(), r.end());
    }
    return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
    try {
        auto point = [](const nlohmann::json& a) {
            if (!a.is_array() || a.size() != 2) throw InvalidInput("point must be [x, y]");
            return Point{a.at(0).get<double>(), a.at(1).get<double>()};
        };
        std::vector<Point> targets;
        for (const auto& t : j.at("targets")) targets.push_back(point(t));
        std::vector<Vehicle> vehicles;
        for (const auto& v : j.at("vehicles")) vehicles.push_back({v.at("speed").get<double>(), point(v.at("depot"))});
        std::vector<std::vector<int>> required(vehicles.size());
        if (j.contains("required")) {
            for (const auto& [key, list] : j.at("required").items()) {
                std::size_t pos = 0;
                int id = 0;
                try {
                    id = std::stoi(key, &pos);
                } catch (const std::exception&) {
                    pos = 0;
                }
                if (pos != key.size() || id < 1 || static_cast<std::size_t>(id) > vehicles.size())
                    throw InvalidInput("required: unknown vehicle id '" + key + "'");
                required[static_cast<std::size_t>(id - 1)] = list.get<std::vector<int>>();
            }
        }
        return Instance(std::move(targets), std::move(vehicles), std::move(required));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("instance document: ") + e.what());
    }
}

inline std::string write_instance_string(const Instance& inst) { return to_json(inst).dump(2) + "\n"; }

inline Instance read_instance_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("instance document: ") + e.what());
    }
    return instance_from_json(j);
}

inline Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_instance_string(buf.str());
}

inline void write_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write instance file: " + path);
    out << write_instance_string(inst);
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace mmtsp
