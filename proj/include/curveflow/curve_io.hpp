#pragma once

// Curve file format: {"closed": bool, "vertices": [[x, y], ...]}.

#include <fstream>
#include <string>

#include <json.hpp>

#include "curveflow/error.hpp"
#include "curveflow/geometry.hpp"

namespace curveflow {

inline nlohmann::json curve_to_json(const PolyCurve& c) {
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& p : c.vertices()) verts.push_back({p.x, p.y});
    return {{"closed", c.closed()}, {"vertices", std::move(verts)}};
}

inline PolyCurve curve_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertices")) throw InvalidInput("curve JSON needs \"vertices\"");
    const bool closed = j.value("closed", true);
    std::vector<Vec2> v;
    for (const auto& p : j.at("vertices")) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw InvalidInput("vertex must be [x, y]");
        v.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return PolyCurve(std::move(v), closed);
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(1) << '\n';
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

inline void write_curve(const std::string& path, const PolyCurve& c) { write_json_file(path, curve_to_json(c)); }
inline PolyCurve read_curve(const std::string& path) { return curve_from_json(read_json_file(path)); }

}  // namespace curveflow
