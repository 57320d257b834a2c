#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "obprm/format.hpp"
#include "obprm/geometry.hpp"

namespace obprm {

struct ShapeFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape file schema:
// { "dimension": n, "parts": [ { "halfspaces": [ { "normal": [...], "offset": r } ] } ] }
inline PolyconvexSet shape_from_json(const nlohmann::json& j, const std::string& origin = "shape") {
    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        throw ShapeFormatError(origin + ": missing integer field 'dimension'");
    const int dim = j["dimension"].get<int>();
    if (!j.contains("parts") || !j["parts"].is_array() || j["parts"].empty())
        throw ShapeFormatError(origin + ": 'parts' must be a nonempty array");

    std::vector<ConvexPolytope> parts;
    for (std::size_t pi = 0; pi < j["parts"].size(); ++pi) {
        const auto& jp = j["parts"][pi];
        std::string where = origin + ": part " + std::to_string(pi);
        if (!jp.contains("halfspaces") || !jp["halfspaces"].is_array() || jp["halfspaces"].empty())
            throw ShapeFormatError(where + ": 'halfspaces' must be a nonempty array");
        std::vector<HalfSpace> hs;
        for (std::size_t hi = 0; hi < jp["halfspaces"].size(); ++hi) {
            const auto& jh = jp["halfspaces"][hi];
            std::string hwhere = where + ", halfspace " + std::to_string(hi);
            if (!jh.contains("normal") || !jh["normal"].is_array() ||
                static_cast<int>(jh["normal"].size()) != dim)
                throw ShapeFormatError(hwhere + ": 'normal' must be an array of length " +
                                       std::to_string(dim));
            if (!jh.contains("offset") || !jh["offset"].is_number())
                throw ShapeFormatError(hwhere + ": missing numeric 'offset'");
            Vec n(dim);
            for (int c = 0; c < dim; ++c) n[c] = jh["normal"][c].get<double>();
            try {
                hs.emplace_back(n, jh["offset"].get<double>());
            } catch (const std::exception& e) {
                throw ShapeFormatError(hwhere + ": " + e.what());
            }
        }
        try {
            parts.emplace_back(std::move(hs));
        } catch (const std::exception& e) {
            throw ShapeFormatError(where + ": " + e.what());
        }
    }
    try {
        return PolyconvexSet(std::move(parts));
    } catch (const std::exception& e) {
        throw ShapeFormatError(origin + ": " + e.what());
    }
}

inline nlohmann::ordered_json shape_to_json(const PolyconvexSet& s) {
    nlohmann::ordered_json j;
    j["dimension"] = s.dimension();
    j["parts"] = nlohmann::ordered_json::array();
    for (const auto& part : s.parts()) {
        nlohmann::ordered_json jp;
        jp["halfspaces"] = nlohmann::ordered_json::array();
        for (const auto& h : part.halfspaces()) {
            nlohmann::ordered_json jh;
            jh["normal"] = nlohmann::ordered_json::array();
            for (int c = 0; c < h.dim(); ++c) jh["normal"].push_back(round_g12(h.normal()[c]));
            jh["offset"] = round_g12(h.offset());
            jp["halfspaces"].push_back(std::move(jh));
        }
        j["parts"].push_back(std::move(jp));
    }
    return j;
}

inline PolyconvexSet load_shape(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ShapeFormatError("cannot open shape file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ShapeFormatError(path + ": invalid JSON: " + e.what());
    }
    return shape_from_json(j, path);
}

inline void save_shape(const PolyconvexSet& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write shape file: " + path);
    out << shape_to_json(s).dump(2) << "\n";
}

}  // namespace obprm
