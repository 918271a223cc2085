#pragma once

// Internal JSON plumbing shared by the serialization translation units.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "teamseg/errors.hpp"

namespace teamseg::detail {

inline nlohmann::json parse_json(const std::string& text, const char* what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw FormatError(std::string(what) + ": invalid JSON");
    return j;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw FormatError("short write to " + path);
}

template <typename T>
T field(const nlohmann::json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end())
        throw FormatError(std::string(what) + ": missing field '" + key + "'");
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string(what) + ": bad field '" + key + "'");
    }
}

template <typename T>
T field_or(const nlohmann::json& j, const char* key, T fallback, const char* what) {
    if (!j.contains(key)) return fallback;
    return field<T>(j, key, what);
}

} // namespace teamseg::detail
