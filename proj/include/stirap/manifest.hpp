#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <stirap/errors.hpp>
#include <stirap/version.hpp>

namespace stirap {

// Enough provenance to replay a run: the subcommand, its raw arguments, and
// the files it produced.
struct RunManifest {
    std::string command;
    std::vector<std::string> args;
    std::vector<std::string> outputs;
    std::string version = kVersion;
    double duration_ms = 0.0;
};

inline void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json j;
    j["command"] = m.command;
    j["args"] = m.args;
    j["outputs"] = m.outputs;
    j["version"] = m.version;
    j["duration_ms"] = m.duration_ms;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write manifest file '" + path + "'");
    f << j.dump(2) << '\n';
}

inline RunManifest read_manifest(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot read manifest file '" + path + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("manifest '" + path + "' is not valid JSON: " + e.what());
    }
    RunManifest m;
    try {
        m.command = j.at("command").get<std::string>();
        m.args = j.at("args").get<std::vector<std::string>>();
        m.outputs = j.value("outputs", std::vector<std::string>{});
        m.version = j.value("version", std::string{});
        m.duration_ms = j.value("duration_ms", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("manifest '" + path + "' is missing required fields: " + e.what());
    }
    return m;
}

}  // namespace stirap
