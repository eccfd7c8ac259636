#pragma once
// Run manifest: records the config digest, tool version, master seed, wall
// times, and an FNV-1a digest per output file, as run_manifest.json in the
// output directory. Re-running a subcommand merges its outputs into an
// existing manifest so a chain of runs ends with one complete inventory.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermo/errors.hpp"

namespace thermo {

inline constexpr const char* tool_version = "0.1.0";

inline std::uint64_t fnv1a64(const char* data, std::size_t n) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buf;
}

inline std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open for digest: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string file_digest_hex(const std::string& path) {
    return fnv1a64_hex(read_file_bytes(path));
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunManifest {
    std::string version = tool_version;
    std::string config_path;
    std::string config_digest;
    std::uint64_t master_seed = 0;
    std::string started;
    std::string finished;
    std::map<std::string, std::string> outputs;  // file name -> digest

    void add_output(const std::string& name, const std::string& full_path) {
        outputs[name] = file_digest_hex(full_path);
    }

    static RunManifest load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open manifest: " + path);
        nlohmann::json j;
        in >> j;
        RunManifest m;
        m.version = j.value("tool_version", "");
        m.config_path = j.value("config_path", "");
        m.config_digest = j.value("config_digest", "");
        m.master_seed = j.value("master_seed", std::uint64_t{0});
        m.started = j.value("started_utc", "");
        m.finished = j.value("finished_utc", "");
        if (j.contains("outputs"))
            for (const auto& item : j["outputs"].items())
                m.outputs[item.key()] = item.value().get<std::string>();
        return m;
    }

    void write(const std::string& path) const {
        nlohmann::json j;
        j["tool_version"] = version;
        j["config_path"] = config_path;
        j["config_digest"] = config_digest;
        j["master_seed"] = master_seed;
        j["started_utc"] = started;
        j["finished_utc"] = finished;
        j["outputs"] = nlohmann::json::object();
        for (const auto& [name, digest] : outputs) j["outputs"][name] = digest;
        std::ofstream out(path);
        if (!out) throw ValidationError("cannot write manifest: " + path);
        out << j.dump(2) << "\n";
    }

    // Merge this run's outputs into an existing manifest, if any.
    void merge_and_write(const std::string& path) const {
        RunManifest merged = *this;
        std::ifstream probe(path);
        if (probe) {
            try {
                RunManifest prior = load(path);
                for (const auto& [name, digest] : prior.outputs)
                    if (!merged.outputs.count(name)) merged.outputs[name] = digest;
                if (!prior.started.empty()) merged.started = prior.started;
            } catch (const std::exception&) {
                // unreadable prior manifest: overwrite with the current one
            }
        }
        merged.write(path);
    }
};

}  // namespace thermo
