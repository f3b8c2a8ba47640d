#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <map>
#include <string>

#include "spix/png_io.hpp"
#include "spix/version.hpp"

namespace spix {

inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const std::uint8_t*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ull;
    }
    return hash;
}

inline std::string digest_file(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buf;
}

// Reproducibility envelope written next to every command's outputs. The
// timestamp honors SOURCE_DATE_EPOCH so runs can be made byte-identical.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> arguments;
    std::string tool_version = SPIX_VERSION;
    std::string timestamp;
    std::map<std::string, std::string> input_digests;

    void stamp() {
        std::time_t t;
        if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"))
            t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
        else
            t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        timestamp = buf;
    }

    void add_input(const std::filesystem::path& path) {
        input_digests[path.string()] = digest_file(path);
    }

    std::string to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["arguments"] = arguments;
        j["tool_version"] = tool_version;
        j["timestamp"] = timestamp;
        j["input_digests"] = input_digests;
        return j.dump(2) + "\n";
    }

    void write(const std::filesystem::path& out_dir) const {
        write_file_atomic(out_dir / "manifest.json", to_json());
    }
};

}  // namespace spix
