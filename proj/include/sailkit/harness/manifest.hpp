#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sailkit {

inline constexpr const char* kToolkitVersion = "0.1.0";

// FNV-1a over the file bytes, hex-encoded.
std::string file_digest(const std::filesystem::path& path);

struct ManifestEntry {
    std::string path;   // relative to the run directory
    std::string digest;
};

// Written as manifest.json in the run directory. Data files carry
// digests; files containing wall-clock timings are listed separately
// and not digested, so reruns stay digest-identical.
struct RunManifest {
    std::string config;      // canonical config text
    std::uint64_t seed = 0;
    std::string version = kToolkitVersion;
    double wall_seconds = 0.0;
    std::vector<ManifestEntry> files;
    std::vector<std::string> timing_files;

    void add_file(const std::filesystem::path& run_dir, const std::string& rel);
    void add_timing_file(const std::string& rel) { timing_files.push_back(rel); }
    void write(const std::filesystem::path& run_dir) const;
};

// Recompute digests and compare against manifest.json; returns a list of
// mismatch descriptions (empty = verified).
std::vector<std::string> verify_manifest(const std::filesystem::path& run_dir);

} // namespace sailkit
