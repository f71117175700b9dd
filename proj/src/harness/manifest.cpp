#include "sailkit/harness/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sailkit {

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("file_digest: cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

void RunManifest::add_file(const std::filesystem::path& run_dir,
                           const std::string& rel) {
    files.push_back({rel, file_digest(run_dir / rel)});
}

void RunManifest::write(const std::filesystem::path& run_dir) const {
    nlohmann::json j;
    j["config"] = config;
    j["seed"] = seed;
    j["version"] = version;
    j["wall_seconds"] = wall_seconds;
    j["files"] = nlohmann::json::array();
    for (const auto& f : files) {
        j["files"].push_back({{"path", f.path}, {"digest", f.digest}});
    }
    j["timing_files"] = timing_files;
    std::ofstream out(run_dir / "manifest.json");
    out << j.dump(2) << "\n";
}

std::vector<std::string> verify_manifest(const std::filesystem::path& run_dir) {
    std::ifstream in(run_dir / "manifest.json");
    if (!in) return {"missing manifest.json in " + run_dir.string()};
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        return {std::string("unparsable manifest.json: ") + e.what()};
    }
    std::vector<std::string> problems;
    for (const auto& f : j.at("files")) {
        const std::string rel = f.at("path").get<std::string>();
        const std::string want = f.at("digest").get<std::string>();
        const auto full = run_dir / rel;
        if (!std::filesystem::exists(full)) {
            problems.push_back("missing file: " + rel);
            continue;
        }
        const std::string got = file_digest(full);
        if (got != want) {
            problems.push_back("digest mismatch for " + rel + ": manifest " + want +
                               ", actual " + got);
        }
    }
    return problems;
}

} // namespace sailkit
