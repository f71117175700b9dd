#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sailkit/harness/config.hpp"
#include "sailkit/harness/experiments.hpp"
#include "sailkit/harness/manifest.hpp"

using namespace sailkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sailkit_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("round trip through the canonical form") {
        RunConfig cfg;
        cfg.experiment = ExperimentKind::Sail;
        cfg.problem = "foil-proxy";
        cfg.seed = 99;
        cfg.sail.kappa = 1.5;
        cfg.sail.surrogate = SurrogateKind::Hierarchical;
        cfg.sail.hierarchy.confidence = ConfidenceStrategy::DepthWeighted;
        cfg.bakeoff_sizes = {10, 20};
        std::istringstream in(cfg.canonical());
        const RunConfig back = RunConfig::parse(in, "mem");
        CHECK(back.canonical() == cfg.canonical());
    }

    SUBCASE("unknown section reports the line number") {
        std::istringstream in("[run]\nseed = 1\n[wat]\n");
        try {
            RunConfig::parse(in, "cfg.ini");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("cfg.ini:3") != std::string::npos);
        }
    }

    SUBCASE("unknown key reports the line number") {
        std::istringstream in("[run]\nbogus = 1\n");
        try {
            RunConfig::parse(in, "cfg.ini");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("cfg.ini:2") != std::string::npos);
            CHECK(std::string(e.what()).find("bogus") != std::string::npos);
        }
    }

    SUBCASE("malformed lines") {
        std::istringstream no_eq("[run]\nseed\n");
        CHECK_THROWS_AS(RunConfig::parse(no_eq, "c"), ConfigError);
        std::istringstream orphan("seed = 1\n");
        CHECK_THROWS_AS(RunConfig::parse(orphan, "c"), ConfigError);
        std::istringstream bad_value("[run]\nseed = banana\n");
        CHECK_THROWS_AS(RunConfig::parse(bad_value, "c"), ConfigError);
        std::istringstream bad_bool("[fig6]\nresidual_mode = maybe\n");
        CHECK_THROWS_AS(RunConfig::parse(bad_bool, "c"), ConfigError);
    }

    SUBCASE("comments and blank lines are ignored") {
        std::istringstream in("# comment\n\n[run]\n; also a comment\nseed = 7\n");
        CHECK(RunConfig::parse(in, "c").seed == 7);
    }

    SUBCASE("resolution and size-list parsing") {
        std::istringstream in("[illumination]\nresolution = 8x16\n[bakeoff]\nsizes = 10, 20,30\n");
        const RunConfig cfg = RunConfig::parse(in, "c");
        CHECK(cfg.illumination.resolution == std::vector<std::size_t>{8, 16});
        CHECK(cfg.bakeoff_sizes == std::vector<std::size_t>{10, 20, 30});
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(RunConfig::parse_file("/nonexistent/x.ini"), ConfigError);
    }
}

TEST_CASE("file digests and manifest verification") {
    TempDir dir("manifest");
    {
        std::ofstream(dir.path / "a.csv") << "x,y\n1,2\n";
        std::ofstream(dir.path / "t.csv") << "timing\n0.123\n";
    }

    // Digest is content-determined.
    const std::string d1 = file_digest(dir.path / "a.csv");
    CHECK(d1 == file_digest(dir.path / "a.csv"));
    CHECK(!d1.empty());

    RunManifest m;
    m.config = "[run]\nseed = 0\n";
    m.add_file(dir.path, "a.csv");
    m.add_timing_file("t.csv");
    m.write(dir.path);
    CHECK(fs::exists(dir.path / "manifest.json"));
    CHECK(verify_manifest(dir.path).empty());

    // Corrupt the data file: verification must flag it.
    std::ofstream(dir.path / "a.csv") << "x,y\n9,9\n";
    const auto mismatches = verify_manifest(dir.path);
    REQUIRE(mismatches.size() == 1);
    CHECK(mismatches[0].find("a.csv") != std::string::npos);

    // Timing files are exempt from digest checks.
    std::ofstream(dir.path / "a.csv") << "x,y\n1,2\n";
    std::ofstream(dir.path / "t.csv") << "timing\n0.999\n";
    CHECK(verify_manifest(dir.path).empty());
}

TEST_CASE("spearman correlation") {
    CHECK(spearman_correlation({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman_correlation({1, 2, 3, 4}, {8, 6, 4, 2}) == doctest::Approx(-1.0));
    // Monotone but nonlinear is still a perfect rank correlation.
    CHECK(spearman_correlation({1, 2, 3, 4}, {1, 8, 27, 64}) == doctest::Approx(1.0));
    // Hand-checked tie case: a = (1,1,2), b = (1,2,3). Mid-ranks for a are
    // (1.5, 1.5, 3); Pearson of ((1.5,1.5,3),(1,2,3)) = sqrt(3)/2.
    CHECK(spearman_correlation({1, 1, 2}, {1, 2, 3}) ==
          doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("run_experiment writes a verified, reproducible run directory") {
    RunConfig cfg;
    cfg.experiment = ExperimentKind::MapElites;
    cfg.problem = "rastrigin-2d";
    cfg.seed = 5;
    cfg.illumination.init_count = 30;
    cfg.illumination.total_evaluations = 400;
    cfg.illumination.resolution = {6, 6};

    TempDir a("run_a"), b("run_b");
    run_experiment(cfg, a.path);
    run_experiment(cfg, b.path);

    for (const char* name : {"archive.csv", "history.csv", "manifest.json"}) {
        CAPTURE(name);
        CHECK(fs::exists(a.path / name));
    }
    CHECK(verify_manifest(a.path).empty());
    CHECK(slurp(a.path / "archive.csv") == slurp(b.path / "archive.csv"));
    CHECK(slurp(a.path / "history.csv") == slurp(b.path / "history.csv"));
    // Same seed, same config: the digest sets must agree too.
    CHECK(file_digest(a.path / "archive.csv") == file_digest(b.path / "archive.csv"));
}

TEST_CASE("run_experiment sail writes prediction archive and rounds") {
    RunConfig cfg;
    cfg.experiment = ExperimentKind::Sail;
    cfg.problem = "rastrigin-2d";
    cfg.seed = 9;
    cfg.sail.init_count = 12;
    cfg.sail.rounds = 1;
    cfg.sail.batch_size = 4;
    cfg.sail.resolution = {4, 4};
    cfg.sail.acq_evaluations = 60;
    cfg.sail.pred_evaluations = 100;
    cfg.sail.inner_init_count = 10;
    cfg.sail.gp_fit_hyperparams = false;

    TempDir dir("run_sail");
    run_experiment(cfg, dir.path);
    for (const char* name :
         {"prediction_archive.csv", "samples.csv", "rounds.csv", "manifest.json"}) {
        CAPTURE(name);
        CHECK(fs::exists(dir.path / name));
    }
    CHECK(verify_manifest(dir.path).empty());
    // rounds.csv carries timings; it must be listed but not digested, so
    // verification passes even though timings vary between runs.
    const std::string manifest = slurp(dir.path / "manifest.json");
    CHECK(manifest.find("rounds.csv") != std::string::npos);
}
