#include <doctest.h>

#include <filesystem>
#include <limits>
#include <random>

#include "kinlab/io.hpp"
#include "kinlab/run_config.hpp"

using namespace kinlab;
using namespace kinlab::io;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("kinlab_io_" + tag + "_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::set<std::string> listing(const fs::path& dir) {
    std::set<std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out.insert(e.path().filename().string());
    return out;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles round trip through text") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-30, 30);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::ldexp(u(rng), static_cast<int>(u(rng)));
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(parse_double(format_double(std::numeric_limits<double>::infinity())) ==
          std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
}

TEST_CASE("csv round trip") {
    Table t{{"a", "b", "c"}, {}};
    t.add({1.0, 1.0 / 3, -2e-300});
    t.add({0.0, 12345.678, 1e22});
    const Table back = Table::from_csv(t.to_csv());
    CHECK(back.columns == t.columns);
    CHECK(back.rows == t.rows);
    CHECK_THROWS_AS(t.add({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Table::from_csv(""), std::invalid_argument);
}

TEST_CASE("config parsing") {
    auto c = Config::from_string("# comment\nx = 2   # trailing note\n[grid]\nn = 16\nlist = 1, 2.5,4\nflag = true\n");
    CHECK(c.get("x", 0) == 2);
    CHECK(c.get("grid.n", 0) == 16);
    CHECK(c.get("grid.list", std::vector<double>{}) == std::vector<double>{1, 2.5, 4});
    CHECK(c.get("grid.flag", false));
    CHECK(c.get("missing", 7.5) == 7.5);
    c.set("grid.n=24");
    CHECK(c.get("grid.n", 0) == 24);
    CHECK_THROWS_AS(c.set("nonsense"), std::invalid_argument);
    CHECK_THROWS_AS(Config::from_string("[grid\n"), std::invalid_argument);
    CHECK_THROWS_AS(Config::from_string("novalue\n"), std::invalid_argument);
    CHECK_THROWS_AS(Config::from_string("= 3\n"), std::invalid_argument);
    const auto bad = Config::from_string("x = abc\ny = 1.5\nz = maybe\n");
    CHECK_THROWS_AS(bad.get("x", 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bad.get("y", 0), std::invalid_argument);
    CHECK_THROWS_AS(bad.get("z", false), std::invalid_argument);
    CHECK_THROWS_AS(c.check_known({"x"}), std::invalid_argument);
    CHECK_THROWS_AS(Config::from_file("/nonexistent/kinlab.cfg"), std::runtime_error);
}

TEST_CASE("hierarchy config mapping") {
    const auto h = hierarchy_config(Config::from_string("[grid]\nn_v0 = 16\n[run]\nN_list = 10, 20\n"));
    CHECK(h.scenario.n_v0 == 16);
    CHECK(h.scenario.N_list == std::vector<double>{10, 20});
    CHECK_FALSE(h.ansatz);
    CHECK(h.dir == "hierarchy");
    try {
        hierarchy_config(Config::from_string("[grid]\nn_w = 7\n"));
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("grid.n_w") != std::string::npos);
    }
    CHECK_THROWS_AS(hierarchy_config(Config::from_string("[run]\nfoo = 1\n")), std::invalid_argument);
    CHECK_THROWS_AS(hierarchy_config(Config::from_string("[output]\ndir = ../x\n")), std::invalid_argument);
    // the shipped configs parse
    CHECK_NOTHROW(hierarchy_config(Config::from_file(KINLAB_CONFIG_DIR "/hierarchy.cfg")));
    CHECK_NOTHROW(hierarchy_config(Config::from_file(KINLAB_CONFIG_DIR "/hierarchy_smoke.cfg")));
}

TEST_CASE("persist: empty result set writes the manifest only") {
    TempDir t("empty");
    persist(t.path / "run", {}, Json{{"status", "ok"}});
    CHECK(listing(t.path / "run") == std::set<std::string>{"manifest.json"});
    CHECK(Json::parse(read_text(t.path / "run" / "manifest.json"))["status"] == "ok");
}

TEST_CASE("persist is deterministic") {
    TempDir t("det");
    Table tab{{"x", "y"}, {}};
    for (int i = 0; i < 20; ++i) tab.add({i * 0.1, std::sin(i * 0.1)});
    const Json m{{"seed", 3}, {"values", {1.5, 2.5}}};
    persist(t.path / "a", {{"series", tab}}, m);
    persist(t.path / "b", {{"series", tab}}, m);
    CHECK(listing(t.path / "a") == std::set<std::string>{"manifest.json", "series.csv"});
    for (const auto& f : listing(t.path / "a")) CHECK(read_text(t.path / "a" / f) == read_text(t.path / "b" / f));
}

TEST_CASE("output root") {
    CHECK(output_root("explicit") == fs::path("explicit"));
    setenv("KINLAB_OUTPUT_ROOT", "/tmp/from_env", 1);
    CHECK(output_root() == fs::path("/tmp/from_env"));
    unsetenv("KINLAB_OUTPUT_ROOT");
    CHECK(output_root() == fs::path("kinlab_out"));
}

}  // TEST_SUITE
