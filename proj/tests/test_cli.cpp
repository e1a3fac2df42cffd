#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    auto p = fs::temp_directory_path() / "uavmec_cli_test";
    fs::create_directories(p);
    return p;
}

int run(const std::string& args) {
    const std::string cmd = std::string(UAVMEC_CLI) + " " + args + " > " + (scratch() / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
    const auto p = scratch() / name;
    std::ofstream(p) << body;
    return p;
}

const char* kSmall = R"({"generator": {"n_ues": 10, "m_uavs": 2, "field_size_m": 6, "ue": {"f_max_hz": 5e6}}})";

}  // namespace

TEST_CASE("solve writes three CSVs, identically on a rerun") {
    const auto cfg = write_config("small.json", kSmall);
    const auto a = scratch() / "a", b = scratch() / "b";
    fs::remove_all(a);
    fs::remove_all(b);
    REQUIRE(run("solve --config " + cfg.string() + " --algorithm iacl --seed 7 --out " + a.string()) == 0);
    REQUIRE(run("solve --config " + cfg.string() + " --algorithm iacl --seed 7 --out " + b.string()) == 0);
    for (const char* f : {"solution.csv", "trace.csv", "summary.csv"}) CHECK(fs::exists(a / f));
    CHECK(slurp(a / "solution.csv") == slurp(b / "solution.csv"));
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
}

TEST_CASE("exit codes") {
    const auto cfg = write_config("small.json", kSmall);
    const auto big = write_config("big.json", R"({"generator": {"n_ues": 100, "m_uavs": 10}})");
    const auto bad = write_config("bad.json", R"({"generator": {"n_ues": "ten"}})");
    const auto lost = write_config("lost.json",
                                   R"({"generator": {"n_ues": 3, "m_uavs": 1, "field_size_m": 900, "ue": {"f_max_hz": 5e6}}})");
    const auto out = (scratch() / "x").string();
    CHECK(run("solve --config " + big.string() + " --algorithm exh --out " + out) == 2);
    CHECK(run("solve --config " + lost.string() + " --out " + out) == 2);
    CHECK(run("solve --config " + bad.string() + " --out " + out) == 1);
    CHECK(run("solve --config " + cfg.string() + " --algorithm bogus --out " + out) == 1);
    CHECK(run("solve --config " + cfg.string() + " --tmax 0 --out " + out) == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("sweep --config " + cfg.string() + " --axis latency --values 1.0,0.5 --out " + out) == 1);
    CHECK(run("--help") == 0);
}

TEST_CASE("output directory from the environment") {
    const auto cfg = write_config("small.json", kSmall);
    const auto env_dir = scratch() / "env";
    fs::remove_all(env_dir);
    const std::string cmd = "UAVMEC_OUT_DIR=" + env_dir.string() + " " + UAVMEC_CLI + " generate --config " +
                            cfg.string() + " --seed 4 > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(env_dir / "scenario.json"));

    // The generated file solves like the generator it came from.
    const auto a = scratch() / "from_file", b = scratch() / "from_gen";
    REQUIRE(run("solve --scenario " + (env_dir / "scenario.json").string() + " --seed 4 --out " + a.string()) == 0);
    REQUIRE(run("solve --config " + cfg.string() + " --seed 4 --out " + b.string()) == 0);
    CHECK(slurp(a / "solution.csv") == slurp(b / "solution.csv"));
}

TEST_CASE("sweep with one value and one algorithm") {
    const auto cfg = write_config("small.json", kSmall);
    const auto out = scratch() / "sweep";
    fs::remove_all(out);
    REQUIRE(run("sweep --config " + cfg.string() + " --axis latency --values 1.0 --algorithms iacl --out " +
                out.string()) == 0);
    std::ifstream in(out / "sweep.csv");
    int rows = 0;
    for (std::string l; std::getline(in, l);) ++rows;
    CHECK(rows == 2);
}
