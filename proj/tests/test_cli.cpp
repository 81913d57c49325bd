#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ScratchDir {
    fs::path path = fs::temp_directory_path() / ("hinv_cli_test_" + std::to_string(::getpid()));
    ScratchDir()
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
};

fs::path scratch()
{
    static const ScratchDir dir;
    return dir.path;
}

int run(const std::string& args, const fs::path& out_dir = {})
{
    std::string cmd = std::string(HINV_CLI_PATH) + " " + args;
    if (!out_dir.empty()) cmd += " --out-dir " + out_dir.string();
    cmd += " > " + (scratch() / "stdout.txt").string() + " 2> " + (scratch() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs a command twice into separate directories and checks that every listed file is byte-identical.
void check_deterministic(const std::string& name, const std::string& args, const std::vector<std::string>& files)
{
    const fs::path a = scratch() / (name + "_a"), b = scratch() / (name + "_b");
    REQUIRE(run(args, a) == 0);
    REQUIRE(run(args, b) == 0);
    for (const auto& f : files) {
        INFO(name << ": " << f);
        CHECK(slurp(a / f) == slurp(b / f));
    }
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("catalog-list")
{
    REQUIRE(run("catalog-list") == 0);
    const std::string first = slurp(scratch() / "stdout.txt");
    REQUIRE(run("catalog-list") == 0);
    CHECK(slurp(scratch() / "stdout.txt") == first);
    const json j = json::parse(first);
    CHECK(j["catalog"].size() == 5);
    CHECK(j["catalog"][0]["id"] == "disk");
}

TEST_CASE("invert")
{
    check_deterministic("invert", "invert --catalog half-plane", {"g.csv", "invert.json"});
    const json j = load(scratch() / "invert_a" / "invert.json");
    CHECK(j["d_min"] == 1.0);
    CHECK(j["singular"] == true);
    CHECK(j["lp_norm"].size() == 3);
    const std::string csv = slurp(scratch() / "invert_a" / "g.csv");
    CHECK(csv.rfind("s,g\n0,1\n", 0) == 0);
    CHECK(csv.find("\n0.5,1.4142135623730951\n") != std::string::npos);

    // Tabulated and step input files.
    {
        std::ofstream(scratch() / "h.csv") << "r,h\n1,0\n2,0.5\n3,1\n";
        std::ofstream(scratch() / "step.json") << R"({"breakpoints": [1, 2], "values": [0.5, 1]})";
    }
    check_deterministic("table", "invert --h-table " + (scratch() / "h.csv").string(), {"g.csv", "invert.json"});
    CHECK(load(scratch() / "table_a" / "invert.json")["singular"] == false);
    check_deterministic("step", "invert --grid 11 --step " + (scratch() / "step.json").string(), {"g.csv"});
    const std::string step = slurp(scratch() / "step_a" / "g.csv");
    CHECK(step.find("\n0.5,1\n") != std::string::npos);
    CHECK(step.find("\n0.59999999999999998,2\n") != std::string::npos);
}

TEST_CASE("map")
{
    check_deterministic("map", "map --catalog half-plane --alpha 1/2 --n-points 1024 --resolution 64 --x0 0.5 --svg",
                        {"trace.csv", "line_0.csv", "covering.json"});
    const fs::path dir = scratch() / "map_a";
    CHECK(fs::exists(dir / "trace.svg"));
    const json j = load(dir / "covering.json");
    CHECK(j["components"] == 2);
    CHECK(j["components_formula_2_over_alpha"] == 2);
    CHECK(j["joint_period"] == 4.0);
    CHECK(j["covering"]["is_candidate_cover"] == true);
    CHECK(slurp(dir / "trace.csv").rfind("x,re,im,component", 0) == 0);

    // Decimal alpha is snapped with a warning.
    REQUIRE(run("map --catalog disk --alpha 0.33 --n-points 256 --resolution 64", scratch() / "snap") == 0);
    const json s = load(scratch() / "snap" / "covering.json");
    CHECK(s["alpha"] == "21/64");
    CHECK_FALSE(s["warnings"].empty());
}

TEST_CASE("verify")
{
    check_deterministic("verify", "verify --catalog two-step --n 20000 --seed 3",
                        {"verify.json", "projected.csv", "domain.csv"});
    const json j = load(scratch() / "verify_a" / "verify.json");
    CHECK(j["ks_projected"].get<double>() <= 0.02);
    CHECK(j["seed"] == 3);
    for (const char* method : {"projected", "domain"}) {
        const auto& m = j[method];
        CHECK(m["n"] == 20000);
        CHECK(m["seed"] == 3);
        CHECK(m.contains("ks"));
        CHECK(m.contains("truncated_mass"));
    }
    CHECK(j["projected"]["ks"] == j["ks_projected"]);
    const auto& atoms = j["domain"]["atom_masses"];
    REQUIRE(atoms.size() == 2);
    CHECK(std::abs(atoms[0]["mass"].get<double>() - 0.5) <= 0.02);
    CHECK(slurp(scratch() / "verify_a" / "projected.csv").rfind("radius\n", 0) == 0);

    // A different worker count changes the streams but stays deterministic.
    check_deterministic("verify_w1", "verify --catalog half-plane --n 5000 --workers 1 --skip-domain",
                        {"verify.json", "projected.csv"});
}

TEST_CASE("moments")
{
    check_deterministic("moments", "moments --catalog half-plane --p 0.5 1", {"moments.csv", "moments.json"});
    const json j = load(scratch() / "moments_a" / "moments.json");
    CHECK(j["moments"][0]["divergent"] == false);
    CHECK(j["moments"][1]["divergent"] == true);
    CHECK(slurp(scratch() / "moments_a" / "moments.csv").rfind("p,value,divergent\n", 0) == 0);
}

TEST_CASE("errors exit nonzero")
{
    CHECK(run("invert --catalog triangle", scratch() / "err") == 1);
    CHECK(slurp(scratch() / "stderr.txt").find("half-plane") != std::string::npos);
    CHECK(run("map --catalog disk --M 10", scratch() / "err") != 0);
    CHECK(run("map --catalog disk --alpha -1", scratch() / "err") != 0);
    CHECK(run("verify --catalog disk --n 0", scratch() / "err") != 0);
    CHECK(run("invert", scratch() / "err") != 0);
    CHECK(run("nonsense") != 0);
}
