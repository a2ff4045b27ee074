// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "cli.hpp"
#include "experiment.hpp"

namespace fs = std::filesystem;

namespace
{

struct CliResult
{
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args)
{
    args.insert(args.begin(), "pdnn_ssk");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = pdnn::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("pdnn_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

nlohmann::json read_json(const fs::path &p)
{
    std::ifstream is(p);
    return nlohmann::json::parse(is);
}

std::string slurp(const fs::path &p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("validate reports a non power-of-two modulation order")
{
    const auto r = run({"validate", "train", "--m", "3"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("valid") == false);
    bool found = false;
    for (const auto &v : j.at("violations"))
        found = found || v.get<std::string>().find("power of two") != std::string::npos;
    CHECK(found);
}

TEST_CASE("running an invalid configuration exits with code 2")
{
    const auto r = run({"run", "train", "--m", "3", "--out", scratch("invalid").string()});
    CHECK(r.code == 2);
    CHECK(nlohmann::json::parse(r.err).at("error") == "config");
}

TEST_CASE("unknown kinds and unknown config keys are rejected")
{
    CHECK(run({"run", "bogus"}).code == 2);
    const fs::path dir = scratch("unknown_key");
    fs::create_directories(dir);
    std::ofstream(dir / "c.toml") << "seed = 4\nno_such_key = 1\n";
    CHECK(run({"validate", "--config", (dir / "c.toml").string()}).code == 2);
}

TEST_CASE("an unwritable output path is a configuration error")
{
    const fs::path dir = scratch("blocked");
    fs::create_directories(dir);
    std::ofstream(dir / "file") << "x";
    const auto r = run({"run", "theory-curves", "--m", "4", "--ebn0", "0:1:2", "--out", (dir / "file" / "sub").string()});
    CHECK(r.code == 2);
}

TEST_CASE("command line overrides environment overrides config file")
{
    const fs::path dir = scratch("precedence");
    fs::create_directories(dir);
    std::ofstream(dir / "c.toml") << "seed = 11\nepochs = 7\nlr = 0.3\n";
    ::setenv("PDNN_EPOCHS", "9", 1);
    ::setenv("PDNN_LR", "0.2", 1);
    const auto r = run({"run", "train", "--config", (dir / "c.toml").string(), "--lr", "0.05", "--m", "2", "--n", "4",
                        "--layers", "1", "--channels", "1", "--optimizer", "adam", "--out", (dir / "out").string()});
    ::unsetenv("PDNN_EPOCHS");
    ::unsetenv("PDNN_LR");
    REQUIRE(r.code == 0);
    const auto manifest = read_json(dir / "out" / "manifest.json");
    CHECK(manifest.at("seed") == 11);
    const std::string echo = manifest.at("config");
    CHECK(echo.find("epochs = 9") != std::string::npos);
    CHECK(echo.find("lr = 0.050000000000000003") != std::string::npos);
}

TEST_CASE("the echoed config reproduces the run")
{
    const fs::path dir = scratch("roundtrip");
    const auto first = run({"run", "ser-interference-free", "--m", "4", "--ebn0", "0:4:8", "--trials", "2000",
                            "--seed", "5", "--out", (dir / "a").string()});
    REQUIRE(first.code == 0);
    std::ofstream(dir / "echo.toml") << slurp(dir / "a" / "config.toml");
    const auto second = run({"run", "ser-interference-free", "--config", (dir / "echo.toml").string(), "--out",
                             (dir / "b").string()});
    REQUIRE(second.code == 0);
    CHECK(slurp(dir / "a" / "ser_interference_free.csv") == slurp(dir / "b" / "ser_interference_free.csv"));
}

TEST_CASE("every experiment kind runs on small settings")
{
    const fs::path dir = scratch("kinds");
    const std::vector<std::string> small{"--n", "4", "--m", "2", "--layers", "1", "--epochs", "5", "--channels", "1",
                                         "--trials", "500", "--ebn0", "0:5:10", "--n-grid", "4,6", "--layer-configs",
                                         "1x1", "--mc-values", "1", "--include-diffraction", "false"};
    for (const char *kind : pdnn::cli::kExperimentKinds)
    {
        std::vector<std::string> args{"run", kind, "--out", (dir / kind).string()};
        args.insert(args.end(), small.begin(), small.end());
        const auto r = run(args);
        INFO(kind << ": " << r.err);
        CHECK(r.code == 0);
        const auto manifest = read_json(dir / kind / "manifest.json");
        CHECK(manifest.at("kind") == kind);
        CHECK(!manifest.at("artifacts").empty());
        for (const auto &a : manifest.at("artifacts"))
            CHECK(fs::exists(dir / kind / a.get<std::string>()));
    }
}

TEST_CASE("range and layer parsing")
{
    using pdnn::cli::parse_layer_config;
    using pdnn::cli::parse_range;
    CHECK(parse_range("0:0.5:2") == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    CHECK(parse_range("3") == std::vector<double>{3.0});
    CHECK_THROWS(parse_range("1:0:2"));
    CHECK_THROWS(parse_range("a:b"));
    CHECK(parse_layer_config("1x3") == std::pair<std::size_t, std::size_t>{1, 3});
    CHECK_THROWS(parse_layer_config("13"));
}
