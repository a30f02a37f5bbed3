#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "tentkit/error.hpp"

namespace fs = std::filesystem;
using namespace tentkit::cli;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result call(std::vector<std::string> args)
{
    args.insert(args.begin(), "tentkit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// A heat run small enough for a unit test.
std::vector<std::string> tiny_heat()
{
    return {"heat",          "--set", "points=32",     "--set", "levels=9",          "--set", "k_lo=2",
            "--set",         "k_hi=8", "--set",        "modes=6", "--set",           "samples=3", "--set",
            "refine=false",  "--set", "sensitivity=false"};
}

fs::path fresh_dir(const std::string& tag)
{
    auto d = fs::temp_directory_path() / ("tentkit_cli_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST(ParseConfig, CommentsAndWhitespace)
{
    auto v = parse_config("# header\n  n = 2 \n\np=4 # trailing\n");
    EXPECT_EQ(v.size(), 2u);
    EXPECT_EQ(v["n"], "2");
    EXPECT_EQ(v["p"], "4");
    EXPECT_THROW(parse_config("no equals sign\n"), tentkit::Error);
}

TEST(Cli, UnknownCommandAndKey)
{
    EXPECT_EQ(call({"frobnicate"}).code, kExitConfig);
    auto r = call({"exponents", "--set", "colour=blue"});
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("config.unknown_key"), std::string::npos);
    EXPECT_EQ(call({"exponents", "--set", "n"}).code, kExitConfig);
    EXPECT_EQ(call({"exponents", "--set", "n=3"}).code, kExitPass); // arithmetic only, n is free here
    EXPECT_EQ(call({"heat", "--seed", "1", "--set", "n=3"}).code, kExitConfig);
}

TEST(Cli, RandomizedCommandsNeedSeed)
{
    auto r = call(tiny_heat());
    EXPECT_EQ(r.code, kExitConfig);
    EXPECT_NE(r.err.find("config.missing_seed"), std::string::npos);
    auto args = tiny_heat();
    args.insert(args.end(), {"--seed", "5"});
    EXPECT_EQ(call(args).code, kExitPass);
}

TEST(Cli, OutOfTheoryHeatNeedsNoSeed)
{
    auto args = tiny_heat();
    args.insert(args.end(), {"--s", "0.5"});
    auto r = call(args);
    EXPECT_EQ(r.code, kExitPass);
    EXPECT_NE(r.out.find("out-of-theory"), std::string::npos);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, BudgetExceededExitsOne)
{
    auto args = tiny_heat();
    args.insert(args.end(), {"--seed", "5", "--budget", "1.000001"});
    auto r = call(args);
    EXPECT_EQ(r.code, kExitBudget);
    EXPECT_NE(r.out.find("heat: fail"), std::string::npos);
}

TEST(Cli, SameSeedSameReport)
{
    auto args = tiny_heat();
    args.insert(args.end(), {"--seed", "9", "--json"});
    auto a = call(args);
    auto b = call(args);
    ASSERT_EQ(a.code, kExitPass);
    EXPECT_EQ(a.out, b.out);
    auto j = json::parse(a.out.substr(0, a.out.rfind("heat:")));
    EXPECT_EQ(j["schema"], "tentkit.report/1");
    EXPECT_EQ(j["spec"]["seed"], 9);
}

TEST(Cli, NothingWrittenWithoutOut)
{
    const auto dir = fresh_dir("noout");
    const auto cwd = fs::current_path();
    fs::current_path(dir);
    auto args = tiny_heat();
    args.insert(args.end(), {"--seed", "5"});
    const int code = call(args).code;
    fs::current_path(cwd);
    EXPECT_EQ(code, kExitPass);
    EXPECT_TRUE(fs::is_empty(dir));
    fs::remove_all(dir);
}

TEST(Cli, OutWritesReportAndBands)
{
    const auto dir = fresh_dir("out");
    auto args = tiny_heat();
    args.insert(args.end(), {"--seed", "5", "--out", dir.string()});
    EXPECT_EQ(call(args).code, kExitPass);
    EXPECT_TRUE(fs::exists(dir / "heat.json"));
    EXPECT_TRUE(fs::exists(dir / "heat_bands.csv"));
    fs::remove_all(dir);
}

TEST(Cli, ConfigFileAndOverridePrecedence)
{
    const auto dir = fresh_dir("cfg");
    const auto cfg = dir / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "n = 1\nbeta = -0.25\np = 4\n";
    }
    auto a = call({"exponents", "--config", cfg.string(), "--json"});
    ASSERT_EQ(a.code, kExitPass);
    auto ja = json::parse(a.out.substr(0, a.out.rfind("exponents:")));
    EXPECT_EQ(ja["beta"], -0.25);
    EXPECT_EQ(ja["p"], "4");
    auto b = call({"exponents", "--config", cfg.string(), "--beta", "-0.75", "--json"});
    auto jb = json::parse(b.out.substr(0, b.out.rfind("exponents:")));
    EXPECT_EQ(jb["beta"], -0.75);
    EXPECT_EQ(call({"exponents", "--config", (dir / "missing.cfg").string()}).code, kExitConfig);
    fs::remove_all(dir);
}

TEST(Cli, PresetsJsonCatalog)
{
    auto r = call({"presets", "--json"});
    ASSERT_EQ(r.code, kExitPass);
    auto j = json::parse(r.out);
    ASSERT_TRUE(j["presets"].is_array());
    ASSERT_TRUE(j["families"].is_array());
    bool identity = false;
    for (const auto& p : j["presets"]) identity = identity || p["name"] == "identity";
    EXPECT_TRUE(identity);
}

TEST(Cli, RegionsCsv)
{
    auto r = call({"regions", "--set", "resolution=16"});
    ASSERT_EQ(r.code, kExitPass);
    std::istringstream is(r.out);
    std::string header;
    std::getline(is, header);
    EXPECT_NE(header.find(','), std::string::npos);
    EXPECT_NE(r.out.find("regions: pass"), std::string::npos);
    EXPECT_EQ(call({"regions", "--set", "region=nowhere"}).code, kExitConfig);
}

TEST(Cli, HelpExitsZero)
{
    auto r = call({"--help"});
    EXPECT_EQ(r.code, kExitPass);
    EXPECT_NE(r.out.find("--seed"), std::string::npos);
}
