#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / ("frontlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::string& args) {
    fs::path d = scratch();
    std::string cmd = std::string("\"") + FRONTLAB_EXE + "\" " + args + " >" + (d / "out").string() + " 2>" +
                      (d / "err").string();
    int st = std::system(cmd.c_str());
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(d / "out"), slurp(d / "err")};
}

fs::path write_config(const std::string& name, const std::string& body) {
    fs::path p = scratch() / name;
    std::ofstream(p) << body;
    return p;
}

const char* kCusp = R"({"n_slow": 1, "epsilon": 0.05, "tau": [1], "d": [1], "alpha": [2], "higher": [-1]})";
const char* kTwo = R"({"n_slow": 2, "epsilon": 0.05, "tau": [1, 2], "d": [1, 1.5]})";

}  // namespace

TEST(Cli, VersionAndReferenceSuite) {
    auto v = run("--version");
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find("1.0.0"), std::string::npos);
    auto r = run("verify --suite paper-params");
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("0 failed"), std::string::npos) << r.out;
}

TEST(Cli, UnknownFlagIsUsageErrorWithoutOutput) {
    fs::path dir = scratch() / "never";
    fs::remove_all(dir);
    auto r = run("--output-dir " + dir.string() + " gamma --bogus");
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(fs::exists(dir));
}

TEST(Cli, DesignBeyondMaximumMultiplicity) {
    auto cfg = write_config("two.json", kTwo);
    auto r = run("-c " + cfg.string() + " design --target evans:3");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("N+1"), std::string::npos) << r.err;
}

TEST(Cli, GammaRootsAreDeterministic) {
    auto cfg = write_config("cusp.json", kCusp);
    fs::path a = scratch() / "a", b = scratch() / "b";
    fs::remove_all(a);
    fs::remove_all(b);
    auto r1 = run("-c " + cfg.string() + " --output-dir " + a.string() + " gamma --roots --lo -5 --hi 5");
    auto r2 = run("-c " + cfg.string() + " --output-dir " + b.string() + " gamma --roots --lo -5 --hi 5");
    ASSERT_EQ(r1.code, 0) << r1.err;
    ASSERT_EQ(r2.code, 0) << r2.err;
    ASSERT_TRUE(fs::exists(a / "manifest.json"));
    int csv = 0;
    for (auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() != ".csv") continue;
        ++csv;
        EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename()));
    }
    EXPECT_GE(csv, 1);
    auto man = nlohmann::json::parse(slurp(a / "manifest.json"));
    EXPECT_EQ(man["tool"], "frontlab");
    EXPECT_EQ(man["config"]["higher"][0], -1.0);
}

TEST(Cli, JsonErrors) {
    auto r = run("--json-errors -c /nonexistent.json gamma --roots");
    EXPECT_EQ(r.code, 2);
    auto e = nlohmann::json::parse(r.err);
    EXPECT_EQ(e["error"]["kind"], "usage");
    EXPECT_EQ(e["error"]["exit_code"], 2);
}
